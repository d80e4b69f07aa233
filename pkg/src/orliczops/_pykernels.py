"""Pure-Python/numpy twins of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np

_CHUNK = 1 << 20


def power_sum(start, stop, p):
    """sum_{n=start}^{stop} n**(-p), accumulated smallest chunk first."""
    if stop < start:
        return 0.0
    parts = []
    hi = stop
    while hi >= start:
        lo = max(start, hi - _CHUNK + 1)
        n = np.arange(hi, lo - 1, -1, dtype=float)
        parts.append(float(np.sum(n ** (-p))))
        hi = lo - 1
    return math.fsum(parts)


def monomial_sum(values, lam, coef, q):
    v = np.asarray(values, dtype=float)
    return coef * math.fsum(np.power(lam * v, q))


def cosh_sum(values, lam):
    v = np.asarray(values, dtype=float)
    return math.fsum(2.0 * np.sinh(0.5 * lam * v) ** 2)


def jacobi_svd(a, want_vectors=False, tol=1e-15, max_sweeps=80):
    """Same contract as the compiled ``jacobi_svd``."""
    A0 = np.asarray(a, dtype=np.complex128)
    transposed = A0.shape[0] < A0.shape[1]
    B = A0.conj().T.copy() if transposed else A0.copy()
    m, n = B.shape
    V = np.eye(n, dtype=np.complex128)
    sweep = 0
    rotated = True
    while rotated and sweep < max_sweeps:
        rotated = False
        sweep += 1
        for i in range(n - 1):
            for j in range(i + 1, n):
                bi = B[:, i]
                bj = B[:, j]
                alpha = float(np.vdot(bi, bi).real)
                beta = float(np.vdot(bj, bj).real)
                gamma = complex(np.vdot(bi, bj))
                g = abs(gamma)
                if g == 0.0 or g <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = cs * t
                e = gamma / g
                new_i = cs * bi - sn * e.conjugate() * bj
                new_j = sn * e * bi + cs * bj
                B[:, i] = new_i
                B[:, j] = new_j
                if want_vectors:
                    vi = V[:, i].copy()
                    vj = V[:, j].copy()
                    V[:, i] = cs * vi - sn * e.conjugate() * vj
                    V[:, j] = sn * e * vi + cs * vj
    sigma = np.sqrt(np.sum(B.real ** 2 + B.imag ** 2, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    if not want_vectors:
        return sigma, sweep
    W = B[:, order]
    V = V[:, order]
    with np.errstate(invalid="ignore", divide="ignore"):
        U = np.where(sigma > 0, W / sigma, 0.0)
    if transposed:
        return V, sigma, U, sweep
    return U, sigma, V, sweep
