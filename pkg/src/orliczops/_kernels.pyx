# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: complex one-sided Jacobi SVD and compensated sums.

Every function here has a drop-in twin in ``_pykernels``.
"""

import numpy as np

from libc.math cimport sqrt, pow, sinh, fabs


cdef inline void _neumaier(double x, double* s, double* c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def power_sum(long start, long stop, double p):
    """sum_{n=start}^{stop} n**(-p), accumulated smallest term first."""
    cdef double s = 0.0, c = 0.0
    cdef long n
    if stop < start:
        return 0.0
    with nogil:
        n = stop
        while n >= start:
            _neumaier(pow(<double>n, -p), &s, &c)
            n -= 1
    return s + c


def monomial_sum(const double[::1] values, double lam, double coef, double q):
    """coef * sum (lam * v)**q."""
    cdef double s = 0.0, c = 0.0
    cdef Py_ssize_t i, n = values.shape[0]
    with nogil:
        for i in range(n - 1, -1, -1):
            _neumaier(pow(lam * values[i], q), &s, &c)
    return coef * (s + c)


def cosh_sum(const double[::1] values, double lam):
    """sum cosh(lam * v) - 1, evaluated as 2 sinh^2(lam * v / 2)."""
    cdef double s = 0.0, c = 0.0, h
    cdef Py_ssize_t i, n = values.shape[0]
    with nogil:
        for i in range(n - 1, -1, -1):
            h = sinh(0.5 * lam * values[i])
            _neumaier(2.0 * h * h, &s, &c)
    return s + c


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_svd(a, bint want_vectors=False, double tol=1e-15, int max_sweeps=80):
    """Singular values of a complex matrix by one-sided (Hestenes) Jacobi.

    Returns ``(sigma, sweeps)`` or, with ``want_vectors``, ``(u, sigma, v, sweeps)``
    where ``a @ v[:, k] == sigma[k] * u[:, k]``; sigma is nonincreasing.
    """
    A0 = np.asarray(a, dtype=np.complex128)
    cdef bint transposed = A0.shape[0] < A0.shape[1]
    if transposed:
        B = np.asfortranarray(A0.conj().T)
    else:
        B = np.array(A0, dtype=np.complex128, order="F", copy=True)
    cdef Py_ssize_t m = B.shape[0], n = B.shape[1]
    V = np.asfortranarray(np.eye(n, dtype=np.complex128))
    cdef double complex[::1, :] Bv = B
    cdef double complex[::1, :] Vv = V
    cdef Py_ssize_t i, j, k
    cdef double alpha, beta, g, zeta, t, cs, sn
    cdef double complex gamma, e, bi, bj
    cdef int sweep = 0
    cdef bint rotated = True
    with nogil:
        while rotated and sweep < max_sweeps:
            rotated = False
            sweep += 1
            for i in range(n - 1):
                for j in range(i + 1, n):
                    alpha = 0.0
                    beta = 0.0
                    gamma = 0.0
                    for k in range(m):
                        alpha += _abs2(Bv[k, i])
                        beta += _abs2(Bv[k, j])
                        gamma += Bv[k, i].conjugate() * Bv[k, j]
                    g = sqrt(_abs2(gamma))
                    if g == 0.0 or g <= tol * sqrt(alpha * beta):
                        continue
                    rotated = True
                    zeta = (beta - alpha) / (2.0 * g)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    cs = 1.0 / sqrt(1.0 + t * t)
                    sn = cs * t
                    e = gamma / g
                    for k in range(m):
                        bi = Bv[k, i]
                        bj = Bv[k, j]
                        Bv[k, i] = cs * bi - sn * e.conjugate() * bj
                        Bv[k, j] = sn * e * bi + cs * bj
                    if want_vectors:
                        for k in range(n):
                            bi = Vv[k, i]
                            bj = Vv[k, j]
                            Vv[k, i] = cs * bi - sn * e.conjugate() * bj
                            Vv[k, j] = sn * e * bi + cs * bj
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
