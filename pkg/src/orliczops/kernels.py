"""Kernel backend selection.

The compiled extension ``_kernels`` is used when it imports; otherwise the
numpy implementation in ``_pykernels`` takes over.  ``use_backend`` switches
explicitly (tests and the benchmark run both).
"""

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = _compiled if _compiled is not None else _pykernels


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def backend():
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    previous = backend()
    if name == "python":
        _active = _pykernels
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available; reinstall to build them")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous


def get_module(name):
    return _pykernels if name == "python" else _compiled


def power_sum(start, stop, p):
    return _active.power_sum(int(start), int(stop), float(p))


def monomial_sum(values, lam, coef, q):
    return _active.monomial_sum(np.ascontiguousarray(values, dtype=float), float(lam), float(coef), float(q))


def cosh_sum(values, lam):
    return _active.cosh_sum(np.ascontiguousarray(values, dtype=float), float(lam))


def jacobi_svd(a, want_vectors=False, tol=1e-15, max_sweeps=80):
    a = np.asarray(a, dtype=np.complex128)
    # squared column norms under/overflow for extreme entries; work at unit scale
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0 or not np.isfinite(scale):
        scale = 1.0
    out = _active.jacobi_svd(a / scale, want_vectors, tol, max_sweeps)
    if want_vectors:
        u, sigma, v, sweeps = out
        return u, sigma * scale, v, sweeps
    sigma, sweeps = out
    return sigma * scale, sweeps
