"""The Toeplitz operator with symbol 1 - |z|^2 on the Bergman space.

In the orthonormal basis e_n(z) = sqrt(n + 1) z^n it is diagonal with
eigenvalues 1/(n + 2), n >= 0, so its Schatten p-norm is
``(zeta(p) - 1)**(1/p)`` for p > 1 and it is not trace class.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .functions import OrliczFunction
from .norms import modular
from .operators import AnalyticOperator

__all__ = [
    "bergman_operator",
    "bergman_singular_value",
    "bergman_tail_bound",
    "bergman_tail_bracket",
    "zeta",
    "zeta_bracket",
    "bergman_schatten_norm",
    "bergman_norm_equation_residual",
]

MAX_ZETA_TERMS = 2_000_000_000


def bergman_singular_value(n):
    return 1.0 / (np.asarray(n, dtype=float) + 2.0)


def _cosh_integral(w: float) -> float:
    """int_0^w (cosh u - 1) / u^2 du = sum_k w^(2k-1) / ((2k-1) (2k)!)."""
    if w == 0.0:
        return 0.0
    if w > 700.0:
        return math.inf
    term = w / 2.0  # w^(2k-1)/(2k)! at k = 1
    total = term
    k = 1
    while True:
        term *= w * w / ((2 * k + 1) * (2 * k + 2))
        k += 1
        inc = term / (2 * k - 1)
        total += inc
        if inc <= 1e-17 * total:
            return total


def _summand(c: float, f: OrliczFunction, t: float) -> float:
    return float(f.eval(c / (t + 2.0)))


def _integral_from(x: float, c: float, f: OrliczFunction):
    """int_x^inf f(c / (t + 2)) dt, or None when no closed form is known."""
    spec = f.kernel_spec()
    if spec is None:
        return None
    w = c / (x + 2.0)
    if spec[0] == "monomial":
        _, a, q = spec
        if q <= 1.0:
            return math.inf
        return a * c ** q * (x + 2.0) ** (1.0 - q) / (q - 1.0)
    if spec[0] == "cosh":
        # substitute u = c / (t + 2)
        return c * _cosh_integral(w)
    if spec[0] == "cosh-gap":
        # v sinh v - cosh v + 1 over v^2 integrates to (cosh w - 1) / w
        return c * 2.0 * math.sinh(0.5 * w) ** 2 / w if w > 0 else 0.0
    if spec[0] == "zero":
        return 0.0
    return None


def bergman_tail_bound(N: int, c: float, f: OrliczFunction) -> float:
    """Upper bound for ``sum_{n > N} f(c / (n + 2))``.

    Integral test for power-type f; for cosh - 1 the termwise comparison
    ``cosh t - 1 <= t^2 cosh(t0) / 2`` (t <= t0) against sum 1/(n+2)^2.
    """
    spec = f.kernel_spec()
    if spec is not None and spec[0] == "cosh":
        t0 = c / (N + 3.0)
        return math.cosh(t0) / 2.0 * c * c / (N + 2.0)
    val = _integral_from(float(N), c, f)
    return math.inf if val is None else val


def bergman_tail_bracket(N: int, c: float, f: OrliczFunction):
    """Two-sided enclosure of ``sum_{n > N} f(c / (n + 2))``.

    t -> f(c/(t+2)) is convex and decreasing, so the trapezoid rule gives
    ``g(N+1)/2 + int_{N+1}^inf g`` from below and the midpoint rule gives
    ``int_{N+1/2}^inf g`` from above.
    """
    lo_int = _integral_from(N + 1.0, c, f)
    hi_int = _integral_from(N + 0.5, c, f)
    if lo_int is None or hi_int is None:
        return 0.0, bergman_tail_bound(N, c, f)
    if math.isinf(lo_int):
        return math.inf, math.inf
    lo = 0.5 * _summand(c, f, N + 1.0) + lo_int
    return lo, max(hi_int, lo)


def bergman_operator() -> AnalyticOperator:
    return AnalyticOperator(
        s=bergman_singular_value,
        tail_bound=bergman_tail_bound,
        tail_bracket=bergman_tail_bracket,
        name="bergman",
    )


def zeta_bracket(p: float, eps: float = 1e-11, start: int = 1):
    """Enclosure ``(lo, hi)`` of ``sum_{n >= start} n^-p`` with ``hi - lo <= 2 eps``.

    Direct summation to N, tail between ``int_{N+1}^inf`` and ``int_N^inf``.
    """
    if not p > 1.0 + 1e-6:
        raise ValueError(f"zeta needs p > 1 + 1e-6, got {p!r}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    start = max(int(start), 1)

    def half_width(n):
        return (n ** (1.0 - p) - (n + 1.0) ** (1.0 - p)) / (2.0 * (p - 1.0))

    N = max(start, math.ceil((2.0 * eps) ** (-1.0 / p)))
    while half_width(N) > eps:
        N = math.ceil(N * 1.1)
    if N > MAX_ZETA_TERMS:
        raise ValueError(f"zeta({p}) to eps={eps:g} needs {N} terms; series too slowly convergent")
    head = kernels.power_sum(start, N, p)
    lo = head + (N + 1.0) ** (1.0 - p) / (p - 1.0)
    hi = head + float(N) ** (1.0 - p) / (p - 1.0)
    return lo, hi


def zeta(p: float, eps: float = 1e-11, start: int = 1) -> float:
    """``sum_{n >= start} n^-p`` (the Riemann zeta function for start = 1)."""
    lo, hi = zeta_bracket(p, eps, start)
    return 0.5 * (lo + hi)


def bergman_schatten_norm(p: float, eps: float = 1e-11) -> float:
    """``(zeta(p) - 1)**(1/p)``; the ``- 1`` is done by starting the sum at 2."""
    if not p > 1.0:
        raise ValueError("the operator is not trace class; Schatten norms need p > 1")
    return zeta(p, eps, start=2) ** (1.0 / p)


def bergman_norm_equation_residual(f: OrliczFunction, candidate_norm: float,
                                   eps_tail: float = 1e-12) -> float:
    """``sum_n f(1 / ((n + 2) * candidate)) - 1``; zero at the Luxemburg norm."""
    if not candidate_norm > 0:
        raise ValueError("candidate norm must be positive")
    m = modular(bergman_operator(), f, 1.0 / candidate_norm, eps_tail)
    return m.value + 0.5 * m.tail_bound - 1.0
