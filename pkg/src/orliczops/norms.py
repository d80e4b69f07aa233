"""Modulars, Luxemburg and Orlicz (Amemiya) norms, and S_phi / E_phi membership.

For an operator x with singular values s_n the modular is
``Tr phi(lam x) = sum_n phi(lam s_n)``; the Luxemburg norm is the smallest
lam with ``Tr phi(x / lam) <= 1`` and the Orlicz norm equals the Amemiya
norm ``inf_k (1 + Tr phi(k x)) / k``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from ._optimize import MAX_ITER, golden_section_min
from .functions import ComplementaryFunction, OrliczFunction
from .operators import (
    AnalyticOperator,
    DiagonalOperator,
    finite_singular_values,
    operator_norm,
)

__all__ = [
    "ModularValue",
    "NormResult",
    "MembershipVerdict",
    "TruncationError",
    "DivergenceError",
    "modular",
    "luxemburg_norm",
    "amemiya_norm",
    "orlicz_norm",
    "orlicz_norm_sup_oracle",
    "rank_one_luxemburg",
    "rank_one_orlicz",
    "classify_membership",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_TERMS = 1 << 24
_FIRST_CHUNK = 1024


@dataclass(frozen=True)
class ModularValue:
    """The true modular lies in ``[value, value + tail_bound]``."""

    value: float
    terms_used: int
    tail_bound: float = 0.0


@dataclass(frozen=True)
class NormResult:
    value: float
    iterations: int
    bracket_width: float
    method: str  # bisection | k-equation | golden-section | closed-form


@dataclass(frozen=True)
class MembershipVerdict:
    in_S_phi: bool
    in_E_phi: bool
    witness_lambda: Optional[float]
    rationale: str  # finite-rank | delta2-collapse | tail-comparison
    certified: bool = True
    detail: str = ""


class TruncationError(RuntimeError):
    def __init__(self, message, partial: ModularValue):
        super().__init__(message)
        self.partial = partial


class DivergenceError(ValueError):
    """The modular is infinite at every scale tried."""


class _YoungGap(OrliczFunction):
    """v -> v*h(v) - phi(v) = psi(h(v)); summand of the k-equation."""

    family = "young-gap"

    def __init__(self, base: OrliczFunction):
        self.base = base

    def eval(self, v):
        return self.base.young_gap(v)

    def eval_array(self, v):
        return self.base.young_gap_array(v)

    def kernel_spec(self):
        spec = self.base.kernel_spec()
        if spec is None:
            return None
        if spec[0] == "monomial":
            _, coef, q = spec
            return ("monomial", coef * (q - 1.0), q) if q > 1.0 else ("zero",)
        if spec[0] == "cosh":
            return ("cosh-gap",)
        return None


def _phi_sum(f: OrliczFunction, values: np.ndarray, lam: float) -> float:
    spec = f.kernel_spec()
    if spec is not None:
        if spec[0] == "monomial":
            return kernels.monomial_sum(values, lam, spec[1], spec[2])
        if spec[0] == "cosh":
            return kernels.cosh_sum(values, lam)
        if spec[0] == "zero":
            return 0.0
    return math.fsum(f.eval_array(lam * np.asarray(values, dtype=float)))


def _is_indicator(f) -> bool:
    return isinstance(f, ComplementaryFunction) and f.mode == "indicator"


def modular(op, f: OrliczFunction, lam: float = 1.0, eps_tail: float = 1e-11,
            max_terms: int = DEFAULT_MAX_TERMS) -> ModularValue:
    """``Tr phi(lam x)``.

    Finite operators are summed exactly.  Analytic operators are summed in
    doubling chunks until the tail enclosure is narrower than ``eps_tail``;
    a divergent tail (infinite lower bound) gives ``value = inf``.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if not isinstance(op, AnalyticOperator):
        s = finite_singular_values(op)
        if _is_indicator(f):
            return ModularValue(float(sum(f.eval(lam * v) for v in s)), len(s), 0.0)
        return ModularValue(_phi_sum(f, s, lam), len(s), 0.0)
    return _analytic_modular(op, f, lam, eps_tail, max_terms)


def _analytic_modular(op: AnalyticOperator, f, lam, eps_tail, max_terms) -> ModularValue:
    parts = []
    n_done = 0
    stop = _FIRST_CHUNK
    while True:
        stop = min(stop, max_terms)
        parts.append(_phi_sum(f, op.values(n_done, stop), lam))
        n_done = stop
        partial = math.fsum(parts)
        # tail functions bound sum_{n > N}; we have summed n <= n_done - 1
        if op.tail_bracket is not None:
            lo, hi = op.tail_bracket(n_done - 1, lam, f)
            if math.isinf(lo):
                return ModularValue(math.inf, n_done, 0.0)
            if hi - lo < eps_tail:
                return ModularValue(partial + lo, n_done, max(hi - lo, 0.0))
        else:
            hi = op.tail_bound(n_done - 1, lam, f)
            if hi < eps_tail:
                return ModularValue(partial, n_done, hi)
        if n_done >= max_terms:
            raise TruncationError(
                f"tail did not fall below {eps_tail:g} within {max_terms} terms",
                ModularValue(partial, n_done, hi),
            )
        stop = 2 * n_done


def _spectral_scale(op) -> float:
    return operator_norm(op)


def luxemburg_norm(op, f: OrliczFunction, rel_tol: float = DEFAULT_REL_TOL,
                   eps_tail: Optional[float] = None) -> NormResult:
    """``inf{lam > 0 : Tr phi(x / lam) <= 1}`` by bisection.

    The lower bracket ``s_1 / phi^{-1}(1)`` already makes the top term alone
    reach 1; the upper bracket is found by doubling.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    s1 = _spectral_scale(op)
    if s1 == 0.0:
        return NormResult(0.0, 0, 0.0, "closed-form")
    if _is_indicator(f):
        return NormResult(s1 / f.threshold, 0, 0.0, "closed-form")
    eps = rel_tol / 10.0 if eps_tail is None else eps_tail

    def feasible(lam):
        return modular(op, f, 1.0 / lam, eps).value <= 1.0

    lo = s1 / f.inverse(1.0)
    hi = lo
    for _ in range(MAX_ITER):
        if feasible(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise DivergenceError(f"modular of {op!r} exceeds 1 at every scale up to {hi:g}")
    it = 0
    while hi - lo > rel_tol * lo and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return NormResult(0.5 * (lo + hi), it, hi - lo, "bisection")


def amemiya_norm(op, f: OrliczFunction, rel_tol: float = DEFAULT_REL_TOL,
                 eps_tail: Optional[float] = None) -> NormResult:
    """``inf_k (1 + Tr phi(k x)) / k``, which equals the Orlicz norm.

    The minimizer solves ``sum_n psi(h(k s_n)) = 1``; when that equation has
    no root (e.g. linear phi) a golden-section search over log k is used.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    s1 = _spectral_scale(op)
    if s1 == 0.0:
        return NormResult(0.0, 0, 0.0, "closed-form")
    if _is_indicator(f):
        return NormResult(s1 / f.threshold, 0, 0.0, "closed-form")
    eps = rel_tol / 10.0 if eps_tail is None else eps_tail
    if getattr(f, "exponent", None) == 1.0:
        # linear phi = c t: psi is the indicator of [0, c], so the norm is c * Tr|x|
        m = modular(op, f, 1.0, eps)
        if math.isinf(m.value):
            raise DivergenceError(f"{op!r} is not trace class")
        return NormResult(m.value + 0.5 * m.tail_bound, 0, m.tail_bound, "closed-form")
    gap = _YoungGap(f)

    def g(k):
        return (1.0 + modular(op, f, k, eps).value) / k

    def kfun(k):
        return modular(op, gap, k, eps).value

    # search in u = k * s1 so the bracket is scale free
    lo, hi = 0.0, 1.0
    found = False
    for _ in range(MAX_ITER):
        if kfun(hi / s1) >= 1.0:
            found = True
            break
        lo, hi = hi, 2.0 * hi
    if found:
        it = 0
        while hi - lo > 1e-3 * rel_tol * hi and it < MAX_ITER:
            mid = 0.5 * (lo + hi)
            if kfun(mid / s1) < 1.0:
                lo = mid
            else:
                hi = mid
            it += 1
        if lo > 0.0:
            k_star = 0.5 * (lo + hi) / s1
            value = g(k_star)
            width = max(abs(g(lo / s1) - value), abs(g(hi / s1) - value))
            return NormResult(value, it, width, "k-equation")

    scale = luxemburg_norm(op, f, rel_tol, eps).value
    a, b = math.log(1e-8 / scale), math.log(1e8 / scale)
    t, val, it = golden_section_min(lambda t: g(math.exp(t)), a, b, tol=rel_tol)
    width = abs(g(math.exp(t + rel_tol)) - val)
    return NormResult(val, it, width, "golden-section")


orlicz_norm = amemiya_norm


def orlicz_norm_sup_oracle(op: DiagonalOperator, f: OrliczFunction, grid: int = 200) -> float:
    """Brute-force ``sup{sum s_n y_n : y >= 0, sum psi(y_n) <= 1}``.

    The constraint is active at the optimum, so the search runs over budget
    splits ``tau`` on the simplex with ``y_n = psi^{-1}(tau_n)``, by pairwise
    coordinate ascent (grid scan then zooming rescans) from several
    starting splits.  Meant for at most six nonzero entries.
    """
    if grid < 100:
        raise ValueError("grid must be >= 100")
    s = finite_singular_values(op)
    s = s[s > 0.0]
    if s.size > 6:
        raise ValueError(f"sup oracle is limited to 6 nonzero entries, got {s.size}")
    if s.size == 0:
        return 0.0
    psi = f.complementary()
    if psi.mode == "indicator":
        return float(np.sum(s)) * psi.threshold
    psi_inv = psi.inverse
    psi_inv_array = psi.inverse_array
    n = s.size
    if n == 1:
        return float(s[0] * psi_inv(1.0))

    def objective(tau):
        return math.fsum(si * psi_inv(max(t, 0.0)) for si, t in zip(s, tau))

    # the objective is concave in tau; extra starts guard against stalls
    starts = [np.full(n, 1.0 / n), s / s.sum(), np.eye(n)[0]]
    best = -math.inf
    for tau0 in starts:
        tau = np.array(tau0, dtype=float)
        current = objective(tau)
        for _ in range(500):
            before = current
            for i, j in itertools.combinations(range(n), 2):
                budget = tau[i] + tau[j]
                if budget <= 0.0:
                    continue

                def pair(ts, i=i, j=j, budget=budget):
                    y = psi_inv_array(np.concatenate([ts, np.maximum(budget - ts, 0.0)]))
                    return -(s[i] * y[:ts.size] + s[j] * y[ts.size:])

                # scan, then zoom in on the best cell until it is ~1e-15 wide
                a, b = 0.0, budget
                ts = np.linspace(a, b, grid)
                while True:
                    vals = pair(ts)
                    k = int(np.argmin(vals))
                    t = ts[k]
                    a, b = ts[max(k - 1, 0)], ts[min(k + 1, ts.size - 1)]
                    if b - a <= 1e-15 * budget:
                        break
                    ts = np.linspace(a, b, 33)
                tau[i], tau[j] = t, budget - t
            current = objective(tau)
            if current - before <= 1e-15 * max(1.0, abs(current)):
                break
        best = max(best, current)
    return float(best)


def rank_one_luxemburg(f: OrliczFunction) -> float:
    """Luxemburg norm of a rank-one partial isometry: ``1 / phi^{-1}(1)``."""
    return 1.0 / f.inverse(1.0)


def rank_one_orlicz(f: OrliczFunction, mu: int = 1) -> float:
    """Orlicz norm of a projection of rank mu: ``psi^{-1}(1/mu) * mu``."""
    mu = int(mu)
    if mu < 1:
        raise ValueError("multiplicity must be a positive integer")
    psi = f.complementary()
    if psi.mode == "indicator":
        raise ValueError("rank-one Orlicz norm needs an invertible complementary function")
    return psi.inverse(1.0 / mu) * mu


def classify_membership(op, f: OrliczFunction, j_range=range(-10, 11),
                        eps_tail: float = 1e-6) -> MembershipVerdict:
    """Decide membership of ``op`` in S_phi (some lam) and E_phi (every lam).

    For analytic operators each scale ``lam = 2**j`` is classified as
    convergent (finite tail upper bound), divergent (infinite tail lower
    bound) or undecided.
    """
    if not isinstance(op, AnalyticOperator):
        return MembershipVerdict(True, True, 1.0, "finite-rank", True,
                                 "finite sums always converge")
    cert = f.delta2_check(1.0, 256)
    finite, divergent, undecided = [], [], []
    for j in j_range:
        lam = 2.0 ** j
        try:
            m = modular(op, f, lam, eps_tail)
        except TruncationError:
            undecided.append(lam)
            continue
        (divergent if math.isinf(m.value) else finite).append(lam)
    scanned = len(finite) + len(divergent) + len(undecided)
    if finite:
        witness = finite[0]
        if cert.holds:
            return MembershipVerdict(True, True, witness, "delta2-collapse", True,
                                     f"modular finite at lam={witness:g}; phi is delta2 near 0 (k={cert.k:g})")
        all_finite = len(finite) == scanned
        return MembershipVerdict(True, all_finite, witness, "tail-comparison", False,
                                 f"modular finite at {len(finite)}/{scanned} scanned scales")
    if divergent and not undecided:
        return MembershipVerdict(False, False, None, "tail-comparison", True,
                                 "integral lower bound of the tail is infinite at every scanned scale")
    return MembershipVerdict(False, False, None, "tail-comparison", False,
                             f"no convergent scale found; {len(undecided)} scales undecided")
