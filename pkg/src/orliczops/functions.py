"""Parametric Orlicz functions and their Young conjugates.

Three families are admitted:

``Power(p)``         t**p, p >= 1
``ScaledPower(a)``   t**a / a, a > 1
``CoshMinusOne()``   cosh(t) - 1

plus ``Monomial(c, q)`` = c * t**q, which is what the conjugate of a power
function looks like.  All functions are finite valued and strictly
increasing on [0, inf); the only extended-valued object is the conjugate of
a linear function, represented by ``ComplementaryFunction`` in
``"indicator"`` mode.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._optimize import BracketError, bisect_increasing, golden_section_min

__all__ = [
    "OrliczFunction",
    "Power",
    "ScaledPower",
    "Monomial",
    "CoshMinusOne",
    "ComplementaryFunction",
    "Delta2Certificate",
    "evaluate",
    "inverse",
    "right_derivative",
    "complementary",
    "delta2_check",
    "parse_phi",
]

PHI_GRAMMAR = "power:p=<p >= 1> | scaled:alpha=<alpha > 1> | cosh"


def _check_arg(t: float, what: str = "t") -> float:
    t = float(t)
    if not t >= 0.0:
        raise ValueError(f"{what} must be a nonnegative real, got {t!r}")
    return t


@dataclass(frozen=True)
class Delta2Certificate:
    holds: bool
    u0: float
    k: float
    method: str  # "analytic" | "grid-scan"


def _solve_increasing_array(g, target, rel_tol=1e-12, max_iter=200) -> np.ndarray:
    """Elementwise root of ``g(v) = target`` for nondecreasing g with g(0) <= target.

    Brackets expand by doubling from [0, 1]; entries whose bracket never
    closes come back as ``inf``.  Entries with ``target <= g(0)`` give 0.
    """
    target = np.asarray(target, dtype=float)
    active = target > g(np.zeros_like(target))
    lo = np.zeros_like(target)
    hi = np.ones_like(target)
    short = np.zeros_like(active)
    for _ in range(max_iter):
        short = active & (g(hi) < target)
        if not short.any():
            break
        lo[short] = hi[short]
        hi[short] *= 2.0
    else:
        hi[short] = math.inf
        active &= ~short
    for _ in range(max_iter):
        live = active & (hi - lo > rel_tol * hi)
        if not live.any():
            break
        mid = 0.5 * (lo + hi)
        below = live & (g(mid) < target)
        above = live & ~below
        lo[below] = mid[below]
        hi[above] = mid[above]
    out = np.where(active, 0.5 * (lo + hi), 0.0)
    out[np.isinf(hi)] = math.inf
    return out


class OrliczFunction:
    """Base class: convex, strictly increasing, phi(0) = 0, phi -> inf."""

    family = "generic"
    admissible = True

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t: float) -> float:
        raise NotImplementedError

    def eval_array(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([self.eval(v) for v in t.ravel()]).reshape(t.shape)

    def right_derivative(self, t: float) -> float:
        raise NotImplementedError

    def right_derivative_array(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([self.right_derivative(v) for v in t.ravel()]).reshape(t.shape)

    def inverse(self, y: float) -> float:
        y = _check_arg(y, "y")
        if y == 0.0:
            return 0.0
        if math.isinf(y):
            return math.inf
        t, _, _ = bisect_increasing(self.eval, y)
        return t

    def inverse_array(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return np.array([self.inverse(v) for v in y.ravel()]).reshape(y.shape)

    def young_gap(self, v: float) -> float:
        """``v*h(v) - phi(v)``, which equals ``psi(h(v))`` by Young's equality."""
        return v * self.right_derivative(v) - self.eval(v)

    def young_gap_array(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.array([self.young_gap(x) for x in v.ravel()]).reshape(v.shape)

    def complementary(self) -> "ComplementaryFunction":
        return ComplementaryFunction(self, "numeric-legendre")

    def global_doubling_constant(self) -> Optional[float]:
        """k with phi(2u) <= k*phi(u) for every u > 0, or None."""
        return None

    def kernel_spec(self) -> Optional[tuple]:
        """Compact description handed to the summation kernels."""
        return None

    def delta2_check(self, u0: float = 1.0, grid_size: int = 256,
                     method: str = "auto") -> Delta2Certificate:
        return _grid_delta2(self, u0, grid_size)


def _grid_delta2(f: OrliczFunction, u0: float, grid_size: int) -> Delta2Certificate:
    if not u0 > 0:
        raise ValueError("u0 must be positive")
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    us = np.linspace(u0 / grid_size, u0, grid_size)
    ratios = []
    for u in us:
        den = f.eval(u)
        num = f.eval(2.0 * u)
        ratios.append(math.inf if den <= 0.0 else num / den)
    k = max(ratios)
    return Delta2Certificate(holds=bool(math.isfinite(k)), u0=float(u0), k=float(k),
                             method="grid-scan")


class _MonomialBase(OrliczFunction):
    """phi(t) = coef * t**exponent."""

    @property
    def coef(self) -> float:
        raise NotImplementedError

    @property
    def exponent(self) -> float:
        raise NotImplementedError

    def eval(self, t):
        t = _check_arg(t)
        try:
            return self.coef * t ** self.exponent
        except OverflowError:
            return math.inf

    def eval_array(self, t):
        with np.errstate(over="ignore"):
            return self.coef * np.power(np.asarray(t, dtype=float), self.exponent)

    def right_derivative(self, t):
        t = _check_arg(t)
        q = self.exponent
        if q == 1.0:
            return self.coef
        return self.coef * q * t ** (q - 1.0)

    def right_derivative_array(self, t):
        t = np.asarray(t, dtype=float)
        q = self.exponent
        if q == 1.0:
            return np.full(t.shape, self.coef)
        with np.errstate(over="ignore"):
            return self.coef * q * np.power(t, q - 1.0)

    def inverse(self, y):
        y = _check_arg(y, "y")
        return (y / self.coef) ** (1.0 / self.exponent)

    def inverse_array(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("y must be nonnegative")
        return (y / self.coef) ** (1.0 / self.exponent)

    def young_gap(self, v):
        return (self.exponent - 1.0) * self.eval(v)

    def young_gap_array(self, v):
        return (self.exponent - 1.0) * self.eval_array(v)

    def global_doubling_constant(self):
        return 2.0 ** self.exponent

    def kernel_spec(self):
        return ("monomial", self.coef, self.exponent)

    def complementary(self):
        q = self.exponent
        if q == 1.0:
            return ComplementaryFunction(self, "indicator")
        r = q / (q - 1.0)
        c = (self.coef * q) ** (-1.0 / (q - 1.0)) / r
        if isinstance(self, ScaledPower):
            closed = ScaledPower(r)
        else:
            closed = Monomial(c, r)
        return ComplementaryFunction(self, "closed-form", closed)

    def delta2_check(self, u0=1.0, grid_size=256, method="auto"):
        if method == "grid-scan":
            return _grid_delta2(self, u0, grid_size)
        if not u0 > 0:
            raise ValueError("u0 must be positive")
        return Delta2Certificate(True, float(u0), 2.0 ** self.exponent, "analytic")


@dataclass(frozen=True)
class Power(_MonomialBase):
    p: float
    family = "power"

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise ValueError(f"Power requires p >= 1, got {self.p!r}")

    @property
    def coef(self):
        return 1.0

    @property
    def exponent(self):
        return float(self.p)


@dataclass(frozen=True)
class ScaledPower(_MonomialBase):
    alpha: float
    family = "scaled"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 1.0):
            raise ValueError(f"ScaledPower requires alpha > 1, got {self.alpha!r}")

    @property
    def coef(self):
        return 1.0 / self.alpha

    @property
    def exponent(self):
        return float(self.alpha)

    @property
    def conjugate_exponent(self) -> float:
        return self.alpha / (self.alpha - 1.0)


@dataclass(frozen=True)
class Monomial(_MonomialBase):
    c: float
    q: float
    family = "monomial"

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"Monomial requires c > 0, got {self.c!r}")
        if not (math.isfinite(self.q) and self.q >= 1.0):
            raise ValueError(f"Monomial requires q >= 1, got {self.q!r}")

    @property
    def coef(self):
        return float(self.c)

    @property
    def exponent(self):
        return float(self.q)


@dataclass(frozen=True)
class CoshMinusOne(OrliczFunction):
    family = "cosh"

    def eval(self, t):
        t = _check_arg(t)
        # 2 sinh^2(t/2) avoids cancellation for small t
        try:
            return 2.0 * math.sinh(0.5 * t) ** 2
        except OverflowError:
            return math.inf

    def eval_array(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return 2.0 * np.sinh(0.5 * t) ** 2

    def right_derivative(self, t):
        try:
            return math.sinh(_check_arg(t))
        except OverflowError:
            return math.inf

    def right_derivative_array(self, t):
        with np.errstate(over="ignore"):
            return np.sinh(np.asarray(t, dtype=float))

    def young_gap(self, v):
        v = _check_arg(v)
        if v > 700.0:
            return math.inf
        return v * math.sinh(v) - self.eval(v)

    def young_gap_array(self, v):
        v = np.asarray(v, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return v * np.sinh(v) - self.eval_array(v)

    def kernel_spec(self):
        return ("cosh",)

    def delta2_check(self, u0=1.0, grid_size=256, method="auto"):
        if method == "grid-scan":
            return _grid_delta2(self, u0, grid_size)
        if not u0 > 0:
            raise ValueError("u0 must be positive")
        # phi(2u)/phi(u) = 4 cosh^2(u/2), increasing in u
        return Delta2Certificate(True, float(u0), 2.0 * (math.cosh(u0) + 1.0), "analytic")


@dataclass(frozen=True)
class ComplementaryFunction(OrliczFunction):
    """psi(u) = sup{u*v - phi(v) : v >= 0} for a source phi.

    ``mode`` is ``"closed-form"`` (delegates to ``closed_form``),
    ``"numeric-legendre"`` (stationarity ``h(v) = u`` solved by bisection,
    golden-section fallback) or ``"indicator"`` (source is linear,
    psi = 0 on [0, slope] and +inf beyond).
    """

    source: OrliczFunction
    mode: str
    closed_form: Optional[OrliczFunction] = None
    family = "complementary"

    def __post_init__(self):
        if self.mode not in ("closed-form", "numeric-legendre", "indicator"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "closed-form" and self.closed_form is None:
            raise ValueError("closed-form mode needs closed_form")

    @property
    def admissible(self) -> bool:
        return self.mode != "indicator"

    @property
    def threshold(self) -> float:
        """Slope of a linear source; psi jumps to +inf past it."""
        return self.source.right_derivative(0.0)

    def eval(self, u):
        u = _check_arg(u, "u")
        if self.mode == "closed-form":
            return self.closed_form.eval(u)
        if self.mode == "indicator":
            return 0.0 if u <= self.threshold else math.inf
        return self.legendre(u)

    def eval_array(self, u):
        if self.mode == "closed-form":
            return self.closed_form.eval_array(u)
        if self.mode == "indicator":
            return super().eval_array(u)
        u = np.asarray(u, dtype=float)
        v = self.maximizer_array(u)
        with np.errstate(invalid="ignore"):
            out = u * v - self.source.eval_array(v)
        out[np.isinf(v)] = math.inf
        return np.maximum(out, 0.0)

    def maximizer_array(self, u) -> np.ndarray:
        """Vectorized ``maximizer``: elementwise bisection on h(v) = u."""
        return _solve_increasing_array(self.source.right_derivative_array, u)

    def maximizer(self, u: float) -> float:
        """The v attaining the sup, i.e. the solution of h(v) = u."""
        h = self.source.right_derivative
        if u <= h(0.0):
            return 0.0
        v, _, _ = bisect_increasing(h, u)
        return v

    def legendre(self, u: float) -> float:
        phi = self.source
        try:
            v = self.maximizer(u)
        except NotImplementedError:
            return self._golden_legendre(u)
        except BracketError:
            # h stays below u, so u*v - phi(v) grows without bound
            return math.inf
        return u * v - phi.eval(v)

    def _golden_legendre(self, u: float) -> float:
        """Derivative-free sup of the concave map v -> u*v - phi(v)."""
        def neg(v):
            return self.source.eval(v) - u * v

        hi = 1.0
        for _ in range(200):
            if neg(2.0 * hi) >= neg(hi):
                break
            hi *= 2.0
        else:
            return math.inf
        _, negval, _ = golden_section_min(neg, 0.0, 2.0 * hi)
        return max(0.0, -negval)

    def right_derivative(self, u):
        u = _check_arg(u, "u")
        if self.mode == "closed-form":
            return self.closed_form.right_derivative(u)
        if self.mode == "indicator":
            return 0.0 if u < self.threshold else math.inf
        return self.maximizer(u)

    def right_derivative_array(self, u):
        if self.mode == "closed-form":
            return self.closed_form.right_derivative_array(u)
        if self.mode == "numeric-legendre":
            return self.maximizer_array(u)
        return super().right_derivative_array(u)

    def inverse(self, y):
        y = _check_arg(y, "y")
        if self.mode == "closed-form":
            return self.closed_form.inverse(y)
        return float(self.inverse_array(np.array([y]))[0])

    def inverse_array(self, y) -> np.ndarray:
        """psi^{-1}(y) = h(v) where the Young gap v*h(v) - phi(v) equals y."""
        if self.mode == "closed-form":
            return self.closed_form.inverse_array(y)
        if self.mode == "indicator":
            raise ValueError("conjugate of a linear function is not invertible")
        v = _solve_increasing_array(self.source.young_gap_array, y)
        out = self.source.right_derivative_array(np.where(np.isinf(v), 0.0, v))
        out[np.isinf(v)] = math.inf
        return out

    def young_gap(self, u):
        u = _check_arg(u, "u")
        if self.mode == "closed-form":
            return self.closed_form.young_gap(u)
        if self.mode == "indicator":
            return 0.0 if u <= self.threshold else math.inf
        # u*psi'(u) - psi(u) = phi(v*) at the maximizer v*
        return self.source.eval(self.maximizer(u))

    def young_gap_array(self, u):
        if self.mode == "closed-form":
            return self.closed_form.young_gap_array(u)
        if self.mode == "indicator":
            return super().young_gap_array(u)
        return self.source.eval_array(self.maximizer_array(u))

    def complementary(self):
        if self.mode == "closed-form":
            return self.closed_form.complementary()
        if self.mode == "indicator":
            raise ValueError("biconjugate of the indicator case is not supported")
        return ComplementaryFunction(self, "numeric-legendre")

    def global_doubling_constant(self):
        if self.mode == "closed-form":
            return self.closed_form.global_doubling_constant()
        return None

    def kernel_spec(self):
        if self.mode == "closed-form":
            return self.closed_form.kernel_spec()
        return None

    def delta2_check(self, u0=1.0, grid_size=256, method="auto"):
        if self.mode == "closed-form":
            return self.closed_form.delta2_check(u0, grid_size, method)
        if self.mode == "indicator":
            return Delta2Certificate(False, float(u0), math.inf, "analytic")
        return _grid_delta2(self, u0, grid_size)


# module-level operations

def evaluate(f: OrliczFunction, t: float) -> float:
    return f.eval(t)


def inverse(f: OrliczFunction, y: float) -> float:
    return f.inverse(y)


def right_derivative(f: OrliczFunction, t: float) -> float:
    return f.right_derivative(t)


def complementary(f: OrliczFunction) -> ComplementaryFunction:
    return f.complementary()


def delta2_check(f: OrliczFunction, u0: float = 1.0, grid_size: int = 256,
                 method: str = "auto") -> Delta2Certificate:
    """Certify phi(2u) <= k*phi(u) on (0, u0].

    Families are certified analytically; ``method="grid-scan"`` (and any
    non-family function) reports the largest ratio seen on a uniform grid.
    """
    if method not in ("auto", "analytic", "grid-scan"):
        raise ValueError(f"unknown method {method!r}")
    return f.delta2_check(u0, grid_size, method)


_SPEC_RE = re.compile(r"^\s*(power|scaled|cosh)\s*(?::\s*(\w+)\s*=\s*([^\s]+))?\s*$", re.I)


def parse_phi(spec: str) -> OrliczFunction:
    """Parse ``"power:p=2"``, ``"scaled:alpha=3"`` or ``"cosh"``."""
    m = _SPEC_RE.match(spec or "")
    if not m:
        raise ValueError(f"malformed Orlicz function spec {spec!r}; expected one of {PHI_GRAMMAR}")
    name, key, raw = m.group(1).lower(), m.group(2), m.group(3)
    key = key.lower() if key else None
    try:
        if name == "cosh":
            if key is not None:
                raise ValueError
            return CoshMinusOne()
        value = float(raw)
        if name == "power" and key == "p":
            return Power(value)
        if name == "scaled" and key == "alpha":
            return ScaledPower(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(
            f"malformed Orlicz function spec {spec!r}; expected one of {PHI_GRAMMAR}"
        ) from exc
    raise ValueError(f"malformed Orlicz function spec {spec!r}; expected one of {PHI_GRAMMAR}")
