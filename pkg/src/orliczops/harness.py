"""Randomized and deterministic checks of trace/norm inequalities.

Every ``check_*`` function takes concrete operators and returns a
``CheckReport``; ``run_suite`` draws seeded random inputs and runs all of
them.  Reports from composite checks keep their sub-results in ``parts``
and expose the tightest one at top level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .functions import CoshMinusOne, OrliczFunction, Power, ScaledPower
from .norms import amemiya_norm, luxemburg_norm, modular
from .operators import (
    DenseOperator,
    DiagonalOperator,
    InputError,
    as_dense,
    compose,
    finite_singular_values,
    operator_norm,
    random_matrix,
    random_unitary,
    svd,
    trace,
)

__all__ = [
    "CheckReport",
    "ABS_TOL",
    "REL_TOL",
    "check_holder",
    "check_schatten_holder",
    "check_s1_endpoint",
    "check_modular_norm_bridge",
    "check_unit_modular",
    "check_norm_sandwich",
    "check_modular_triangle",
    "check_ideal",
    "check_phi_maps_to_s1",
    "check_duality_bound",
    "suite_plan",
    "run_suite",
    "summarize",
]

ABS_TOL = 1e-8
REL_TOL = 1e-8


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    inputs_digest: str
    tolerance: float
    kind: str = "inequality"  # lhs <= rhs, or "identity": lhs == rhs
    parts: tuple = field(default_factory=tuple)

    @property
    def margin(self) -> float:
        """Distance from failing; negative iff the check failed."""
        if self.kind == "identity":
            return self.tolerance - abs(self.slack)
        return self.slack + self.tolerance

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "inputs_digest": self.inputs_digest,
        }
        if self.parts:
            d["parts"] = [p.to_dict() for p in self.parts]
        return d


def _tol(rhs: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> float:
    return abs_ + rel * abs(rhs)


def _report(name, lhs, rhs, digest, kind="inequality", tolerance=None) -> CheckReport:
    lhs, rhs = float(lhs), float(rhs)
    tol = _tol(rhs) if tolerance is None else float(tolerance)
    slack = rhs - lhs
    if kind == "identity":
        passed = abs(slack) <= tol
    else:
        passed = lhs <= rhs + tol
    return CheckReport(name, lhs, rhs, slack, bool(passed), digest, tol, kind)


def _combine(name, parts: List[CheckReport], digest) -> CheckReport:
    worst = min(parts, key=lambda r: r.margin)
    return CheckReport(name, worst.lhs, worst.rhs, worst.slack,
                       all(p.passed for p in parts), digest, worst.tolerance,
                       worst.kind, tuple(parts))


def _trace_abs(x) -> float:
    return float(np.sum(finite_singular_values(x)))


# checks

def check_s1_endpoint(x, y, digest: str = "") -> CheckReport:
    """Tr|xy| <= ||x||_1 ||y||_inf and Tr|yx| <= ||y||_1 ||x||_inf."""
    x, y = as_dense(x), as_dense(y)
    parts = [
        _report("s1_endpoint:xy", _trace_abs(compose(x, y)),
                _trace_abs(x) * operator_norm(y), digest),
        _report("s1_endpoint:yx", _trace_abs(compose(y, x)),
                _trace_abs(y) * operator_norm(x), digest),
    ]
    return _combine("s1_endpoint", parts, digest)


def check_holder(x, y, f: OrliczFunction, digest: str = "") -> CheckReport:
    """Tr|xy| <= ||x||^o_phi * ||y||_psi with psi the conjugate of phi."""
    psi = f.complementary()
    if psi.mode == "indicator":
        return check_s1_endpoint(x, y, digest)
    lhs = _trace_abs(compose(x, y))
    rhs = amemiya_norm(x, f).value * luxemburg_norm(y, psi).value
    return _report("holder", lhs, rhs, digest)


def check_schatten_holder(x, y, p: float, digest: str = "") -> CheckReport:
    """Tr|xy| <= ||x||_p ||y||_q, 1/p + 1/q = 1."""
    if not p > 1.0:
        raise ValueError("Schatten Hoelder needs p > 1; use check_s1_endpoint for p = 1")
    q = p / (p - 1.0)
    lhs = _trace_abs(compose(x, y))
    rhs = luxemburg_norm(x, Power(p)).value * luxemburg_norm(y, Power(q)).value
    return _report("schatten_holder", lhs, rhs, digest)


def check_modular_norm_bridge(x, f: OrliczFunction, digest: str = "") -> CheckReport:
    """Tr phi(x) >= ||x|| when ||x|| > 1, Tr phi(x) <= ||x|| when ||x|| <= 1,
    and Tr phi(x / ||x||) <= 1."""
    norm = luxemburg_norm(x, f).value
    if norm == 0.0:
        raise InputError("bridge check needs a nonzero operator")
    m = modular(x, f, 1.0).value
    if norm > 1.0:
        first = _report("bridge:norm<=modular", norm, m, digest)
    else:
        first = _report("bridge:modular<=norm", m, norm, digest)
    unit = _report("bridge:unit_ball", modular(x, f, 1.0 / norm).value, 1.0, digest)
    return _combine("modular_norm_bridge", [first, unit], digest)


def check_unit_modular(x, f: OrliczFunction, digest: str = "") -> CheckReport:
    """Tr phi(x / ||x||_phi) = 1 for delta2 functions."""
    norm = luxemburg_norm(x, f).value
    if norm == 0.0:
        raise InputError("unit-modular check needs a nonzero operator")
    return _report("unit_modular", modular(x, f, 1.0 / norm).value, 1.0, digest,
                   kind="identity", tolerance=1e-8)


def check_norm_sandwich(x, f: OrliczFunction, digest: str = "") -> CheckReport:
    """||x||_phi <= ||x||^o_phi <= 2 ||x||_phi."""
    lux = luxemburg_norm(x, f).value
    orl = amemiya_norm(x, f).value
    parts = [
        _report("sandwich:lower", lux, orl, digest),
        _report("sandwich:upper", orl, 2.0 * lux, digest),
    ]
    return _combine("norm_sandwich", parts, digest)


def check_modular_triangle(x, y, f: OrliczFunction, digest: str = "",
                           expect_equality: bool = False) -> CheckReport:
    """Tr phi(x + y) <= (k/2) [Tr phi(x) + Tr phi(y)] with phi(2u) <= k phi(u)."""
    k = f.global_doubling_constant()
    if k is None:
        raise ValueError(f"{f!r} has no global doubling constant")
    x, y = as_dense(x), as_dense(y)
    lhs = modular(x + y, f, 1.0).value
    rhs = 0.5 * k * (modular(x, f, 1.0).value + modular(y, f, 1.0).value)
    if expect_equality:
        return _report("modular_triangle:equality", lhs, rhs, digest, kind="identity",
                       tolerance=1e-9 * max(1.0, abs(rhs)))
    return _report("modular_triangle", lhs, rhs, digest)


def check_ideal(y, x, z, f: OrliczFunction, digest: str = "",
                expect_equality: bool = False) -> CheckReport:
    """||yxz|| <= ||y||_inf ||x|| ||z||_inf, ||xy|| <= ||x|| ||y||_inf and
    ||yx|| <= ||y||_inf ||x||; identities when y and z are unitary."""
    y, x, z = as_dense(y), as_dense(x), as_dense(z)
    nx = luxemburg_norm(x, f).value
    ny, nz = operator_norm(y), operator_norm(z)
    kind = "identity" if expect_equality else "inequality"
    parts = [
        _report("ideal:yxz", luxemburg_norm(compose(compose(y, x), z), f).value,
                ny * nx * nz, digest, kind),
        _report("ideal:xy", luxemburg_norm(compose(x, y), f).value, nx * ny, digest, kind),
        _report("ideal:yx", luxemburg_norm(compose(y, x), f).value, ny * nx, digest, kind),
    ]
    return _combine("ideal_unitary" if expect_equality else "ideal", parts, digest)


def check_phi_maps_to_s1(x, f: OrliczFunction, digest: str = "") -> CheckReport:
    """sum phi(s_n(x)) equals Tr phi(x) from an eigendecomposition, x >= 0."""
    m = as_dense(x).matrix
    if m.shape[0] != m.shape[1]:
        raise InputError("positive operator must be square")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > 1e-10 * scale:
        raise InputError("operator is not self-adjoint")
    w, u = np.linalg.eigh(m)
    if w.min() < -1e-10 * scale:
        raise InputError("operator is not positive semidefinite")
    fx = (u * f.eval_array(np.clip(w, 0.0, None))) @ u.conj().T
    rhs = trace(DenseOperator(fx)).real
    lhs = modular(x, f, 1.0).value
    return _report("phi_maps_to_s1", lhs, rhs, digest, kind="identity")


def check_duality_bound(x, y, f: OrliczFunction, digest: str = "") -> CheckReport:
    """|Tr(xy)| <= ||y||^o_psi ||x||_phi, and the rank-one operator built
    from the top singular pair of y attains Tr(y (e (x) h)) = ||y||_inf."""
    x, y = as_dense(x), as_dense(y)
    psi = f.complementary()
    lhs = abs(trace(compose(x, y)))
    rhs = amemiya_norm(y, psi).value * luxemburg_norm(x, f).value
    u, sigma, v = svd(y)
    e, h = v[:, 0], u[:, 0]
    attained = trace(compose(y, DenseOperator(np.outer(e, h.conj())))).real
    parts = [
        _report("duality:bound", lhs, rhs, digest),
        _report("duality:rank_one", float(sigma[0]), attained, digest),
    ]
    return _combine("duality_bound", parts, digest)


# random suite

def _dim(rng) -> int:
    return int(rng.integers(2, 9))


def _digest(seed, name, trial, *shapes) -> str:
    dims = ",".join("x".join(str(d) for d in s) for s in shapes)
    return f"seed={seed};check={name};trial={trial};dims={dims}"


def _scaled(rng, m):
    """Spread operator sizes over a few decades so both norm regimes occur."""
    return m * 10.0 ** rng.uniform(-1.5, 1.0)


def _random_op(rng, n, diagonal: bool):
    if diagonal:
        return DiagonalOperator(_scaled(rng, rng.standard_normal(n) + 1j * rng.standard_normal(n)))
    return DenseOperator(_scaled(rng, random_matrix(n, rng)))


def _phi_label(f) -> str:
    if isinstance(f, Power):
        return f"power:p={f.p:g}"
    if isinstance(f, ScaledPower):
        return f"scaled:alpha={f.alpha:g}"
    return f.family


def suite_plan() -> List[tuple]:
    """``(name, trial_fn)`` pairs; ``trial_fn(rng, seed, trial)`` -> report."""
    plan = []

    def pair_check(label, fn):
        def trial(rng, seed, t):
            n = _dim(rng)
            x = DenseOperator(random_matrix(n, rng))
            y = DenseOperator(random_matrix(n, rng))
            return fn(x, y, _digest(seed, label, t, (n, n), (n, n)))
        plan.append((label, trial))

    for f in (Power(1.5), Power(2), Power(3), ScaledPower(3), CoshMinusOne()):
        pair_check(f"holder[{_phi_label(f)}]", lambda x, y, d, f=f: check_holder(x, y, f, d))
    for p in (1.5, 2.0, 3.0):
        pair_check(f"schatten_holder[p={p:g}]",
                   lambda x, y, d, p=p: check_schatten_holder(x, y, p, d))
    pair_check("s1_endpoint", check_s1_endpoint)
    for f in (Power(2), Power(3)):
        pair_check(f"duality_bound[{_phi_label(f)}]",
                   lambda x, y, d, f=f: check_duality_bound(x, y, f, d))

    def single_check(label, fn):
        def trial(rng, seed, t):
            n = _dim(rng)
            x = _random_op(rng, n, diagonal=bool(t % 2))
            return fn(x, _digest(seed, label, t, (n, n)))
        plan.append((label, trial))

    for f in (Power(2), ScaledPower(3), CoshMinusOne()):
        single_check(f"modular_norm_bridge[{_phi_label(f)}]",
                     lambda x, d, f=f: check_modular_norm_bridge(x, f, d))
    for f in (Power(1.5), Power(2), Power(3), ScaledPower(1.5), CoshMinusOne()):
        single_check(f"unit_modular[{_phi_label(f)}]",
                     lambda x, d, f=f: check_unit_modular(x, f, d))
    for f in (Power(2), Power(3), CoshMinusOne()):
        single_check(f"norm_sandwich[{_phi_label(f)}]",
                     lambda x, d, f=f: check_norm_sandwich(x, f, d))

    for p in (1.5, 2.0, 3.0):
        f = Power(p)

        def triangle(rng, seed, t, f=f, label=f"modular_triangle[p={p:g}]"):
            n = _dim(rng)
            x = DenseOperator(random_matrix(n, rng))
            y = DenseOperator(random_matrix(n, rng))
            return check_modular_triangle(x, y, f, _digest(seed, label, t, (n, n), (n, n)))

        def doubled(rng, seed, t, f=f, label=f"modular_triangle_equality[p={p:g}]"):
            n = _dim(rng)
            x = DenseOperator(random_matrix(n, rng))
            return check_modular_triangle(x, x, f, _digest(seed, label, t, (n, n)),
                                          expect_equality=True)

        plan.append((f"modular_triangle[p={p:g}]", triangle))
        plan.append((f"modular_triangle_equality[p={p:g}]", doubled))

    for f in (Power(2), CoshMinusOne()):
        def ideal(rng, seed, t, f=f, label=f"ideal[{_phi_label(f)}]"):
            n = _dim(rng)
            y, x, z = (DenseOperator(random_matrix(n, rng)) for _ in range(3))
            return check_ideal(y, x, z, f, _digest(seed, label, t, (n, n), (n, n), (n, n)))

        def ideal_unitary(rng, seed, t, f=f, label=f"ideal_unitary[{_phi_label(f)}]"):
            n = _dim(rng)
            y = DenseOperator(random_unitary(n, rng))
            x = DenseOperator(random_matrix(n, rng))
            z = DenseOperator(random_unitary(n, rng))
            return check_ideal(y, x, z, f, _digest(seed, label, t, (n, n), (n, n), (n, n)),
                               expect_equality=True)

        plan.append((f"ideal[{_phi_label(f)}]", ideal))
        plan.append((f"ideal_unitary[{_phi_label(f)}]", ideal_unitary))

    for f in (Power(2), CoshMinusOne()):
        def positive(rng, seed, t, f=f, label=f"phi_maps_to_s1[{_phi_label(f)}]"):
            n = int(rng.integers(2, 7))
            a = random_matrix(n, rng) * 0.5
            return check_phi_maps_to_s1(DenseOperator(a.conj().T @ a), f,
                                        _digest(seed, label, t, (n, n)))

        plan.append((f"phi_maps_to_s1[{_phi_label(f)}]", positive))
    return plan


def run_suite(seed: int = 42, trials: int = 500,
              select: Optional[Callable[[str], bool]] = None) -> List[CheckReport]:
    """Run every planned check ``trials`` times.

    Check number i draws from ``default_rng([seed, i])``, so results depend
    only on (seed, trials) and not on which other checks are selected.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    reports = []
    for index, (name, trial_fn) in enumerate(suite_plan()):
        if select is not None and not select(name):
            continue
        rng = np.random.default_rng([seed, index])
        for t in range(trials):
            rep = trial_fn(rng, seed, t)
            reports.append(CheckReport(name, rep.lhs, rep.rhs, rep.slack, rep.passed,
                                       rep.inputs_digest, rep.tolerance, rep.kind, rep.parts))
    return reports


def summarize(reports: List[CheckReport]) -> dict:
    """Per-check trial count, failures and minimum slack."""
    out = {}
    for r in reports:
        s = out.setdefault(r.name, {"trials": 0, "failures": 0, "min_slack": math.inf,
                                    "min_margin": math.inf})
        s["trials"] += 1
        s["failures"] += 0 if r.passed else 1
        s["min_slack"] = min(s["min_slack"], r.slack)
        s["min_margin"] = min(s["min_margin"], r.margin)
    return out
