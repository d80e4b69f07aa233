import math

import numpy as np
import pytest
from scipy.special import polygamma, zeta as sp_zeta

from orliczops.bergman import (
    bergman_norm_equation_residual,
    bergman_operator,
    bergman_schatten_norm,
    bergman_singular_value,
    bergman_tail_bound,
    bergman_tail_bracket,
    zeta,
    zeta_bracket,
)
from orliczops.functions import CoshMinusOne, Power, ScaledPower
from orliczops.norms import luxemburg_norm


def exact_tail_power_two(N, c=1.0):
    """sum_{n > N} (c/(n+2))^2 = c^2 psi'(N + 3)."""
    return c * c * float(polygamma(1, N + 3))


def test_first_singular_value():
    assert bergman_singular_value(0) == 0.5
    op = bergman_operator()
    assert op.values(0, 1)[0] == 0.5


def test_singular_values_strictly_decrease():
    s = bergman_operator().values(0, 10 ** 6)
    assert np.all(np.diff(s) < 0)


def test_tail_bound_example_is_rigorous():
    # the integral from N, not N+1, is what bounds the tail from above
    bound = bergman_tail_bound(100, 1.0, Power(2))
    assert bound == pytest.approx(1.0 / 102.0, rel=1e-15)
    exact = exact_tail_power_two(100)
    assert 1.0 / 103.0 < exact <= bound


@pytest.mark.parametrize("f", [Power(1.5), Power(2), Power(3), ScaledPower(2.5), CoshMinusOne()], ids=repr)
@pytest.mark.parametrize("c", [0.5, 1.0, 4.0])
def test_tail_bound_dominates_direct_sum(f, c):
    # compare with a long direct sum plus the (tiny) remainder past it
    for N in (10, 100, 1000):
        n = np.arange(N + 1, N + 2_000_001, dtype=float)
        partial = math.fsum(f.eval_array(c / (n + 2.0)))
        assert partial <= bergman_tail_bound(N, c, f)


@pytest.mark.parametrize("f", [Power(1.5), Power(2), Power(3), CoshMinusOne()], ids=repr)
def test_tail_bound_nonincreasing(f):
    vals = [bergman_tail_bound(N, 1.0, f) for N in (1, 2, 5, 10, 100, 1000)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("N", [0, 5, 100, 4095])
@pytest.mark.parametrize("c", [0.3, 1.0, 7.0])
def test_tail_bracket_encloses_power_two(N, c):
    lo, hi = bergman_tail_bracket(N, c, Power(2))
    exact = exact_tail_power_two(N, c)
    assert lo <= exact * (1 + 1e-14) and exact <= hi * (1 + 1e-14)
    assert hi <= bergman_tail_bound(N, c, Power(2))


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_tail_bracket_encloses_cosh(lam):
    # sum_{n > N} cosh(lam/(n+2)) - 1 = sum_k lam^{2k} (zeta(2k, N+3)) / (2k)!
    N = 50
    k = np.arange(1, 25)
    exact = float(np.sum(lam ** (2 * k) * sp_zeta(2 * k, N + 3) /
                         np.array([math.factorial(2 * i) for i in k], dtype=float)))
    lo, hi = bergman_tail_bracket(N, lam, CoshMinusOne())
    assert lo <= exact <= hi


def test_power_one_tail_certifies_divergence():
    assert bergman_tail_bracket(100, 1.0, Power(1)) == (math.inf, math.inf)


@pytest.mark.parametrize("p,expected", [
    (2.0, math.pi ** 2 / 6), (4.0, math.pi ** 4 / 90), (3.0, float(sp_zeta(3.0))),
    (1.5, float(sp_zeta(1.5))), (6.5, float(sp_zeta(6.5))),
])
def test_zeta_bracket_contains_exact(p, expected):
    lo, hi = zeta_bracket(p, 1e-11)
    assert lo <= expected <= hi
    assert hi - lo <= 2e-11 * (1 + 1e-6)
    assert zeta(p) == pytest.approx(expected, abs=1e-11)


def test_zeta_refuses_near_one():
    with pytest.raises(ValueError):
        zeta(1.0 + 1e-7)
    with pytest.raises(ValueError):
        zeta(0.5)


def test_zeta_from_start():
    assert zeta(2.0, start=2) == pytest.approx(math.pi ** 2 / 6 - 1, abs=1e-11)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0, 8.0])
def test_schatten_norm_formula(p):
    expected = (float(sp_zeta(p)) - 1.0) ** (1.0 / p)
    assert bergman_schatten_norm(p) == pytest.approx(expected, rel=1e-10)


def test_schatten_norm_closed_values():
    assert bergman_schatten_norm(2.0) == pytest.approx(math.sqrt(math.pi ** 2 / 6 - 1), abs=1e-11)
    assert bergman_schatten_norm(4.0) == pytest.approx((math.pi ** 4 / 90 - 1) ** 0.25, abs=1e-11)


def test_schatten_norm_tends_to_operator_norm():
    vals = [bergman_schatten_norm(p) for p in (4.0, 8.0, 16.0, 32.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(0.5, rel=1e-7)


def test_schatten_norm_refuses_trace_class():
    with pytest.raises(ValueError):
        bergman_schatten_norm(1.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_luxemburg_matches_formula(p):
    got = luxemburg_norm(bergman_operator(), Power(p)).value
    assert got == pytest.approx(bergman_schatten_norm(p), rel=1e-9)


def test_residual_vanishes_at_norm():
    cand = math.sqrt(math.pi ** 2 / 6 - 1)
    assert abs(bergman_norm_equation_residual(Power(2), cand)) <= 1e-10


def test_residual_at_one():
    assert bergman_norm_equation_residual(Power(2), 1.0) == pytest.approx(math.pi ** 2 / 6 - 2, abs=1e-11)


@pytest.mark.parametrize("f", [Power(2), CoshMinusOne()], ids=repr)
def test_residual_decreasing(f):
    r = [bergman_norm_equation_residual(f, c) for c in (0.3, 0.6, 1.0, 2.0)]
    assert all(a > b for a, b in zip(r, r[1:]))


def test_residual_cosh_at_luxemburg_norm():
    f = CoshMinusOne()
    cand = luxemburg_norm(bergman_operator(), f, rel_tol=1e-12).value
    assert abs(bergman_norm_equation_residual(f, cand)) <= 1e-9
