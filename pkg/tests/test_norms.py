import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq, minimize_scalar
from scipy.special import factorial, zeta

from orliczops.bergman import bergman_operator
from orliczops.functions import CoshMinusOne, Monomial, Power, ScaledPower
from orliczops.norms import (
    DivergenceError,
    TruncationError,
    amemiya_norm,
    classify_membership,
    luxemburg_norm,
    modular,
    orlicz_norm,
    orlicz_norm_sup_oracle,
    rank_one_luxemburg,
    rank_one_orlicz,
)
from orliczops.operators import (
    AnalyticOperator,
    DenseOperator,
    DiagonalOperator,
    RankOneOperator,
    random_matrix,
)

LN_2_SQRT3 = math.log(2.0 + math.sqrt(3.0))


def luxemburg_oracle(s, f):
    """Root of sum phi(s / lam) = 1 by scipy brentq."""
    s = np.asarray(s, dtype=float)
    g = lambda lam: math.fsum(f.eval(v / lam) for v in s) - 1.0
    lo, hi = 1e-6 * s.max(), 10.0 * s.sum() + 10.0
    return brentq(g, lo, hi, xtol=1e-15, rtol=1e-15)


def amemiya_oracle(s, f):
    """inf_k (1 + sum phi(k s)) / k by bounded minimization over log k."""
    s = np.asarray(s, dtype=float)
    g = lambda t: (1.0 + math.fsum(f.eval(math.exp(t) * v) for v in s)) / math.exp(t)
    c = -math.log(s.max())
    res = minimize_scalar(g, bounds=(c - 15, c + 15), method="bounded",
                          options={"xatol": 1e-12})
    return res.fun


def cosh_bergman_modular(lam):
    """sum_{n>=2} cosh(lam/n) - 1 = sum_k lam^{2k} (zeta(2k) - 1) / (2k)!."""
    k = np.arange(1, 30)
    return float(np.sum(lam ** (2 * k) * (zeta(2 * k) - 1.0) / factorial(2 * k)))


# modular

def test_modular_diagonal():
    m = modular(DiagonalOperator([3, -4j]), Power(2), 0.5)
    assert m.value == pytest.approx(6.25, rel=1e-15)
    assert m.terms_used == 2 and m.tail_bound == 0.0


def test_modular_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        modular(DiagonalOperator([1]), Power(2), 0.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_bergman_modular_power_brackets_zeta(p):
    m = modular(bergman_operator(), Power(p), 1.0, eps_tail=1e-11)
    exact = float(zeta(p)) - 1.0
    assert m.value - 1e-14 <= exact <= m.value + m.tail_bound + 1e-14
    assert m.tail_bound < 1e-11


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
def test_bergman_modular_cosh(lam):
    m = modular(bergman_operator(), CoshMinusOne(), lam, eps_tail=1e-11)
    exact = cosh_bergman_modular(lam)
    assert m.value - 1e-14 <= exact <= m.value + m.tail_bound + 1e-14


def test_bergman_power_one_modular_diverges():
    assert modular(bergman_operator(), Power(1), 1.0).value == math.inf


def test_truncation_error_without_bracket():
    # harmonic-type tail with only a loose upper bound cannot converge
    op = AnalyticOperator(lambda n: 1.0 / (n + 1.0), lambda N, c, f: 1.0)
    with pytest.raises(TruncationError) as exc:
        modular(op, Power(2), 1.0, max_terms=4096)
    assert exc.value.partial.terms_used == 4096


# Luxemburg

@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_luxemburg_power_is_schatten_norm(p):
    rng = np.random.default_rng(int(10 * p))
    a = random_matrix(6, rng)
    s = scipy.linalg.svdvals(a)
    res = luxemburg_norm(DenseOperator(a), Power(p))
    assert res.value == pytest.approx(np.sum(s ** p) ** (1 / p), rel=1e-9)
    assert res.method == "bisection"


def test_luxemburg_diag_three_four():
    assert luxemburg_norm(DiagonalOperator([3, 4]), Power(2)).value == pytest.approx(5.0, rel=1e-10)


@pytest.mark.parametrize("f", [ScaledPower(1.5), ScaledPower(3), CoshMinusOne(), Monomial(0.3, 2.2)],
                         ids=repr)
def test_luxemburg_against_brentq(f):
    s = [2.0, 1.3, 0.4, 0.05]
    res = luxemburg_norm(DiagonalOperator(s), f, rel_tol=1e-12)
    assert res.value == pytest.approx(luxemburg_oracle(s, f), rel=1e-11)
    assert res.bracket_width <= 1e-12 * res.value


def test_luxemburg_zero_operator():
    res = luxemburg_norm(DiagonalOperator([0, 0]), Power(2))
    assert res.value == 0.0 and res.method == "closed-form"


def test_luxemburg_of_conjugate_of_linear_is_operator_norm():
    psi = Power(1).complementary()
    assert luxemburg_norm(DiagonalOperator([0.5, 3.0]), psi).value == 3.0


def test_luxemburg_bergman_cosh_satisfies_norm_equation():
    f = CoshMinusOne()
    lam = luxemburg_norm(bergman_operator(), f).value
    assert cosh_bergman_modular(1.0 / lam) == pytest.approx(1.0, abs=1e-9)


def test_luxemburg_bergman_power_one_diverges():
    with pytest.raises(DivergenceError):
        luxemburg_norm(bergman_operator(), Power(1))


@pytest.mark.parametrize("f", [Power(1.5), Power(2), ScaledPower(3), CoshMinusOne()], ids=repr)
def test_rank_one_luxemburg(f):
    e = np.array([0.6, 0.8j, 0.0])
    op = RankOneOperator(e, e)
    assert luxemburg_norm(op, f).value == pytest.approx(rank_one_luxemburg(f), rel=1e-10)


def test_rank_one_cosh_value():
    assert rank_one_luxemburg(CoshMinusOne()) == pytest.approx(1.0 / LN_2_SQRT3, rel=1e-14)


def test_luxemburg_homogeneous():
    op = DiagonalOperator([1.0, 0.2, 0.7])
    base = luxemburg_norm(op, CoshMinusOne()).value
    assert luxemburg_norm(op * 3.7, CoshMinusOne()).value == pytest.approx(3.7 * base, rel=1e-9)


# Amemiya / Orlicz

@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_amemiya_power_closed_form(p):
    # sup{sum s y : c ||y||_q^q <= 1} = c^{-1/q} ||s||_p
    q = p / (p - 1)
    c = p ** (-q / p) / q
    s = np.array([2.0, 1.0, 0.5, 0.25])
    expected = c ** (-1 / q) * np.sum(s ** p) ** (1 / p)
    assert amemiya_norm(DiagonalOperator(s), Power(p)).value == pytest.approx(expected, rel=1e-10)


def test_amemiya_diag_one_power_two():
    assert orlicz_norm(DiagonalOperator([1.0]), Power(2)).value == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("f", [Power(2), ScaledPower(1.5), CoshMinusOne(), Monomial(2.0, 3.0)], ids=repr)
def test_amemiya_against_minimizer(f):
    s = [1.7, 1.0, 0.3]
    got = amemiya_norm(DiagonalOperator(s), f).value
    assert got == pytest.approx(amemiya_oracle(s, f), rel=1e-9)


@pytest.mark.parametrize("f", [Power(2), ScaledPower(3), CoshMinusOne()], ids=repr)
def test_amemiya_equals_sup_oracle(f):
    s = [1.2, 0.9, 0.9, 0.1]
    got = amemiya_norm(DiagonalOperator(s), f).value
    assert got == pytest.approx(orlicz_norm_sup_oracle(DiagonalOperator(s), f), rel=1e-6)


def test_amemiya_linear_is_trace_norm():
    res = amemiya_norm(DiagonalOperator([3, 4]), Power(1))
    assert res.value == 7.0 and res.method == "closed-form"
    with pytest.raises(DivergenceError):
        amemiya_norm(bergman_operator(), Power(1))


def test_amemiya_bergman_power_two_is_twice_luxemburg():
    # psi(u) = u^2/4 so the Orlicz norm is 2 ||x||_2
    lux = luxemburg_norm(bergman_operator(), Power(2)).value
    assert amemiya_norm(bergman_operator(), Power(2)).value == pytest.approx(2 * lux, rel=1e-10)


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("mu", [1, 2, 4])
def test_rank_mu_projection_orlicz_norm(alpha, mu):
    beta = alpha / (alpha - 1)
    expected = (beta / mu) ** (1 / beta) * mu
    assert rank_one_orlicz(ScaledPower(alpha), mu) == pytest.approx(expected, rel=1e-12)
    assert amemiya_norm(DiagonalOperator(np.ones(mu)), ScaledPower(alpha)).value == \
        pytest.approx(expected, rel=1e-9)


def test_rank_one_orlicz_needs_invertible_conjugate():
    with pytest.raises(ValueError):
        rank_one_orlicz(Power(1))
    with pytest.raises(ValueError):
        rank_one_orlicz(Power(2), 0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(1e-3, 5.0), min_size=1, max_size=5),
       st.sampled_from([Power(1.5), Power(2), Power(3), CoshMinusOne()]))
def test_sandwich_property(s, f):
    op = DiagonalOperator(s)
    lux = luxemburg_norm(op, f).value
    orl = amemiya_norm(op, f).value
    assert lux <= orl * (1 + 1e-9)
    assert orl <= 2 * lux * (1 + 1e-9)


# membership

def test_membership_finite_rank():
    v = classify_membership(DiagonalOperator([1, 2]), Power(1))
    assert v.in_S_phi and v.in_E_phi and v.rationale == "finite-rank"


def test_membership_bergman_trace_class_fails_with_certificate():
    v = classify_membership(bergman_operator(), Power(1))
    assert not v.in_S_phi and not v.in_E_phi
    assert v.rationale == "tail-comparison" and v.certified


@pytest.mark.parametrize("f", [Power(1.5), Power(2), CoshMinusOne()], ids=repr)
def test_membership_bergman_delta2(f):
    v = classify_membership(bergman_operator(), f)
    assert v.in_S_phi and v.in_E_phi
    assert v.rationale == "delta2-collapse" and v.certified
