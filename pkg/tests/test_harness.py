import json
import math

import numpy as np
import pytest
import scipy.linalg

from orliczops.functions import CoshMinusOne, Power, ScaledPower
from orliczops.harness import (
    CheckReport,
    check_duality_bound,
    check_holder,
    check_ideal,
    check_modular_norm_bridge,
    check_modular_triangle,
    check_norm_sandwich,
    check_phi_maps_to_s1,
    check_s1_endpoint,
    check_schatten_holder,
    check_unit_modular,
    run_suite,
    suite_plan,
    summarize,
)
from orliczops.operators import DenseOperator, DiagonalOperator, InputError, random_matrix, random_unitary


def eye(n):
    return DenseOperator(np.eye(n))


def zero(n):
    return DenseOperator(np.zeros((n, n)))


def test_report_passed_matches_definition():
    for r in run_suite(seed=1, trials=3):
        if r.kind == "identity":
            assert r.passed == (abs(r.lhs - r.rhs) <= r.tolerance)
        else:
            assert r.passed == (r.lhs <= r.rhs + r.tolerance)
        assert r.slack == pytest.approx(r.rhs - r.lhs, abs=1e-300)


def test_holder_diag_one_power_two():
    # ||x||^o = 2 and ||y||_psi = 1/psi^{-1}(1) = 1/2 for psi(u) = u^2/4: equality
    r = check_holder(DiagonalOperator([1]), DiagonalOperator([1]), Power(2))
    assert r.lhs == pytest.approx(1.0)
    assert r.rhs == pytest.approx(1.0, rel=1e-9)
    assert r.passed


def test_holder_zero():
    r = check_holder(zero(3), eye(3), Power(3))
    assert r.lhs == pytest.approx(0.0, abs=1e-15) and r.passed


def test_holder_power_one_routes_to_endpoint():
    rng = np.random.default_rng(2)
    x, y = DenseOperator(random_matrix(4, rng)), DenseOperator(random_matrix(4, rng))
    assert check_holder(x, y, Power(1)).name == "s1_endpoint"


def test_holder_dominates_schatten_holder():
    rng = np.random.default_rng(3)
    x, y = DenseOperator(random_matrix(5, rng)), DenseOperator(random_matrix(5, rng))
    general = check_holder(x, y, Power(2))
    schatten = check_schatten_holder(x, y, 2.0)
    assert general.lhs == pytest.approx(schatten.lhs)
    assert general.rhs >= schatten.rhs * (1 - 1e-9)


def test_schatten_identity_equality():
    r = check_schatten_holder(eye(2), eye(2), 2.0)
    assert r.lhs == pytest.approx(2.0) and r.rhs == pytest.approx(2.0, rel=1e-9)
    assert r.passed


def test_schwarz_case_against_frobenius():
    rng = np.random.default_rng(4)
    a, b = random_matrix(6, rng), random_matrix(6, rng)
    r = check_schatten_holder(DenseOperator(a), DenseOperator(b), 2.0)
    assert r.rhs == pytest.approx(np.linalg.norm(a, "fro") * np.linalg.norm(b, "fro"), rel=1e-9)
    assert r.lhs == pytest.approx(np.sum(scipy.linalg.svdvals(a @ b)), rel=1e-12)


def test_schatten_rejects_p_one():
    with pytest.raises(ValueError):
        check_schatten_holder(eye(2), eye(2), 1.0)


def test_s1_endpoint_identity_equality():
    rng = np.random.default_rng(5)
    x = DenseOperator(random_matrix(4, rng))
    r = check_s1_endpoint(x, eye(4))
    assert r.parts[0].slack == pytest.approx(0.0, abs=1e-12)
    assert r.passed


def test_bridge_examples():
    big = check_modular_norm_bridge(DiagonalOperator([2.0]), Power(2))
    assert big.parts[0].name == "bridge:norm<=modular"
    assert big.parts[0].lhs == pytest.approx(2.0) and big.parts[0].rhs == pytest.approx(4.0)
    small = check_modular_norm_bridge(DiagonalOperator([0.5]), Power(2))
    assert small.parts[0].name == "bridge:modular<=norm"
    assert small.parts[0].lhs == pytest.approx(0.25) and small.parts[0].rhs == pytest.approx(0.5)
    assert big.passed and small.passed


def test_bridge_needs_nonzero():
    with pytest.raises(InputError):
        check_modular_norm_bridge(DiagonalOperator([0.0]), Power(2))


def test_bridge_at_unit_norm_and_scaled_sequence():
    # the norm/modular equivalences at ||x|| = 1 and along scaled sequences
    base = DiagonalOperator([0.8, 0.6])
    assert check_modular_norm_bridge(base, Power(2)).passed
    for t in np.geomspace(0.1, 10.0, 9):
        assert check_modular_norm_bridge(base * t, CoshMinusOne()).passed


@pytest.mark.parametrize("f", [Power(1.5), ScaledPower(3), CoshMinusOne()], ids=repr)
def test_unit_modular(f):
    r = check_unit_modular(DiagonalOperator([3.0, 1.0, 0.2]), f)
    assert r.kind == "identity" and r.passed
    assert abs(r.lhs - 1.0) <= 1e-9


def test_triangle_equality_and_cancellation():
    rng = np.random.default_rng(6)
    x = DenseOperator(random_matrix(4, rng))
    eq = check_modular_triangle(x, x, Power(3), expect_equality=True)
    assert eq.passed and abs(eq.slack) <= 1e-9 * max(1.0, eq.rhs)
    cancel = check_modular_triangle(x, -x, Power(2))
    assert cancel.lhs == 0.0 and cancel.passed


def test_triangle_unsupported_for_cosh():
    with pytest.raises(ValueError):
        check_modular_triangle(eye(2), eye(2), CoshMinusOne())


def test_ideal_identity_and_unitary():
    rng = np.random.default_rng(7)
    x = DenseOperator(random_matrix(5, rng))
    r = check_ideal(eye(5), x, eye(5), Power(2), expect_equality=True)
    assert r.passed
    u, w = DenseOperator(random_unitary(5, rng)), DenseOperator(random_unitary(5, rng))
    r = check_ideal(u, x, w, CoshMinusOne(), expect_equality=True)
    assert r.passed and len(r.parts) == 3


def test_phi_maps_to_s1_examples():
    r = check_phi_maps_to_s1(DiagonalOperator([1.0, 2.0]), Power(2))
    assert r.lhs == pytest.approx(5.0) and r.rhs == pytest.approx(5.0)
    r0 = check_phi_maps_to_s1(zero(3), CoshMinusOne())
    assert r0.lhs == 0.0 and r0.passed


def test_phi_maps_to_s1_rejects_non_positive():
    with pytest.raises(InputError):
        check_phi_maps_to_s1(DiagonalOperator([1.0, -1.0]), Power(2))
    with pytest.raises(InputError):
        check_phi_maps_to_s1(DenseOperator([[0, 1], [0, 0]]), Power(2))


def test_duality_examples():
    f = Power(2)
    x = DiagonalOperator(np.ones(3) / math.sqrt(3.0))  # unit Luxemburg norm
    y = DiagonalOperator([2.0, -1.0, 0.5])
    r = check_duality_bound(x, y, f)
    assert r.passed
    rng = np.random.default_rng(9)
    yz = DenseOperator(random_matrix(3, rng))
    rz = check_duality_bound(zero(3), yz, f)
    assert rz.parts[0].lhs == 0.0 and rz.passed


def test_to_dict_is_json_serializable():
    r = check_norm_sandwich(DiagonalOperator([1.0, 2.0]), Power(2))
    d = json.loads(json.dumps(r.to_dict()))
    assert d["name"] == "norm_sandwich" and len(d["parts"]) == 2


def test_suite_is_deterministic_and_selectable():
    a = run_suite(seed=7, trials=2)
    b = run_suite(seed=7, trials=2)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    names = {n for n, _ in suite_plan()}
    assert {r.name for r in a} == names
    only = run_suite(seed=7, trials=2, select=lambda n: n.startswith("holder["))
    assert [r.to_dict() for r in only] == [r.to_dict() for r in a if r.name.startswith("holder[")]


def test_digest_carries_seed_and_dims():
    r = run_suite(seed=123, trials=1, select=lambda n: n == "s1_endpoint")[0]
    assert "seed=123" in r.inputs_digest and "dims=" in r.inputs_digest


def test_summary():
    reports = run_suite(seed=3, trials=4, select=lambda n: "sandwich" in n)
    s = summarize(reports)
    assert all(v["trials"] == 4 and v["failures"] == 0 for v in s.values())
    assert all(v["min_margin"] >= 0 for v in s.values())


def test_failure_is_reported():
    bad = CheckReport("x", 2.0, 1.0, -1.0, False, "", 1e-8)
    assert bad.margin < 0
    assert summarize([bad])["x"]["failures"] == 1


@pytest.mark.slow
def test_full_suite_seed_42_passes():
    reports = run_suite(seed=42, trials=100)
    failed = [r for r in reports if not r.passed]
    assert not failed, failed[:3]
