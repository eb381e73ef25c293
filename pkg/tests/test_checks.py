import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opexp.checks import (
    CHECK_ARITY,
    CHECKS,
    CheckReport,
    Verdict,
    check_equal_exp_commute,
    check_exp_identity_selfadjoint,
    check_fuglede,
    check_main_transfer,
    check_normality_via_exp,
    check_selfadjoint_injectivity,
    check_selfadjoint_vs_normal,
    check_skew_conclusion,
    check_square_commute,
    check_sum_normal,
    check_two_normals,
    check_unitary_criterion,
    check_wermuth,
    classify,
    commutant_basis,
    iff_gap,
)
from opexp.generators import GeneratorConfig, commuting_pair, random_hermitian, random_normal
from opexp.matrix import ComplexMatrix

PI = math.pi
TC, TR = 1e-10, 1e-6
residual = st.one_of(
    st.just(0.0),
    st.floats(0, 1e3, allow_nan=False),
    st.floats(1e-12, 1e-4, allow_nan=False),
)


# --- classify ------------------------------------------------------------------

def test_classify_examples():
    assert classify({"h": 0.0}, {"c": 0.0}) is Verdict.CONFIRMED
    assert classify({"h": 0.0}, {"c": 1.0}) is Verdict.REFUTED
    assert classify({"h": 1.0}, {"c": 1.0}) is Verdict.HYPOTHESIS_NOT_MET
    assert classify({"h": 1e-8}, {"c": 0.0}) is Verdict.INDETERMINATE
    assert classify({"h": 1.0}, {"c": 1e-8}) is Verdict.INDETERMINATE
    assert classify({}, {}) is Verdict.CONFIRMED
    # the band is open: both endpoints classify decisively
    assert classify({}, {"c": TC}) is Verdict.CONFIRMED
    assert classify({}, {"c": TR}) is Verdict.REFUTED


def test_classify_rejects_bad_tolerances():
    with pytest.raises(ValueError):
        classify({}, {}, 1e-6, 1e-10)
    with pytest.raises(ValueError):
        classify({}, {}, 0.0, 1e-6)


@given(st.dictionaries(st.sampled_from("abc"), residual), st.dictionaries(st.sampled_from("xyz"), residual))
def test_classify_matches_its_definition(hyps, concls):
    v = classify(hyps, concls)
    everything = list(hyps.values()) + list(concls.values())
    in_band = any(TC < r < TR for r in everything)
    assert (v is Verdict.INDETERMINATE) == in_band
    if v is Verdict.CONFIRMED:
        assert all(r <= TC for r in everything)
    if v is Verdict.REFUTED:
        assert all(r <= TC for r in hyps.values())
        assert any(r >= TR for r in concls.values())
    if v is Verdict.HYPOTHESIS_NOT_MET:
        assert any(r >= TR for r in hyps.values())


# --- iff_gap -------------------------------------------------------------------

def test_iff_gap_examples():
    assert iff_gap(0.0, 0.0) == 0.0
    assert iff_gap(1e-12, 1e-14) == 1e-12
    assert iff_gap(0.5, 2.0) == pytest.approx(TC * TR / 0.5)
    assert iff_gap(0.0, 1.0) == 1.0
    assert iff_gap(1e-13, 0.3) == pytest.approx(TC * TR / 1e-13)
    assert TC < iff_gap(1e-8, 0.0) < TR


@given(residual, residual)
def test_iff_gap_decides_exactly_when_both_sides_decide(r1, r2):
    g = iff_gap(r1, r2)
    assert g == iff_gap(r2, r1)
    zero1, zero2 = r1 <= TC, r2 <= TC
    band = TC < r1 < TR or TC < r2 < TR
    if band:
        assert TC < g < TR
    elif zero1 == zero2:
        assert g <= TC
    else:
        assert g >= TR


# --- individual checks -----------------------------------------------------------

def test_equal_exp_commute_on_canonical_pair(canonical):
    a, b = canonical
    r = check_equal_exp_commute(a, b)
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET
    assert r.hypothesis_residuals["interval_im_a"] == 1.0
    assert r.hypothesis_residuals["normal_a"] <= 1e-15
    assert r.hypothesis_residuals["exp_equal"] <= 1e-12
    assert r.conclusion_residuals["commute_a_b"] >= 0.1
    assert r.details["im_a_min"] == pytest.approx(-PI)


def test_square_commute_on_canonical_pair(canonical):
    # A^2 = -pi^2 I commutes with everything even though A and B do not
    a, b = canonical
    r = check_square_commute(a, b)
    assert r.conclusion_residuals["commute_a2_b"] <= 1e-12
    assert r.details["commute_a_b"] >= 0.1


def test_equal_exp_commute_confirmed_on_diagonal():
    a = ComplexMatrix.diag([0.5j, 1 + 2j])
    b = ComplexMatrix.diag([0.5j + 2j * PI, 1 + 2j])
    r = check_equal_exp_commute(a, b)
    assert r.verdict is Verdict.CONFIRMED


def test_exp_identity_selfadjoint():
    assert check_exp_identity_selfadjoint(ComplexMatrix.zeros(3)).verdict is Verdict.CONFIRMED
    # i*2pi I has e^T = I but is not self-adjoint
    r = check_exp_identity_selfadjoint(ComplexMatrix.identity(2) * (2j * PI))
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET
    r = check_exp_identity_selfadjoint(ComplexMatrix.diag([1.0, 0.0]))
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET


def test_fuglede_examples():
    n = ComplexMatrix.diag([1j, 2])
    a = ComplexMatrix.diag([3, -1j])
    assert check_fuglede(a, n).verdict is Verdict.CONFIRMED
    nilpotent = ComplexMatrix([[0, 1], [0, 0]])
    assert check_fuglede(nilpotent, nilpotent).verdict is Verdict.HYPOTHESIS_NOT_MET


def test_wermuth_examples():
    a = ComplexMatrix.diag([1.0, 2.0])
    assert check_wermuth(a, ComplexMatrix.diag([0.0, 5.0])).verdict is Verdict.CONFIRMED
    b = ComplexMatrix([[0, 1], [1, 0]])
    r = check_wermuth(a, b)
    assert r.verdict is Verdict.CONFIRMED
    assert r.details["commute_a_b"] > 0.1 and r.details["commute_exp_a_exp_b"] > 0.1


def test_selfadjoint_vs_normal_examples(canonical):
    s = ComplexMatrix.diag([1.0, 2.0])
    n = ComplexMatrix.diag([1j, 2j])
    assert check_selfadjoint_vs_normal(s, n).verdict is Verdict.CONFIRMED
    assert check_selfadjoint_vs_normal(s, n, -PI / 2, PI / 2).verdict is Verdict.HYPOTHESIS_NOT_MET
    r = check_selfadjoint_vs_normal(ComplexMatrix([[0, 1], [1, 0]]), canonical[0])
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET
    for lo, hi in ((0.0, 4.0), (1.0, 1.0), (0.0, math.inf)):
        with pytest.raises(ValueError):
            check_selfadjoint_vs_normal(s, n, lo, hi)


def test_two_normals_examples():
    m = ComplexMatrix.diag([1j, 2j])
    assert check_two_normals(m, ComplexMatrix.diag([0.5j, 0.5j + 1])).verdict is Verdict.CONFIRMED
    # spectrum {0} sits on the interval boundary
    assert check_two_normals(m, ComplexMatrix.zeros(2)).verdict is Verdict.HYPOTHESIS_NOT_MET


def test_main_transfer_examples(canonical):
    n = ComplexMatrix.diag([1j, 2j])
    a = ComplexMatrix.diag([5, 7])
    assert check_main_transfer(a, n).verdict is Verdict.CONFIRMED
    r = check_main_transfer(ComplexMatrix([[0, 1], [0, 0]]), n)
    assert r.verdict is Verdict.CONFIRMED
    assert r.details["commute_a_n"] > 0.1
    r = check_main_transfer(canonical[1], canonical[0])
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET
    assert r.details["commute_a_exp_n"] <= 1e-12  # e^N = -I commutes with anything


def test_main_transfer_diagnostics():
    a, n = commuting_pair(GeneratorConfig(seed=3, dim=4, spectrum_box=(-1, 1, 0.1, PI - 0.1)))
    r = check_main_transfer(a, n, diagnostics=True)
    steps = {k: v for k, v in r.details.items() if k.startswith("step_")}
    assert len(steps) == 6
    assert all(v <= 1e-10 for v in steps.values())
    assert not any(k.startswith("step_") for k in check_main_transfer(a, n).details)


def test_sum_normal_examples():
    a = ComplexMatrix.diag([0.5j, 1.0])
    b = ComplexMatrix.diag([0.5j, 2.0 + 1j])
    assert check_sum_normal(a, b).verdict is Verdict.CONFIRMED
    a = ComplexMatrix([[0, 1], [0, 0]])
    r = check_sum_normal(a, -a)
    assert r.verdict is Verdict.HYPOTHESIS_NOT_MET


def test_normality_via_exp_examples():
    assert check_normality_via_exp(ComplexMatrix.diag([1j, 2])).verdict is Verdict.CONFIRMED
    r = check_normality_via_exp(ComplexMatrix([[0, 1], [0, 0]]))
    assert r.verdict is Verdict.CONFIRMED
    assert r.details["normal_a"] > 0.1 and r.details["exp_identity"] > 0.1


def test_selfadjoint_injectivity_examples():
    a = ComplexMatrix.diag([1.0, 2.0])
    assert check_selfadjoint_injectivity(a, a).verdict is Verdict.CONFIRMED
    r = check_selfadjoint_injectivity(a, ComplexMatrix.diag([1.0, 3.0]))
    assert r.verdict is Verdict.CONFIRMED
    assert r.details["distance"] > 0.1


def test_unitary_criterion_examples():
    assert check_unitary_criterion(ComplexMatrix.diag([1.0, -2.0])).verdict is Verdict.CONFIRMED
    r = check_unitary_criterion(ComplexMatrix.diag([1j, 0.0]))
    assert r.verdict is Verdict.CONFIRMED
    assert r.details["selfadjoint_a"] > 0.1 and r.details["unitary_exp_ia"] > 0.1
    assert check_unitary_criterion(ComplexMatrix([[0, 1], [0, 0]])).verdict is Verdict.HYPOTHESIS_NOT_MET


def test_skew_conclusion_examples():
    a = ComplexMatrix.diag([1.0, 2.0])
    assert check_skew_conclusion(a, 1j * a).verdict is Verdict.CONFIRMED
    assert check_skew_conclusion(a, a).verdict is Verdict.HYPOTHESIS_NOT_MET


def test_dimension_mismatch_propagates():
    with pytest.raises(ValueError):
        check_fuglede(ComplexMatrix.identity(2), ComplexMatrix.identity(3))


# --- reports -----------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(CHECKS))
def test_reports_are_consistent_and_round_trip(name):
    cfg = GeneratorConfig(seed=11, dim=3)
    args = [random_normal(cfg)]
    if CHECK_ARITY.get(name, 2) == 2:
        args.append(random_hermitian(cfg))
    r = CHECKS[name](*args)
    assert r.check_name == name and r.dim == 3
    assert r.is_consistent()
    obj = json.loads(json.dumps(r.to_json_obj()))
    back = CheckReport.from_json_obj(obj)
    assert back == r


def test_report_with_config_round_trips():
    r = check_fuglede(ComplexMatrix.identity(2), ComplexMatrix.identity(2))
    r.instance_seed = GeneratorConfig(seed=5, dim=2)
    r.family = "commuting"
    obj = r.to_json_obj()
    assert obj["config"]["family"] == "commuting"
    assert CheckReport.from_json_obj(obj) == r


def test_tampered_verdict_is_inconsistent():
    r = check_fuglede(ComplexMatrix.identity(2), ComplexMatrix.identity(2))
    r.verdict = Verdict.REFUTED
    assert not r.is_consistent()


# --- commutant ---------------------------------------------------------------------

def brute_commutant_dim(m: np.ndarray) -> int:
    n = m.shape[0]
    cols = []
    for k in range(n * n):
        e = np.zeros(n * n, dtype=complex)
        e[k] = 1
        x = e.reshape(n, n)
        cols.append((x @ m - m @ x).ravel())
    return n * n - np.linalg.matrix_rank(np.array(cols).T, tol=1e-9)


@pytest.mark.parametrize(
    "m",
    [
        np.diag([1.0, 2.0, 3.0]),
        np.diag([1.0, 1.0, 2.0]),
        np.eye(3),
        np.diag(np.ones(2), 1),
        np.array([[0, PI], [-PI, 0]]),
    ],
)
def test_commutant_matches_brute_force(m):
    basis = commutant_basis(ComplexMatrix(m))
    n = m.shape[0]
    assert basis.shape[1] == brute_commutant_dim(np.asarray(m, dtype=complex))
    for col in basis.T:
        x = col.reshape(n, n)
        assert np.linalg.norm(x @ m - m @ x) <= 1e-12
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(basis.shape[1]), atol=1e-12)
