import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from opexp.errors import ExpOverflowError, NotNormalError
from opexp.expfun import ExpMethod, exp_adjoint_check, expm, expm_normal, onenorm
from opexp.generators import GeneratorConfig, commuting_pair, random_matrix, random_normal, random_unitary
from opexp.matrix import ComplexMatrix, adjoint, det, frobenius_norm, normality_residual, trace

PI = math.pi
I2 = np.eye(2)


def rel(x, y) -> float:
    x = x.data if isinstance(x, ComplexMatrix) else np.asarray(x)
    y = y.data if isinstance(y, ComplexMatrix) else np.asarray(y)
    return float(np.linalg.norm(x - y) / max(1.0, np.linalg.norm(y)))


def test_exp_of_zero_is_identity():
    r = expm(ComplexMatrix.zeros(3))
    assert r.value == ComplexMatrix.identity(3)
    assert r.method is ExpMethod.SCALING_SQUARING
    assert r.est_error == 0.0


def test_exp_of_diagonal():
    r = expm(ComplexMatrix.diag([1, 2j]))
    np.testing.assert_allclose(r.value.data, np.diag([math.e, np.exp(2j)]), rtol=1e-15, atol=1e-15)


def test_exp_of_canonical_pair_is_minus_identity(canonical):
    a, b = canonical
    for m in (a, b):
        assert np.linalg.norm(expm(m).value.data + I2) <= 1e-12


def test_closed_form_for_traceless_two_by_two(canonical):
    # for traceless M with M^2 = -w^2 I: e^M = cos(w) I + sin(w)/w M
    _, b = canonical
    np.testing.assert_allclose((b @ b).data, -PI**2 * I2, atol=1e-13)
    expected = math.cos(PI) * I2 + (math.sin(PI) / PI) * b.data
    assert np.linalg.norm(expm(b).value.data - expected) <= 1e-12


def test_nilpotent_series_terminates():
    n = np.diag(np.ones(3), 1)
    expected = np.eye(4) + n + n @ n / 2 + n @ n @ n / 6
    np.testing.assert_allclose(expm(ComplexMatrix(n)).value.data, expected, rtol=0, atol=1e-15)


def test_est_error_is_unit_roundoff_times_one_norm(rng):
    x = rng.normal(size=(4, 4))
    r = expm(ComplexMatrix(x))
    assert r.est_error == pytest.approx(2.0**-53 * onenorm(x), rel=1e-15)
    assert onenorm(x) == pytest.approx(np.linalg.norm(x, 1), rel=1e-15)


@pytest.mark.parametrize("scale", [1e-8, 1e-3, 0.01, 0.2, 0.9, 2.0, 5.0, 20.0, 100.0])
def test_matches_scipy_across_pade_degrees(scale, rng):
    x = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    x = x * (scale / np.linalg.norm(x, 1))
    ref = scipy.linalg.expm(x)
    assert rel(expm(ComplexMatrix(x)).value, ref) <= 1e-11 * max(1.0, np.exp(scale))


def test_overflow_is_reported():
    with pytest.raises(ExpOverflowError):
        expm(ComplexMatrix.diag([1000.0, 0.0]))
    with pytest.raises(ExpOverflowError):
        expm(ComplexMatrix.diag([1e308, 0.0]))
    with pytest.raises(ExpOverflowError):
        expm_normal(ComplexMatrix.diag([1000.0, 0.0]))


def test_large_negative_spectrum_underflows_quietly():
    r = expm(ComplexMatrix.diag([-800.0, 0.0]))
    np.testing.assert_allclose(r.value.data, np.diag([0.0, 1.0]), atol=1e-300)


def test_spectral_path(canonical):
    r = expm_normal(canonical[0])
    assert r.method is ExpMethod.SPECTRAL_PATH
    assert np.linalg.norm(r.value.data + I2) <= 1e-12
    assert 0 <= r.est_error <= 1e-13
    with pytest.raises(NotNormalError):
        expm_normal(canonical[1])


@pytest.mark.parametrize("seed", range(20))
def test_two_paths_agree_on_normal_input(seed):
    t = random_normal(GeneratorConfig(seed=seed, dim=2 + seed % 10, norm_cap=6.0))
    a, b = expm(t), expm_normal(t)
    tol = 1e-10 + a.est_error + b.est_error
    assert rel(a.value, b.value) <= tol * max(1.0, frobenius_norm(a.value))


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 7))
def test_inverse_and_adjoint(seed, n):
    t = random_matrix(GeneratorConfig(seed=seed, dim=n, norm_cap=3.0))
    et, emt = expm(t).value, expm(-t).value
    assert np.linalg.norm((et @ emt).data - np.eye(n)) <= 1e-10
    assert exp_adjoint_check(t) <= 1e-12


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_conjugation_equivariance(seed, n):
    cfg = GeneratorConfig(seed=seed, dim=n, norm_cap=3.0)
    t = random_matrix(cfg)
    u = random_unitary(cfg.with_(seed=seed ^ 0x5A5A))
    lhs = expm(u @ t @ adjoint(u)).value
    rhs = u @ expm(t).value @ adjoint(u)
    assert rel(lhs, rhs) <= 1e-11


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_determinant_is_exp_trace(seed, n):
    t = random_matrix(GeneratorConfig(seed=seed, dim=n, norm_cap=3.0))
    lhs = abs(det(expm(t).value))
    rhs = math.exp(trace(t).real)
    assert lhs == pytest.approx(rhs, rel=1e-10)


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_exp_of_normal_is_normal(seed, n):
    t = random_normal(GeneratorConfig(seed=seed, dim=n, norm_cap=4.0))
    assert normality_residual(expm(t).value) <= 1e-10


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_commuting_sum_factorizes(seed, n):
    a, b = commuting_pair(GeneratorConfig(seed=seed, dim=n, norm_cap=3.0))
    lhs = expm(a + b).value
    rhs = expm(a).value @ expm(b).value
    assert rel(lhs, rhs) <= 1e-10
