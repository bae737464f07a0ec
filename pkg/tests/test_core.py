import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phsusy import core
from phsusy.errors import DegenerateError, DomainError, InvalidParams

from conftest import DEFAULT, max_abs, valid_points


def test_generators_match_spin_half_matrices():
    jp, jm, j3 = core.su2_generators()
    assert np.array_equal(j3, np.diag([0.5, -0.5]))
    assert np.array_equal(core.commutator(jp, jm), 2 * j3)
    assert np.array_equal(jp.T, jm)


def test_hamiltonian_entries():
    assert np.array_equal(core.build_H(DEFAULT), [[1.0, 0.5], [1.0, -1.0]])


def test_hermitian_limit_gives_symmetric_matrix():
    H = core.build_H(core.ModelParams(1.3, 0.4, 0.4, hermitian_limit=True))
    assert np.array_equal(H, H.T)


def test_equal_couplings_need_the_flag():
    with pytest.raises(InvalidParams):
        core.ModelParams(2.0, 1.0, 1.0)


def test_real_spectrum_condition():
    with pytest.raises(InvalidParams, match="real-spectrum condition violated"):
        core.ModelParams(1.0, 1.0, -1.0)


def test_non_finite_rejected():
    with pytest.raises(InvalidParams):
        core.ModelParams(float("nan"), 1.0, 0.5)


def test_eigenvalues_default():
    ev = np.sort(np.linalg.eigvals(core.build_H(DEFAULT)).real)
    assert ev == pytest.approx([-math.sqrt(6) / 2, math.sqrt(6) / 2], abs=1e-12)


@pytest.mark.parametrize(
    "p, expected",
    [
        (DEFAULT, math.sqrt(6)),
        (core.ModelParams(1.0, 0.0, 0.0, hermitian_limit=True), 1.0),
        (core.ModelParams(0.0, 1.0, 1.0, hermitian_limit=True), 2.0),
    ],
)
def test_omega_cap(p, expected):
    assert core.omega_cap(p) == pytest.approx(expected, rel=1e-15)


def test_epsilon_default_is_quarter_log_two():
    assert core.epsilon_of(DEFAULT, 0.0) == pytest.approx(math.log(2) / 4, rel=1e-14)


def test_epsilon_vanishes_in_hermitian_limit():
    p = core.ModelParams(2.0, 0.7, 0.7, hermitian_limit=True)
    for z in (-3.0, 0.0, 2.5):
        assert core.epsilon_of(p, z) == 0.0


def test_domain_boundary_raises():
    # alpha + beta - omega z = (alpha - beta) sqrt(1 + z^2) at z = (6 - sqrt(6))/7.5
    z = (6 - math.sqrt(6)) / 7.5
    assert core.arctanh_argument(DEFAULT, z) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError) as info:
        core.epsilon_of(DEFAULT, z + 1e-3)
    assert abs(info.value.argument) >= 1.0


def test_degenerate_denominator():
    with pytest.raises(DegenerateError):
        core.arctanh_argument(DEFAULT, 0.75)


def test_rho_default_is_diagonal_fourth_roots_of_two():
    m = core.build_rho(DEFAULT, 0.0)
    assert max_abs(m.rho - np.diag([2**0.25, 2**-0.25])) <= 1e-14
    assert max_abs(core.metric_root_power_form(DEFAULT, 0.0) - m.rho) <= 1e-14


def test_rho_identity_in_hermitian_limit():
    m = core.build_rho(core.ModelParams(2.0, 1.0, 1.0, hermitian_limit=True), 0.9)
    assert np.array_equal(m.rho, np.eye(2))


def test_delta_lambda_default():
    d, lam = core.closed_form_delta_lambda(DEFAULT, 0.0)
    assert d == pytest.approx(2.0, abs=1e-14)
    assert lam == pytest.approx(math.sqrt(2) / 2, abs=1e-14)


def test_delta_lambda_hermitian_limit():
    p = core.ModelParams(2.0, 1.0, 1.0, hermitian_limit=True)
    assert core.closed_form_delta_lambda(p, 0.0) == (2.0, 1.0)


def test_rho_positive_on_default_sweep():
    for z in np.linspace(-5, 5, 101):
        try:
            m = core.build_rho(DEFAULT, float(z))
        except (DomainError, DegenerateError):
            continue
        assert np.min(np.linalg.eigvalsh(m.rho)) > 0


@given(valid_points())
def test_spectrum_is_plus_minus_half_omega(pt):
    p, _ = pt
    big = core.omega_cap(p)
    ev = np.sort(np.linalg.eigvals(core.build_H(p)).real)
    assert max_abs(ev - [-big / 2, big / 2]) <= 1e-12


@given(valid_points())
def test_metric_forms_agree_and_rho_is_positive(pt):
    p, z = pt
    m = core.build_rho(p, z)
    assert m.power_form_residual <= 1e-12 * max(1.0, max_abs(m.rho))
    assert max_abs(m.rho - m.rho.T) == 0.0
    assert np.min(np.linalg.eigvalsh(m.rho)) > 0
    assert max_abs(m.rho @ m.rho_inv - np.eye(2)) <= 1e-12 * max(1.0, max_abs(m.rho)) ** 2


@given(valid_points())
def test_h_is_hermitian_and_routes_agree(pt):
    p, z = pt
    h, sc = core.build_h(p, z)
    assert core.hermiticity_residual(h) <= 1e-12 * max(1.0, max_abs(h))
    assert max_abs(h - core.hermitian_from_scalars(sc.delta, sc.lam)) <= 1e-10
    assert abs(sc.delta**2 + 4 * sc.lam**2 - sc.Omega**2) <= 1e-10 * max(1.0, sc.Omega**2)


@given(st.floats(-3, 3))
def test_epsilon_zero_for_any_z_when_hermitian(z):
    p = core.ModelParams(1.5, -0.3, -0.3, hermitian_limit=True)
    assert core.epsilon_of(p, z) == 0.0
