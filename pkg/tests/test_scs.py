import math

import numpy as np
import pytest
from scipy.special import gammaincc
from hypothesis import given, settings
from hypothesis import strategies as st

from phsusy import core, fock, scs
from phsusy import grassmann as gr
from phsusy.errors import AmplitudeError
from phsusy.grassmann import ONE, XI, XIS, XIXIS

from conftest import DEFAULT, max_abs, valid_points

HERM = core.ModelParams(2.0, 1.0, 1.0, hermitian_limit=True)
AMPS = [0, 0.5, 1 + 1j, 2]


@pytest.fixture(scope="module")
def space():
    return fock.build_superspace(DEFAULT, 0.3, 64)


@pytest.fixture(scope="module")
def herm_space():
    return fock.build_superspace(HERM, 0.0, 64)


def test_glauber_tail_matches_series():
    x = 1.7**2
    series = math.exp(-x) * sum(x**n / math.factorial(n) for n in range(10, 120))
    assert scs.glauber_tail(1.7, 10) == pytest.approx(series, rel=1e-12)


def test_amplitude_policy():
    scs.CoherentAmplitude(2.0, 64)
    with pytest.raises(AmplitudeError):
        scs.CoherentAmplitude(2.0, 4)


def test_vacuum_component_is_ground_state(space):
    g = scs.glauber_component(space, 0, 0)
    assert np.array_equal(g.ravel(), space.psi_state(0, 0))


def test_hermitian_glauber_state_norm(herm_space):
    g = scs.glauber_component(herm_space, 1.5, 0)
    tail = scs.glauber_tail(1.5, 64)
    assert float(np.vdot(g, g).real) == pytest.approx(1 - tail, abs=1e-14)


def test_glauber_component_is_boson_eigenvector(space):
    g = scs.glauber_component(space, 1.0, 0)
    assert max_abs(space.a @ g - g) <= 1e-10


def test_closed_form_layout(space):
    x = scs.build_scs(space, 1 + 1j)
    g0 = scs.glauber_component(space, 1 + 1j, 0)
    g1 = scs.glauber_component(space, 1 + 1j, 1)
    # e^{-xi* xi/2}(g0 - xi g1) with g1 odd: 1 -> g0, xi -> +g1, xi xi* -> g0/2
    assert max_abs(x.component(ONE) - g0) == 0.0
    assert max_abs(x.component(XI) - g1) == 0.0
    assert x.state.parity(XI) == 1
    assert max_abs(x.component(XIXIS) - g0 / 2) == 0.0
    assert x.component(XIS) is None
    assert set(scs.structure_report(x)) == {ONE, XI, XIXIS}


def test_displacement_at_zero_in_hermitian_limit(herm_space):
    s = herm_space
    d = scs.displacement(s, 0.0)
    out = gr.gmul(d, scs.ground_state(s))
    g0 = s.psi_state(0, 0).reshape(-1, 1)
    g1 = s.psi_state(0, 1).reshape(-1, 1)
    expect = gr.gmul(gr.gexp_even(gr.gmul(gr.generator(XIS), gr.generator(XI)) * -0.5),
                     gr.GrassmannElement.term(ONE, g0) - gr.gmul(gr.generator(XI),
                                                                 gr.GrassmannElement.term(ONE, g1, 1)))
    assert out.residual(expect) <= 1e-15


@pytest.mark.parametrize("alpha", AMPS)
@pytest.mark.parametrize("family", list(scs.Family))
def test_scs_checks(space, alpha, family):
    x = scs.build_scs(space, alpha, family)
    assert x.orbit_residual <= 1e-10
    for value in scs.eigenrelations(space, x).values():
        assert value <= 1e-10
    d1, d2, keep = scs.pseudo_unitarity_residual(space, alpha, family)
    assert keep >= 20
    assert d1 <= 1e-10 and d2 <= 1e-10


@pytest.mark.parametrize("alpha", AMPS)
def test_bi_normalization(space, alpha):
    x = scs.build_scs(space, alpha, scs.Family.PSI)
    y = scs.build_scs(space, alpha, scs.Family.PHI)
    value, dev = scs.bi_normalization(x, y)
    assert dev <= (1e-12 if alpha == 0 else 1e-8)
    _, same = scs.same_family_overlap(x)
    assert same > 0.01


def test_bi_normalization_argument_checks(space):
    x = scs.build_scs(space, 0.5, scs.Family.PSI)
    y = scs.build_scs(space, 1.0, scs.Family.PHI)
    with pytest.raises(ValueError):
        scs.bi_normalization(x, y)
    with pytest.raises(ValueError):
        scs.bi_normalization(x, x)


@pytest.mark.parametrize("alpha", AMPS)
def test_hermitian_limit_families_coincide(herm_space, alpha):
    x = scs.build_scs(herm_space, alpha, scs.Family.PSI)
    y = scs.build_scs(herm_space, alpha, scs.Family.PHI)
    assert x.state.residual(y.state) <= 1e-12
    assert scs.bi_normalization(x, y)[1] <= 1e-12
    assert scs.same_family_overlap(x)[1] <= 1e-12


@pytest.mark.parametrize("alpha", AMPS)
def test_xi_projection_is_glauber(space, herm_space, alpha):
    for s in (space, herm_space):
        x = scs.build_scs(s, alpha)
        g = s.psi[:, 0::2] @ scs.glauber_weights(complex(alpha), 64)
        assert max_abs(x.component(ONE).ravel() - g) <= 1e-12
    # Hermitian limit: coefficients in the orthonormal number basis are e^{-|a|^2/2} a^n/sqrt(n!)
    x = scs.build_scs(herm_space, alpha)
    coeffs = herm_space.psi[:, 0::2].T @ x.component(ONE).ravel()
    a = complex(alpha)
    ref = [math.exp(-abs(a) ** 2 / 2) * a**n / math.sqrt(math.factorial(n)) for n in range(10)]
    assert max_abs(coeffs[:10] - ref) <= 1e-12


def test_guard_levels():
    assert scs.guard_levels(64, 0) == 42
    assert scs.guard_levels(64, 2) == 20


def test_resolution_of_identity_small_space():
    s = fock.build_superspace(DEFAULT, 0.0, 8)
    res = scs.resolution_of_identity(s)
    assert res.residual_cross <= 1e-6
    assert res.relative_change < 0.1
    assert res.residual_same > 0.01


def test_resolution_of_identity_hermitian_limit_large_disk():
    s = fock.build_superspace(HERM, 0.0, 32)
    res = scs.resolution_of_identity(s, scs.QuadratureSpec(R=9.0))
    assert res.residual_cross <= 1e-8
    assert res.residual_same == res.residual_cross


def test_resolution_of_identity_converges_on_larger_disk():
    s = fock.build_superspace(DEFAULT, 0.0, 32)
    res = scs.resolution_of_identity(s, scs.QuadratureSpec(R=9.0))
    assert res.residual_cross <= 1e-8
    assert res.residual_same > 0.01


def test_default_disk_shortfall_is_top_level_radial_tail():
    # the disk |alpha| <= 6 misses the weight gammaincc(n+1, R^2) of level n = 31
    s = fock.build_superspace(DEFAULT, 0.0, 32)
    res = scs.resolution_of_identity(s)
    assert res.residual_cross == pytest.approx(gammaincc(32, 36.0), rel=1e-9)


def test_quadrature_weights_integrate_gaussian_moments():
    alphas, w = scs.QuadratureSpec(R=9.0).nodes()
    # int d^2a/pi e^{-|a|^2} |a|^{2n} = n!
    for n in range(5):
        val = np.sum(w * np.exp(-np.abs(alphas) ** 2) * np.abs(alphas) ** (2 * n))
        assert val == pytest.approx(math.factorial(n), rel=1e-12)


@settings(max_examples=10)
@given(valid_points(), st.complex_numbers(max_magnitude=2.0))
def test_scs_properties(pt, alpha):
    p, z = pt
    s = fock.build_superspace(p, z, 48)
    x = scs.build_scs(s, alpha, scs.Family.PSI)
    y = scs.build_scs(s, alpha, scs.Family.PHI)
    scale = max(1.0, max_abs(s.eta)) * max(1.0, max_abs(s.eta_inv))
    for v in (*scs.eigenrelations(s, x).values(), *scs.eigenrelations(s, y).values()):
        assert v <= 1e-10 * scale
    assert scs.bi_normalization(x, y)[1] <= 1e-8
