import math

import numpy as np
import pytest
from hypothesis import given, settings

from phsusy import core, fock

from conftest import DEFAULT, max_abs, valid_points

HERM = core.ModelParams(2.0, 1.0, 1.0, hermitian_limit=True)


@pytest.fixture(scope="module")
def space():
    return fock.build_superspace(DEFAULT, 0.3, 8)


def test_dimension_guard():
    with pytest.raises(ValueError):
        fock.build_superspace(DEFAULT, 0.0, fock.MAX_DIM)
    with pytest.raises(ValueError):
        fock.build_superspace(DEFAULT, 0.0, 1)


def test_operators_are_read_only(space):
    with pytest.raises(ValueError):
        space.B[0, 0] = 1.0


def test_parity_is_structural(space):
    assert space.parity("Q") == 1 and space.parity("B_sharp") == 1
    assert space.parity("a") == 0 and space.parity("H_s") == 0


def test_boson_commutator_away_from_cutoff(space):
    keep = space.lower_block(space.n_max - 1)
    comm = core.commutator(space.a, space.a_dag) - np.eye(space.dim)
    assert max_abs(comm[np.ix_(keep, keep)]) <= 1e-14


def test_boson_commutes_with_phermion_and_metric(space):
    for m in (space.B, space.B_sharp, space.eta):
        assert max_abs(core.commutator(space.a, m)) == 0.0


def test_metric_positive_and_pseudo_hermiticity(space):
    assert np.min(np.linalg.eigvalsh(space.eta)) > 0
    assert max_abs(space.H_s.conj().T @ space.eta - space.eta @ space.H_s) <= 1e-12


def test_supercharge_algebra(space):
    keep = space.lower_block(space.n_max - 1)
    anti = space.Q @ space.Q_sharp + space.Q_sharp @ space.Q - 2 * space.H_s
    assert max_abs(anti[np.ix_(keep, keep)]) <= 1e-10
    assert max_abs(core.commutator(space.Q, space.H_s)) <= 1e-10
    assert max_abs(core.commutator(space.Q_sharp, space.H_s)) <= 1e-10


def test_spectrum_levels(space):
    levels = fock.spectrum_levels(space)
    assert [k for k, *_ in levels] == list(range(9))
    for k, value, mult, dev in levels:
        assert dev <= 1e-10
        assert mult == fock.expected_multiplicity(k, 8)
    assert levels[1][1] == pytest.approx(math.sqrt(6), abs=1e-10)


def test_hermitian_limit_basis_is_orthonormal_number_basis():
    s = fock.build_superspace(HERM, 0.0, 6)
    assert max_abs(s.psi - s.phi) == 0.0
    assert max_abs(s.psi.T @ s.psi - np.eye(s.dim)) <= 1e-15
    # columns are eigenvectors of h_s with the labelled energies
    energies = np.repeat(np.arange(6), 2) + np.tile([0, 1], 6)
    assert max_abs(s.h_s @ s.psi - s.psi * (s.Omega * energies)) <= 1e-12


def test_ground_state_relations_exact(space):
    lad = fock.check_ladder_actions(space)
    assert lad.residuals["Q# psi(0,0)"] <= 1e-12
    assert lad.residuals["Q psi(0,0)"] <= 1e-12
    assert lad.residuals["B psi(0,0)"] <= 1e-12
    assert lad.residuals["a psi(0,0)"] <= 1e-12


def test_ladder_report_lists_restricted_relations(space):
    lad = fock.check_ladder_actions(space)
    assert set(lad.restricted) == {"a_dag psi", "Q psi(n,1)"}


def test_supercharge_amplitudes_follow_the_prefactor(space):
    """``Q = sqrt(2 Omega) a'B`` moves psi(n,1) to psi(n+1,0) with weight
    sqrt(2 Omega (n+1)); the half-size weight sqrt(Omega (n+1)) is off by 1/sqrt(2)."""
    n = 2
    up = space.Q @ space.psi_state(n, 1)
    target = space.psi_state(n + 1, 0)
    ratio = (target.conj() @ space.eta @ up) / (target.conj() @ space.eta @ target)
    assert ratio == pytest.approx(math.sqrt(2 * space.Omega * (n + 1)), rel=1e-12)
    lad = fock.check_ladder_actions(space)
    assert lad.half_amplitude["Q psi(n,1)"] > 0.1


@settings(max_examples=25)
@given(valid_points())
def test_bi_basis_and_ladders(pt):
    p, z = pt
    s = fock.build_superspace(p, z, 6)
    # tolerances scale with the metric's condition number
    scale = max(1.0, max_abs(s.eta)) * max(1.0, max_abs(s.eta_inv))
    eye = np.eye(s.dim)
    assert max_abs(s.phi.conj().T @ s.psi - eye) <= 1e-12 * scale
    assert max_abs(s.psi @ s.phi.conj().T - eye) <= 1e-12 * scale
    energies = np.repeat(np.arange(6), 2) + np.tile([0, 1], 6)
    assert max_abs(s.H_s @ s.psi - s.psi * (s.Omega * energies)) <= 1e-10 * scale
    assert max_abs(s.H_s.conj().T @ s.phi - s.phi * (s.Omega * energies)) <= 1e-10 * scale
    assert fock.check_ladder_actions(s).worst() <= 1e-10 * scale


def test_bi_basis_default_tolerance(space):
    psi, phi = fock.bi_basis(space)
    assert psi.shape == phi.shape == (16, 16)
