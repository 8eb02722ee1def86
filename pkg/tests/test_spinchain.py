"""Loop-algebra generators, twisted spin chains, and the energy bridge."""

import cmath

import numpy as np
import pytest

from raisepeel.scgf import DeformedParams, build_deformed, scgf_value
from raisepeel.spinchain import (
    XXZParams,
    bridge_parameters,
    build_xxz,
    build_xxz_full,
    combinatorial_twist,
    deformed_tl_operator,
    ground_energy,
    hermiticity_defect,
    lambda_bridge,
    restrict_to_sector,
    sector_basis,
    tl_generator_matrix,
    tl_relations_check,
)


def test_sector_basis_l4():
    assert sector_basis(4) == (0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100)
    assert len(sector_basis(6)) == 20


def test_combinatorial_twist():
    assert combinatorial_twist(6) == pytest.approx(cmath.exp(1j * cmath.pi / 9))
    for length in (4, 6, 8):
        assert abs(abs(combinatorial_twist(length)) - 1) < 1e-15


def test_two_site_block_trace_and_rank():
    # each generator acts as [[q, u], [1/u, 1/q]] on one antiparallel
    # pair: trace q + 1/q, determinant zero
    q = cmath.exp(0.9j)
    u = cmath.exp(0.31j)
    e = tl_generator_matrix(4, q, u, 1).toarray()
    assert np.trace(e) == pytest.approx(4 * (q + 1 / q))   # 4 pair states
    assert np.linalg.matrix_rank(e) == 4
    assert np.max(np.abs(e @ e - (q + 1 / q) * e)) < 1e-13


@pytest.mark.parametrize("length", [4, 6, 8])
def test_algebra_relations_at_the_combinatorial_point(length):
    report = tl_relations_check(length)
    assert report.passed()
    assert report.idempotent_error < 1e-12
    assert report.neighbor_error < 1e-12
    assert report.commutation_error < 1e-12
    assert report.quotient_error < 1e-12
    n = length // 2
    u = combinatorial_twist(length)
    kappa = (u ** n + u ** (-n)) ** 2
    assert report.kappa == pytest.approx(kappa)


def test_algebra_relations_generic_parameters():
    report = tl_relations_check(6, q=cmath.exp(0.9j), u=cmath.exp(0.31j))
    assert report.passed()


def test_xxz_hermitian_at_stochastic_point():
    for length in (4, 6, 8):
        h = build_xxz(XXZParams(length))
        assert hermiticity_defect(h) < 1e-12


def test_ground_energies():
    for length in range(4, 15, 2):
        energy = ground_energy(XXZParams(length))
        assert abs(energy - (-0.75 * length)) <= 1e-10


def test_l4_sector_spectrum_frozen():
    h = build_xxz(XXZParams(4)).toarray()
    spectrum = np.sort(np.linalg.eigvalsh(h))
    assert np.allclose(spectrum, [-3, -2, 0, 0, 1, 2], atol=1e-10)


def test_gauge_equivalence_bond_vs_boundary():
    # spreading the twist per bond or lumping it on one boundary bond is
    # a gauge choice; the spectra agree
    twist = combinatorial_twist(4)
    per_bond = restrict_to_sector(build_xxz_full(4, -0.5, twist, "bond"), 4)
    boundary = restrict_to_sector(build_xxz_full(4, -0.5, twist ** 4, "boundary"), 4)
    a = np.sort(np.linalg.eigvalsh(per_bond))
    b = np.sort(np.linalg.eigvalsh(boundary))
    assert np.max(np.abs(a - b)) < 1e-12


def test_bridge_parameters_stochastic_point():
    bridge = bridge_parameters(6, 0.0, 0.0)
    assert bridge.delta_aniso == pytest.approx(-0.5)
    assert bridge.gamma == pytest.approx(np.pi / 3)
    assert bridge.theta == pytest.approx(np.pi / 9)
    assert bridge.twist == pytest.approx(combinatorial_twist(6))


def test_bridge_parameter_domain():
    with pytest.raises(ValueError):
        bridge_parameters(6, 2 * np.log(2) + 0.1, 0.0)    # alpha beyond ln 4
    with pytest.raises(ValueError):
        bridge_parameters(6, 0.0, -np.log(2) - 0.1)       # beta below -ln 2


def test_bridge_vanishes_at_zero_tilt():
    for length in (4, 6, 8):
        assert abs(lambda_bridge(length)) <= 1e-10


@pytest.mark.parametrize("alpha,beta", [(0.1, -0.05), (-0.1, 0.1)])
def test_bridge_against_tilted_generator(alpha, beta):
    lam_spin = lambda_bridge(6, alpha, beta)
    lam_pdp = scgf_value(6, DeformedParams(alpha, beta)).lambda_value
    assert lam_spin == pytest.approx(lam_pdp, abs=1e-8)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.1, 0.05)])
def test_sector_operator_is_isospectral_to_the_tilted_generator(alpha, beta):
    spin_side = np.sort(np.linalg.eigvals(
        deformed_tl_operator(4, alpha, beta)).real)
    pdp_side = np.sort(np.linalg.eigvals(
        build_deformed(4, DeformedParams(alpha, beta))).real)
    assert np.max(np.abs(spin_side - pdp_side)) < 1e-10


def test_nonunimodular_twist_rejected():
    with pytest.raises(ValueError):
        ground_energy(XXZParams(4, twist=1.2))


def test_odd_length_rejected():
    with pytest.raises(ValueError):
        build_xxz(XXZParams(5))
