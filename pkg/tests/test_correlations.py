import itertools
import math

import numpy as np
import pytest

from conftest import random_density, random_pure
from qnetcode.correlations import (
    BellDiagonalParams,
    bell_diagonal,
    bell_diagonal_discord_closed_form,
    bell_diagonal_eigenvalues,
    boundary_channel,
    boundary_channel_params,
    classical_correlation,
    conditional_entropy,
    discord,
    mutual_information,
    partial_transpose,
    ppt_separable,
)
from qnetcode.qmath import DensityMatrix, StateVector, hermitian_eigs, tensor

PHYSICAL_POINTS = [
    (0.0, 0.0, 0.0),
    (0.5, 0.0, 0.0),
    (0.3, -0.2, 0.1),
    (-0.4, 0.4, 0.2),
    (0.6, -0.6, 0.6),
    (1.0, 0.0, 0.0),
    (1.0, -1.0, 1.0),
    (-0.5, -0.3, -0.2),
    (0.2, 0.7, -0.5),
]

BELL = {
    "phi+": np.array([1, 0, 0, 1]) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / math.sqrt(2),
    "psi+": np.array([0, 1, 1, 0]) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0]) / math.sqrt(2),
}


@pytest.mark.parametrize("c", [(0.3, -0.2, 0.1), (1.0, -1.0, 1.0), (0.9, 0.5, -0.4), (1.0, 0.5, 0.5)])
def test_bell_weights_match_projector_expectations(c):
    rho = np.asarray(bell_diagonal(BellDiagonalParams(*c)).entries)
    weights = bell_diagonal_eigenvalues(BellDiagonalParams(*c))
    for name, v in BELL.items():
        assert np.real(v @ rho @ v) == pytest.approx(weights[name], abs=1e-14)
    np.testing.assert_allclose(
        sorted(weights.values(), reverse=True), hermitian_eigs(rho).eigenvalues, atol=1e-12
    )


def test_bell_sign_pattern_frozen():
    w = bell_diagonal_eigenvalues(BellDiagonalParams(1, 1, 1))
    assert w["psi-"] == -0.5 and w["phi+"] == 0.5
    assert bell_diagonal_eigenvalues(BellDiagonalParams(1, -1, 1))["phi+"] == 1.0


@pytest.mark.parametrize("c", PHYSICAL_POINTS)
def test_minimiser_matches_closed_form(c):
    p = BellDiagonalParams(*c)
    rep = discord(bell_diagonal(p))
    i_c, j_c, d_c = bell_diagonal_discord_closed_form(p)
    assert rep.mutual_information == pytest.approx(i_c, abs=1e-9)
    assert rep.classical_correlation == pytest.approx(j_c, abs=1e-4)
    assert rep.discord == pytest.approx(d_c, abs=1e-4)


def test_known_values():
    phi_plus = bell_diagonal(BellDiagonalParams(1, -1, 1))
    rep = discord(phi_plus)
    assert (rep.mutual_information, rep.classical_correlation, rep.discord) == pytest.approx(
        (2, 1, 1), abs=1e-6
    )
    assert discord(DensityMatrix.maximally_mixed(2)).discord == pytest.approx(0, abs=1e-9)
    assert classical_correlation(bell_diagonal(BellDiagonalParams(0.5, 0, 0)))[0] == pytest.approx(
        0.188722, abs=1e-6
    )


def test_discord_nonnegative_500_random(rng):
    for i in range(500):
        rank = 1 + i % 4
        rho = DensityMatrix(random_density(rng, 4, rank))
        rep = discord(rho)
        assert rep.discord >= -1e-6


def test_product_states_have_zero_discord(rng):
    for _ in range(100):
        a = DensityMatrix(random_density(rng, 2))
        b = DensityMatrix(random_density(rng, 2))
        assert abs(discord(tensor(a, b)).discord) < 1e-6


def test_entangled_pure_states_are_npt(rng):
    for _ in range(100):
        psi = random_pure(rng, 4)
        schmidt = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
        assert schmidt.min() > 1e-6
        assert not ppt_separable(StateVector(psi).projector())


def test_separable_product_is_ppt(rng):
    rho = tensor(DensityMatrix(random_density(rng, 2)), DensityMatrix(random_density(rng, 2)))
    assert ppt_separable(rho)


def test_partial_transpose_of_phi_plus_is_swap_over_two():
    pt = partial_transpose(StateVector(BELL["phi+"]).projector())
    swap = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_allclose(pt, swap / 2, atol=1e-15)


def test_antipodal_axis_symmetry(rng):
    rho = DensityMatrix(random_density(rng, 4))
    for th, ph in itertools.product([0.0, 0.4, 1.3, 2.9], [0.0, 1.1, 4.0]):
        a = conditional_entropy(rho, th, ph)
        b = conditional_entropy(rho, math.pi - th, (ph + math.pi) % (2 * math.pi))
        assert abs(a - b) < 1e-9


def test_mutual_information_of_product(rng):
    rho = tensor(DensityMatrix(random_density(rng, 2)), DensityMatrix(random_density(rng, 2)))
    assert mutual_information(rho) == pytest.approx(0, abs=1e-10)


def test_unphysical_rejected():
    bad = bell_diagonal(BellDiagonalParams(1, 1, 1))
    assert not bad.physical
    with pytest.raises(ValueError):
        discord(bad)
    with pytest.raises(ValueError):
        bell_diagonal_discord_closed_form(BellDiagonalParams(1, 1, 1))
    with pytest.raises(ValueError):
        BellDiagonalParams(1.2, 0, 0)


def test_wrong_dimension_rejected():
    with pytest.raises(ValueError):
        discord(DensityMatrix.maximally_mixed(3))


def test_boundary_channel():
    assert boundary_channel_params(0.3).as_tuple() == (1.0, 0.3, 0.3)
    ch = boundary_channel(0.0)
    assert ch.physical and ppt_separable(ch)
    assert discord(ch).discord == pytest.approx(0, abs=1e-9)
    for c3 in (0.25, -0.25, 0.5, -0.5):
        ch = boundary_channel(c3)
        assert not ch.physical
        assert ch.min_eigenvalue == pytest.approx(-abs(c3) / 2, abs=1e-12)
