import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.components.data_components import SLOTS
from src.core.errors import DegenerateInputError, InvalidInputError, QuadratureError
from src.core.su3_algebra import adjoint_matrix, hamiltonian
from src.systems.degeneracy_limits import (
    approach_profile,
    gap_asymptotic,
    monopole_flux,
    sigma12_frame,
    singular_expansion,
)
from src.world.parameter_space import basis_vector, rest_frame_point

TWO_PI = 2 * math.pi


def test_approach_profile_monopole_law():
    deltas = [1e-2, 1e-3, 1e-4]
    assert_allclose(approach_profile(deltas, 1)[:, 0], 0.5, rtol=1e-6)
    assert_allclose(approach_profile(deltas, 2)[:, 0], -0.5, rtol=1e-6)
    assert_allclose(approach_profile(deltas, 3)[:, 0], 0.0, atol=1e-12)
    assert np.all(np.abs(approach_profile(deltas, 1)[:, 1]) < np.asarray(deltas) ** 2)


def test_approach_profile_needs_positive_distance():
    with pytest.raises(InvalidInputError):
        approach_profile([0.0], 1)


@pytest.mark.parametrize("point, surface", [
    (basis_vector(8) + 1e-3 * basis_vector(3), "sigma12"),
    (rest_frame_point(1.0, 1e-3), "sigma23"),
])
def test_gap_asymptotics(point, surface):
    estimate = gap_asymptotic(point)
    assert estimate.surface == surface
    assert estimate.predicted == pytest.approx(estimate.actual, rel=1e-2)


def test_gap_asymptotics_away_from_degeneracy():
    with pytest.raises(InvalidInputError):
        gap_asymptotic(rest_frame_point(1.0, 1.0))
    with pytest.raises(DegenerateInputError):
        gap_asymptotic(np.zeros(8))


@pytest.mark.parametrize("a, charge", [(1, -1.0), (2, 1.0), (3, 0.0)])
def test_singular_coefficients(a, charge):
    eps = 1e-4
    s = singular_expansion(eps, 1.0, a)
    assert s.octet == pytest.approx(dict(zip(SLOTS, (-charge / 3, -charge / 6, charge / 6))))
    assert s.decouplet == pytest.approx(dict(zip(SLOTS, (-charge / 6, charge / 6, -charge / 6))))
    assert s.total == pytest.approx(dict(zip(SLOTS, (-charge / 2, 0.0, 0.0))), abs=1e-15)
    for slot in SLOTS:
        assert s.octet_values[slot] * eps ** 2 == pytest.approx(s.octet[slot], abs=1e-3)
        assert s.decouplet_values[slot] * eps ** 2 == pytest.approx(s.decouplet[slot], abs=1e-3)
        assert s.total_values[slot] == pytest.approx(s.octet_values[slot] + s.decouplet_values[slot])


def test_singular_expansion_needs_small_gap():
    with pytest.raises(InvalidInputError):
        singular_expansion(0.5, 1.0, 1)
    with pytest.raises(InvalidInputError):
        singular_expansion(-1e-3, 1.0, 1)


@pytest.mark.parametrize("a, expected", [(1, TWO_PI), (2, -TWO_PI), (3, 0.0)])
def test_monopole_flux(a, expected):
    assert monopole_flux(basis_vector(8), 1e-2, a) == pytest.approx(expected, rel=1e-3, abs=1e-3)


def test_monopole_flux_with_offset_centre():
    assert monopole_flux(basis_vector(8), 0.2, 1, offset=[0.05, -0.05, 0.1]) == pytest.approx(TWO_PI, rel=1e-3)
    assert monopole_flux(basis_vector(8), 0.1, 1, offset=[0.5, 0.0, 0.0]) == pytest.approx(0.0, abs=1e-3)


def test_monopole_flux_on_rotated_direction(random_su3):
    direction = adjoint_matrix(random_su3()).matrix @ basis_vector(8)
    assert monopole_flux(direction, 1e-2, 1) == pytest.approx(TWO_PI, rel=1e-3)


def test_sigma12_frame(random_su3):
    direction = adjoint_matrix(random_su3()).matrix @ basis_vector(8)
    a = sigma12_frame(direction)
    assert np.linalg.det(a) == pytest.approx(1.0)
    assert_allclose(a @ hamiltonian(0.0, basis_vector(8)) @ a.conj().T, hamiltonian(0.0, direction), atol=1e-12)


def test_monopole_rejects_bad_spheres():
    with pytest.raises(QuadratureError):
        monopole_flux(basis_vector(8), 0.0, 1)
    with pytest.raises(QuadratureError):
        monopole_flux(basis_vector(8), 2.0, 1)
    with pytest.raises(InvalidInputError):
        monopole_flux(basis_vector(3), 1e-2, 1)
