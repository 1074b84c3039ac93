import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.components.tags import LEVELS
from src.core.errors import DegenerateInputError, InvalidInputError
from src.core.su3_algebra import adjoint_matrix
from src.systems import berry_curvature as bc
from src.systems.spectrum import eigenframe, refined_energies
from src.systems.tensor_decomposition import curvature_from_parts
from src.world.parameter_space import basis_vector, random_generic_octets, rest_frame_point


def _relative(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


@pytest.mark.parametrize("e12, e23", [(0.7, 1.3), (1.0, 0.2), (0.05, 2.0)])
def test_rest_frame_table(e12, e23):
    point = rest_frame_point(e12, e23)
    s = refined_energies(point)
    for a in LEVELS:
        spectral = bc.curvature_spectral(point, a).coefficients
        assert_allclose(spectral, bc.curvature_rest_frame(s, a).coefficients, rtol=1e-10, atol=1e-12 / e12 ** 2)


def test_rest_frame_slot_values():
    s = refined_energies(rest_frame_point(0.5, 1.0))
    v1 = bc.curvature_rest_frame(s, 1)
    assert v1.slot("12") == pytest.approx(0.5 / 0.25)
    assert v1.slot("45") == pytest.approx(0.5 / 1.5 ** 2)
    assert v1.slot("67") == 0.0
    assert bc.curvature_rest_frame(s, 3).slot("67") == pytest.approx(-0.5)


def test_three_routes_agree(rng):
    for xi in random_generic_octets(rng, 5):
        for a in LEVELS:
            spectral = bc.curvature_spectral(xi, a).coefficients
            assert _relative(bc.curvature_transported(xi, a).coefficients, spectral) < 1e-9
            assert _relative(curvature_from_parts(xi, a).coefficients, spectral) < 1e-9


def test_levels_sum_to_zero(rng):
    for xi in random_generic_octets(rng, 5):
        total = sum(bc.curvature_spectral(xi, a).coefficients for a in LEVELS)
        assert np.max(np.abs(total)) < 1e-10 * np.max(np.abs(bc.curvature_spectral(xi, 1).coefficients))


def test_weighted_sum_in_rest_frame():
    point = rest_frame_point(0.4, 0.9)
    s = refined_energies(point)
    w = bc.weighted_sum(point)
    assert w[0, 1] == pytest.approx(0.5 / s.e12)
    assert w[3, 4] == pytest.approx(0.5 / s.e13)
    assert w[5, 6] == pytest.approx(0.5 / s.e23)


def test_finite_difference_sum_rule(rng):
    xi = random_generic_octets(rng, 1, min_gap_ratio=0.2)[0]
    assert _relative(bc.sum_rule_finite_difference(xi), bc.weighted_sum(xi)) < 1e-5


def test_curvature_is_gauge_invariant(rng):
    xi = random_generic_octets(rng, 1)[0]
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=3))
    frame = eigenframe(xi) * phases[None, :]
    energies = refined_energies(xi).energies
    for a in LEVELS:
        assert_allclose(bc.curvature_from_frame(frame, energies, a).coefficients,
                        bc.curvature_spectral(xi, a).coefficients, rtol=1e-10, atol=1e-12)


def test_curvature_is_adjoint_covariant(rng, random_su3):
    xi = random_generic_octets(rng, 1)[0]
    d = adjoint_matrix(random_su3()).matrix
    for a in LEVELS:
        v = bc.curvature_spectral(xi, a).coefficients
        assert_allclose(bc.curvature_spectral(d @ xi, a).coefficients, d @ v @ d.T, rtol=1e-9, atol=1e-10)


def test_curvature_scales_inverse_square(rng):
    xi = random_generic_octets(rng, 1)[0]
    v = bc.curvature_spectral(xi, 2).coefficients
    assert_allclose(bc.curvature_spectral(3.0 * xi, 2).coefficients, v / 9.0, rtol=1e-9, atol=1e-12)


def test_curvature_is_antisymmetric(rng):
    v = bc.curvature_spectral(random_generic_octets(rng, 1)[0], 1).coefficients
    assert_allclose(v, -v.T, atol=1e-15)


def test_invalid_level():
    with pytest.raises(InvalidInputError):
        bc.curvature_spectral(basis_vector(1), 4)


def test_degenerate_points_are_rejected():
    with pytest.raises(DegenerateInputError):
        bc.curvature_spectral(basis_vector(8), 3)
    with pytest.raises(DegenerateInputError):
        bc.curvature_rest_frame(refined_energies(basis_vector(8)), 1)
    with pytest.raises(DegenerateInputError):
        bc.rest_frame_coefficients(0.0, 1.0, 1.0, 1)
    with pytest.raises(DegenerateInputError):
        bc.curvature_from_frame(np.eye(3), [1.0, 1.0, -2.0], 1)
