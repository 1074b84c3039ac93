import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.components.data_components import CoordinateForm, GroupElement
from src.core.errors import GroupElementError, InvalidInputError
from src.core.su3_algebra import (
    D_TABLE,
    F_TABLE,
    LAMBDA,
    SQRT3,
    TABULATED_D,
    TABULATED_F,
    adjoint_matrix,
    determinant,
    from_coordinates,
    gellmann,
    hamiltonian,
    invariants,
    normalized_cubic,
    octet_star,
    octet_wedge,
    random_octet,
    to_coordinates,
)
from src.world.parameter_space import basis_vector


def test_gellmann_normalisation():
    gram = np.einsum("rab,sba->rs", LAMBDA, LAMBDA)
    assert_allclose(gram, 2 * np.eye(8), atol=1e-15)
    assert_allclose(np.einsum("raa->r", LAMBDA), 0, atol=1e-15)


def test_gellmann_index_range():
    assert_allclose(gellmann(3).entries, np.diag([1, -1, 0]))
    with pytest.raises(InvalidInputError):
        gellmann(9)


@pytest.mark.parametrize("table, tabulated", [(F_TABLE, TABULATED_F), (D_TABLE, TABULATED_D)])
def test_tabulated_structure_constants(table, tabulated):
    for (r, s, t), value in tabulated.items():
        assert table[r - 1, s - 1, t - 1] == pytest.approx(value, abs=1e-14)


def test_structure_constant_symmetries():
    for p in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
        assert_allclose(F_TABLE, -np.transpose(F_TABLE, p), atol=1e-15)
        assert_allclose(D_TABLE, np.transpose(D_TABLE, p), atol=1e-15)


def test_commutator_and_anticommutator_tables():
    prod = np.einsum("rab,sbc->rsac", LAMBDA, LAMBDA)
    commutator = prod - np.transpose(prod, (1, 0, 2, 3))
    anticommutator = prod + np.transpose(prod, (1, 0, 2, 3))
    assert_allclose(commutator, 2j * np.einsum("rst,tac->rsac", F_TABLE, LAMBDA), atol=1e-14)
    expected = (4 / 3) * np.einsum("rs,ac->rsac", np.eye(8), np.eye(3)) \
        + 2 * np.einsum("rst,tac->rsac", D_TABLE, LAMBDA)
    assert_allclose(anticommutator, expected, atol=1e-14)


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        F_TABLE[0, 1, 2] = 0.0


def test_coordinates_round_trip(rng):
    xi0, xi = float(rng.normal()), random_octet(rng)
    c = to_coordinates(from_coordinates(CoordinateForm(xi0, xi)))
    assert c.xi0 == pytest.approx(xi0)
    assert_allclose(c.xi, xi, atol=1e-12)


def test_wedge_of_first_basis_pair():
    assert_allclose(octet_wedge(basis_vector(1), basis_vector(2)), -0.5 * basis_vector(3), atol=1e-15)


def test_wedge_is_the_commutator(rng):
    x1, x2 = random_octet(rng), random_octet(rng)
    h1, h2 = hamiltonian(0.0, x1), hamiltonian(0.0, x2)
    expected = np.einsum("r,rab->ab", octet_wedge(x1, x2), LAMBDA)
    assert_allclose(1j * (h1 @ h2 - h2 @ h1), expected, atol=1e-12)


def test_star_is_the_traceless_jordan_product(rng):
    x1, x2 = random_octet(rng), random_octet(rng)
    h1, h2 = hamiltonian(0.0, x1), hamiltonian(0.0, x2)
    jordan = 0.5 * (h1 @ h2 + h2 @ h1)
    expected = (x1 @ x2) / 6 * np.eye(3) + np.einsum("r,rab->ab", octet_star(x1, x2), LAMBDA) / (4 * SQRT3)
    assert_allclose(jordan, expected, atol=1e-12)


def test_determinant_identity(rng):
    xi = random_octet(rng)
    assert determinant(xi) == pytest.approx(np.linalg.det(hamiltonian(0.0, xi)).real, rel=1e-10, abs=1e-12)


def test_cubic_invariant_is_a_trace(rng):
    xi = random_octet(rng)
    h = hamiltonian(0.0, xi)
    quadratic, cubic = invariants(xi)
    assert quadratic == pytest.approx(2 * np.trace(h @ h).real)
    assert cubic == pytest.approx(4 * SQRT3 * np.trace(h @ h @ h).real, rel=1e-10, abs=1e-12)


def test_normalized_cubic_on_degeneracy_surfaces():
    assert normalized_cubic(basis_vector(8)) == pytest.approx(-1.0)
    assert normalized_cubic(-basis_vector(8)) == pytest.approx(1.0)
    assert normalized_cubic(basis_vector(3)) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InvalidInputError):
        normalized_cubic(np.zeros(8))


def test_adjoint_representation(rng, random_su3):
    a = random_su3()
    d = adjoint_matrix(a).matrix
    assert_allclose(d @ d.T, np.eye(8), atol=1e-12)
    assert np.linalg.det(d) == pytest.approx(1.0)
    xi = random_octet(rng)
    assert_allclose(a.matrix @ hamiltonian(0.0, xi) @ a.matrix.conj().T, hamiltonian(0.0, d @ xi), atol=1e-12)


def test_adjoint_is_a_homomorphism(random_su3):
    a, b = random_su3(), random_su3()
    ab = GroupElement(a.matrix @ b.matrix)
    assert_allclose(adjoint_matrix(ab).matrix, adjoint_matrix(a).matrix @ adjoint_matrix(b).matrix, atol=1e-12)


def test_group_element_validation():
    with pytest.raises(GroupElementError):
        GroupElement(2 * np.eye(3))
    with pytest.raises(GroupElementError):
        GroupElement(np.diag([1.0, 1.0, -1.0]))
    GroupElement(np.diag(np.exp(1j * np.array([0.3, -0.1, -0.2]))))


def test_octet_validation():
    with pytest.raises(InvalidInputError):
        invariants(np.ones(7))
    with pytest.raises(InvalidInputError):
        invariants([math.nan] * 8)
