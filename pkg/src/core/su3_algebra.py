import math
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.linalg import expm

from src.components.data_components import (
    AdjointImage,
    CoordinateForm,
    GroupElement,
    HermitianMatrix,
)
from src.core.errors import DimensionMismatchError, InvalidInputError
from src.core.un_kinematics import MatrixLike, as_hermitian

SQRT3 = math.sqrt(3.0)

# Gell-Mann matrices, index 0..7 for λ₁..λ₈
_L = np.zeros((8, 3, 3), dtype=complex)
_L[0][0, 1] = _L[0][1, 0] = 1
_L[1][0, 1], _L[1][1, 0] = -1j, 1j
_L[2][0, 0], _L[2][1, 1] = 1, -1
_L[3][0, 2] = _L[3][2, 0] = 1
_L[4][0, 2], _L[4][2, 0] = -1j, 1j
_L[5][1, 2] = _L[5][2, 1] = 1
_L[6][1, 2], _L[6][2, 1] = -1j, 1j
_L[7] = np.diag([1, 1, -2]) / SQRT3


def _build_tables() -> Tuple[np.ndarray, np.ndarray]:
    # Tr(λrλsλt) = 2(d_rst + i f_rst)
    triple = np.einsum("rab,sbc,tca->rst", _L, _L, _L)
    f = (triple - np.transpose(triple, (1, 0, 2))) / 4j
    d = (triple + np.transpose(triple, (1, 0, 2))) / 4
    f, d = f.real, d.real
    f[np.abs(f) < 1e-15] = 0.0
    d[np.abs(d) < 1e-15] = 0.0
    return f, d


LAMBDA = _L
F_TABLE, D_TABLE = _build_tables()
for _table in (LAMBDA, F_TABLE, D_TABLE):
    _table.setflags(write=False)

# Independent nonzero entries as tabulated in the literature (1-based indices)
TABULATED_F: Dict[Tuple[int, int, int], float] = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (5, 1, 6): 0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (6, 3, 7): 0.5,
    (4, 5, 8): SQRT3 / 2,
    (6, 7, 8): SQRT3 / 2,
}

TABULATED_D: Dict[Tuple[int, int, int], float] = {
    (1, 1, 8): 1 / SQRT3,
    (2, 2, 8): 1 / SQRT3,
    (3, 3, 8): 1 / SQRT3,
    (8, 8, 8): -1 / SQRT3,
    (4, 4, 8): -1 / (2 * SQRT3),
    (5, 5, 8): -1 / (2 * SQRT3),
    (6, 6, 8): -1 / (2 * SQRT3),
    (7, 7, 8): -1 / (2 * SQRT3),
    (1, 4, 6): 0.5,
    (1, 5, 7): 0.5,
    (2, 4, 7): -0.5,
    (2, 5, 6): 0.5,
    (3, 4, 4): 0.5,
    (3, 5, 5): 0.5,
    (3, 6, 6): -0.5,
    (3, 7, 7): -0.5,
}


def as_octet(xi) -> np.ndarray:
    v = np.asarray(xi, dtype=float)
    if v.shape != (8,):
        raise InvalidInputError(f"octet vector must have 8 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("octet vector must be finite")
    return v


def as_octets(xis) -> np.ndarray:
    v = np.asarray(xis, dtype=float)
    if v.ndim != 2 or v.shape[1] != 8:
        raise InvalidInputError(f"octet batch must have shape (N, 8), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("octet vectors must be finite")
    return v


def gellmann(r: int) -> HermitianMatrix:
    if not 1 <= r <= 8:
        raise InvalidInputError(f"Gell-Mann index must be in 1..8, got {r}")
    return HermitianMatrix(LAMBDA[r - 1].copy())


def structure_constants() -> Tuple[np.ndarray, np.ndarray]:
    """(f, d) as 8×8×8 arrays, 0-based."""
    return F_TABLE, D_TABLE


def hamiltonian(xi0: Union[float, np.ndarray], xi: np.ndarray) -> np.ndarray:
    """
    ξ₀I + ½ξ·λ. Accepts a single octet or a batch (..., 8) with matching ξ₀.
    Returns raw complex arrays; wrap in HermitianMatrix where validation matters.
    """
    xi = np.asarray(xi, dtype=float)
    h = 0.5 * np.einsum("...r,rab->...ab", xi, LAMBDA)
    xi0 = np.asarray(xi0, dtype=float)
    return h + xi0[..., None, None] * np.eye(3)


def to_coordinates(h: MatrixLike) -> CoordinateForm:
    m = as_hermitian(h).entries
    if m.shape != (3, 3):
        raise DimensionMismatchError(f"coordinates need a 3x3 matrix, got {m.shape}")
    xi0 = float(np.trace(m).real) / 3
    xi = np.einsum("ab,rba->r", m, LAMBDA).real
    return CoordinateForm(xi0=xi0, xi=xi)


def from_coordinates(c: CoordinateForm) -> HermitianMatrix:
    return HermitianMatrix(hamiltonian(c.xi0, as_octet(c.xi)))


def octet_wedge(xi1, xi2) -> np.ndarray:
    """(ξ¹∧ξ²)_r = −½ f_rst ξ¹_s ξ²_t, so that i[H(ξ¹), H(ξ²)] = (ξ¹∧ξ²)·λ."""
    return -0.5 * np.einsum("rst,...s,...t->...r", F_TABLE, xi1, xi2)


def octet_star(xi1, xi2) -> np.ndarray:
    """(ξ¹∗ξ²)_r = √3 d_rst ξ¹_s ξ²_t."""
    return SQRT3 * np.einsum("rst,...s,...t->...r", D_TABLE, xi1, xi2)


def invariants(xi) -> Tuple[float, float]:
    """(ξ·ξ, (ξ∗ξ)·ξ)."""
    v = as_octet(xi)
    return float(v @ v), float(octet_star(v, v) @ v)


def cubic_invariants(xis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Batched invariants for an (..., 8) array."""
    quadratic = np.einsum("...r,...r->...", xis, xis)
    cubic = np.einsum("...r,...r->...", octet_star(xis, xis), xis)
    return quadratic, cubic


def normalized_cubic(xi) -> float:
    """n·(n∗n) for n = ξ/|ξ|; −1 on Σ₁₂, +1 on Σ₂₃."""
    quadratic, cubic = invariants(xi)
    if quadratic == 0.0:
        raise InvalidInputError("normalized cubic invariant is undefined at the origin")
    return float(np.clip(cubic / quadratic ** 1.5, -1.0, 1.0))


def determinant(xi) -> float:
    """det H(0, ξ) = (ξ∗ξ)·ξ / (12√3)."""
    return invariants(xi)[1] / (12 * SQRT3)


def _adjoint(a: np.ndarray) -> np.ndarray:
    return 0.5 * np.einsum("rab,...bc,scd,...ad->...rs", LAMBDA, a, LAMBDA, a.conj()).real


def adjoint_matrix(a: Union[GroupElement, np.ndarray]) -> AdjointImage:
    """D_rs = ½Tr(λ_r A λ_s A†); conjugation H → AHA† acts as ξ → Dξ."""
    element = a if isinstance(a, GroupElement) else GroupElement(a)
    return AdjointImage(_adjoint(element.matrix))


def adjoint_matrices(frames: np.ndarray) -> np.ndarray:
    """Unvalidated batch form for (..., 3, 3) unitary frames."""
    return _adjoint(np.asarray(frames, dtype=complex))


def random_special_unitary(rng: np.random.Generator, scale: float = 1.0) -> GroupElement:
    """exp(iX) for a random traceless Hermitian X."""
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    x = 0.5 * scale * (x + x.conj().T)
    x -= np.trace(x) / 3 * np.eye(3)
    return GroupElement(expm(1j * x))


def random_octet(rng: np.random.Generator, norm: Optional[float] = None) -> np.ndarray:
    v = rng.normal(size=8)
    if norm is not None:
        v *= norm / np.linalg.norm(v)
    return v
