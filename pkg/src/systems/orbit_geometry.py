from typing import Optional, Tuple

import numpy as np

from src.components.data_components import TangentPair
from src.core.config_manager import get_config
from src.core.errors import DimensionMismatchError, InvalidInputError
from src.core.su3_algebra import LAMBDA, as_octet, invariants
from src.core.un_kinematics import MatrixLike, as_hermitian
from src.systems.spectrum import classify


def _three_level(h: MatrixLike) -> np.ndarray:
    m = as_hermitian(h).entries
    if m.shape != (3, 3):
        raise DimensionMismatchError(f"orbit geometry needs a 3x3 matrix, got {m.shape}")
    return m


def symplectic_eval(h: MatrixLike, pair: TangentPair) -> float:
    """
    ω_H(A, B) = Im Tr(H[A, B]). The trace is purely imaginary for Hermitian
    arguments, so the imaginary part carries the whole pairing.
    """
    m = _three_level(h)
    commutator = pair.a @ pair.b - pair.b @ pair.a
    return float(np.trace(m @ commutator).imag)


def symplectic_matrix(h: MatrixLike) -> np.ndarray:
    """M_uv = Im Tr(H[λ_u, λ_v]) over the Gell-Mann directions."""
    m = _three_level(h)
    products = np.einsum("uab,vbc->uvac", LAMBDA, LAMBDA)
    commutators = products - np.transpose(products, (1, 0, 2, 3))
    return np.einsum("ab,uvba->uv", m, commutators).imag


def symplectic_kernel_dim(h: MatrixLike, tol: Optional[float] = None) -> int:
    if tol is None:
        tol = get_config().get("kinematics.orbit_tolerance", 1e-9)
    if tol <= 0:
        raise InvalidInputError("kernel tolerance must be positive")
    singular = np.linalg.svd(symplectic_matrix(h), compute_uv=False)
    scale = max(1.0, float(singular.max()))
    return int(np.sum(singular <= tol * scale))


def orbit_metric_eval(h: MatrixLike, pair: TangentPair) -> float:
    """Re Tr([H, A][H, B]†); vanishes on the commutant of H."""
    m = _three_level(h)
    ca = m @ pair.a - pair.a @ m
    cb = m @ pair.b - pair.b @ m
    return float(np.trace(ca @ cb.conj().T).real)


def orbit_invariants(xi, tau: Optional[float] = None) -> Tuple[float, float, int]:
    v = as_octet(xi)
    quadratic, cubic = invariants(v)
    return quadratic, cubic, classify(v, tau).orbit_dimension
