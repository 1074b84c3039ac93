"""
The antisymmetric square of the octet, 8∧8 = 8 ⊕ 10 ⊕ 10*, applied to the
curvature coefficients.

Four-index storage: t[a, b, c, d] holds T^{ab}_{cd} = (λ_r)_{ac}(λ_s)_{bd} T_rs.
"""
from typing import Optional

import numpy as np

from src.components.data_components import (
    AntisymTensor,
    CurvatureTwoForm,
    DecoupletField,
    IrreducibleParts,
    OctetCoefficients,
    SpectralData,
)
from src.components.tags import DegeneracyClass
from src.core.config_manager import get_config
from src.core.errors import DegenerateInputError, InvalidInputError
from src.core.su3_algebra import F_TABLE, LAMBDA, SQRT3, as_octet, octet_star
from src.systems.berry_curvature import check_level, rest_frame_coefficients
from src.systems.spectrum import eigenframes, refined_energies, rest_frame
from src.utils.logger import Logger, LogCategory

EPSILON = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_a, _b, _c] = 1.0
    EPSILON[_a, _c, _b] = -1.0
EPSILON.setflags(write=False)

# δ^{abc}: one at every permutation of (1, 2, 3)
DELTA_SYMBOL = np.abs(EPSILON)


def octet_matrix(x) -> np.ndarray:
    """X^a_b = X_r (λ_r)_{ab}."""
    return np.einsum("r,rab->ab", as_octet(x), LAMBDA)


def octet_vector(m) -> np.ndarray:
    """Inverse of octet_matrix: X_r = ½Tr(Xλ_r)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise InvalidInputError(f"octet matrix must be 3x3, got {m.shape}")
    tol = get_config().get("algebra.traceless_tolerance", 1e-10)
    if abs(np.trace(m)) > tol * max(1.0, float(np.max(np.abs(m)))):
        raise InvalidInputError("octet matrix must be traceless")
    return 0.5 * np.einsum("ab,rba->r", m, LAMBDA).real


def _check_antisymmetric(t_rs) -> np.ndarray:
    t = np.asarray(t_rs, dtype=float)
    if t.shape != (8, 8):
        raise InvalidInputError(f"two-form components must be 8x8, got {t.shape}")
    tol = get_config().get("algebra.traceless_tolerance", 1e-10)
    if np.max(np.abs(t + t.T)) > tol * max(1.0, float(np.max(np.abs(t)))):
        raise InvalidInputError("two-form components must be antisymmetric")
    return 0.5 * (t - t.T)


def to_tensor_components(t_rs) -> AntisymTensor:
    t = _check_antisymmetric(t_rs)
    return AntisymTensor(components=t, tensor=np.einsum("rac,sbd,rs->abcd", LAMBDA, LAMBDA, t))


def from_tensor_components(tensor: np.ndarray) -> AntisymTensor:
    """T_rs = ¼(λ_r)_{ca}(λ_s)_{db}T^{ab}_{cd}; a large imaginary residue means the input was not real."""
    tensor = np.asarray(tensor, dtype=complex)
    if tensor.shape != (3, 3, 3, 3):
        raise InvalidInputError(f"four-index tensor must be 3x3x3x3, got {tensor.shape}")
    raw = 0.25 * np.einsum("rca,sdb,abcd->rs", LAMBDA, LAMBDA, tensor)
    residue = float(np.max(np.abs(raw.imag)))
    tol = get_config().get("curvature.imaginary_residue", 1e-10)
    if residue > tol * max(1.0, float(np.max(np.abs(raw.real)))):
        raise InvalidInputError(f"four-index tensor does not map to a real two-form (residue {residue:.3e})")
    return AntisymTensor(components=_check_antisymmetric(raw.real), tensor=tensor)


def project_irreducible(t: AntisymTensor) -> IrreducibleParts:
    x4 = t.tensor
    w = (
        np.einsum("ade,bcde->abc", EPSILON, x4)
        + np.einsum("bde,cade->abc", EPSILON, x4)
        + np.einsum("cde,abde->abc", EPSILON, x4)
    )
    w_bar = (
        np.einsum("ade,debc->abc", EPSILON, x4)
        + np.einsum("bde,deca->abc", EPSILON, x4)
        + np.einsum("cde,deab->abc", EPSILON, x4)
    )
    x_matrix = 1j * np.einsum("accb->ab", x4)
    return IrreducibleParts(w=w, w_bar=w_bar, x=octet_vector(x_matrix))


def octet_shortcut(t_rs) -> np.ndarray:
    """X_r = −f_rst T_st, the octet part read off the eight-index form directly."""
    return -np.einsum("rst,st->r", F_TABLE, _check_antisymmetric(t_rs))


def _is_symmetric(w: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.max(np.abs(w))))
    perms = ((1, 0, 2), (0, 2, 1), (2, 1, 0))
    return all(np.max(np.abs(w - np.transpose(w, p))) <= tol * scale for p in perms)


def _octet_tensor(x) -> np.ndarray:
    """(i/3)(δ^a_d X^b_c − δ^b_c X^a_d)."""
    xm = octet_matrix(x)
    eye = np.eye(3)
    return (1j / 3) * (np.einsum("ad,bc->abcd", eye, xm) - np.einsum("bc,ad->abcd", eye, xm))


def _decouplet_tensor(w: np.ndarray, w_bar: np.ndarray) -> np.ndarray:
    """(1/6)ε_{cde}W^{abe} + (1/6)ε^{abe}W̄_{cde}."""
    return (np.einsum("cde,abe->abcd", EPSILON, w) + np.einsum("abe,cde->abcd", EPSILON, w_bar)) / 6


def reconstitute(parts: IrreducibleParts) -> AntisymTensor:
    w = np.asarray(parts.w, dtype=complex)
    w_bar = np.asarray(parts.w_bar, dtype=complex)
    if w.shape != (3, 3, 3) or w_bar.shape != (3, 3, 3):
        raise InvalidInputError("decouplet parts must be 3x3x3")
    tol = get_config().get("algebra.traceless_tolerance", 1e-10)
    if not (_is_symmetric(w, tol) and _is_symmetric(w_bar, tol)):
        raise InvalidInputError("decouplet parts must be fully symmetric")
    return from_tensor_components(_decouplet_tensor(w, w_bar) + _octet_tensor(parts.x))


def rest_frame_irreducible(s: SpectralData, a: int) -> IrreducibleParts:
    """Closed-form parts of the rest-frame V⁽ᵃ⁾: only W^{123} (and permutations), X₃ and X₈ survive."""
    if s.degeneracy is not DegeneracyClass.GENERIC:
        raise DegenerateInputError("rest-frame parts need a simple spectrum", s.degeneracy)
    p, q, w = rest_frame_coefficients(s.e12, s.e23, s.e13, a)
    x = np.zeros(8)
    x[2] = -2 * p - q + w
    x[7] = -SQRT3 * (q + w)
    w123 = -2j * (p - q + w)
    return IrreducibleParts(w=w123 * DELTA_SYMBOL, w_bar=np.conj(w123) * DELTA_SYMBOL, x=x)


def octet_coefficients(a: int, rest: np.ndarray) -> OctetCoefficients:
    """
    λ⁽ᵃ⁾, μ⁽ᵃ⁾ with X⁽ᵃ⁾ = P(λ⁽ᵃ⁾ξ⁽⁰⁾ + μ⁽ᵃ⁾ξ⁽⁰⁾∗ξ⁽⁰⁾) and
    P = 1/(ξ₃(ξ₃² − 3ξ₈²)) = −1/(4E₁₂E₁₃E₂₃).
    The 2×2 system in (ξ₃, ξ₈) has determinant 1/P, so the solution is its adjugate.
    """
    check_level(a)
    v = as_octet(rest)
    mask = np.ones(8, dtype=bool)
    mask[[2, 7]] = False
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.any(np.abs(v[mask]) > 1e-12 * scale) or v[2] < 0 or v[7] * SQRT3 < v[2]:
        raise InvalidInputError("octet coefficients need a rest-frame vector with ξ₈ ≥ ξ₃/√3 ≥ 0")
    xi3, xi8 = v[2], v[7]
    e12 = xi3
    e13 = 0.5 * xi3 + 0.5 * SQRT3 * xi8
    e23 = -0.5 * xi3 + 0.5 * SQRT3 * xi8
    if min(e12, e23) <= get_config().get("spectrum.classify_tolerance", 1e-9) * np.linalg.norm(v):
        raise DegenerateInputError("octet prefactor is singular on a degeneracy surface")

    p, q, w = rest_frame_coefficients(e12, e23, e13, a)
    x3 = -2 * p - q + w
    x8 = -SQRT3 * (q + w)
    lam = (xi3 ** 2 - xi8 ** 2) * x3 - 2 * xi3 * xi8 * x8
    mu = -xi8 * x3 + xi3 * x8
    return OctetCoefficients(level=a, lam=lam, mu=mu, prefactor=1.0 / (xi3 * (xi3 ** 2 - 3 * xi8 ** 2)))


def octet_field(xi, a: int) -> np.ndarray:
    """X⁽ᵃ⁾(ξ) = P(λξ + μ ξ∗ξ) in a general frame."""
    v = as_octet(xi)
    c = octet_coefficients(a, rest_frame(v))
    return c.prefactor * (c.lam * v + c.mu * octet_star(v, v))


def delta_tensors(xi, tau: Optional[float] = None) -> DecoupletField:
    """Δ^{abc} = A^a_d A^b_e A^c_f δ^{def}, Δ̄ its conjugate."""
    a = eigenframes(as_octet(xi)[None, :], tau).frames[0]
    delta = np.einsum("ad,be,cf,def->abc", a, a, a, DELTA_SYMBOL)
    return DecoupletField(delta=delta, delta_bar=delta.conj())


def decouplet_weights(s: SpectralData) -> np.ndarray:
    """(v⁽¹⁾, v⁽²⁾, v⁽³⁾); they telescope to zero."""
    i12, i23, i13 = 1 / s.e12 ** 2, 1 / s.e23 ** 2, 1 / s.e13 ** 2
    return np.array([i13 - i12, i12 - i23, i23 - i13])


def octet_part(xi, a: int) -> CurvatureTwoForm:
    check_level(a)
    x = octet_field(xi, a)
    return CurvatureTwoForm(a, from_tensor_components(_octet_tensor(x)).components)


def decouplet_part(xi, a: int, tau: Optional[float] = None) -> CurvatureTwoForm:
    """(i v⁽ᵃ⁾/6)(ε_{cde}Δ^{abe} − ε^{abe}Δ̄_{cde}) converted to V_rs."""
    check_level(a)
    v = as_octet(xi)
    field = delta_tensors(v, tau)
    weight = decouplet_weights(refined_energies(v))[a - 1]
    tensor = _decouplet_tensor(1j * weight * field.delta, -1j * weight * field.delta_bar)
    return CurvatureTwoForm(a, from_tensor_components(tensor).components)


def curvature_from_parts(xi, a: int, tau: Optional[float] = None) -> CurvatureTwoForm:
    octet = octet_part(xi, a)
    decouplet = decouplet_part(xi, a, tau)
    Logger.numerics(
        LogCategory.CURVATURE,
        f"level {a}: |octet| = {np.max(np.abs(octet.coefficients)):.6e}, "
        f"|decouplet| = {np.max(np.abs(decouplet.coefficients)):.6e}",
    )
    return CurvatureTwoForm(a, octet.coefficients + decouplet.coefficients)


def antisymmetric_basis() -> list:
    """The 28 elementary two-forms e_r∧e_s, r < s."""
    basis = []
    for r in range(8):
        for s in range(r + 1, 8):
            t = np.zeros((8, 8))
            t[r, s], t[s, r] = 1.0, -1.0
            basis.append(t)
    return basis
