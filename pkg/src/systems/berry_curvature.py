"""
Curvature two-forms V⁽ᵃ⁾ of the three adiabatic levels.

Spectral route:
    V⁽ᵃ⁾_rs = ½ Σ_{b≠a} Im(⟨a|λ_r|b⟩⟨a|λ_s|b⟩*) / (E_a − E_b)²

Transported route: the rest-frame table carried to ξ by D(A(ξ)).

The geometric phase of a loop is minus the flux of V⁽ᵃ⁾ through any surface
it bounds.
"""
from typing import Optional, Tuple

import numpy as np

from src.components.data_components import CurvatureTwoForm, SpectralData
from src.components.tags import LEVELS, DegeneracyClass
from src.core.config_manager import get_config
from src.core.errors import DegenerateInputError, InvalidInputError
from src.core.su3_algebra import LAMBDA, adjoint_matrices, as_octet, as_octets
from src.systems.spectrum import align_gauge, eigenframes, refined_energies

# Rest-frame slots (0-based) holding the independent entries 12, 45, 67
SLOT_INDICES = ((0, 1), (3, 4), (5, 6))


def check_level(a: int) -> int:
    if a not in LEVELS:
        raise InvalidInputError(f"level must be one of {LEVELS}, got {a}")
    return a


def _spectral_batch(frames: np.ndarray, energies: np.ndarray, a: int) -> np.ndarray:
    i = a - 1
    # M_r = A† λ_r A, row i only
    rows = np.einsum("nb,rbc,ncd->nrd", frames[:, :, i].conj(), LAMBDA, frames)
    gaps = energies[:, i:i + 1] - energies
    weights = np.zeros_like(gaps)
    others = np.arange(3) != i
    weights[:, others] = 1.0 / gaps[:, others] ** 2
    v = 0.5 * np.einsum("nrb,nsb,nb->nrs", rows, rows.conj(), weights).imag
    return 0.5 * (v - np.transpose(v, (0, 2, 1)))


def curvature_from_frame(frame: np.ndarray, energies, a: int) -> CurvatureTwoForm:
    """Spectral formula on a caller-supplied eigenframe (any column phases)."""
    check_level(a)
    frame = np.asarray(frame, dtype=complex)
    e = np.asarray(energies, dtype=float)
    if frame.shape != (3, 3) or e.shape != (3,):
        raise InvalidInputError("expected a 3x3 frame and three energies")
    i = a - 1
    if np.any(np.delete(np.abs(e[i] - e), i) == 0):
        raise DegenerateInputError("level is degenerate in the supplied spectrum")
    return CurvatureTwoForm(a, _spectral_batch(frame[None], e[None], a)[0])


def curvature_spectral_batch(xis: np.ndarray, a: int, tau: Optional[float] = None) -> np.ndarray:
    """V⁽ᵃ⁾ for every row of an (N, 8) batch, shape (N, 8, 8)."""
    check_level(a)
    batch = eigenframes(as_octets(xis), tau)
    return _spectral_batch(batch.frames, batch.energies, a)


def curvature_spectral(xi, a: int, tau: Optional[float] = None) -> CurvatureTwoForm:
    return CurvatureTwoForm(a, curvature_spectral_batch(as_octet(xi)[None, :], a, tau)[0])


def rest_frame_coefficients(e12: float, e23: float, e13: float, a: int) -> Tuple[float, float, float]:
    """(V₁₂, V₄₅, V₆₇) of level a in the rest frame."""
    check_level(a)
    if min(e12, e23, e13) <= 0:
        raise DegenerateInputError("rest-frame curvature needs nonzero gaps")
    p, q, w = 0.5 / e12 ** 2, 0.5 / e13 ** 2, 0.5 / e23 ** 2
    return {
        1: (p, q, 0.0),
        2: (-p, 0.0, w),
        3: (0.0, -q, -w),
    }[a]


def _from_slots(values) -> np.ndarray:
    v = np.zeros((8, 8))
    for (r, s), value in zip(SLOT_INDICES, values):
        v[r, s] = value
        v[s, r] = -value
    return v


def curvature_rest_frame(s: SpectralData, a: int) -> CurvatureTwoForm:
    if s.degeneracy is not DegeneracyClass.GENERIC:
        raise DegenerateInputError(
            f"rest-frame curvature needs a simple spectrum, got {s.degeneracy.value}", s.degeneracy
        )
    return CurvatureTwoForm(a, _from_slots(rest_frame_coefficients(s.e12, s.e23, s.e13, a)))


def curvature_transported(xi, a: int, tau: Optional[float] = None) -> CurvatureTwoForm:
    """D(A) V(ξ⁽⁰⁾) D(A)ᵀ with A = A(ξ)."""
    check_level(a)
    v = as_octet(xi)
    batch = eigenframes(v[None, :], tau)
    g12, g23 = float(batch.e12[0]), float(batch.e23[0])
    rest = _from_slots(rest_frame_coefficients(g12, g23, g12 + g23, a))
    d = adjoint_matrices(batch.frames[0])
    return CurvatureTwoForm(a, d @ rest @ d.T)


def weighted_sum(xi, tau: Optional[float] = None) -> np.ndarray:
    """Σ_a E_a V⁽ᵃ⁾; in the rest frame its slots are 1/(2E₁₂), 1/(2E₁₃), 1/(2E₂₃)."""
    v = as_octet(xi)
    batch = eigenframes(v[None, :], tau)
    total = np.zeros((8, 8))
    for a in LEVELS:
        total += batch.energies[0, a - 1] * _spectral_batch(batch.frames, batch.energies, a)[0]
    return total


def sum_rule_finite_difference(xi, h: Optional[float] = None, tau: Optional[float] = None) -> np.ndarray:
    """
    −Im Tr(H₀[θ_r, θ_s]) with θ_r = A†∂_rA from central differences of the
    diagonalizer. Neighbour frames are re-phased onto A(ξ) so that the gauge
    is smooth across the stencil.
    """
    v = as_octet(xi)
    if h is None:
        h = get_config().get("curvature.fd_step", 1e-5) * float(np.linalg.norm(v))
    if h <= 0:
        raise InvalidInputError("finite-difference step must be positive")

    stencil = np.concatenate([v + h * np.eye(8), v - h * np.eye(8)])
    batch = eigenframes(np.vstack([v[None, :], stencil]), tau)
    center = batch.frames[0]
    aligned = np.array([align_gauge(f, center) for f in batch.frames[1:]])
    derivatives = (aligned[:8] - aligned[8:]) / (2 * h)
    theta = np.einsum("ba,rbc->rac", center.conj(), derivatives)

    h0 = np.diag(refined_energies(v).energies)
    products = np.einsum("rab,sbc->rsac", theta, theta)
    commutators = products - np.transpose(products, (1, 0, 2, 3))
    return -np.einsum("ab,rsba->rs", h0, commutators).imag
