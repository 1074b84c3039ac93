"""
Closed-form spectra of H(0, ξ) = ½ξ·λ and the gauge-fixed diagonalizer.

Eigenvalues come from the invariant angle φ:
    sin 3φ = −(ξ∗ξ)·ξ / |ξ|³,  φ ∈ [π/6, π/2]
    E_a = (|ξ|/√3) sin(φ + 2π(a−1)/3)
which is already nonincreasing in a.

Near Σ₁₂ or Σ₂₃ the angle loses accuracy (the cubic invariant cancels against
|ξ|³), so eigenvectors are built by deflation: the level isolated from the
nearly degenerate pair is extracted as the null vector of H − E_iso, and the
remaining pair is resolved exactly in its 2×2 compression. The refined gaps
obtained this way drive eigenvalues(), classification and the rest frame.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.components.data_components import GroupElement, SpectralData
from src.components.tags import DegeneracyClass
from src.core.config_manager import get_config
from src.core.errors import DegenerateInputError, InvalidInputError
from src.core.su3_algebra import (
    SQRT3,
    adjoint_matrix,
    as_octet,
    as_octets,
    cubic_invariants,
    hamiltonian,
)
from src.utils.logger import Logger, LogCategory

TWO_PI_THIRDS = 2 * math.pi / 3

# Row pairs whose cross product spans the null space of a rank-2 3×3 matrix
_ROW_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(slots=True)
class FrameBatch:
    """Eigenframes (columns ordered E₁ ≥ E₂ ≥ E₃, det = 1) with refined energies."""
    frames: np.ndarray    # (N, 3, 3)
    energies: np.ndarray  # (N, 3)
    e12: np.ndarray       # (N,)
    e23: np.ndarray       # (N,)
    norms: np.ndarray     # (N,)


def closed_form_energies(xis: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Batched closed form for an (N, 8) array.
    Returns (E (N,3), φ, E₁₂, E₂₃, |ξ|). At ξ = 0, φ is reported as π/6 and all energies vanish.
    """
    quadratic, cubic = cubic_invariants(xis)
    norms = np.sqrt(quadratic)
    safe = np.where(norms > 0, norms, 1.0)
    ratio = np.clip(-cubic / safe ** 3, -1.0, 1.0)
    phi = np.where(norms > 0, (math.pi - np.arcsin(ratio)) / 3, math.pi / 6)

    offsets = TWO_PI_THIRDS * np.arange(3)
    energies = (norms / SQRT3)[:, None] * np.sin(phi[:, None] + offsets)
    e12 = norms * np.sin(phi - math.pi / 6)
    e23 = norms * np.cos(phi)
    return energies, phi, np.maximum(e12, 0.0), np.maximum(e23, 0.0), norms


def phase_angle(xi) -> float:
    v = as_octet(xi)
    if not np.any(v):
        raise InvalidInputError("phase angle is undefined at ξ = 0")
    return float(closed_form_energies(v[None, :])[1][0])


def _null_vectors(m: np.ndarray) -> np.ndarray:
    crosses = np.stack([np.cross(m[:, i], m[:, j]) for i, j in _ROW_PAIRS], axis=1)
    best = np.argmax(np.linalg.norm(crosses, axis=2), axis=1)
    v = crosses[np.arange(len(m)), best]
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _complement(v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = len(v)
    k = np.argmin(np.abs(v), axis=1)
    unit = np.zeros_like(v)
    unit[np.arange(n), k] = 1.0
    u1 = unit - v * v[np.arange(n), k].conj()[:, None]
    u1 /= np.linalg.norm(u1, axis=1, keepdims=True)
    u2 = np.cross(v, u1).conj()
    return u1, u2


def _resolve_pair(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Upper/lower eigenvectors and eigenvalues of a batch of 2×2 Hermitian matrices."""
    alpha, gamma, beta = h[:, 0, 0].real, h[:, 1, 1].real, h[:, 0, 1]
    mean = 0.5 * (alpha + gamma)
    half = 0.5 * (alpha - gamma)
    radius = np.hypot(half, np.abs(beta))

    x = np.where(half >= 0, half + radius, beta)
    y = np.where(half >= 0, beta.conj(), radius - half)
    up = np.stack([x, y], axis=1).astype(complex)
    size = np.linalg.norm(up, axis=1)
    # exact degeneracy: any basis of the plane will do
    flat = size == 0
    up[flat] = (1.0, 0.0)
    size[flat] = 1.0
    up /= size[:, None]
    down = np.stack([-up[:, 1].conj(), up[:, 0].conj()], axis=1)
    return up, down, mean + radius, mean - radius


def _fix_gauge(frames: np.ndarray, tie: float) -> np.ndarray:
    """Largest component of columns 1 and 2 real positive (lowest row on ties); det = 1 via column 3."""
    n = len(frames)
    rows = np.arange(n)
    for col in (0, 1):
        mags = np.abs(frames[:, :, col])
        top = mags.max(axis=1, keepdims=True)
        pivot = np.argmax(mags >= top * (1 - tie), axis=1)
        comp = frames[rows, pivot, col]
        frames[:, :, col] *= (comp.conj() / np.abs(comp))[:, None]
    det = np.linalg.det(frames)
    frames[:, :, 2] *= (det.conj() / np.abs(det))[:, None]
    return frames


def deflated_frames(xis: np.ndarray, tie: Optional[float] = None) -> FrameBatch:
    """
    Eigenframes for every nonzero ξ in an (N, 8) batch, degenerate points
    included (there the pair columns are an arbitrary orthonormal basis).
    """
    if tie is None:
        tie = get_config().get("spectrum.gauge_tie_tolerance", 1e-9)
    xis = as_octets(xis)
    energies, _, e12, e23, norms = closed_form_energies(xis)
    if np.any(norms == 0):
        raise DegenerateInputError("no eigenframe at ξ = 0", DegeneracyClass.TRIPLE_DEGENERATE)

    n = len(xis)
    rows = np.arange(n)
    h = hamiltonian(np.zeros(n), xis)
    # the level farthest from the nearly degenerate pair
    lower_isolated = e12 <= e23
    iso = np.where(lower_isolated, 2, 0)
    e_iso = energies[rows, iso]

    v = _null_vectors(h - e_iso[:, None, None] * np.eye(3))
    u1, u2 = _complement(v)
    basis = np.stack([u1, u2], axis=2)
    compressed = np.einsum("nai,nab,nbj->nij", basis.conj(), h, basis)
    up, down, e_up, e_down = _resolve_pair(compressed)
    w_up = np.einsum("nai,ni->na", basis, up)
    w_down = np.einsum("nai,ni->na", basis, down)
    e_v = np.einsum("na,nab,nb->n", v.conj(), h, v).real

    frames = np.where(
        lower_isolated[:, None, None],
        np.stack([w_up, w_down, v], axis=2),
        np.stack([v, w_up, w_down], axis=2),
    )
    refined = np.where(
        lower_isolated[:, None],
        np.stack([e_up, e_down, e_v], axis=1),
        np.stack([e_v, e_up, e_down], axis=1),
    )
    gap12 = np.maximum(refined[:, 0] - refined[:, 1], 0.0)
    gap23 = np.maximum(refined[:, 1] - refined[:, 2], 0.0)
    return FrameBatch(
        frames=_fix_gauge(frames, tie),
        energies=refined,
        e12=gap12,
        e23=gap23,
        norms=norms,
    )


def _classify_gaps(norm: float, e12: float, e23: float, tau: float) -> DegeneracyClass:
    if norm <= tau:
        return DegeneracyClass.TRIPLE_DEGENERATE
    if e12 <= tau * norm:
        return DegeneracyClass.UPPER_DEGENERATE
    if e23 <= tau * norm:
        return DegeneracyClass.LOWER_DEGENERATE
    return DegeneracyClass.GENERIC


def classify_batch(xis: np.ndarray, tau: Optional[float] = None) -> np.ndarray:
    """Degeneracy class per row of an (N, 8) batch, as an object array."""
    if tau is None:
        tau = get_config().get("spectrum.classify_tolerance", 1e-9)
    if tau <= 0:
        raise InvalidInputError("classification tolerance must be positive")
    xis = as_octets(xis)
    norms = np.linalg.norm(xis, axis=1)
    out = np.full(len(xis), DegeneracyClass.TRIPLE_DEGENERATE, dtype=object)
    live = norms > tau
    if np.any(live):
        batch = deflated_frames(xis[live])
        out[live] = [
            _classify_gaps(n, g12, g23, tau) for n, g12, g23 in zip(batch.norms, batch.e12, batch.e23)
        ]
    return out


def classify(xi, tau: Optional[float] = None) -> DegeneracyClass:
    return classify_batch(as_octet(xi)[None, :], tau)[0]


def eigenvalues(xi, tau: Optional[float] = None) -> SpectralData:
    """Energies and gaps from the deflated eigenframe; only φ uses the closed form."""
    if tau is None:
        tau = get_config().get("spectrum.classify_tolerance", 1e-9)
    if tau <= 0:
        raise InvalidInputError("classification tolerance must be positive")
    v = as_octet(xi)
    if not np.any(v):
        return SpectralData(
            e1=0.0, e2=0.0, e3=0.0, phi=math.pi / 6, e12=0.0, e23=0.0, e13=0.0,
            degeneracy=DegeneracyClass.TRIPLE_DEGENERATE,
        )
    batch = deflated_frames(v[None, :])
    e = batch.energies[0]
    g12, g23 = float(batch.e12[0]), float(batch.e23[0])
    return SpectralData(
        e1=float(e[0]),
        e2=float(e[1]),
        e3=float(e[2]),
        phi=phase_angle(v),
        e12=g12,
        e23=g23,
        e13=g12 + g23,
        degeneracy=_classify_gaps(float(batch.norms[0]), g12, g23, tau),
    )


def refined_energies(xi) -> SpectralData:
    return eigenvalues(xi)


def rest_frame(xi) -> np.ndarray:
    """ξ⁽⁰⁾ with ξ₃ = E₁₂ and ξ₈ = −√3E₃ = (E₁₃ + E₂₃)/√3."""
    v = as_octet(xi)
    out = np.zeros(8)
    if not np.any(v):
        return out
    batch = deflated_frames(v[None, :])
    out[2] = batch.e12[0]
    out[7] = (batch.e12[0] + 2 * batch.e23[0]) / SQRT3
    return out


def _require_generic(xis: np.ndarray, batch: FrameBatch, tau: float):
    for xi, n, g12, g23 in zip(xis, batch.norms, batch.e12, batch.e23):
        kind = _classify_gaps(n, g12, g23, tau)
        if kind is not DegeneracyClass.GENERIC:
            Logger.log(LogCategory.SPECTRUM, f"Rejected {kind.value} point {np.array2string(xi, precision=6)}")
            raise DegenerateInputError(
                f"eigenframe requires a simple spectrum, point is {kind.value}", kind
            )


def eigenframes(xis: np.ndarray, tau: Optional[float] = None) -> FrameBatch:
    """Gauge-fixed frames for a batch of Generic points; raises on any degenerate row."""
    if tau is None:
        tau = get_config().get("spectrum.classify_tolerance", 1e-9)
    xis = as_octets(xis)
    norms = np.linalg.norm(xis, axis=1)
    if np.any(norms <= tau):
        raise DegenerateInputError("eigenframe requires a simple spectrum, point is triple_degenerate",
                                   DegeneracyClass.TRIPLE_DEGENERATE)
    batch = deflated_frames(xis)
    _require_generic(xis, batch, tau)
    return batch


def eigenframe(xi, tau: Optional[float] = None) -> np.ndarray:
    return eigenframes(as_octet(xi)[None, :], tau).frames[0]


def diagonalizer(xi, tau: Optional[float] = None) -> GroupElement:
    """A(ξ) ∈ SU(3) with A† H(0,ξ) A = H(0, ξ⁽⁰⁾)."""
    return GroupElement(eigenframe(xi, tau))


def align_gauge(frame: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Re-phases each column of frame to have a real positive overlap with reference."""
    overlaps = np.einsum("ai,ai->i", reference.conj(), frame)
    return frame * (overlaps.conj() / np.abs(overlaps))[None, :]


def wigner_rotation(b, xi, tau: Optional[float] = None) -> GroupElement:
    """
    L = (B·A(ξ))† A(D(B)ξ): the torus element relating the two diagonalizers
    of adjoint-related points. Diagonal and special unitary.
    """
    element = b if isinstance(b, GroupElement) else GroupElement(b)
    v = as_octet(xi)
    moved = adjoint_matrix(element).matrix @ v
    a_xi = eigenframe(v, tau)
    a_moved = eigenframe(moved, tau)
    return GroupElement((element.matrix @ a_xi).conj().T @ a_moved)
