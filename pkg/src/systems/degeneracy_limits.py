"""
Behaviour of the curvature near Σ₁₂: gap asymptotics, the singular parts of
the octet and decouplet contributions, and the monopole flux through small
spheres in the unfolding subspace (ξ₁, ξ₂, ξ₃) around e₈.

Leading 1/ε² coefficients in the rest frame, slots (12, 45, 67):
    octet      (−c/3, −c/6, c/6)
    decouplet  (−c/6, c/6, −c/6)
    total      (−c/2, 0, 0)
with c = −1, +1, 0 for levels 1, 2, 3.
"""
import math
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.components.data_components import SLOTS, GapEstimate, SingularExpansion
from src.components.tags import DegeneracyClass
from src.core.config_manager import get_config
from src.core.errors import (
    DegenerateInputError,
    InvalidInputError,
    QuadratureError,
)
from src.core.su3_algebra import (
    SQRT3,
    adjoint_matrices,
    as_octet,
    hamiltonian,
    invariants,
    normalized_cubic,
)
from src.systems.berry_curvature import check_level, curvature_spectral_batch
from src.systems.spectrum import classify, closed_form_energies, deflated_frames
from src.systems.tensor_decomposition import decouplet_part, octet_part
from src.utils.logger import Logger, LogCategory
from src.world.parameter_space import UNFOLDING_AXES, degeneracy_ray, rest_frame_point

_SINGULAR_CHARGE = {1: -1.0, 2: 1.0, 3: 0.0}


def _slot_values(v: np.ndarray) -> dict:
    return {label: float(v[int(label[0]) - 1, int(label[1]) - 1]) for label in SLOTS}


def gap_asymptotic(xi, window: Optional[float] = None) -> GapEstimate:
    """
    Near Σ₁₂: E₁₂ ≈ (√2/3)(|ξ|³ + c)^{1/2}/|ξ|^{1/2}; near Σ₂₃ the same with −c.
    The actual gap comes from the deflated eigenframe.
    """
    if window is None:
        window = get_config().get("limits.near_degeneracy_window", 0.1)
    v = as_octet(xi)
    if classify(v) is DegeneracyClass.TRIPLE_DEGENERATE:
        raise DegenerateInputError("gap asymptotics are undefined at the origin", DegeneracyClass.TRIPLE_DEGENERATE)

    _, phi, _, _, _ = closed_form_energies(v[None, :])
    phi = float(phi[0])
    quadratic, cubic = invariants(v)
    norm = math.sqrt(quadratic)
    refined = deflated_frames(v[None, :])

    if abs(phi - math.pi / 6) <= window:
        surface, sign, actual = "sigma12", 1.0, float(refined.e12[0])
    elif abs(phi - math.pi / 2) <= window:
        surface, sign, actual = "sigma23", -1.0, float(refined.e23[0])
    else:
        raise InvalidInputError(f"φ = {phi:.6f} is not within {window} of π/6 or π/2")

    predicted = math.sqrt(2.0) / 3.0 * math.sqrt(max(norm ** 3 + sign * cubic, 0.0)) / math.sqrt(norm)
    return GapEstimate(surface=surface, predicted=predicted, actual=actual)


def singular_expansion(epsilon: float, e13: float, a: int, ratio: Optional[float] = None) -> SingularExpansion:
    """
    Leading 1/ε² coefficients per slot, plus the exact octet, decouplet and total
    rest-frame values at E₁₂ = ε, E₂₃ = E₁₃ − ε.
    """
    check_level(a)
    if ratio is None:
        ratio = get_config().get("limits.small_gap_ratio", 0.1)
    if epsilon <= 0:
        raise InvalidInputError("ε must be positive")
    if e13 <= 0 or epsilon > ratio * e13:
        raise InvalidInputError(f"ε = {epsilon} is not small relative to E₁₃ = {e13} (ratio {ratio})")

    c = _SINGULAR_CHARGE[a]
    octet = dict(zip(SLOTS, (-c / 3, -c / 6, c / 6)))
    decouplet = dict(zip(SLOTS, (-c / 6, c / 6, -c / 6)))
    total = {k: octet[k] + decouplet[k] for k in SLOTS}

    point = rest_frame_point(epsilon, e13 - epsilon)
    octet_values = _slot_values(octet_part(point, a).coefficients)
    decouplet_values = _slot_values(decouplet_part(point, a).coefficients)
    return SingularExpansion(
        level=a,
        epsilon=epsilon,
        e13=e13,
        e23=e13 - epsilon,
        octet=octet,
        decouplet=decouplet,
        total=total,
        octet_values=octet_values,
        decouplet_values=decouplet_values,
        total_values={k: octet_values[k] + decouplet_values[k] for k in SLOTS},
    )


def approach_profile(deltas, a: int) -> np.ndarray:
    """δ²·(V₁₂, V₄₅, V₆₇) of level a along e₈ + δe₃; rows follow deltas."""
    check_level(a)
    d = np.asarray(deltas, dtype=float)
    if np.any(d <= 0):
        raise InvalidInputError("approach distances must be positive")
    v = curvature_spectral_batch(degeneracy_ray(d), a)
    slots = np.stack([v[:, 0, 1], v[:, 3, 4], v[:, 5, 6]], axis=1)
    return slots * d[:, None] ** 2


def sigma12_frame(direction) -> np.ndarray:
    """
    A ∈ SU(3) with A H(e₈) A† = H(n) for a unit n on Σ₁₂, i.e. D(A)e₈ = n.
    Columns: the degenerate upper pair, then the lower level.
    """
    n = as_octet(direction)
    tol = get_config().get("limits.sigma_tolerance", 1e-9)
    if abs(np.linalg.norm(n) - 1.0) > tol or abs(normalized_cubic(n) + 1.0) > tol:
        raise InvalidInputError("monopole direction must be a unit vector on Σ₁₂ (cubic invariant −1)")
    _, vecs = np.linalg.eigh(hamiltonian(0.0, n))
    frame = vecs[:, ::-1].copy()
    det = np.linalg.det(frame)
    frame[:, 2] *= det.conj() / abs(det)
    return frame


def _sphere_flux(order: int, rotation: np.ndarray, center: np.ndarray, radius: float, a: int,
                 chunk: int) -> float:
    x_t, w_t = leggauss(order)
    x_p, w_p = leggauss(2 * order)
    theta = 0.5 * math.pi * (x_t + 1.0)
    phi = math.pi * (x_p + 1.0)
    weights = (0.5 * math.pi * w_t)[:, None] * (math.pi * w_p)[None, :]

    st, ct = np.sin(theta)[:, None], np.cos(theta)[:, None]
    sp, cp = np.sin(phi)[None, :], np.cos(phi)[None, :]
    ones = np.ones_like(sp)
    radial = np.stack([st * cp, st * sp, ct * ones], axis=-1).reshape(-1, 3)
    d_theta = np.stack([ct * cp, ct * sp, -st * ones], axis=-1).reshape(-1, 3)
    d_phi = np.stack([-st * sp, st * cp, 0.0 * st * ones], axis=-1).reshape(-1, 3)

    points = (center + radius * radial @ UNFOLDING_AXES) @ rotation.T
    t1 = (radius * d_theta @ UNFOLDING_AXES) @ rotation.T
    t2 = (radius * d_phi @ UNFOLDING_AXES) @ rotation.T
    w = weights.reshape(-1)

    total = 0.0
    for start in range(0, len(points), chunk):
        span = slice(start, start + chunk)
        v = curvature_spectral_batch(points[span], a)
        total += float(np.einsum("nrs,nr,ns,n->", v, t1[span], t2[span], w[span]))
    return total


def monopole_flux(direction, radius: float, a: int, offset=None) -> float:
    """
    Flux of V⁽ᵃ⁾ through the sphere e₈ + offset + radius·S² in the (ξ₁, ξ₂, ξ₃)
    subspace, transported onto the given Σ₁₂ direction. Outward orientation:
    level 1 carries +2π, level 2 −2π, level 3 none.
    """
    check_level(a)
    cfg = get_config()
    shift = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
    if shift.shape != (3,):
        raise InvalidInputError("sphere offset must be a 3-vector in the unfolding subspace")
    if radius <= 0:
        raise QuadratureError("sphere radius must be positive")
    # rest-frame sphere meets Σ₂₃ once |(ξ₁, ξ₂, ξ₃)| reaches √3
    if np.linalg.norm(shift) + radius >= SQRT3:
        raise QuadratureError(f"sphere of radius {radius} at offset {shift} reaches Σ₂₃")

    frame = sigma12_frame(direction)
    rotation = adjoint_matrices(frame)
    center = np.eye(8)[7] + shift @ UNFOLDING_AXES

    order = int(cfg.get("quadrature.start_order", 8))
    max_order = int(cfg.get("quadrature.max_order", 128))
    tol = cfg.get("quadrature.flux_tolerance", 1e-4) * 2 * math.pi
    chunk = int(cfg.get("quadrature.chunk_size", 8192))

    previous = _sphere_flux(order, rotation, center, radius, a, chunk)
    while order < max_order:
        order *= 2
        current = _sphere_flux(order, rotation, center, radius, a, chunk)
        Logger.numerics(LogCategory.CURVATURE, f"monopole order {order}: flux {current:.10f}")
        if abs(current - previous) < tol:
            return current
        previous = current
    raise QuadratureError(f"monopole flux did not converge by order {max_order}")
