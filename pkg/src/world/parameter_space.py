"""Generators for points, loops and surface patches in the octet parameter space."""
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from src.components.data_components import LoopPath, SurfacePatch
from src.core.errors import InvalidInputError
from src.core.su3_algebra import SQRT3, as_octet
from src.systems.spectrum import closed_form_energies

# Unfolding directions of the upper degeneracy at e₈ (components 1, 2, 3)
UNFOLDING_AXES = np.eye(8)[:3]


def basis_vector(r: int) -> np.ndarray:
    if not 1 <= r <= 8:
        raise InvalidInputError(f"basis index must be in 1..8, got {r}")
    return np.eye(8)[r - 1]


def rest_frame_point(e12: float, e23: float) -> np.ndarray:
    """Rest-frame octet with the given gaps: ξ₃ = E₁₂, ξ₈ = (E₁₃ + E₂₃)/√3."""
    if e12 < 0 or e23 < 0:
        raise InvalidInputError("gaps must be nonnegative")
    xi = np.zeros(8)
    xi[2] = e12
    xi[7] = (e12 + 2 * e23) / SQRT3
    return xi


def random_octets(rng: np.random.Generator, count: int, rmin: float = 1e-3, rmax: float = 1e3) -> np.ndarray:
    """Isotropic directions with log-uniform radius in [rmin, rmax]."""
    if not 0 < rmin <= rmax:
        raise InvalidInputError("radius range must satisfy 0 < rmin <= rmax")
    directions = rng.normal(size=(count, 8))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = np.exp(rng.uniform(math.log(rmin), math.log(rmax), size=count))
    return directions * radii[:, None]


def random_generic_octets(rng: np.random.Generator, count: int, min_gap_ratio: float = 0.05,
                          rmin: float = 0.5, rmax: float = 2.0) -> np.ndarray:
    """Random octets whose smaller gap is at least min_gap_ratio·|ξ|."""
    out = []
    while len(out) < count:
        batch = random_octets(rng, 2 * count, rmin, rmax)
        _, _, e12, e23, norms = closed_form_energies(batch)
        keep = np.minimum(e12, e23) >= min_gap_ratio * norms
        out.extend(batch[keep])
    return np.array(out[:count])


def random_rest_frames(rng: np.random.Generator, count: int, low: float = 0.1, high: float = 2.0) -> np.ndarray:
    gaps = rng.uniform(low, high, size=(count, 2))
    return np.array([rest_frame_point(g12, g23) for g12, g23 in gaps])


def _orthonormal(axes: Sequence[np.ndarray], count: int) -> np.ndarray:
    frame = np.array([as_octet(a) for a in axes])
    if frame.shape != (count, 8) or not np.allclose(frame @ frame.T, np.eye(count), atol=1e-10):
        raise InvalidInputError(f"expected {count} orthonormal 8-vectors")
    return frame


def circle_loop(center, axes: Sequence[np.ndarray], radius: float, samples: int) -> LoopPath:
    """center + r(cos t·a₁ + sin t·a₂), t over [0, 2π) without repeating the start."""
    if radius <= 0 or samples < 1:
        raise InvalidInputError("circle needs a positive radius and at least one sample")
    c = as_octet(center)
    a1, a2 = _orthonormal(axes, 2)
    t = 2 * math.pi * np.arange(samples) / samples
    return LoopPath(c + radius * (np.cos(t)[:, None] * a1 + np.sin(t)[:, None] * a2))


def polar_circle(theta: float, radius: float, samples: int, center: Optional[np.ndarray] = None,
                 axes: Optional[Sequence[np.ndarray]] = None) -> LoopPath:
    """
    Circle of polar angle θ on the sphere of the given radius around center
    (default e₈), in the frame spanned by axes (default ξ₁, ξ₂, ξ₃; the third is the pole).
    """
    c = basis_vector(8) if center is None else as_octet(center)
    frame = UNFOLDING_AXES if axes is None else _orthonormal(axes, 3)
    phi = 2 * math.pi * np.arange(samples) / samples
    local = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                      np.full(samples, math.cos(theta))], axis=1)
    return LoopPath(c + radius * local @ frame)


def sphere_patch(center, radius: float, grid: Tuple[int, int],
                 theta_range: Tuple[float, float] = (0.0, math.pi),
                 axes: Optional[Sequence[np.ndarray]] = None) -> SurfacePatch:
    """
    u → θ over theta_range, v → φ over [0, 2π]; the (u, v) orientation is the
    outward normal. A full θ range gives a closed sphere.
    """
    nu, nv = grid
    if radius <= 0 or nu < 2 or nv < 2:
        raise InvalidInputError("sphere patch needs a positive radius and a grid of at least 2x2")
    c = as_octet(center)
    frame = UNFOLDING_AXES if axes is None else _orthonormal(axes, 3)
    theta = np.linspace(theta_range[0], theta_range[1], nu)[:, None]
    phi = np.linspace(0.0, 2 * math.pi, nv)[None, :]
    local = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                      np.cos(theta) * np.ones_like(phi)], axis=2)
    return SurfacePatch(c + radius * local @ frame)


def flat_patch(center, axes: Sequence[np.ndarray], half_width: float, grid: Tuple[int, int],
               bend: float = 0.0, bend_axis: Optional[np.ndarray] = None) -> SurfacePatch:
    """Square patch center + x·a₁ + y·a₂, optionally bent along bend_axis by bend·(x² + y²)."""
    nu, nv = grid
    c = as_octet(center)
    a1, a2 = _orthonormal(axes, 2)
    x = np.linspace(-half_width, half_width, nu)[:, None, None]
    y = np.linspace(-half_width, half_width, nv)[None, :, None]
    samples = c + x * a1 + y * a2
    if bend:
        normal = as_octet(bend_axis)
        samples = samples + bend * (x ** 2 + y ** 2) * normal
    return SurfacePatch(samples)


def degeneracy_ray(deltas) -> np.ndarray:
    """Points e₈ + δe₃ approaching Σ₁₂ as δ → 0."""
    d = np.asarray(deltas, dtype=float)
    points = np.zeros((len(d), 8))
    points[:, 7] = 1.0
    points[:, 2] = d
    return points
