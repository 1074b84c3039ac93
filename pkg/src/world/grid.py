import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from src.core.errors import InvalidInputError

# Two-point Gauss-Legendre rule on [0, 1]
GAUSS_NODES = (0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0))
GAUSS_WEIGHT = 0.5


@dataclass
class GridConfig:
    nu: int
    nv: int
    chunk_size: int = 8192


class Grid:
    """
    Uniform (u, v) sampling of a surface in R⁸, bilinear between samples.
    data[i, j] is the point at u = i/(nu−1), v = j/(nv−1).
    """

    def __init__(self, samples: np.ndarray, chunk_size: int = 8192):
        data = np.asarray(samples, dtype=float)
        if data.ndim != 3 or data.shape[2] != 8 or data.shape[0] < 2 or data.shape[1] < 2:
            raise InvalidInputError(f"grid samples must have shape (nu>=2, nv>=2, 8), got {data.shape}")
        if chunk_size < 1:
            raise InvalidInputError("chunk size must be positive")
        self.data = data
        self.config = GridConfig(nu=data.shape[0], nv=data.shape[1], chunk_size=chunk_size)

    @property
    def nu(self) -> int:
        return self.config.nu

    @property
    def nv(self) -> int:
        return self.config.nv

    def boundary_indices(self) -> List[Tuple[int, int]]:
        """Counter-clockwise walk: v = 0, u = 1, v = 1 (backwards), u = 0 (backwards)."""
        nu, nv = self.nu, self.nv
        walk = [(i, 0) for i in range(nu - 1)]
        walk += [(nu - 1, j) for j in range(nv - 1)]
        walk += [(i, nv - 1) for i in range(nu - 1, 0, -1)]
        walk += [(0, j) for j in range(nv - 1, 0, -1)]
        return walk

    def boundary_samples(self) -> np.ndarray:
        idx = self.boundary_indices()
        return np.array([self.data[i, j] for i, j in idx])

    def cell_quadrature(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        2×2 Gauss points of every bilinear cell in local coordinates (s, t) ∈ [0,1]².
        Returns (points, ∂ξ/∂s, ∂ξ/∂t, weights), each flattened over cells and nodes.
        """
        d = self.data
        p00, p10 = d[:-1, :-1], d[1:, :-1]
        p01, p11 = d[:-1, 1:], d[1:, 1:]
        points, du, dv = [], [], []
        for s in GAUSS_NODES:
            for t in GAUSS_NODES:
                points.append((1 - s) * (1 - t) * p00 + s * (1 - t) * p10 + (1 - s) * t * p01 + s * t * p11)
                du.append((1 - t) * (p10 - p00) + t * (p11 - p01))
                dv.append((1 - s) * (p01 - p00) + s * (p11 - p10))
        def flat(blocks):
            return np.stack(blocks, axis=2).reshape(-1, 8)

        pts = flat(points)
        weights = np.full(len(pts), GAUSS_WEIGHT * GAUSS_WEIGHT)
        return pts, flat(du), flat(dv), weights

    def chunks(self, count: int) -> Iterator[slice]:
        size = self.config.chunk_size
        for start in range(0, count, size):
            yield slice(start, min(start + size, count))
