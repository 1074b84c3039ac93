"""
Discrete geometric phases and curvature fluxes.

loop_phase uses the Bargmann product Π⟨a;ξ_k|a;ξ_{k+1}⟩, which is invariant
under any re-phasing of the eigenvectors. With the (u, v) orientation of a
patch and its counter-clockwise boundary,
    loop_phase(∂S) ≡ −surface_flux(S)  (mod 2π).
"""
import math
from typing import Dict, Iterable, Optional

import numpy as np

from src.components.data_components import LoopPath, PhaseSumResult, SurfacePatch
from src.components.tags import LEVELS
from src.core.config_manager import get_config
from src.core.errors import ResolutionError
from src.systems.berry_curvature import check_level, curvature_spectral_batch
from src.systems.job_system import JobSystem
from src.systems.spectrum import eigenframes
from src.utils.logger import Logger, LogCategory
from src.world.grid import Grid


def wrap_phase(angle: float) -> float:
    """Maps onto (−π, π]."""
    wrapped = math.remainder(angle, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _loop_phases(path: LoopPath, levels: Iterable[int], guard: Optional[float]) -> Dict[int, float]:
    if guard is None:
        guard = get_config().get("holonomy.overlap_guard", 0.1)
    frames = eigenframes(path.samples).frames
    following = np.roll(frames, -1, axis=0)
    phases = {}
    for a in levels:
        check_level(a)
        vecs, nxt = frames[:, :, a - 1], following[:, :, a - 1]
        overlaps = np.einsum("ka,ka->k", vecs.conj(), nxt)
        sizes = np.abs(overlaps)
        worst = int(np.argmin(sizes))
        if sizes[worst] < guard:
            raise ResolutionError(
                f"level {a}: overlap {sizes[worst]:.3e} between samples {worst} and "
                f"{(worst + 1) % len(sizes)} is below the guard {guard}"
            )
        # running product of unit factors
        total = complex(1.0)
        for z in overlaps / sizes:
            total *= z
            total /= abs(total)
        phases[a] = wrap_phase(-math.atan2(total.imag, total.real))
    return phases


def loop_phase(path: LoopPath, a: int, guard: Optional[float] = None) -> float:
    return _loop_phases(path, (a,), guard)[a]


def phase_sum_rule_check(path: LoopPath, guard: Optional[float] = None) -> PhaseSumResult:
    phases = _loop_phases(path, LEVELS, guard)
    values = tuple(phases[a] for a in LEVELS)
    return PhaseSumResult(phases=values, total=wrap_phase(sum(values)))


def boundary_loop(patch: SurfacePatch) -> LoopPath:
    """Counter-clockwise boundary of the (u, v) square as a closed loop."""
    return LoopPath(Grid(patch.samples).boundary_samples())


def surface_flux(patch: SurfacePatch, a: int, threads: Optional[int] = None,
                 chunk_size: Optional[int] = None) -> float:
    """
    ∬ ½V⁽ᵃ⁾_rs dξ_r∧dξ_s with a 2×2 Gauss rule on every bilinear cell.
    Tiles of chunk_size points are evaluated independently and summed in order.
    """
    check_level(a)
    if chunk_size is None:
        chunk_size = get_config().get("quadrature.chunk_size", 8192)
    grid = Grid(patch.samples, chunk_size)
    points, du, dv, weights = grid.cell_quadrature()

    def tile(span: slice) -> float:
        v = curvature_spectral_batch(points[span], a)
        return float(np.einsum("nrs,nr,ns,n->", v, du[span], dv[span], weights[span]))

    jobs = JobSystem(threads)
    jobs.submit("tile", list(grid.chunks(len(points))))
    flux = float(sum(jobs.run(tile)))
    Logger.numerics(LogCategory.HOLONOMY, f"surface flux level {a}: {flux:.12f} over {len(points)} nodes")
    return flux
