"""
Invariant suites runnable without pytest (the `selfcheck` command).
Each suite returns a SuiteResult with its worst observed deviation.
"""
import math
import time
from typing import Callable, Dict, List, Optional

import numpy as np

from src.components.data_components import SuiteResult
from src.components.tags import LEVELS
from src.core.config_manager import get_config
from src.core.su3_algebra import (
    F_TABLE,
    D_TABLE,
    SQRT3,
    TABULATED_D,
    TABULATED_F,
    adjoint_matrix,
    determinant,
    hamiltonian,
    random_special_unitary,
)
from src.systems import berry_curvature as bc
from src.systems import tensor_decomposition as td
from src.systems.degeneracy_limits import approach_profile, gap_asymptotic, monopole_flux
from src.systems.holonomy import (
    boundary_loop,
    loop_phase,
    phase_sum_rule_check,
    surface_flux,
    wrap_phase,
)
from src.systems.spectrum import closed_form_energies, refined_energies, rest_frame
from src.utils.logger import Logger, LogCategory
from src.world.parameter_space import (
    basis_vector,
    flat_patch,
    polar_circle,
    random_generic_octets,
    random_octets,
    random_rest_frames,
    rest_frame_point,
    sphere_patch,
)


def _result(name: str, detail: Dict[str, float], limits: Dict[str, float]) -> SuiteResult:
    failed = [k for k, limit in limits.items() if not detail[k] <= limit]
    message = None if not failed else "exceeded: " + ", ".join(f"{k}={detail[k]:.3e}" for k in failed)
    return SuiteResult(name=name, passed=not failed, detail=detail, message=message)


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1e-300, float(np.max(np.abs(b)))))


def suite_structure_constants(rng, counts) -> SuiteResult:
    worst = 0.0
    for table, tabulated in ((F_TABLE, TABULATED_F), (D_TABLE, TABULATED_D)):
        for (r, s, t), value in tabulated.items():
            worst = max(worst, abs(table[r - 1, s - 1, t - 1] - value))
    antisym = float(np.max(np.abs(F_TABLE + np.transpose(F_TABLE, (1, 0, 2)))))
    return _result("structure_constants", {"table_error": worst, "antisymmetry": antisym},
                   {"table_error": 1e-14, "antisymmetry": 1e-15})


def suite_spectrum(rng, counts) -> SuiteResult:
    xis = random_octets(rng, counts["spectrum_samples"])
    energies, *_ , norms = closed_form_energies(xis)
    dense = np.sort(np.linalg.eigvalsh(hamiltonian(np.zeros(len(xis)), xis)), axis=1)[:, ::-1]
    err = float(np.max(np.abs(energies - dense) / norms[:, None]))
    return _result("spectrum", {"eigenvalue_error": err}, {"eigenvalue_error": 1e-10})


def suite_rest_frame_table(rng, counts) -> SuiteResult:
    worst = 0.0
    for point in random_rest_frames(rng, counts["rest_frame_samples"]):
        s = refined_energies(point)
        for a in LEVELS:
            worst = max(worst, _relative(bc.curvature_spectral(point, a).coefficients,
                                         bc.curvature_rest_frame(s, a).coefficients))
    return _result("rest_frame_table", {"relative_error": worst}, {"relative_error": 1e-10})


def suite_routes(rng, counts) -> SuiteResult:
    worst_t, worst_p = 0.0, 0.0
    for xi in random_generic_octets(rng, counts["route_samples"]):
        for a in LEVELS:
            spectral = bc.curvature_spectral(xi, a).coefficients
            worst_t = max(worst_t, _relative(bc.curvature_transported(xi, a).coefficients, spectral))
            worst_p = max(worst_p, _relative(td.curvature_from_parts(xi, a).coefficients, spectral))
    return _result("three_routes", {"transported": worst_t, "parts": worst_p},
                   {"transported": 1e-9, "parts": 1e-9})


def suite_decomposition(rng, counts) -> SuiteResult:
    worst = 0.0
    for t in td.antisymmetric_basis():
        back = td.reconstitute(td.project_irreducible(td.to_tensor_components(t))).components
        worst = max(worst, float(np.max(np.abs(back - t))))
    s = refined_energies(rest_frame_point(0.7, 1.3))
    parts = td.project_irreducible(td.to_tensor_components(bc.curvature_rest_frame(s, 1).coefficients))
    expected = 1j * (1 / s.e13 ** 2 - 1 / s.e12 ** 2)
    irr = abs(parts.w[0, 1, 2] - expected)
    return _result("decomposition", {"round_trip": worst, "rest_frame_w123": irr},
                   {"round_trip": 1e-12, "rest_frame_w123": 1e-10})


def suite_sum_rules(rng, counts) -> SuiteResult:
    level_sum, fd = 0.0, 0.0
    for xi in random_generic_octets(rng, counts["sum_rule_samples"]):
        total = sum(bc.curvature_spectral(xi, a).coefficients for a in LEVELS)
        level_sum = max(level_sum, float(np.max(np.abs(total))))
    for xi in random_generic_octets(rng, counts["fd_samples"], min_gap_ratio=0.2):
        fd = max(fd, _relative(bc.sum_rule_finite_difference(xi), bc.weighted_sum(xi)))
    s = refined_energies(rest_frame_point(0.4, 0.9))
    w = bc.weighted_sum(rest_frame_point(0.4, 0.9))
    rest = max(abs(w[0, 1] - 0.5 / s.e12), abs(w[3, 4] - 0.5 / s.e13), abs(w[5, 6] - 0.5 / s.e23))
    return _result("sum_rules", {"level_sum": level_sum, "weighted_rest": rest, "finite_difference": fd},
                   {"level_sum": 1e-10, "weighted_rest": 1e-10, "finite_difference": 1e-5})


def suite_monopole(rng, counts) -> SuiteResult:
    profile = approach_profile([1e-3], 1)[0]
    # e₈ first, then random points of Σ₁₂ reached by the adjoint action
    directions = [basis_vector(8)] + [
        adjoint_matrix(random_special_unitary(rng)).matrix @ basis_vector(8)
        for _ in range(counts["monopole_directions"])
    ]
    worst = {1: 0.0, 2: 0.0, 3: 0.0}
    for n in directions:
        for a in LEVELS:
            flux = monopole_flux(n, 1e-3, a)
            error = abs(flux) if a == 3 else abs(abs(flux) - 2 * math.pi) / (2 * math.pi)
            worst[a] = max(worst[a], error)
    detail = {
        "approach_12": abs(profile[0] - 0.5),
        "approach_45": abs(profile[1]),
        "flux_level1": worst[1],
        "flux_level2": worst[2],
        "flux_level3": worst[3],
    }
    return _result("monopole", detail, {"approach_12": 5e-3, "approach_45": 1e-3, "flux_level1": 1e-2,
                                         "flux_level2": 1e-2, "flux_level3": 1e-3})


def suite_holonomy(rng, counts) -> SuiteResult:
    theta = 1.0
    path = polar_circle(theta, 1e-2, counts["loop_samples"])
    phase = loop_phase(path, 1)
    half_angle = -math.pi * (1 - math.cos(theta))
    levels = phase_sum_rule_check(path)
    return _result("holonomy", {"half_solid_angle": abs(phase - half_angle), "level_sum": abs(levels.total)},
                   {"half_solid_angle": 1e-3, "level_sum": 1e-3})


def _random_bent_patch(rng, grid: int):
    """Small bent square around a random generic point, in a random orientation."""
    centre = random_generic_octets(rng, 1, min_gap_ratio=0.2)[0]
    axes = np.linalg.qr(rng.normal(size=(8, 3)))[0].T
    width = 0.03 * float(np.linalg.norm(centre))
    return flat_patch(centre, axes[:2], width, (grid, grid), bend=0.5 / width, bend_axis=axes[2])


def suite_stokes(rng, counts) -> SuiteResult:
    g = counts["patch_grid"]
    patch = sphere_patch(basis_vector(8), 1e-2, (g, g), theta_range=(0.0, 1.2))
    flux = surface_flux(patch, 1)
    phase = loop_phase(boundary_loop(patch), 1)
    random_worst = 0.0
    for _ in range(counts["stokes_patches"]):
        bent = _random_bent_patch(rng, counts["stokes_patch_grid"])
        a = int(rng.integers(1, 4))
        random_worst = max(random_worst, abs(wrap_phase(loop_phase(boundary_loop(bent), a) + surface_flux(bent, a))))
    closed = surface_flux(sphere_patch(rest_frame_point(0.8, 0.6), 0.1, (g, g)), 1)
    detail = {"loop_vs_flux": abs(wrap_phase(phase + flux)), "random_patches": random_worst,
              "closed_surface": abs(closed)}
    return _result("stokes", detail, {"loop_vs_flux": 1e-3, "random_patches": 1e-3, "closed_surface": 1e-4})


def suite_gap_asymptotics(rng, counts) -> SuiteResult:
    near12 = basis_vector(8) + 1e-3 * basis_vector(3)
    near23 = rest_frame_point(1.0, 1e-3)
    errors = {}
    for name, point in (("sigma12", near12), ("sigma23", near23)):
        g = gap_asymptotic(point)
        errors[name] = abs(g.predicted - g.actual) / g.actual
    return _result("gap_asymptotics", errors, {"sigma12": 1e-2, "sigma23": 1e-2})


def suite_discrepancy_ledger(rng, counts) -> SuiteResult:
    """Corrected determinant coefficient and rest-frame ξ₈."""
    det_err, xi8_err = 0.0, 0.0
    for xi in random_octets(rng, counts["route_samples"], 0.5, 2.0):
        h = hamiltonian(0.0, xi)
        norm = float(np.linalg.norm(xi))
        det_err = max(det_err, abs(float(np.linalg.det(h).real) - determinant(xi)) / norm ** 3)
        e1, e2, e3 = np.sort(np.linalg.eigvalsh(h))[::-1]
        xi8_err = max(xi8_err, abs(rest_frame(xi)[7] - ((e1 - e3) + (e2 - e3)) / SQRT3) / norm)
    return _result("discrepancy_ledger", {"det_identity": det_err, "rest_frame_xi8": xi8_err},
                   {"det_identity": 1e-12, "rest_frame_xi8": 1e-12})


SUITES: Dict[str, Callable] = {
    "structure_constants": suite_structure_constants,
    "spectrum": suite_spectrum,
    "rest_frame_table": suite_rest_frame_table,
    "three_routes": suite_routes,
    "decomposition": suite_decomposition,
    "sum_rules": suite_sum_rules,
    "monopole": suite_monopole,
    "holonomy": suite_holonomy,
    "stokes": suite_stokes,
    "gap_asymptotics": suite_gap_asymptotics,
    "discrepancy_ledger": suite_discrepancy_ledger,
}


def run_suites(seed: Optional[int] = None, only: Optional[List[str]] = None) -> List[SuiteResult]:
    cfg = get_config()
    if seed is None:
        seed = cfg.get("selfcheck.seed", 20240611)
    counts = {
        "spectrum_samples": cfg.get("selfcheck.spectrum_samples", 10000),
        "rest_frame_samples": cfg.get("selfcheck.rest_frame_samples", 100),
        "route_samples": cfg.get("selfcheck.route_samples", 500),
        "sum_rule_samples": cfg.get("selfcheck.sum_rule_samples", 20),
        "fd_samples": cfg.get("selfcheck.fd_samples", 3),
        "loop_samples": cfg.get("selfcheck.loop_samples", 2000),
        "patch_grid": cfg.get("selfcheck.patch_grid", 60),
        "stokes_patches": cfg.get("selfcheck.stokes_patches", 50),
        "stokes_patch_grid": cfg.get("selfcheck.stokes_patch_grid", 20),
        "monopole_directions": cfg.get("selfcheck.monopole_directions", 10),
    }
    results = []
    for name, suite in SUITES.items():
        if only and name not in only:
            continue
        rng = np.random.default_rng(seed)
        started = time.perf_counter()
        try:
            result = suite(rng, counts)
        except Exception as e:
            result = SuiteResult(name=name, passed=False, message=f"{type(e).__name__}: {e}")
        status = "PASS" if result.passed else "FAIL"
        Logger.log(LogCategory.SYSTEM,
                   f"selfcheck {name}: {status} ({time.perf_counter() - started:.2f}s)"
                   + (f" {result.message}" if result.message else ""))
        results.append(result)
    return results
