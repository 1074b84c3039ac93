"""
The su3holo command line.

    su3holo classify --xi 0,0,0,0,0,0,0,1
    su3holo curvature --xi 0,0,0.5,0,0,0,0,1.2 --level 1 --route all
    su3holo sweep --descriptor sweep.json --threads 8 --output sweep.csv
    su3holo selfcheck

Every command returns a payload built only from library calls; run() writes it
as JSON (or CSV for sweep) and maps errors onto exit codes.
"""
import argparse
import itertools
import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from src.cli.artifacts import write_csv, write_json
from src.cli.descriptor import (
    JobDescriptor,
    build_loop,
    build_patch,
    check_format,
    config_overrides,
    expand_points,
    from_mapping,
    load_descriptor,
    parse_levels,
    parse_xi,
)
from src.components.data_components import SLOTS
from src.components.tags import LEVELS, CurvatureRoute, DegeneracyClass
from src.core.config_manager import ConfigManager, get_config, set_config
from src.core.errors import DegenerateInputError, DescriptorError, Su3HoloError, UsageError
from src.core.su3_algebra import determinant, invariants
from src.systems import berry_curvature as bc
from src.systems import tensor_decomposition as td
from src.systems.degeneracy_limits import monopole_flux
from src.systems.holonomy import boundary_loop, loop_phase, phase_sum_rule_check, surface_flux, wrap_phase
from src.systems.job_system import JobSystem
from src.systems.selfcheck import SUITES, run_suites
from src.systems.spectrum import classify_batch, eigenframe, refined_energies, rest_frame
from src.utils.logger import Logger, LogCategory

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DEGENERATE = 2

ROUTES = tuple(r.value for r in CurvatureRoute) + ("all",)

# Sweep CSV columns, in order; per-level slot columns follow as l<a>_v12, l<a>_v45, l<a>_v67
SWEEP_COLUMNS = (
    ["index"] + [f"xi_{r}" for r in range(1, 9)]
    + ["degeneracy", "phi", "e1", "e2", "e3", "e12", "e23", "e13"]
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--xi", action="append", help="octet vector as 8 comma-separated numbers (repeatable)")
    common.add_argument("--level", choices=["1", "2", "3", "all"], help="eigenvalue level (default all)")
    common.add_argument("--tol", type=float, help="classification tolerance τ")
    common.add_argument("--quad-tol", type=float, help="relative flux refinement tolerance")
    common.add_argument("--format", choices=["json", "csv"], help="artifact format (csv: sweep only)")
    common.add_argument("--output", help="artifact path (default standard output)")
    common.add_argument("--seed", type=int, help="seed for every random generator")
    common.add_argument("--threads", type=int, help="worker threads (default available parallelism)")
    common.add_argument("--descriptor", help="JSON job descriptor")
    common.add_argument("--config", help="alternative numerics config file")
    common.add_argument("--verbose", action="store_true", help="log quadrature refinement and job timing")

    parser = _Parser(prog="su3holo", description="SU(3) geometric-phase numerics")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("classify", parents=[common], help="degeneracy class, φ and gaps")
    commands.add_parser("spectrum", parents=[common], help="energies, rest frame and diagonalizer")
    curvature = commands.add_parser("curvature", parents=[common], help="Berry curvature two-forms")
    curvature.add_argument("--route", choices=ROUTES, help="evaluation route (default all)")
    commands.add_parser("decompose", parents=[common], help="octet/decouplet decomposition of the curvature")

    loop = commands.add_parser("loop-phase", parents=[common], help="geometric phase along a closed loop")
    loop.add_argument("--theta", type=float, help="polar angle of a circle around e8 (without a descriptor)")
    loop.add_argument("--radius", type=float, default=1e-2)
    loop.add_argument("--samples", type=int, default=2000)

    commands.add_parser("surface-flux", parents=[common], help="curvature flux through a sampled surface")

    mono = commands.add_parser("monopole", parents=[common], help="flux through a small sphere around Σ₁₂")
    mono.add_argument("--direction", default="0,0,0,0,0,0,0,1", help="unit octet vector on Σ₁₂")
    mono.add_argument("--radius", type=float, default=1e-2)
    mono.add_argument("--offset", help="sphere centre shift in the (ξ₁, ξ₂, ξ₃) subspace")

    commands.add_parser("sweep", parents=[common], help="table of spectra and rest-frame curvature over points")

    check = commands.add_parser("selfcheck", parents=[common], help="run the invariant suites")
    check.add_argument("--suite", action="append", choices=sorted(SUITES), help="restrict to a suite (repeatable)")
    return parser


def _descriptor(args: argparse.Namespace) -> JobDescriptor:
    raw = load_descriptor(args.descriptor) if args.descriptor else {}
    if args.descriptor:
        Logger.debug(f"descriptor {args.descriptor}: fields {sorted(raw)}")
    desc = from_mapping(raw, args.command)
    if args.xi:
        desc.xi = [parse_xi(text) for text in args.xi]
    if args.level:
        desc.levels = parse_levels(args.level)
    if args.tol is not None:
        desc.tolerances["classify"] = args.tol
    if args.quad_tol is not None:
        desc.tolerances["quadrature"] = args.quad_tol
    for key, value in desc.tolerances.items():
        if not value > 0:
            raise DescriptorError(f"tolerances.{key}", "must be a positive number")
    if args.format:
        desc.output_format = args.format
    if args.output:
        desc.output_path = args.output
    if args.seed is not None:
        desc.seed = args.seed
    desc.threads = args.threads
    if getattr(args, "route", None):
        desc.route = args.route
    if desc.route not in ROUTES:
        raise DescriptorError("route", f"expected one of {ROUTES}, got {desc.route!r}")
    check_format(desc)
    return desc


def _rng(desc: JobDescriptor) -> np.random.Generator:
    seed = desc.seed
    if desc.generator and "seed" in desc.generator:
        seed = desc.generator["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise DescriptorError("generator.seed", f"expected an integer, got {seed!r}")
    return np.random.default_rng(0 if seed is None else seed)


def _classified(desc: JobDescriptor, require_generic: bool):
    """Expanded ξ rows and their degeneracy classes."""
    points = expand_points(desc, _rng(desc))
    classes = classify_batch(points)
    if require_generic:
        for k, kind in enumerate(classes):
            if kind is not DegeneracyClass.GENERIC:
                raise DegenerateInputError(f"point {k} is {kind.value}; {desc.command} needs a simple spectrum", kind)
    return points, classes


def _points(desc: JobDescriptor, require_generic: bool) -> np.ndarray:
    return _classified(desc, require_generic)[0]


def _one_or_many(items: List[Dict[str, Any]]) -> Any:
    return items[0] if len(items) == 1 else items


def _gaps(s) -> Dict[str, float]:
    return {"e12": s.e12, "e23": s.e23, "e13": s.e13}


def cmd_classify(desc: JobDescriptor, args) -> Any:
    items = []
    for xi in _points(desc, require_generic=False):
        s = refined_energies(xi)
        items.append({
            "xi": xi,
            "class": s.degeneracy,
            "phi": s.phi,
            "gaps": _gaps(s),
            "orbit_dimension": s.degeneracy.orbit_dimension,
        })
    return _one_or_many(items)


def cmd_spectrum(desc: JobDescriptor, args) -> Any:
    items = []
    for xi in _points(desc, require_generic=False):
        s = refined_energies(xi)
        quadratic, cubic = invariants(xi)
        entry = {
            "xi": xi,
            "class": s.degeneracy,
            "phi": s.phi,
            "energies": s.energies,
            "gaps": _gaps(s),
            "invariants": {"quadratic": quadratic, "cubic": cubic, "determinant": determinant(xi)},
            "rest_frame": rest_frame(xi),
        }
        if s.degeneracy is DegeneracyClass.GENERIC:
            entry["diagonalizer"] = eigenframe(xi)
        items.append(entry)
    return _one_or_many(items)


_ROUTE_CALLS: Dict[str, Callable] = {
    CurvatureRoute.SPECTRAL.value: bc.curvature_spectral,
    CurvatureRoute.TRANSPORTED.value: bc.curvature_transported,
    CurvatureRoute.PARTS.value: td.curvature_from_parts,
}


def cmd_curvature(desc: JobDescriptor, args) -> Any:
    routes = list(_ROUTE_CALLS) if desc.route == "all" else [desc.route]
    items = []
    for xi in _points(desc, require_generic=True):
        levels = {}
        for a in desc.levels:
            forms = {route: _ROUTE_CALLS[route](xi, a).coefficients for route in routes}
            entry: Dict[str, Any] = dict(forms)
            if len(routes) > 1:
                entry["max_deviation"] = max(
                    float(np.max(np.abs(forms[p] - forms[q]))) for p, q in itertools.combinations(routes, 2)
                )
            levels[str(a)] = entry
        items.append({"xi": xi, "levels": levels})
    return _one_or_many(items)


def cmd_decompose(desc: JobDescriptor, args) -> Any:
    items = []
    for xi in _points(desc, require_generic=True):
        rest = rest_frame(xi)
        levels = {}
        for a in desc.levels:
            v = bc.curvature_spectral(xi, a).coefficients
            parts = td.project_irreducible(td.to_tensor_components(v))
            coeffs = td.octet_coefficients(a, rest)
            levels[str(a)] = {
                "x": parts.x,
                "w": parts.w,
                "w_bar": parts.w_bar,
                "octet_coefficients": {"lam": coeffs.lam, "mu": coeffs.mu, "prefactor": coeffs.prefactor},
                "octet_part": td.octet_part(xi, a).coefficients,
                "decouplet_part": td.decouplet_part(xi, a).coefficients,
            }
        items.append({"xi": xi, "rest_frame": rest, "levels": levels})
    return _one_or_many(items)


def cmd_loop_phase(desc: JobDescriptor, args) -> Any:
    spec = desc.generator
    if spec is None and args.theta is not None:
        spec = {"kind": "polar_circle", "theta": args.theta, "radius": args.radius, "samples": args.samples}
    path = build_loop(spec)
    if desc.levels == LEVELS:
        result = phase_sum_rule_check(path)
        return {"samples": len(path.samples), "phases": dict(zip(map(str, LEVELS), result.phases)),
                "sum": result.total}
    return {"samples": len(path.samples), "phases": {str(a): loop_phase(path, a) for a in desc.levels}}


def cmd_surface_flux(desc: JobDescriptor, args) -> Any:
    patch = build_patch(desc.generator)
    boundary = boundary_loop(patch)
    levels = {}
    for a in desc.levels:
        flux = surface_flux(patch, a, threads=desc.threads)
        phase = loop_phase(boundary, a)
        levels[str(a)] = {"flux": flux, "boundary_phase": phase, "stokes_defect": abs(wrap_phase(phase + flux))}
    return {"grid": list(patch.shape), "levels": levels}


def cmd_monopole(desc: JobDescriptor, args) -> Any:
    direction = np.asarray(parse_xi(args.direction, "direction"))
    offset = None
    if args.offset:
        try:
            offset = [float(part) for part in args.offset.split(",")]
        except ValueError:
            raise DescriptorError("offset", f"cannot parse {args.offset!r}")
        if len(offset) != 3:
            raise DescriptorError("offset", "expected 3 components")
    expected = {1: 2 * math.pi, 2: -2 * math.pi, 3: 0.0}
    levels = {
        str(a): {"flux": monopole_flux(direction, args.radius, a, offset), "expected": expected[a]}
        for a in desc.levels
    }
    return {"direction": direction, "radius": args.radius, "offset": offset, "levels": levels}


def _sweep_row(levels, payload) -> Dict[str, Any]:
    index, xi, kind = payload
    row: Dict[str, Any] = {"index": index}
    row.update({f"xi_{r + 1}": float(xi[r]) for r in range(8)})
    row["degeneracy"] = kind.value
    if kind is DegeneracyClass.TRIPLE_DEGENERATE:
        s = None
    else:
        s = refined_energies(xi)
    for key in ("phi", "e1", "e2", "e3", "e12", "e23", "e13"):
        row[key] = getattr(s, key) if s is not None else math.nan
    for a in levels:
        if kind is DegeneracyClass.GENERIC:
            values = bc.rest_frame_coefficients(s.e12, s.e23, s.e13, a)
        else:
            values = (math.nan,) * len(SLOTS)
        row.update({f"l{a}_v{slot}": v for slot, v in zip(SLOTS, values)})
    return row


def cmd_sweep(desc: JobDescriptor, args) -> pd.DataFrame:
    points, classes = _classified(desc, require_generic=False)
    jobs = JobSystem(desc.threads)
    jobs.submit("point", [(k, xi, kind) for k, (xi, kind) in enumerate(zip(points, classes))])
    rows = jobs.run(lambda payload: _sweep_row(desc.levels, payload))
    Logger.log(LogCategory.CLI, f"sweep: {len(rows)} points on {jobs.threads} threads")
    columns = SWEEP_COLUMNS + [f"l{a}_v{slot}" for a in desc.levels for slot in SLOTS]
    return pd.DataFrame(rows, columns=columns)


def cmd_selfcheck(desc: JobDescriptor, args) -> Any:
    results = run_suites(seed=desc.seed, only=args.suite)
    passed = sum(1 for r in results if r.passed)
    return {
        "passed": passed,
        "failed": len(results) - passed,
        "suites": [
            {"name": r.name, "passed": r.passed, "detail": r.detail, "message": r.message} for r in results
        ],
    }


COMMANDS: Dict[str, Callable] = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "curvature": cmd_curvature,
    "decompose": cmd_decompose,
    "loop-phase": cmd_loop_phase,
    "surface-flux": cmd_surface_flux,
    "monopole": cmd_monopole,
    "sweep": cmd_sweep,
    "selfcheck": cmd_selfcheck,
}


def _emit(desc: JobDescriptor, payload: Any):
    try:
        if isinstance(payload, pd.DataFrame):
            if desc.output_format == "csv":
                write_csv(payload, desc.output_path)
            else:
                write_json(payload.to_dict(orient="records"), desc.output_path)
            return
        write_json(payload, desc.output_path)
    except OSError as e:
        raise DescriptorError("output.path", f"cannot write {desc.output_path}: {e.strerror or e}")


def run(argv: Optional[List[str]] = None) -> int:
    # 0. Parse Arguments
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        Logger.error(f"usage: {e}")
        return EXIT_FAILURE

    Logger.set_verbose(args.verbose)
    Logger.set_job(args.command)
    previous = get_config()
    try:
        # 1. Configuration
        if args.config:
            set_config(ConfigManager(args.config))
        desc = _descriptor(args)
        set_config(get_config().override(config_overrides(desc)))

        # 2. Evaluate
        payload = COMMANDS[args.command](desc, args)

        # 3. Emit
        _emit(desc, payload)
    except DegenerateInputError as e:
        Logger.error(f"degenerate input: {e}")
        return EXIT_DEGENERATE
    except Su3HoloError as e:
        Logger.error(str(e))
        return EXIT_FAILURE
    finally:
        set_config(previous)
        Logger.set_job(None)

    if args.command == "selfcheck" and payload["failed"]:
        return EXIT_FAILURE
    return EXIT_OK
