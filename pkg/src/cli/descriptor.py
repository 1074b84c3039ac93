"""
Job descriptors: the JSON file form and its command-line equivalent.

    {
      "schema": "su3holo/1",
      "command": "sweep",
      "xi": [[0, 0, 1, 0, 0, 0, 0, 2]],          # or "generator": {...}
      "level": 1,                                 # 1, 2, 3 or "all"
      "tolerances": {"classify": 1e-9, "quadrature": 1e-4},
      "output": {"format": "csv", "path": "out.csv"}
    }
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.components.data_components import LoopPath, SurfacePatch
from src.components.tags import LEVELS
from src.core.config_manager import get_config
from src.core.errors import DescriptorError, Su3HoloError
from src.world import parameter_space as ps

FORMATS = ("json", "csv")


@dataclass(slots=True)
class JobDescriptor:
    command: str
    schema: str = "su3holo/1"
    xi: List[List[float]] = field(default_factory=list)
    generator: Optional[Dict[str, Any]] = None
    levels: Tuple[int, ...] = LEVELS
    route: str = "all"
    tolerances: Dict[str, float] = field(default_factory=dict)
    output_format: str = "json"
    output_path: Optional[str] = None
    seed: Optional[int] = None
    threads: Optional[int] = None


def parse_xi(text: str, field_name: str = "xi") -> List[float]:
    try:
        values = [float(part) for part in text.replace(" ", "").split(",")]
    except ValueError:
        raise DescriptorError(field_name, f"cannot parse {text!r} as comma-separated numbers")
    return check_octet(values, field_name)


def check_octet(values, field_name: str = "xi") -> List[float]:
    try:
        v = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise DescriptorError(field_name, "octet vectors must be numeric")
    if v.shape != (8,) or not np.all(np.isfinite(v)):
        raise DescriptorError(field_name, f"expected 8 finite components, got {list(np.ravel(v))}")
    return v.tolist()


def parse_levels(value) -> Tuple[int, ...]:
    if value is None or value == "all":
        return LEVELS
    items = value if isinstance(value, (list, tuple)) else [value]
    try:
        levels = tuple(int(v) for v in items)
    except (TypeError, ValueError):
        raise DescriptorError("level", f"expected 1, 2, 3 or 'all', got {value!r}")
    if not levels or any(a not in LEVELS for a in levels):
        raise DescriptorError("level", f"expected 1, 2, 3 or 'all', got {value!r}")
    return levels


def load_descriptor(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DescriptorError("descriptor", f"cannot read {path}: {e}")
    if not isinstance(raw, dict):
        raise DescriptorError("descriptor", "top level must be an object")
    return raw


def from_mapping(raw: Dict[str, Any], command: str) -> JobDescriptor:
    schema = raw.get("schema", get_config().get("cli.schema", "su3holo/1"))
    if schema != get_config().get("cli.schema", "su3holo/1"):
        raise DescriptorError("schema", f"unsupported schema {schema!r}")
    if raw.get("command", command) != command:
        raise DescriptorError("command", f"descriptor is for {raw['command']!r}, invoked as {command!r}")

    xi = raw.get("xi", [])
    if not isinstance(xi, list):
        raise DescriptorError("xi", f"expected an 8-vector or a list of them, got {xi!r}")
    if xi and not isinstance(xi[0], list):
        xi = [xi]
    seed = raw.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise DescriptorError("seed", f"expected an integer, got {seed!r}")
    desc = JobDescriptor(
        command=command,
        schema=schema,
        xi=[check_octet(v) for v in xi],
        generator=raw.get("generator"),
        levels=parse_levels(raw.get("level")),
        route=raw.get("route", "all"),
        seed=seed,
    )
    if desc.generator is not None and not isinstance(desc.generator, dict):
        raise DescriptorError("generator", "must be an object")

    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise DescriptorError("tolerances", "must be an object")
    for key, value in tolerances.items():
        if key not in ("classify", "quadrature"):
            raise DescriptorError(f"tolerances.{key}", "unknown tolerance")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise DescriptorError(f"tolerances.{key}", "must be a positive number")
    desc.tolerances = dict(tolerances)

    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise DescriptorError("output", "must be an object")
    desc.output_format = output.get("format", "csv" if command == "sweep" else "json")
    desc.output_path = output.get("path")
    if desc.output_path is not None and not isinstance(desc.output_path, str):
        raise DescriptorError("output.path", f"expected a file path, got {desc.output_path!r}")
    check_format(desc)
    return desc


def check_format(desc: JobDescriptor):
    if desc.output_format not in FORMATS:
        raise DescriptorError("output.format", f"expected one of {FORMATS}, got {desc.output_format!r}")
    if desc.output_format == "csv" and desc.command != "sweep":
        raise DescriptorError("output.format", "csv output is only available for sweep")


def config_overrides(desc: JobDescriptor) -> Dict[str, float]:
    mapping = {"classify": "spectrum.classify_tolerance", "quadrature": "quadrature.flux_tolerance"}
    return {mapping[k]: v for k, v in desc.tolerances.items()}


def _vector(spec: Dict[str, Any], key: str, default=None) -> np.ndarray:
    if key not in spec:
        if default is None:
            raise DescriptorError(f"generator.{key}", "missing")
        return np.asarray(default, dtype=float)
    return np.asarray(check_octet(spec[key], f"generator.{key}"))


def _axes(spec: Dict[str, Any], key: str, count: int) -> Optional[List[np.ndarray]]:
    if key not in spec:
        return None
    axes = spec[key]
    if not isinstance(axes, list) or len(axes) != count:
        raise DescriptorError(f"generator.{key}", f"expected {count} orthonormal 8-vectors")
    return [np.asarray(check_octet(a, f"generator.{key}")) for a in axes]


def _number(spec: Dict[str, Any], key: str, default=None, kind=float):
    value = spec.get(key, default)
    if value is None:
        raise DescriptorError(f"generator.{key}", "missing")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DescriptorError(f"generator.{key}", f"expected a number, got {value!r}")
    return kind(value)


def _count(spec: Dict[str, Any], key: str, default=None) -> int:
    value = _number(spec, key, default, int)
    if value < 1:
        raise DescriptorError(f"generator.{key}", f"must be a positive integer, got {value}")
    return value


def _numbers(spec: Dict[str, Any], key: str, length: Optional[int] = None, default=None) -> List[float]:
    values = spec.get(key, default)
    ok = isinstance(values, list) and (length is None or len(values) == length)
    if not ok or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in values):
        shape = f"{length} numbers" if length else "a list of numbers"
        raise DescriptorError(f"generator.{key}", f"expected {shape}, got {values!r}")
    return [float(x) for x in values]


def _pair(p) -> List[float]:
    return _numbers({"pairs": p}, "pairs", 2)


def expand_points(desc: JobDescriptor, rng: np.random.Generator) -> np.ndarray:
    """Explicit ξ rows, or the points of a point generator."""
    if desc.xi:
        return np.array(desc.xi)
    spec = desc.generator
    if not spec:
        raise DescriptorError("xi", "no points given (use --xi or a generator)")
    kind = spec.get("kind")
    try:
        if kind == "rest_frame":
            pairs = spec.get("pairs")
            if not isinstance(pairs, list) or not pairs:
                raise DescriptorError("generator.pairs", "expected a list of [e12, e23] pairs")
            return np.array([ps.rest_frame_point(*_pair(p)) for p in pairs])
        if kind == "random":
            return ps.random_octets(rng, _count(spec, "count"),
                                    _number(spec, "rmin", 1e-3), _number(spec, "rmax", 1e3))
        if kind == "ray":
            return ps.degeneracy_ray(_numbers(spec, "deltas"))
    except Su3HoloError as e:
        if isinstance(e, DescriptorError):
            raise
        raise DescriptorError("generator", str(e))
    raise DescriptorError("generator.kind", f"unknown point generator {kind!r}")


def build_loop(spec: Optional[Dict[str, Any]]) -> LoopPath:
    if not spec:
        raise DescriptorError("generator", "loop-phase needs a circle or polar_circle generator")
    kind = spec.get("kind")
    try:
        if kind == "circle":
            axes = _axes(spec, "axes", 2)
            if axes is None:
                raise DescriptorError("generator.axes", "missing")
            return ps.circle_loop(_vector(spec, "center"), axes, _number(spec, "radius"),
                                  _count(spec, "samples", 2000))
        if kind == "polar_circle":
            return ps.polar_circle(_number(spec, "theta"), _number(spec, "radius"),
                                   _count(spec, "samples", 2000),
                                   _vector(spec, "center", np.eye(8)[7]), _axes(spec, "axes", 3))
    except DescriptorError:
        raise
    except Su3HoloError as e:
        raise DescriptorError("generator", str(e))
    raise DescriptorError("generator.kind", f"unknown loop generator {kind!r}")


def build_patch(spec: Optional[Dict[str, Any]]) -> SurfacePatch:
    if not spec:
        raise DescriptorError("generator", "surface-flux needs a sphere_patch or flat_patch generator")
    kind = spec.get("kind")
    if isinstance(spec.get("grid"), int):
        spec = {**spec, "grid": [spec["grid"], spec["grid"]]}
    grid = tuple(int(g) for g in _numbers(spec, "grid", 2, [60, 60]))
    if min(grid) < 2:
        raise DescriptorError("generator.grid", f"needs at least 2 points per side, got {list(grid)}")
    try:
        if kind == "sphere_patch":
            theta_range = _numbers(spec, "theta_range", 2, [0.0, float(np.pi)])
            return ps.sphere_patch(_vector(spec, "center"), _number(spec, "radius"),
                                   grid, tuple(theta_range), _axes(spec, "frame", 3))
        if kind == "flat_patch":
            axes = _axes(spec, "axes", 2)
            if axes is None:
                raise DescriptorError("generator.axes", "missing")
            return ps.flat_patch(_vector(spec, "center"), axes, _number(spec, "half_width"),
                                 grid)
    except DescriptorError:
        raise
    except Su3HoloError as e:
        raise DescriptorError("generator", str(e))
    raise DescriptorError("generator.kind", f"unknown surface generator {kind!r}")
