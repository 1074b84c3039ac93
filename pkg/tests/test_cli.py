import json
import math

import numpy as np
import pandas as pd
import pytest

from src.cli.runner import SWEEP_COLUMNS, run
from src.systems.berry_curvature import curvature_spectral
from src.systems.spectrum import refined_energies
from src.systems.tensor_decomposition import rest_frame_irreducible
from src.world.parameter_space import rest_frame_point

E8 = "0,0,0,0,0,0,0,1"


def _xi(v):
    return ",".join(repr(float(x)) for x in v)


def _run_json(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, (json.loads(captured.out) if captured.out else None), captured.err


def test_classify_upper_degenerate(capsys):
    code, out, _ = _run_json(capsys, ["classify", "--xi", E8])
    assert code == 0
    assert out["class"] == "upper_degenerate"
    assert out["phi"] == pytest.approx(0.5235988, abs=1e-7)
    assert out["gaps"]["e12"] == pytest.approx(0.0, abs=1e-9)
    assert out["gaps"]["e23"] == pytest.approx(0.8660254, abs=1e-7)
    assert out["orbit_dimension"] == 4


def test_classify_several_points(capsys):
    code, out, _ = _run_json(capsys, ["classify", "--xi", E8, "--xi", "1,0,0,0,0,0,0,0"])
    assert code == 0
    assert [item["class"] for item in out] == ["upper_degenerate", "generic"]


def test_spectrum_reports_diagonalizer(capsys):
    point = rest_frame_point(0.4, 0.9)
    code, out, _ = _run_json(capsys, ["spectrum", "--xi", _xi(point)])
    assert code == 0
    assert out["gaps"]["e12"] == pytest.approx(0.4)
    np.testing.assert_allclose(out["rest_frame"], point, atol=1e-12)
    frame = np.array(out["diagonalizer"]["re"]) + 1j * np.array(out["diagonalizer"]["im"])
    np.testing.assert_allclose(frame, np.eye(3), atol=1e-12)


def test_curvature_all_routes(capsys):
    point = rest_frame_point(0.7, 1.3)
    code, out, _ = _run_json(capsys, ["curvature", "--xi", _xi(point), "--level", "1", "--route", "all"])
    assert code == 0
    level = out["levels"]["1"]
    assert set(level) == {"spectral", "transported", "parts", "max_deviation"}
    assert level["max_deviation"] < 1e-9
    np.testing.assert_allclose(level["spectral"], curvature_spectral(point, 1).coefficients, rtol=1e-15)


def test_curvature_single_route_has_no_deviation(capsys):
    code, out, _ = _run_json(capsys, ["curvature", "--xi", "1,0,0,0,0,0,0,0", "--route", "transported"])
    assert code == 0
    assert set(out["levels"]) == {"1", "2", "3"}
    assert set(out["levels"]["2"]) == {"transported"}


def test_degenerate_input_exits_with_two(capsys):
    code, out, err = _run_json(capsys, ["curvature", "--xi", E8])
    assert code == 2
    assert out is None
    assert "upper_degenerate" in err


def test_malformed_xi_names_the_field(capsys):
    code, _, err = _run_json(capsys, ["classify", "--xi", "1,2,3"])
    assert code == 1
    assert "xi" in err


def test_usage_errors(capsys):
    assert run(["teleport"]) == 1
    assert run(["classify", "--level", "7", "--xi", E8]) == 1
    assert run(["classify", "--xi", E8, "--format", "csv"]) == 1
    capsys.readouterr()


def test_descriptor_schema_is_checked(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"schema": "su3holo/0", "command": "classify", "xi": [0, 0, 0, 0, 0, 0, 0, 1]}))
    code, _, err = _run_json(capsys, ["classify", "--descriptor", str(path)])
    assert code == 1
    assert "schema" in err


def test_descriptor_generator_kind_is_checked(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"schema": "su3holo/1", "command": "sweep", "generator": {"kind": "spiral"}}))
    code, _, err = _run_json(capsys, ["sweep", "--descriptor", str(path)])
    assert code == 1
    assert "generator.kind" in err


def test_decompose_matches_closed_form(capsys):
    point = rest_frame_point(0.7, 1.3)
    code, out, _ = _run_json(capsys, ["decompose", "--xi", _xi(point), "--level", "2"])
    assert code == 0
    expected = rest_frame_irreducible(refined_energies(point), 2)
    np.testing.assert_allclose(out["levels"]["2"]["x"], expected.x, atol=1e-12)
    w = np.array(out["levels"]["2"]["w"]["re"]) + 1j * np.array(out["levels"]["2"]["w"]["im"])
    np.testing.assert_allclose(w, expected.w, atol=1e-12)


def test_loop_phase_polar_circle(capsys):
    code, out, _ = _run_json(capsys, ["loop-phase", "--theta", "1.0", "--level", "1"])
    assert code == 0
    assert out["phases"]["1"] == pytest.approx(-math.pi * (1 - math.cos(1.0)), abs=1e-3)


def test_surface_flux_from_descriptor(tmp_path, capsys):
    path = tmp_path / "cap.json"
    path.write_text(json.dumps({
        "schema": "su3holo/1",
        "command": "surface-flux",
        "level": 1,
        "generator": {"kind": "sphere_patch", "center": [0, 0, 0, 0, 0, 0, 0, 1], "radius": 0.01,
                      "theta_range": [0.0, 1.2], "grid": [60, 60]},
    }))
    code, out, _ = _run_json(capsys, ["surface-flux", "--descriptor", str(path), "--threads", "2"])
    assert code == 0
    level = out["levels"]["1"]
    assert level["flux"] == pytest.approx(math.pi * (1 - math.cos(1.2)), rel=1e-2)
    assert level["stokes_defect"] < 1e-3


def test_monopole_command(capsys):
    code, out, _ = _run_json(capsys, ["monopole", "--level", "2", "--radius", "0.01"])
    assert code == 0
    assert out["levels"]["2"]["flux"] == pytest.approx(-2 * math.pi, rel=1e-3)


def _sweep_descriptor(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({
        "schema": "su3holo/1",
        "command": "sweep",
        "generator": {"kind": "ray", "deltas": [0.0, 0.1, 0.01]},
        "level": [1, 2],
    }))
    return str(path)


def test_sweep_csv(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code = run(["sweep", "--descriptor", _sweep_descriptor(tmp_path), "--output", str(out_path)])
    assert code == 0
    frame = pd.read_csv(out_path)
    assert list(frame.columns) == SWEEP_COLUMNS + [
        "l1_v12", "l1_v45", "l1_v67", "l2_v12", "l2_v45", "l2_v67"
    ]
    assert list(frame["index"]) == [0, 1, 2]
    assert frame.loc[0, "degeneracy"] == "upper_degenerate"
    assert np.isnan(frame.loc[0, "l1_v12"])
    assert frame.loc[1, "l1_v12"] == pytest.approx(0.5 / 0.1 ** 2)
    assert frame.loc[2, "l2_v12"] == pytest.approx(-0.5 / 0.01 ** 2)
    capsys.readouterr()


def test_sweep_is_deterministic_across_threads(tmp_path, capsys):
    argv = ["sweep", "--descriptor", _sweep_descriptor(tmp_path)]
    run(argv + ["--threads", "1"])
    first = capsys.readouterr().out
    run(argv + ["--threads", "3"])
    assert capsys.readouterr().out == first


def test_sweep_random_generator_uses_seed(tmp_path, capsys):
    path = tmp_path / "random.json"
    path.write_text(json.dumps({
        "schema": "su3holo/1",
        "command": "sweep",
        "generator": {"kind": "random", "count": 4, "rmin": 0.5, "rmax": 2.0},
        "output": {"format": "json"},
    }))

    def sweep(seed):
        code, out, _ = _run_json(capsys, ["sweep", "--descriptor", str(path), "--seed", str(seed)])
        assert code == 0
        return [[row[f"xi_{r}"] for r in range(1, 9)] for row in out]

    assert sweep(7) == sweep(7)
    assert sweep(7) != sweep(8)


def test_tolerance_override_is_scoped(capsys):
    point = "0,0,1e-6,0,0,0,0,1"
    code, out, _ = _run_json(capsys, ["classify", "--xi", point, "--tol", "1e-3"])
    assert code == 0 and out["class"] == "upper_degenerate"
    code, out, _ = _run_json(capsys, ["classify", "--xi", point])
    assert out["class"] == "generic"


def test_selfcheck_subset(capsys):
    code, out, _ = _run_json(capsys, ["selfcheck", "--suite", "structure_constants", "--suite", "decomposition"])
    assert code == 0
    assert out["passed"] == 2 and out["failed"] == 0


def _descriptor_file(tmp_path, body):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"schema": "su3holo/1", **body}))
    return str(path)


@pytest.mark.parametrize("command, body, field", [
    ("classify", {"xi": 5}, "xi"),
    ("classify", {"xi": [[0, 0, 0, 0, 0, 0, 0, 1], "e8"]}, "xi"),
    ("sweep", {"generator": {"kind": "rest_frame", "pairs": [[1.0]]}}, "generator.pairs"),
    ("sweep", {"generator": {"kind": "random", "count": -1}}, "generator.count"),
    ("sweep", {"generator": {"kind": "random", "count": 2, "seed": "x"}}, "generator.seed"),
    ("sweep", {"generator": {"kind": "ray", "deltas": "0.1"}}, "generator.deltas"),
    ("surface-flux", {"generator": {"kind": "sphere_patch", "center": [0, 0, 0, 0, 0, 0, 0, 1],
                                    "radius": 0.01, "grid": [1, 4]}}, "generator.grid"),
    ("classify", {"xi": [0, 0, 0, 0, 0, 0, 0, 1], "tolerances": {"classify": True}}, "tolerances.classify"),
    ("classify", {"xi": [0, 0, 0, 0, 0, 0, 0, 1], "seed": 1.5}, "seed"),
])
def test_malformed_descriptor_names_the_field(tmp_path, capsys, command, body, field):
    code, out, err = _run_json(capsys, [command, "--descriptor", _descriptor_file(tmp_path, body)])
    assert code == 1
    assert out is None
    assert field in err


def test_unwritable_output_path(tmp_path, capsys):
    target = tmp_path / "missing" / "out.json"
    code, _, err = _run_json(capsys, ["classify", "--xi", E8, "--output", str(target)])
    assert code == 1
    assert "output.path" in err
    assert not target.exists()
