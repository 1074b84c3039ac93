import pytest

from src.core.config_manager import ConfigManager, get_config, set_config
from src.systems import selfcheck
from src.systems.selfcheck import SUITES, run_suites


@pytest.fixture
def small_counts():
    set_config(get_config().override({
        "selfcheck.spectrum_samples": 200,
        "selfcheck.route_samples": 5,
        "selfcheck.sum_rule_samples": 3,
        "selfcheck.fd_samples": 1,
        "selfcheck.rest_frame_samples": 5,
        "selfcheck.stokes_patches": 3,
        "selfcheck.monopole_directions": 2,
    }))


def test_every_suite_passes(small_counts):
    results = run_suites()
    assert [r.name for r in results] == list(SUITES)
    failures = {r.name: r.message for r in results if not r.passed}
    assert failures == {}


def test_only_filters_suites(small_counts):
    results = run_suites(seed=3, only=["spectrum", "gap_asymptotics"])
    assert [r.name for r in results] == ["spectrum", "gap_asymptotics"]


def test_raising_suite_is_reported_not_propagated(monkeypatch, capsys):
    def boom(rng, counts):
        raise ArithmeticError("overflow in test")

    monkeypatch.setitem(selfcheck.SUITES, "spectrum", boom)
    (result,) = run_suites(only=["spectrum"])
    assert not result.passed
    assert result.message == "ArithmeticError: overflow in test"
    assert "selfcheck spectrum: FAIL" in capsys.readouterr().err


def test_exceeded_limit_names_the_metric():
    result = selfcheck._result("demo", {"a": 2.0, "b": 0.0}, {"a": 1.0, "b": 1.0})
    assert not result.passed
    assert result.message.startswith("exceeded: a=")
    assert "b=" not in result.message


def test_default_counts_cover_acceptance_scale():
    cfg = ConfigManager()
    assert cfg.get("selfcheck.spectrum_samples") >= 10_000
    assert cfg.get("selfcheck.rest_frame_samples") >= 100
    assert cfg.get("selfcheck.route_samples") >= 500
    assert cfg.get("selfcheck.stokes_patches") >= 50
    assert cfg.get("selfcheck.monopole_directions") >= 10


def test_random_patches_and_directions_are_checked(small_counts):
    stokes, = run_suites(seed=11, only=["stokes"])
    assert stokes.passed, stokes.message
    assert stokes.detail["random_patches"] < 1e-3
    monopole, = run_suites(seed=11, only=["monopole"])
    assert monopole.passed, monopole.message
