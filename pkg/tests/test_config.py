import json
import math
from pathlib import Path

import datajoint as dj
import pytest

from bec_entanglement import DEFAULT_DELTA
from bec_entanglement.utils.config import (
    ConfigParseError,
    ConfigValidationError,
    RunConfig,
    arange_inclusive,
    parse_config,
    parse_grid,
    parse_overrides,
)
from bec_entanglement.utils.paths import resolve_output_path


def test_defaults():
    config = parse_config()
    assert config == RunConfig()
    assert config.eta_a == config.eta_b == 7.7
    assert config.delta_a == config.delta_b == DEFAULT_DELTA
    assert config.bs_t_mag == pytest.approx(1 / math.sqrt(2))
    assert config.n_max == 2
    assert config.theta_ab == 0.0

    taus = config.tau_grid()
    assert taus.size == 201
    assert taus[0] == 0.0
    assert taus[-1] == pytest.approx(10.0)


def test_json_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"eta_b": 6.0, "n_p": 20, "n_max": 3}))
    config = parse_config(path)
    assert config.eta_b == 6.0
    assert config.n_p == 20.0 and isinstance(config.n_p, float)
    assert config.n_max == 3 and isinstance(config.n_max, int)
    assert config.eta_a == 7.7


def test_yaml_file(tmp_path):
    path = tmp_path / "run.yml"
    path.write_text("theta_alpha: 1.5707963267948966\ntau_stop: 5\n")
    config = parse_config(path)
    assert config.theta_ab == pytest.approx(math.pi / 2)
    assert config.tau_stop == 5.0

    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert parse_config(empty) == RunConfig()


def test_overrides_take_precedence(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"n_p": 20}')
    config = parse_config(path, parse_overrides(["n_p=10", "tau_step=1e-3"]))
    assert config.n_p == 10.0
    assert config.tau_step == pytest.approx(1e-3)


def test_parse_overrides():
    assert parse_overrides(["n_max=3", "eta_a=6.5", "tau_step=1e-3"]) == {
        "n_max": 3,
        "eta_a": 6.5,
        "tau_step": 1e-3,
    }
    assert parse_overrides(None) == {}
    with pytest.raises(ConfigValidationError, match="key=value"):
        parse_overrides(["n_max"])


def test_malformed_json_reports_location(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "eta_a": 7.7,,\n}')
    with pytest.raises(ConfigParseError, match=r"bad\.json:2:\d+"):
        parse_config(path)


def test_malformed_yaml(tmp_path):
    path = tmp_path / "bad.yml"
    path.write_text("eta_a: [1, 2\n")
    with pytest.raises(ConfigParseError, match="malformed YAML"):
        parse_config(path)


def test_non_object_file(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    with pytest.raises(ConfigParseError, match="list"):
        parse_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_config(tmp_path / "absent.json")


def test_unknown_field():
    with pytest.raises(ConfigValidationError, match="bogus"):
        parse_config(overrides={"bogus": 1.0})


@pytest.mark.parametrize(
    "changes, match",
    [
        ({"tau_step": 0.0}, "tau_step"),
        ({"tau_start": -1.0}, "tau_start"),
        ({"tau_start": 2.0, "tau_stop": 1.0}, "tau_stop"),
        ({"n_p": -1.0}, "n_p"),
        ({"bs_t_mag": 1.5}, "bs_t_mag"),
        ({"n_max": 2.5}, "n_max"),
        ({"n_max": 1}, "n_max"),
        ({"n_max": "3"}, "n_max"),
        ({"eta_a": True}, "eta_a"),
        ({"eta_a": "7.7"}, "eta_a"),
        ({"delta_a": math.inf}, "delta_a"),
    ],
)
def test_validation(changes, match):
    with pytest.raises(ConfigValidationError, match=match):
        RunConfig(**changes)


def test_updated_revalidates():
    config = RunConfig().updated(n_p=20)
    assert config.n_p == 20.0
    with pytest.raises(ConfigValidationError):
        config.updated(tau_step=-0.1)


def test_grids():
    assert parse_grid("1:2:0.5") == [1.0, 1.5, 2.0]
    assert parse_grid(" 0.1, 0.2 ") == [0.1, 0.2]
    assert len(parse_grid("1:12:0.5")) == 23
    assert arange_inclusive(0.0, 0.3, 0.1).size == 4
    with pytest.raises(ValueError, match="Invalid grid"):
        parse_grid("1:2")
    with pytest.raises(ValueError, match="Invalid grid"):
        parse_grid("a,b")
    with pytest.raises(ValueError):
        arange_inclusive(0.0, 1.0, 0.0)


def test_output_path_resolution(tmp_path, monkeypatch):
    monkeypatch.setitem(dj.config["custom"], "output_root_dir", str(tmp_path))
    assert resolve_output_path("fig2.csv") == tmp_path / "fig2.csv"
    assert resolve_output_path("/abs/fig2.csv").as_posix() == "/abs/fig2.csv"

    monkeypatch.setitem(dj.config["custom"], "output_root_dir", "")
    assert resolve_output_path("fig2.csv").as_posix() == "fig2.csv"


@pytest.mark.parametrize("name", ["fig2.json", "mismatch.yml"])
def test_shipped_configs_parse(name):
    config = parse_config(Path(__file__).parents[1] / "data" / name)
    assert config.tau_grid()[-1] == pytest.approx(10.0)
