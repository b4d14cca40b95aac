"""Pruebas de la configuración, las semillas y la línea de comandos."""

import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from attack import BiasAdd
from core.experiment_config import ConfigError, ExperimentConfig
from core.seeds import SeedPlan, derive_seed
from detector import DEFAULT_WINDOWS_MIN, FeatureKind
from knx_codec import GroupAddress, IndividualAddress
from main import cli

SETTINGS = Path(__file__).resolve().parents[2] / "config" / "settings.yaml"


def test_defaults():
    config = ExperimentConfig.from_dict({})
    assert config.seed == 0
    assert config.bus["duration_h"] == 24.0
    assert config.bus["sensor"]["address"] == IndividualAddress(1, 1, 10)
    assert config.bus["sensor"]["group"] == GroupAddress.three_level(1, 0, 1)
    assert config.detector["windows_min"] == list(DEFAULT_WINDOWS_MIN)
    assert config.feature_kinds == list(FeatureKind)
    assert config.attack["topology"] == "relay_pair"
    assert isinstance(config.attack_scenario().build_falsifier(), BiasAdd)
    assert config.hvac["bias_sweep"][0] == 0.0


def test_shipped_settings_are_valid():
    config = ExperimentConfig.load(SETTINGS)
    assert config.attack_scenario().name == "attack_i"
    assert config.classifier_params()["svm"]["epochs"] == 100
    assert config.hvac["bias_sweep"] == [0.0, 0.5, 1.0, 2.0]


@pytest.mark.parametrize("document", [
    {"unknown": 1},
    {"seed": -1},
    {"bus": {"sensor": {"address": "16.0.0"}}},
    {"bus": {"sensor": {"group": "0/0/0"}}},
    {"bus": {"topology": "ring"}},
    {"attack": {"falsifier": {"kind": "drift"}}},
    {"attack": {"delay": {"base": -0.1}}},
    {"hvac": {"attacks": [{"name": "x", "kind": "drift"}]}},
    {"hvac": {"params": {"thermal_capacitance": 0}}},
    {"detector": {"features": ["median"]}},
    {"detector": {"train_fraction": 1.0}},
])
def test_invalid_documents(document):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(document)


def test_environment_variables_are_expanded(tmp_path, monkeypatch):
    monkeypatch.setenv("KNXLAB_TEST_OUT", str(tmp_path / "env_out"))
    path = tmp_path / "settings.yaml"
    path.write_text("output_dir: ${KNXLAB_TEST_OUT}\n")
    assert ExperimentConfig.load(path).output_dir == tmp_path / "env_out"


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "missing.yaml")
    broken = tmp_path / "broken.yaml"
    broken.write_text("bus: [unclosed\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(broken)


def test_scenario_file_is_relative_to_config(tmp_path):
    (tmp_path / "s.json").write_text(json.dumps({"name": "ov", "falsifier": {"kind": "override", "value": 25.0}}))
    config = ExperimentConfig.from_dict({"attack": {"scenario_file": "s.json"}}, base_dir=tmp_path)
    assert config.attack_scenario().name == "ov"
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"attack": {"scenario_file": "nope.json"}}, base_dir=tmp_path)


def test_overrides(small_config, tmp_path):
    changed = small_config.with_overrides(seed=3, output_dir=tmp_path / "other")
    assert (changed.seed, changed.output_dir) == (3, tmp_path / "other")
    assert small_config.seed == 7
    with pytest.raises(ConfigError):
        small_config.with_overrides(seed=-2)


def test_seed_plan():
    plan = SeedPlan(42)
    assert plan.seed("sensor") == SeedPlan(42).seed("sensor")
    assert plan.seed("sensor") != plan.seed("controller")
    assert plan.child("attack").seed("sensor") == derive_seed(42, "attack.sensor")
    assert plan.child("attack").seed("sensor") != plan.child("baseline").seed("sensor")
    assert 0 <= plan.seed("x") < 2 ** 32


# --- CLI ------------------------------------------------------------------

def _write_config(tmp_path, small_config_dict, **changes):
    document = dict(small_config_dict, **changes)
    document["bus"] = {"duration_h": 0.1}
    path = tmp_path / "cli.yaml"
    path.write_text(yaml.safe_dump(document))
    return path


def test_cli_rejects_unknown_falsifier(tmp_path, small_config_dict):
    path = _write_config(tmp_path, small_config_dict, attack={"falsifier": {"kind": "drift"}})
    result = CliRunner().invoke(cli, ["--config", str(path), "simulate"])
    assert result.exit_code == 2


def test_cli_rejects_missing_config(tmp_path):
    result = CliRunner().invoke(cli, ["--config", str(tmp_path / "missing.yaml"), "simulate"])
    assert result.exit_code == 2


def test_cli_simulate_is_deterministic(tmp_path, small_config_dict):
    path = _write_config(tmp_path, small_config_dict)
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        result = CliRunner().invoke(cli, ["--config", str(path), "--out", str(out), "simulate"])
        assert result.exit_code == 0, result.output
        assert "✅ attack" in result.output
        outputs.append(out)
    for name in ("attack", "baseline"):
        first, second = (out / "captures" / f"{name}.jsonl" for out in outputs)
        assert first.read_bytes() == second.read_bytes()


def test_cli_detection_needs_captures(tmp_path, small_config_dict):
    path = _write_config(tmp_path, small_config_dict)
    result = CliRunner().invoke(cli, ["--config", str(path), "--out", str(tmp_path / "empty"), "suite"])
    assert result.exit_code == 1
    assert "Faltan capturas" in result.output
