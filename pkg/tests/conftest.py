import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from core.experiment_config import ExperimentConfig  # noqa: E402


@pytest.fixture
def small_config_dict(tmp_path):
    """Experimento corto: una hora por captura y ventanas de pocos minutos."""
    return {
        "scenario": "test",
        "seed": 7,
        "output_dir": str(tmp_path / "out"),
        "bus": {"duration_h": 1.0},
        "attack": {"falsifier": {"kind": "bias", "value": 1.0}},
        "hvac": {"duration_h": 2.0, "bias_sweep": [1.0]},
        "detector": {
            "windows_min": [5],
            "features": ["mean", "jsd"],
            "algorithms": ["tree", "svm"],
            "svm": {"epochs": 20},
        },
    }


@pytest.fixture
def small_config(small_config_dict, tmp_path):
    return ExperimentConfig.from_dict(small_config_dict, base_dir=tmp_path)
