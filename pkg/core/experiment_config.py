#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Configuración de un experimento completo.

El fichero YAML admite variables de entorno `${VAR}` y se valida entero
antes de ejecutar nada; las claves desconocidas son un error.
"""

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional as Opt, Union

import yaml
from schema import And, Optional, Or, Schema, SchemaError, Use

from attack import FALSIFIERS, AttackError, AttackScenario
from attack.scenario import DELAY_SCHEMA
from detector import ALL_ALGORITHMS, DEFAULT_WINDOWS_MIN, FeatureKind
from hvac_sim import DEFAULT_START, HvacParams, WeatherTrace
from knx_codec import EffKind, GroupAddress, IndividualAddress, KnxCodecError
from utils.logger import get_logger

logger = get_logger(__name__)


class ConfigError(ValueError):
    """Configuración inválida o incompleta."""


_number = Or(int, float)
_positive = And(_number, lambda v: v > 0, error="debe ser > 0")
_non_negative = And(_number, lambda v: v >= 0, error="debe ser >= 0")
_fraction = And(_number, lambda v: 0 < v < 1, error="debe estar en (0, 1)")
_individual = And(str, Use(IndividualAddress.from_string))
_group = And(
    str, Use(GroupAddress.from_string), lambda group: not group.is_broadcast,
    error="0/0/0 es la dirección de difusión y no puede asignarse",
)

SENSOR_SCHEMA = Schema({
    Optional("address", default=IndividualAddress(1, 1, 10)): _individual,
    Optional("group", default=GroupAddress.three_level(1, 0, 1)): _group,
    Optional("period", default=60.0): _positive,
    Optional("jitter_sd", default=0.5): _non_negative,
    Optional("temperature", default=21.5): _number,
    Optional("temperature_csv", default=None): Or(None, str),
    Optional("lte_tag", default=0x0101): And(int, lambda v: 0 <= v <= 0xFFFF),
    Optional("lte_kind", default=EffKind.LTE_GEO_LOWER): And(
        str, Use(EffKind), lambda kind: kind.is_lte, error="debe ser una variante LTE"
    ),
    Optional("response_latency", default=0.03): _non_negative,
})

CONTROLLER_SCHEMA = Schema({
    Optional("address", default=IndividualAddress(1, 1, 1)): _individual,
    Optional("allowlist", default=None): Or(None, [_individual]),
    Optional("poll_enabled", default=True): bool,
    Optional("poll_period", default=5.0): _positive,
    Optional("poll_offset", default=1.0): _non_negative,
    Optional("poll_gap", default=0.03): _non_negative,
    Optional("poll_gap_jitter_sd", default=0.02): _non_negative,
    Optional("response_timeout", default=1.0): _positive,
})

BACKGROUND_SCHEMA = Schema({
    Optional("enabled", default=True): bool,
    Optional("rate", default=0.05): _non_negative,
    Optional("read_fraction", default=0.5): And(_number, lambda v: 0 <= v <= 1),
})

BUS_SCHEMA = Schema({
    Optional("duration_h", default=24.0): _positive,
    Optional("frame_latency", default=0.02): _non_negative,
    Optional("topology", default="shared"): Or("shared", "coupled"),
    Optional("sensor", default={}): SENSOR_SCHEMA,
    Optional("controller", default={}): CONTROLLER_SCHEMA,
    Optional("background", default={}): BACKGROUND_SCHEMA,
})

ATTACK_SCHEMA = Schema({
    Optional("scenario_file", default=None): Or(None, str),
    Optional("name"): str,
    Optional("falsifier"): {"kind": str, Optional("value"): _number},
    Optional("delay"): DELAY_SCHEMA,
    Optional("topology", default="relay_pair"): Or("relay_pair", "single_device"),
})

_power_map = Or([_non_negative], {str: _number})
HVAC_PARAMS_SCHEMA = Schema({
    Optional(f.name): (_power_map if f.name in ("fan", "pump", "chiller") else _number)
    for f in fields(HvacParams)
})

HVAC_ATTACK_SCHEMA = Schema({"name": str, "kind": str, Optional("value", default=0.0): _number})

HVAC_SCHEMA = Schema({
    Optional("params", default={}): HVAC_PARAMS_SCHEMA,
    Optional("weather_csv", default=None): Or(None, str),
    Optional("start", default=DEFAULT_START): _non_negative,
    Optional("duration_h", default=12.0): _positive,
    Optional("attacks", default=[
        {"name": "attack_i", "kind": "bias", "value": 1.0},
        {"name": "attack_ii", "kind": "override", "value": 22.005},
    ]): [HVAC_ATTACK_SCHEMA],
    Optional("bias_sweep", default=[0.0, 0.5, 1.0, 2.0]): [_number],
})

DETECTOR_SCHEMA = Schema({
    Optional("windows_min", default=list(DEFAULT_WINDOWS_MIN)): [_positive],
    Optional("features", default=[kind.value for kind in FeatureKind]): [
        And(str, lambda v: v in {kind.value for kind in FeatureKind}, error="característica desconocida")
    ],
    Optional("algorithms", default=list(ALL_ALGORITHMS)): [
        And(str, lambda v: v in ALL_ALGORITHMS, error="algoritmo desconocido")
    ],
    Optional("train_fraction", default=0.7): _fraction,
    Optional("bins", default=50): And(int, lambda v: v >= 1),
    Optional("quantile", default=99.0): And(_number, lambda v: 0 < v <= 100),
    Optional("tree", default={}): {
        Optional("max_depth", default=8): And(int, lambda v: v >= 0),
        Optional("min_leaf", default=2): And(int, lambda v: v >= 1),
    },
    Optional("svm", default={}): {
        Optional("lam", default=1e-3): _non_negative,
        Optional("lr", default=0.1): _positive,
        Optional("decay", default=0.01): _non_negative,
        Optional("epochs", default=100): And(int, lambda v: v >= 1),
        Optional("batch_size", default=32): And(int, lambda v: v >= 1),
    },
})

CONFIG_SCHEMA = Schema({
    Optional("scenario", default="default"): And(str, len),
    Optional("seed", default=0): And(int, lambda v: v >= 0),
    Optional("output_dir", default="output"): And(str, len),
    Optional("bus", default={}): BUS_SCHEMA,
    Optional("attack", default={}): ATTACK_SCHEMA,
    Optional("hvac", default={}): HVAC_SCHEMA,
    Optional("detector", default={}): DETECTOR_SCHEMA,
})

# Secciones anidadas que se rellenan antes de validar para que sus valores
# por defecto también se apliquen cuando la sección falta.
_NESTED_SECTIONS = {
    "bus": ("sensor", "controller", "background"),
    "attack": (),
    "hvac": ("params",),
    "detector": ("tree", "svm"),
}


def _with_sections(data: Dict[str, Any]) -> Dict[str, Any]:
    data = dict(data)
    for section, nested in _NESTED_SECTIONS.items():
        if data.get(section) is None:
            data[section] = {}
        if not isinstance(data[section], dict):
            continue
        data[section] = dict(data[section])
        for name in nested:
            if data[section].get(name) is None:
                data[section][name] = {}
    return data


@dataclass
class ExperimentConfig:
    scenario: str
    seed: int
    output_dir: Path
    bus: Dict[str, Any]
    attack: Dict[str, Any]
    hvac: Dict[str, Any]
    detector: Dict[str, Any]
    base_dir: Path = field(default_factory=Path.cwd)

    @classmethod
    def from_dict(cls, data: Opt[Dict[str, Any]], base_dir: Opt[Union[str, Path]] = None) -> "ExperimentConfig":
        """
        Valida un diccionario de configuración.

        Args:
            data: Contenido del YAML ya cargado (None equivale a vacío)
            base_dir: Directorio para resolver rutas relativas

        Raises:
            ConfigError: Si el documento no cumple el esquema
        """
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("La configuración debe ser un diccionario YAML")
        try:
            valid = CONFIG_SCHEMA.validate(_with_sections(data))
        except (SchemaError, KnxCodecError) as error:
            raise ConfigError(f"Configuración no válida: {error}") from error
        config = cls(
            scenario=valid["scenario"],
            seed=valid["seed"],
            output_dir=Path(valid["output_dir"]),
            bus=valid["bus"],
            attack=valid["attack"],
            hvac=valid["hvac"],
            detector=valid["detector"],
            base_dir=Path(base_dir) if base_dir is not None else Path.cwd(),
        )
        config.attack_scenario()
        config.hvac_params()
        for attack in config.hvac["attacks"]:
            if attack["kind"] not in FALSIFIERS:
                raise ConfigError(f"Falsificador desconocido en hvac.attacks: {attack['kind']!r}")
        return config

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """
        Carga un YAML expandiendo variables de entorno.

        Raises:
            ConfigError: Si el fichero no existe, no es YAML o no es válido
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"No existe el fichero de configuración: {path}")
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
        try:
            data = yaml.safe_load(os.path.expandvars(raw))
        except yaml.YAMLError as error:
            raise ConfigError(f"{path} no es YAML válido: {error}") from error
        logger.debug(f"Configuración cargada desde {path}")
        return cls.from_dict(data, base_dir=path.parent)

    def with_overrides(self, seed: Opt[int] = None, output_dir: Opt[Union[str, Path]] = None) -> "ExperimentConfig":
        """Aplica los valores de la línea de comandos sobre los del fichero."""
        changes: Dict[str, Any] = {}
        if seed is not None:
            if seed < 0:
                raise ConfigError(f"La semilla debe ser >= 0: {seed}")
            changes["seed"] = seed
        if output_dir is not None:
            changes["output_dir"] = Path(output_dir)
        return replace(self, **changes)

    def resolve(self, path: Union[str, Path]) -> Path:
        """Ruta relativa al directorio del fichero de configuración, o al actual si existe allí."""
        path = Path(path)
        if path.is_absolute():
            return path
        local = self.base_dir / path
        return local if local.exists() else path

    def attack_scenario(self) -> AttackScenario:
        """
        Escenario de ataque: fichero referenciado o claves en línea.

        Raises:
            ConfigError: Si el escenario no existe o no es válido
        """
        section = self.attack
        try:
            if section.get("scenario_file"):
                path = self.resolve(section["scenario_file"])
                if not path.exists():
                    raise ConfigError(f"No existe el escenario de ataque: {path}")
                return AttackScenario.load(path)
            inline = {key: section[key] for key in ("name", "falsifier", "delay") if key in section}
            inline.setdefault("falsifier", {"kind": "bias", "value": 1.0})
            return AttackScenario.from_dict(inline)
        except AttackError as error:
            raise ConfigError(str(error)) from error

    def hvac_params(self) -> HvacParams:
        try:
            return HvacParams.from_dict(self.hvac["params"])
        except (TypeError, ValueError) as error:
            raise ConfigError(f"Parámetros HVAC no válidos: {error}") from error

    def weather(self) -> WeatherTrace:
        csv = self.hvac.get("weather_csv")
        if csv:
            return WeatherTrace.from_csv(self.resolve(csv))
        return WeatherTrace.default_summer_day()

    @property
    def feature_kinds(self) -> List[FeatureKind]:
        return [FeatureKind(value) for value in self.detector["features"]]

    def classifier_params(self) -> Dict[str, Dict[str, Any]]:
        return {"tree": dict(self.detector["tree"]), "svm": dict(self.detector["svm"])}

    def summary(self) -> Dict[str, Any]:
        scenario = self.attack_scenario()
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "bus_hours": self.bus["duration_h"],
            "attack": scenario.to_dict(),
            "attack_topology": self.attack["topology"],
            "windows_min": list(self.detector["windows_min"]),
        }
