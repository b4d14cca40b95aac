"""
Escenarios de ataque en JSON:

    {"falsifier": {"kind": "bias"|"override"|"passthrough", "value": n},
     "delay": {"base": s, "jitter_sd": s, "dist": "gauss"|"uniform", "seed": n}}
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

from schema import And, Optional, Or, Schema, SchemaError, Use

from .delay import DelayModel
from .errors import AttackError, UnknownFalsifier
from .falsifiers import FALSIFIERS, Falsifier, build_falsifier

_number = Or(int, float)
_non_negative = And(_number, lambda v: v >= 0, error="debe ser >= 0")

DELAY_SCHEMA = Schema({
    Optional("base"): _non_negative,
    Optional("jitter_sd"): _non_negative,
    Optional("dist"): Or("gauss", "uniform"),
    Optional("seed"): int,
    Optional("burst_interval"): Or(None, And(_number, lambda v: v > 0)),
    Optional("burst_spacing"): _non_negative,
})

SCENARIO_SCHEMA = Schema({
    Optional("name"): str,
    "falsifier": {
        "kind": And(str, Use(str.lower)),
        Optional("value"): _number,
    },
    Optional("delay"): DELAY_SCHEMA,
})


@dataclass
class AttackScenario:
    name: str
    falsifier_kind: str
    falsifier_value: float
    delay: Dict[str, Any]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AttackScenario":
        """
        Valida y normaliza un escenario.

        Raises:
            UnknownFalsifier: Si el tipo de falsificador no existe
            AttackError: Si el documento no cumple el esquema
        """
        try:
            valid = SCENARIO_SCHEMA.validate(data)
        except SchemaError as error:
            raise AttackError(f"Escenario de ataque no válido: {error}") from error
        kind = valid["falsifier"]["kind"]
        if kind not in FALSIFIERS:
            raise UnknownFalsifier(f"Falsificador desconocido: {kind!r}. Disponibles: {FALSIFIERS.kinds()}")
        return cls(
            name=valid.get("name", kind),
            falsifier_kind=kind,
            falsifier_value=float(valid["falsifier"].get("value", 0.0)),
            delay=dict(valid.get("delay", {})),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "AttackScenario":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def build_falsifier(self, victim_source=None, victim_group=None) -> Falsifier:
        return build_falsifier(self.falsifier_kind, self.falsifier_value, victim_source, victim_group)

    def build_delay(self, seed: int = 0) -> DelayModel:
        return DelayModel.from_dict(self.delay, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "falsifier": {"kind": self.falsifier_kind, "value": self.falsifier_value},
            "delay": dict(self.delay),
        }
