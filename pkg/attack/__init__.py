"""Relé MITM que falsifica telegramas de temperatura."""

from .delay import DelayDistribution, DelayModel
from .errors import AttackError, UndecodableFrame, UnknownFalsifier
from .falsifiers import FALSIFIERS, BiasAdd, Falsifier, Override, Passthrough, build_falsifier
from .relay import Direction, RelayEmission, RelayPair, SingleDeviceFalsifier, relay_process, single_device_mitm
from .scenario import AttackScenario

__all__ = [
    "AttackError", "AttackScenario", "BiasAdd", "DelayDistribution", "DelayModel", "Direction",
    "FALSIFIERS", "Falsifier", "Override", "Passthrough", "RelayEmission", "RelayPair",
    "SingleDeviceFalsifier", "UndecodableFrame", "UnknownFalsifier", "build_falsifier",
    "relay_process", "single_device_mitm",
]
