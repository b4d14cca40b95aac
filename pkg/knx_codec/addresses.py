"""
Direcciones KNX: individuales (área.línea.dispositivo), de grupo (2 o 3 niveles)
y etiquetas LTE opacas.

Todas se empaquetan en exactamente 16 bits.
"""

import re
from dataclasses import dataclass, field
from enum import Enum

from .eff import EffKind
from .errors import OutOfRange

_INDIVIDUAL_RE = re.compile(r"^\s*(\d+)\.(\d+)\.(\d+)\s*$")
_GROUP_RE = re.compile(r"^\s*(\d+)/(\d+)(?:/(\d+))?\s*$")


def _check_range(name: str, value: int, upper: int) -> None:
    if not isinstance(value, int) or not 0 <= value <= upper:
        raise OutOfRange(f"{name} fuera de rango [0, {upper}]: {value!r}")


@dataclass(frozen=True)
class IndividualAddress:
    """Dirección física de un dispositivo, empaquetada como área(4)|línea(4)|dispositivo(8)."""

    area: int
    line: int
    device: int

    def __post_init__(self):
        _check_range("area", self.area, 15)
        _check_range("line", self.line, 15)
        _check_range("device", self.device, 255)

    @property
    def raw(self) -> int:
        return (self.area << 12) | (self.line << 8) | self.device

    @property
    def is_coupler(self) -> bool:
        """El dispositivo 0 de una línea está reservado al acoplador de línea."""
        return self.device == 0

    @classmethod
    def from_int(cls, raw: int) -> "IndividualAddress":
        _check_range("raw", raw, 0xFFFF)
        return cls((raw >> 12) & 0x0F, (raw >> 8) & 0x0F, raw & 0xFF)

    @classmethod
    def from_string(cls, text: str) -> "IndividualAddress":
        match = _INDIVIDUAL_RE.match(text)
        if not match:
            raise OutOfRange(f"Dirección individual no válida: {text!r}")
        return cls(*(int(part) for part in match.groups()))

    def to_bytes(self) -> bytes:
        return self.raw.to_bytes(2, "big")

    def __str__(self) -> str:
        return f"{self.area}.{self.line}.{self.device}"


class GroupAddressStyle(Enum):
    TWO_LEVEL = "two_level"
    THREE_LEVEL = "three_level"


@dataclass(frozen=True)
class GroupAddress:
    """
    Dirección de grupo de 16 bits.

    La identidad es el valor empaquetado: 1/2/3 (tres niveles) y 1/515
    (dos niveles) son la misma dirección en el bus. El estilo solo afecta a la
    notación.
    """

    raw: int
    style: GroupAddressStyle = field(default=GroupAddressStyle.THREE_LEVEL, compare=False)

    def __post_init__(self):
        _check_range("raw", self.raw, 0xFFFF)

    @classmethod
    def three_level(cls, main: int, middle: int, sub: int) -> "GroupAddress":
        _check_range("main", main, 31)
        _check_range("middle", middle, 7)
        _check_range("sub", sub, 255)
        return cls((main << 11) | (middle << 8) | sub, GroupAddressStyle.THREE_LEVEL)

    @classmethod
    def two_level(cls, main: int, sub: int) -> "GroupAddress":
        _check_range("main", main, 31)
        _check_range("sub", sub, 2047)
        return cls((main << 11) | sub, GroupAddressStyle.TWO_LEVEL)

    @classmethod
    def from_int(cls, raw: int, style: GroupAddressStyle = GroupAddressStyle.THREE_LEVEL) -> "GroupAddress":
        return cls(raw, style)

    @classmethod
    def from_string(cls, text: str) -> "GroupAddress":
        match = _GROUP_RE.match(text)
        if not match:
            raise OutOfRange(f"Dirección de grupo no válida: {text!r}")
        main, second, third = match.groups()
        if third is None:
            return cls.two_level(int(main), int(second))
        return cls.three_level(int(main), int(second), int(third))

    @property
    def main(self) -> int:
        return (self.raw >> 11) & 0x1F

    @property
    def middle(self) -> int:
        return (self.raw >> 8) & 0x07

    @property
    def sub(self) -> int:
        if self.style == GroupAddressStyle.TWO_LEVEL:
            return self.raw & 0x07FF
        return self.raw & 0xFF

    @property
    def is_broadcast(self) -> bool:
        """0/0/0 es la dirección de difusión y no puede asignarse a un objeto."""
        return self.raw == 0

    def to_bytes(self) -> bytes:
        return self.raw.to_bytes(2, "big")

    def __str__(self) -> str:
        if self.style == GroupAddressStyle.TWO_LEVEL:
            return f"{self.main}/{self.sub}"
        return f"{self.main}/{self.middle}/{self.sub}"


@dataclass(frozen=True)
class LteTagAddress:
    """Destino de un telegrama LTE; los 16 bits se guardan sin interpretar."""

    kind: EffKind
    raw: int

    def __post_init__(self):
        if not self.kind.is_lte:
            raise OutOfRange(f"LteTagAddress requiere una variante LTE, no {self.kind.name}")
        _check_range("raw", self.raw, 0xFFFF)

    def to_bytes(self) -> bytes:
        return self.raw.to_bytes(2, "big")

    def __str__(self) -> str:
        return f"lte:{self.kind.value}:{self.raw:04x}"
