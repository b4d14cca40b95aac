#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Registro genérico de implementaciones por identificador.

Lo usan los falsificadores del ataque y los clasificadores del detector para
resolver el `kind` que llega desde la configuración.
"""

import inspect
from typing import Any, Dict, Generic, List, Optional, Type, TypeVar

T = TypeVar("T")


class UnknownKind(ValueError):
    """Se pidió un identificador que nadie registró."""


class Registry(Generic[T]):
    """Registro de clases que heredan de una base común."""

    def __init__(self, base: Type[T], label: str):
        """
        Args:
            base: Clase base que deben extender todas las entradas
            label: Nombre legible del registro, usado en los mensajes de error
        """
        self.base = base
        self.label = label
        self._entries: Dict[str, Type[T]] = {}

    def register(self, kind: str, entry_class: Type[T]) -> Type[T]:
        if not inspect.isclass(entry_class) or not issubclass(entry_class, self.base):
            raise TypeError(f"La entrada debe ser una subclase de {self.base.__name__}: {entry_class}")
        self._entries[kind] = entry_class
        return entry_class

    def entry(self, kind: str):
        """Decorador equivalente a register()."""
        def decorator(entry_class: Type[T]) -> Type[T]:
            return self.register(kind, entry_class)
        return decorator

    def get_class(self, kind: str) -> Optional[Type[T]]:
        return self._entries.get(kind)

    def create(self, kind: str, *args: Any, **kwargs: Any) -> T:
        """
        Instancia la clase registrada bajo `kind`.

        Raises:
            UnknownKind: Si el identificador no está registrado
        """
        entry_class = self._entries.get(kind)
        if entry_class is None:
            raise UnknownKind(
                f"{self.label} desconocido: {kind!r}. Disponibles: {sorted(self._entries)}"
            )
        return entry_class(*args, **kwargs)

    def kinds(self) -> List[str]:
        return sorted(self._entries)

    def __contains__(self, kind: str) -> bool:
        return kind in self._entries
