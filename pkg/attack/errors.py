"""Excepciones del relé MITM."""

from core.registry import UnknownKind


class AttackError(ValueError):
    """Error base del ataque."""


class UndecodableFrame(AttackError):
    """El relé recibió una trama que no pudo decodificar; se cuenta y se descarta."""


class UnknownFalsifier(AttackError, UnknownKind):
    """Tipo de falsificador no registrado."""
