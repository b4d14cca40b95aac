"""
Excepciones del códec KNX TP1.

Todas derivan de KnxCodecError, que a su vez es un ValueError: son errores de
datos, nunca fallos internos.
"""


class KnxCodecError(ValueError):
    """Error base del códec."""


class TruncatedFrame(KnxCodecError):
    """La trama es más corta de lo que su cabecera anuncia."""


class BadChecksum(KnxCodecError):
    """El octeto de verificación no coincide con el contenido."""


class MalformedFrame(KnxCodecError):
    """Bits fijos violados o campos con una combinación imposible."""


class UnknownEff(KnxCodecError):
    """Código EFF no reconocido en el campo de control extendido."""


class UnknownApci(KnxCodecError):
    """APCI fuera del subconjunto soportado (grupo y propiedades LTE)."""


class InconsistentFrame(KnxCodecError):
    """Los campos del telegrama se contradicen entre sí."""


class LsduTooLong(KnxCodecError):
    """La LSDU no cabe en el campo de longitud del formato elegido."""


class OutOfRange(KnxCodecError):
    """Valor fuera del rango representable (direcciones, DPT9, contadores)."""


class InvalidCode(KnxCodecError):
    """Código DPT9 reservado como inválido (0x7FFF) o de tamaño incorrecto."""
