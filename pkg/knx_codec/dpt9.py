"""
DPT 9.xxx: flotante KNX de 2 octetos, S(1) E(4) M(11).

valor = 0.01 · M · 2^E, con M en complemento a dos sobre 12 bits (el signo S
es el bit alto de M).
"""

import math
from typing import Tuple, Union

from .errors import InvalidCode, OutOfRange

INVALID_CODE = 0x7FFF
MANTISSA_MIN = -2048
MANTISSA_MAX = 2047
MAX_EXPONENT = 15
DPT9_MIN = MANTISSA_MIN * 2 ** MAX_EXPONENT / 100
DPT9_MAX = 2046 * 2 ** MAX_EXPONENT / 100


def _pack(mantissa: int, exponent: int) -> int:
    twos = mantissa & 0x0FFF
    return ((twos >> 11) << 15) | (exponent << 11) | (twos & 0x07FF)


def encode_dpt9_code(celsius: float) -> int:
    """
    Codifica un valor con el menor exponente en el que cabe la mantisa.

    Raises:
        OutOfRange: Valor no finito, fuera de rango o que cae en el código inválido
    """
    if not math.isfinite(celsius):
        raise OutOfRange(f"Valor DPT9 no finito: {celsius!r}")
    scaled = celsius * 100
    for exponent in range(MAX_EXPONENT + 1):
        mantissa = round(scaled / (1 << exponent))
        if MANTISSA_MIN <= mantissa <= MANTISSA_MAX:
            code = _pack(*_normalize(mantissa, exponent))
            if code == INVALID_CODE:
                break
            return code
    raise OutOfRange(f"Valor fuera del rango DPT9 [{DPT9_MIN}, {DPT9_MAX}]: {celsius}")


def _normalize(mantissa: int, exponent: int) -> Tuple[int, int]:
    # el redondeo puede dejar un valor que cabe con menos exponente (-1024·2^E == -2048·2^(E-1))
    while exponent > 0 and MANTISSA_MIN <= mantissa * 2 <= MANTISSA_MAX:
        mantissa, exponent = mantissa * 2, exponent - 1
    return mantissa, exponent


def quantize_dpt9(celsius: float) -> float:
    """Valor que recibe quien decodifica `celsius` tras pasar por el bus."""
    return decode_dpt9_code(encode_dpt9_code(celsius))


def decode_dpt9_code(code: int) -> float:
    if not 0 <= code <= 0xFFFF:
        raise InvalidCode(f"Código DPT9 de más de 16 bits: {code:#x}")
    if code == INVALID_CODE:
        raise InvalidCode("0x7FFF está reservado como dato inválido")
    exponent = (code >> 11) & 0x0F
    mantissa = code & 0x07FF
    if code & 0x8000:
        mantissa -= 2048
    return mantissa * (1 << exponent) / 100


def encode_dpt9(celsius: float) -> bytes:
    return encode_dpt9_code(celsius).to_bytes(2, "big")


def decode_dpt9(code: Union[bytes, bytearray]) -> float:
    if len(code) != 2:
        raise InvalidCode(f"Un valor DPT9 ocupa 2 octetos, no {len(code)}")
    return decode_dpt9_code(int.from_bytes(code, "big"))


def dpt9_exponent(code: int) -> int:
    """Exponente E de un código; fija la resolución 0.01·2^E del valor."""
    return (code >> 11) & 0x0F
