"""Octeto de verificación TP1: complemento del XOR de todos los octetos previos."""

import operator
from functools import reduce
from typing import Iterable


def compute_checksum(octets: Iterable[int]) -> int:
    """
    Calcula el checksum de una trama KNX TP1 (paridad impar cruzada).

    Args:
        octets: Secuencia no vacía de octetos (todo salvo el propio checksum)

    Returns:
        Octeto de verificación
    """
    return ~reduce(operator.xor, octets, 0) & 0xFF
