"""
Extended Frame Format (EFF) y tipo de dirección.

El nibble EFF del campo de control extendido decide cómo se interpreta la
dirección de destino: grupo, individual o una de las cuatro etiquetas LTE.
"""

from enum import Enum, IntEnum
from typing import Dict, Optional

from .errors import UnknownEff


class AddressType(IntEnum):
    """Bit de tipo de dirección (AT) del NPCI y del control extendido."""

    INDIVIDUAL = 0
    GROUP = 1


class EffKind(Enum):
    STD_GROUP = "std_group"
    STD_INDIVIDUAL = "std_individual"
    EXT_GROUP = "ext_group"
    EXT_INDIVIDUAL = "ext_individual"
    LTE_GEO_LOWER = "lte_geo_lower"
    LTE_GEO_UPPER = "lte_geo_upper"
    LTE_APP_SPECIFIC = "lte_app_specific"
    LTE_UNASSIGNED = "lte_unassigned"

    @property
    def raw(self) -> Optional[int]:
        """Código de 4 bits, o None para las variantes estándar (no llevan nibble)."""
        return EFF_RAW_CODES.get(self)

    @property
    def is_lte(self) -> bool:
        return self in LTE_KINDS

    @property
    def address_type(self) -> AddressType:
        if self in (EffKind.STD_INDIVIDUAL, EffKind.EXT_INDIVIDUAL):
            return AddressType.INDIVIDUAL
        return AddressType.GROUP


# Los códigos 0 se comparten entre grupo e individual, por eso no son valores del Enum
EFF_RAW_CODES: Dict[EffKind, int] = {
    EffKind.EXT_GROUP: 0b0000,
    EffKind.EXT_INDIVIDUAL: 0b0000,
    EffKind.LTE_GEO_LOWER: 0b0100,
    EffKind.LTE_GEO_UPPER: 0b0101,
    EffKind.LTE_APP_SPECIFIC: 0b0110,
    EffKind.LTE_UNASSIGNED: 0b0111,
}

LTE_KINDS = frozenset({
    EffKind.LTE_GEO_LOWER,
    EffKind.LTE_GEO_UPPER,
    EffKind.LTE_APP_SPECIFIC,
    EffKind.LTE_UNASSIGNED,
})

_LTE_BY_CODE: Dict[int, EffKind] = {EFF_RAW_CODES[kind]: kind for kind in LTE_KINDS}


def decode_eff(code: int, address_type: AddressType) -> EffKind:
    """
    Traduce el nibble EFF recibido a su variante.

    Args:
        code: Nibble bajo del control extendido
        address_type: Bit AT del mismo octeto

    Returns:
        Variante EffKind correspondiente

    Raises:
        UnknownEff: Si el código no existe o no encaja con el tipo de dirección
    """
    if code == 0:
        if address_type == AddressType.GROUP:
            return EffKind.EXT_GROUP
        return EffKind.EXT_INDIVIDUAL
    if address_type == AddressType.GROUP and code in _LTE_BY_CODE:
        return _LTE_BY_CODE[code]
    raise UnknownEff(f"Código EFF desconocido: {code:#06b} (AT={int(address_type)})")
