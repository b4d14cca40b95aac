"""
Codificación y decodificación bit a bit de telegramas KNX TP1.

Formatos soportados:

    Estándar:  [control][src hi][src lo][dst hi][dst lo][NPCI: AT|hop|len][LSDU: len+1][checksum]
    Extendido: [control][ctrl ext: AT|hop|EFF][src hi][src lo][dst hi][dst lo][len][LSDU: len][checksum]

Ambos ocupan `campo de longitud + 8` octetos.
"""

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Optional, Union

from .addresses import GroupAddress, IndividualAddress, LteTagAddress
from .checksum import compute_checksum
from .eff import AddressType, EffKind, decode_eff
from .errors import (
    BadChecksum,
    InconsistentFrame,
    LsduTooLong,
    MalformedFrame,
    OutOfRange,
    TruncatedFrame,
    UnknownApci,
)

MIN_FRAME_LENGTH = 9
MAX_STANDARD_LSDU = 16
MAX_EXTENDED_LSDU = 255
DEFAULT_HOP_COUNT = 6
HOP_NEVER_DECREMENTED = 7

Destination = Union[GroupAddress, IndividualAddress, LteTagAddress]


class FrameType(Enum):
    STANDARD = "standard"
    EXTENDED = "extended"


@dataclass(frozen=True)
class ControlField:
    """
    Primer octeto de la trama con el patrón `F0R1PP00`.

    F = 1 para tramas estándar y 0 para extendidas. R = 1 significa "no
    repetida", así que un telegrama nuevo de prioridad baja es 0xBC.
    """

    frame_type: FrameType = FrameType.STANDARD
    repeat: bool = False
    priority: int = 3

    _FIXED_MASK: ClassVar[int] = 0x53
    _FIXED_VALUE: ClassVar[int] = 0x10

    def __post_init__(self):
        if not 0 <= self.priority <= 3:
            raise OutOfRange(f"Prioridad fuera de rango: {self.priority}")

    def to_octet(self) -> int:
        octet = self._FIXED_VALUE | (self.priority << 2)
        if self.frame_type == FrameType.STANDARD:
            octet |= 0x80
        if not self.repeat:
            octet |= 0x20
        return octet

    @classmethod
    def from_octet(cls, octet: int) -> "ControlField":
        if octet & cls._FIXED_MASK != cls._FIXED_VALUE:
            raise MalformedFrame(f"Bits fijos del campo de control incorrectos: {octet:#04x}")
        frame_type = FrameType.STANDARD if octet & 0x80 else FrameType.EXTENDED
        return cls(frame_type=frame_type, repeat=not octet & 0x20, priority=(octet >> 2) & 0x03)


@dataclass(frozen=True)
class ExtendedControlField:
    """Segundo octeto de las tramas extendidas: AT(1) | hop(3) | EFF(4)."""

    address_type: AddressType
    hop_count: int
    eff: EffKind

    def __post_init__(self):
        if not 0 <= self.hop_count <= 7:
            raise OutOfRange(f"Contador de saltos fuera de rango: {self.hop_count}")
        if self.eff.raw is None:
            raise InconsistentFrame(f"{self.eff.name} no puede ir en un control extendido")

    def to_octet(self) -> int:
        return (int(self.address_type) << 7) | (self.hop_count << 4) | self.eff.raw

    @classmethod
    def from_octet(cls, octet: int) -> "ExtendedControlField":
        address_type = AddressType(octet >> 7)
        return cls(address_type, (octet >> 4) & 0x07, decode_eff(octet & 0x0F, address_type))


# --- LSDU -----------------------------------------------------------------

@dataclass(frozen=True)
class GroupRead:
    APCI: ClassVar[int] = 0x000


@dataclass(frozen=True)
class _GroupValue:
    """Base de GroupWrite/GroupResponse: datos de 6 bits en línea o en octetos aparte."""

    data: bytes = b""
    compact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "data", bytes(self.data))
        if self.compact:
            if len(self.data) != 1 or self.data[0] > 0x3F:
                raise OutOfRange("Los datos compactos son un único valor de 6 bits")
        elif not self.data:
            raise MalformedFrame("Un valor no compacto necesita al menos un octeto de datos")


@dataclass(frozen=True)
class GroupResponse(_GroupValue):
    APCI: ClassVar[int] = 0x040


@dataclass(frozen=True)
class GroupWrite(_GroupValue):
    APCI: ClassVar[int] = 0x080


@dataclass(frozen=True)
class _LteProperty:
    ot: int
    oi: int
    pid: int

    def __post_init__(self):
        if not 0 <= self.ot <= 0xFFFF or not 0 <= self.oi <= 0xFF or not 0 <= self.pid <= 0xFF:
            raise OutOfRange(f"OT/OI/PID fuera de rango: {self.ot}/{self.oi}/{self.pid}")


@dataclass(frozen=True)
class LtePropRead(_LteProperty):
    APCI: ClassVar[int] = 0x3D5


@dataclass(frozen=True)
class _LtePropertyData(_LteProperty):
    data: bytes = b""

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "data", bytes(self.data))


@dataclass(frozen=True)
class LtePropResponse(_LtePropertyData):
    APCI: ClassVar[int] = 0x3D6


@dataclass(frozen=True)
class LtePropWrite(_LtePropertyData):
    APCI: ClassVar[int] = 0x3D7


Lsdu = Union[GroupRead, GroupWrite, GroupResponse, LtePropRead, LtePropResponse, LtePropWrite]

LTE_LSDU_TYPES = (LtePropRead, LtePropResponse, LtePropWrite)
_LTE_BY_APCI = {cls.APCI: cls for cls in LTE_LSDU_TYPES}


def encode_lsdu(lsdu: Lsdu) -> bytes:
    head = (lsdu.APCI >> 8) & 0x03
    if isinstance(lsdu, GroupRead):
        return bytes([head, 0x00])
    if isinstance(lsdu, _GroupValue):
        if lsdu.compact:
            return bytes([head, (lsdu.APCI & 0xC0) | lsdu.data[0]])
        return bytes([head, lsdu.APCI & 0xC0]) + lsdu.data
    if isinstance(lsdu, _LteProperty):
        body = bytes([head, lsdu.APCI & 0xFF]) + lsdu.ot.to_bytes(2, "big") + bytes([lsdu.oi, lsdu.pid])
        if isinstance(lsdu, _LtePropertyData):
            body += lsdu.data
        return body
    raise UnknownApci(f"Tipo de LSDU no soportado: {type(lsdu).__name__}")


def decode_lsdu(raw: bytes) -> Lsdu:
    """
    Interpreta la LSDU (TPCI + APCI + datos).

    Raises:
        UnknownApci: TPCI distinto de datos de grupo o APCI no soportado
        MalformedFrame: Longitud o bits de relleno incompatibles con el APCI
    """
    if len(raw) < 2:
        raise MalformedFrame("La LSDU tiene al menos dos octetos")
    if raw[0] & 0xFC:
        raise UnknownApci(f"TPCI no soportado: {raw[0] >> 2:#04x}")
    apci = ((raw[0] & 0x03) << 8) | raw[1]
    service = apci >> 6

    if service == GroupRead.APCI >> 6:
        if len(raw) != 2 or raw[1] & 0x3F:
            raise MalformedFrame("GroupRead no transporta datos")
        return GroupRead()
    if service in (GroupResponse.APCI >> 6, GroupWrite.APCI >> 6):
        cls = GroupWrite if service == GroupWrite.APCI >> 6 else GroupResponse
        if len(raw) == 2:
            return cls(bytes([raw[1] & 0x3F]), compact=True)
        if raw[1] & 0x3F:
            raise MalformedFrame("Bits de datos en línea junto a octetos de datos")
        return cls(raw[2:])

    lte_cls = _LTE_BY_APCI.get(apci)
    if lte_cls is None:
        raise UnknownApci(f"APCI no soportado: {apci:#05x}")
    if len(raw) < 6:
        raise MalformedFrame("LSDU LTE truncada: faltan OT/OI/PID")
    ot = int.from_bytes(raw[2:4], "big")
    if lte_cls is LtePropRead:
        if len(raw) != 6:
            raise MalformedFrame("LtePropRead no transporta datos")
        return LtePropRead(ot, raw[4], raw[5])
    return lte_cls(ot, raw[4], raw[5], raw[6:])


# --- Telegrama ------------------------------------------------------------

@dataclass(frozen=True)
class Telegram:
    """
    Telegrama KNX decodificado.

    `hop_count` vive en el NPCI (estándar) o en el control extendido; en las
    tramas extendidas ambos valores deben coincidir. El checksum se deriva de
    la codificación.
    """

    source: IndividualAddress
    destination: Destination
    lsdu: Lsdu
    hop_count: int = DEFAULT_HOP_COUNT
    control: ControlField = field(default_factory=ControlField)
    ext_control: Optional[ExtendedControlField] = None

    @classmethod
    def extended(
        cls,
        source: IndividualAddress,
        destination: Destination,
        lsdu: Lsdu,
        hop_count: int = DEFAULT_HOP_COUNT,
        priority: int = 3,
        repeat: bool = False,
    ) -> "Telegram":
        """Construye un telegrama extendido con un control extendido coherente con el destino."""
        if isinstance(destination, LteTagAddress):
            eff = destination.kind
        elif isinstance(destination, GroupAddress):
            eff = EffKind.EXT_GROUP
        else:
            eff = EffKind.EXT_INDIVIDUAL
        return cls(
            source=source,
            destination=destination,
            lsdu=lsdu,
            hop_count=hop_count,
            control=ControlField(FrameType.EXTENDED, repeat, priority),
            ext_control=ExtendedControlField(eff.address_type, hop_count, eff),
        )

    @property
    def is_extended(self) -> bool:
        return self.control.frame_type == FrameType.EXTENDED

    @property
    def address_type(self) -> AddressType:
        if isinstance(self.destination, IndividualAddress):
            return AddressType.INDIVIDUAL
        return AddressType.GROUP

    @property
    def eff_kind(self) -> EffKind:
        if self.ext_control is not None:
            return self.ext_control.eff
        if self.address_type == AddressType.GROUP:
            return EffKind.STD_GROUP
        return EffKind.STD_INDIVIDUAL

    @property
    def is_multicast(self) -> bool:
        return self.address_type == AddressType.GROUP

    @property
    def forwardable(self) -> bool:
        """Un acoplador solo reenvía telegramas con saltos restantes."""
        return self.hop_count > 0

    @property
    def checksum(self) -> int:
        return encode_telegram(self)[-1]

    def with_lsdu(self, lsdu: Lsdu) -> "Telegram":
        return dataclasses.replace(self, lsdu=lsdu)


def _check_consistency(telegram: Telegram) -> None:
    if not 0 <= telegram.hop_count <= 7:
        raise OutOfRange(f"Contador de saltos fuera de rango: {telegram.hop_count}")
    destination = telegram.destination
    ext = telegram.ext_control

    if telegram.control.frame_type == FrameType.STANDARD:
        if ext is not None:
            raise InconsistentFrame("Una trama estándar no lleva control extendido")
        if isinstance(destination, LteTagAddress):
            raise InconsistentFrame("Las etiquetas LTE solo viajan en tramas extendidas")
        if isinstance(telegram.lsdu, LTE_LSDU_TYPES):
            raise InconsistentFrame("Los servicios de propiedades LTE solo viajan en tramas extendidas")
        return

    if ext is None:
        raise InconsistentFrame("Una trama extendida necesita control extendido")
    if ext.hop_count != telegram.hop_count:
        raise InconsistentFrame(
            f"Saltos incoherentes: telegrama {telegram.hop_count}, control extendido {ext.hop_count}"
        )
    if ext.address_type != ext.eff.address_type:
        raise InconsistentFrame(f"EFF {ext.eff.name} incompatible con AT={int(ext.address_type)}")
    if ext.eff.is_lte:
        consistent = isinstance(destination, LteTagAddress) and destination.kind == ext.eff
    elif ext.eff == EffKind.EXT_GROUP:
        consistent = isinstance(destination, GroupAddress)
    else:
        consistent = isinstance(destination, IndividualAddress)
    if not consistent:
        raise InconsistentFrame(f"Destino {destination} incompatible con EFF {ext.eff.name}")


def encode_telegram(telegram: Telegram) -> bytes:
    """
    Serializa un telegrama a octetos, checksum incluido.

    Raises:
        InconsistentFrame: Si los campos se contradicen
        LsduTooLong: Si la LSDU no cabe en el campo de longitud
    """
    _check_consistency(telegram)
    lsdu = encode_lsdu(telegram.lsdu)
    addresses = telegram.source.to_bytes() + telegram.destination.to_bytes()

    if telegram.ext_control is None:
        if len(lsdu) > MAX_STANDARD_LSDU:
            raise LsduTooLong(f"LSDU de {len(lsdu)} octetos; máximo {MAX_STANDARD_LSDU} en trama estándar")
        npci = (int(telegram.address_type) << 7) | (telegram.hop_count << 4) | (len(lsdu) - 1)
        body = bytes([telegram.control.to_octet()]) + addresses + bytes([npci]) + lsdu
    else:
        if len(lsdu) > MAX_EXTENDED_LSDU:
            raise LsduTooLong(f"LSDU de {len(lsdu)} octetos; máximo {MAX_EXTENDED_LSDU} en trama extendida")
        body = (
            bytes([telegram.control.to_octet(), telegram.ext_control.to_octet()])
            + addresses
            + bytes([len(lsdu)])
            + lsdu
        )
    return body + bytes([compute_checksum(body)])


def _decode_destination(raw: int, address_type: AddressType, eff: Optional[EffKind]) -> Destination:
    if eff is not None and eff.is_lte:
        return LteTagAddress(eff, raw)
    if address_type == AddressType.GROUP:
        return GroupAddress.from_int(raw)
    return IndividualAddress.from_int(raw)


def decode_telegram(raw: bytes) -> Telegram:
    """
    Decodifica una trama completa.

    El checksum se comprueba antes de interpretar ningún campo, de modo que
    cualquier corrupción de un bit se informa como BadChecksum.

    Args:
        raw: Octetos recibidos, checksum incluido

    Returns:
        Telegrama cuya recodificación reproduce `raw` octeto a octeto

    Raises:
        TruncatedFrame, BadChecksum, MalformedFrame, UnknownEff, UnknownApci, InconsistentFrame
    """
    raw = bytes(raw)
    if len(raw) < MIN_FRAME_LENGTH:
        raise TruncatedFrame(f"Trama de {len(raw)} octetos; mínimo {MIN_FRAME_LENGTH}")
    expected = compute_checksum(raw[:-1])
    if raw[-1] != expected:
        raise BadChecksum(f"Checksum {raw[-1]:#04x}, esperado {expected:#04x}")

    control = ControlField.from_octet(raw[0])
    if control.frame_type == FrameType.STANDARD:
        npci = raw[5]
        address_type = AddressType(npci >> 7)
        hop_count = (npci >> 4) & 0x07
        lsdu_start, lsdu_length = 6, (npci & 0x0F) + 1
        ext_control = None
        offset = 1
    else:
        ext_control = ExtendedControlField.from_octet(raw[1])
        address_type = ext_control.address_type
        hop_count = ext_control.hop_count
        lsdu_start, lsdu_length = 7, raw[6]
        offset = 2

    declared = lsdu_start + lsdu_length + 1
    if len(raw) < declared:
        raise TruncatedFrame(f"La cabecera anuncia {declared} octetos y llegaron {len(raw)}")
    if len(raw) > declared:
        raise MalformedFrame(f"La cabecera anuncia {declared} octetos y llegaron {len(raw)}")

    source = IndividualAddress.from_int(int.from_bytes(raw[offset:offset + 2], "big"))
    destination = _decode_destination(
        int.from_bytes(raw[offset + 2:offset + 4], "big"),
        address_type,
        ext_control.eff if ext_control else None,
    )
    lsdu = decode_lsdu(raw[lsdu_start:lsdu_start + lsdu_length])

    telegram = Telegram(source, destination, lsdu, hop_count, control, ext_control)
    _check_consistency(telegram)
    return telegram


def decrement_hop(telegram: Telegram) -> Telegram:
    """
    Devuelve el telegrama con un salto menos.

    El valor 7 no se decrementa nunca y 0 se queda en 0 (ya no es reenviable).
    """
    if telegram.hop_count in (0, HOP_NEVER_DECREMENTED):
        return telegram
    hop_count = telegram.hop_count - 1
    ext_control = telegram.ext_control
    if ext_control is not None:
        ext_control = dataclasses.replace(ext_control, hop_count=hop_count)
    return dataclasses.replace(telegram, hop_count=hop_count, ext_control=ext_control)


def hex_dump(octets: bytes) -> str:
    """Forma textual de la CLI: hexadecimal en minúsculas separado por espacios."""
    return " ".join(f"{octet:02x}" for octet in octets)


def parse_hex(text: str) -> bytes:
    return bytes.fromhex(text)
