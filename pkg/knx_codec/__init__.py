"""Códec bit a bit de telegramas KNX TP1 (modo S y modo LTE)."""

from .addresses import GroupAddress, GroupAddressStyle, IndividualAddress, LteTagAddress
from .checksum import compute_checksum
from .dpt9 import decode_dpt9, encode_dpt9, quantize_dpt9
from .eff import AddressType, EffKind
from .errors import (
    BadChecksum,
    InconsistentFrame,
    InvalidCode,
    KnxCodecError,
    LsduTooLong,
    MalformedFrame,
    OutOfRange,
    TruncatedFrame,
    UnknownApci,
    UnknownEff,
)
from .frames import (
    ControlField,
    ExtendedControlField,
    FrameType,
    GroupRead,
    GroupResponse,
    GroupWrite,
    LtePropRead,
    LtePropResponse,
    LtePropWrite,
    Telegram,
    decode_telegram,
    decrement_hop,
    encode_telegram,
    hex_dump,
    parse_hex,
)
from .temperature import carries_dpt9, group_write_dpt9, read_dpt9, rewrite_dpt9

__all__ = [
    "AddressType", "BadChecksum", "ControlField", "EffKind", "ExtendedControlField", "FrameType",
    "GroupAddress", "GroupAddressStyle", "GroupRead", "GroupResponse", "GroupWrite",
    "InconsistentFrame", "IndividualAddress", "InvalidCode", "KnxCodecError", "LsduTooLong",
    "LtePropRead", "LtePropResponse", "LtePropWrite", "LteTagAddress", "MalformedFrame",
    "OutOfRange", "Telegram", "TruncatedFrame", "UnknownApci", "UnknownEff",
    "carries_dpt9", "compute_checksum", "decode_dpt9", "decode_telegram", "decrement_hop",
    "encode_dpt9", "encode_telegram", "group_write_dpt9", "hex_dump", "parse_hex",
    "quantize_dpt9", "read_dpt9", "rewrite_dpt9",
]
