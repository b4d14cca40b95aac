"""Atajos para telegramas de temperatura (GroupWrite con un DPT9)."""

from .addresses import GroupAddress, IndividualAddress
from .dpt9 import decode_dpt9, encode_dpt9
from .errors import MalformedFrame
from .frames import DEFAULT_HOP_COUNT, GroupResponse, GroupWrite, Telegram


def group_write_dpt9(
    source: IndividualAddress,
    group: GroupAddress,
    celsius: float,
    hop_count: int = DEFAULT_HOP_COUNT,
) -> Telegram:
    return Telegram(source, group, GroupWrite(encode_dpt9(celsius)), hop_count)


def carries_dpt9(telegram: Telegram) -> bool:
    lsdu = telegram.lsdu
    return isinstance(lsdu, (GroupWrite, GroupResponse)) and not lsdu.compact and len(lsdu.data) == 2


def read_dpt9(telegram: Telegram) -> float:
    """
    Extrae la temperatura de un GroupWrite/GroupResponse de 2 octetos.

    Raises:
        MalformedFrame: Si el telegrama no transporta un DPT9
        InvalidCode: Si el código es el reservado 0x7FFF
    """
    if not carries_dpt9(telegram):
        raise MalformedFrame(f"El telegrama no transporta un DPT9: {type(telegram.lsdu).__name__}")
    return decode_dpt9(telegram.lsdu.data)


def rewrite_dpt9(telegram: Telegram, celsius: float) -> Telegram:
    """Mismo telegrama (origen, destino, saltos) con otro valor; el checksum se recalcula al codificar."""
    return telegram.with_lsdu(type(telegram.lsdu)(encode_dpt9(celsius)))
