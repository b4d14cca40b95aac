"""Pruebas del códec de telegramas KNX TP1."""

import pytest
from hypothesis import given, settings, strategies as st

from knx_codec import (
    BadChecksum,
    ControlField,
    EffKind,
    FrameType,
    GroupAddress,
    GroupRead,
    GroupResponse,
    GroupWrite,
    InconsistentFrame,
    IndividualAddress,
    InvalidCode,
    LsduTooLong,
    LtePropRead,
    LtePropResponse,
    LtePropWrite,
    LteTagAddress,
    OutOfRange,
    Telegram,
    TruncatedFrame,
    UnknownApci,
    UnknownEff,
    compute_checksum,
    decode_dpt9,
    decode_telegram,
    decrement_hop,
    encode_dpt9,
    encode_telegram,
    group_write_dpt9,
    hex_dump,
    parse_hex,
    read_dpt9,
    rewrite_dpt9,
)
from knx_codec.dpt9 import (
    DPT9_MAX, DPT9_MIN, INVALID_CODE, decode_dpt9_code, dpt9_exponent, encode_dpt9_code, quantize_dpt9,
)
from knx_codec.eff import EFF_RAW_CODES, LTE_KINDS, AddressType, decode_eff

# Trama de referencia: 1.1.1 → 1/1/2, GroupWrite compacto con valor 1
REFERENCE_FRAME = bytes([0xBC, 0x11, 0x01, 0x09, 0x02, 0xE1, 0x00, 0x81, 0x38])

SENSOR = IndividualAddress(1, 1, 10)
ROOM_GROUP = GroupAddress.three_level(1, 0, 1)


# --- checksum -------------------------------------------------------------

@pytest.mark.parametrize("octets, expected", [
    ([0x00], 0xFF),
    ([0xAA, 0xAA], 0xFF),
    ([0xBC, 0x11, 0x01, 0x09, 0x02, 0xE1, 0x00, 0x81], 0x38),
])
def test_compute_checksum(octets, expected):
    assert compute_checksum(octets) == expected


def _checksum_oracle(octets):
    folded = 0
    for octet in octets:
        folded ^= octet
    return 0xFF - folded


@settings(max_examples=1000)
@given(st.binary(min_size=1, max_size=263))
def test_checksum_matches_oracle(octets):
    assert compute_checksum(octets) == _checksum_oracle(octets)


def test_reference_frame_encodes_bit_exact():
    telegram = Telegram(IndividualAddress(1, 1, 1), GroupAddress(0x0902), GroupWrite(b"\x01", compact=True))
    assert encode_telegram(telegram) == REFERENCE_FRAME
    assert decode_telegram(REFERENCE_FRAME) == telegram


def test_new_low_priority_frame_starts_with_0xbc():
    assert ControlField().to_octet() == 0xBC
    assert ControlField(FrameType.EXTENDED).to_octet() == 0x3C


# --- direcciones -----------------------------------------------------------

def test_individual_address_packing_is_exhaustive():
    for raw in range(0x10000):
        address = IndividualAddress.from_int(raw)
        assert address.raw == raw
        assert IndividualAddress.from_string(str(address)) == address


def test_group_address_packing_is_exhaustive():
    for raw in range(0x10000):
        address = GroupAddress.from_int(raw)
        assert int.from_bytes(address.to_bytes(), "big") == raw
        assert GroupAddress.from_string(str(address)) == address


def test_source_address_octets():
    raw = encode_telegram(group_write_dpt9(SENSOR, ROOM_GROUP, 21.0))
    assert raw[1:3] == bytes([0x11, 0x0A])


def test_two_and_three_level_notation_share_identity():
    assert GroupAddress.from_string("1/2/3") == GroupAddress.from_string("1/515")
    assert str(GroupAddress.two_level(1, 515)) == "1/515"


@pytest.mark.parametrize("text", ["16.0.0", "1.16.0", "1.1.256", "1/1", "x.y.z"])
def test_invalid_individual_address(text):
    with pytest.raises(OutOfRange):
        IndividualAddress.from_string(text)


def test_coupler_address():
    assert IndividualAddress(1, 1, 0).is_coupler
    assert not SENSOR.is_coupler


# --- EFF ------------------------------------------------------------------

def test_lte_eff_codes_are_a_bijection():
    codes = {EFF_RAW_CODES[kind] for kind in LTE_KINDS}
    assert codes == {0b0100, 0b0101, 0b0110, 0b0111}
    for kind in LTE_KINDS:
        assert decode_eff(kind.raw, AddressType.GROUP) == kind


@pytest.mark.parametrize("code", [0b0001, 0b0010, 0b0011, 0b1000, 0b1111])
def test_reserved_eff_codes(code):
    with pytest.raises(UnknownEff):
        decode_eff(code, AddressType.GROUP)


def test_lte_code_with_individual_address_type_is_unknown():
    with pytest.raises(UnknownEff):
        decode_eff(0b0100, AddressType.INDIVIDUAL)


def test_lte_geo_lower_nibble():
    telegram = Telegram.extended(SENSOR, LteTagAddress(EffKind.LTE_GEO_LOWER, 0x0101), LtePropWrite(1, 1, 51, b"\x0c\x4c"))
    raw = encode_telegram(telegram)
    assert raw[1] & 0x0F == 0b0100
    assert raw[0] == 0x3C


def test_unassigned_tag_decodes_as_lte_address():
    telegram = Telegram.extended(SENSOR, LteTagAddress(EffKind.LTE_UNASSIGNED, 0x1234), LtePropRead(1, 1, 52))
    raw = encode_telegram(telegram)
    assert raw[1] & 0x0F == 0b0111
    decoded = decode_telegram(raw)
    assert decoded.destination == LteTagAddress(EffKind.LTE_UNASSIGNED, 0x1234)
    assert decoded.eff_kind == EffKind.LTE_UNASSIGNED


def test_unknown_eff_in_frame():
    raw = bytearray(encode_telegram(
        Telegram.extended(SENSOR, LteTagAddress(EffKind.LTE_GEO_LOWER, 1), LtePropRead(1, 1, 51))
    ))
    raw[1] = (raw[1] & 0xF0) | 0b0011
    raw[-1] = compute_checksum(raw[:-1])
    with pytest.raises(UnknownEff):
        decode_telegram(bytes(raw))


# --- codificación y decodificación ------------------------------------------

def test_standard_frame_rejects_lte_destination():
    telegram = Telegram(SENSOR, LteTagAddress(EffKind.LTE_GEO_LOWER, 1), GroupRead())
    with pytest.raises(InconsistentFrame):
        encode_telegram(telegram)


def test_extended_frame_requires_ext_control():
    telegram = Telegram(SENSOR, ROOM_GROUP, GroupRead(), control=ControlField(FrameType.EXTENDED))
    with pytest.raises(InconsistentFrame):
        encode_telegram(telegram)


def test_standard_lsdu_limit():
    fits = Telegram(SENSOR, ROOM_GROUP, GroupWrite(bytes(14)))
    assert len(encode_telegram(fits)) == 7 + 16
    with pytest.raises(LsduTooLong):
        encode_telegram(Telegram(SENSOR, ROOM_GROUP, GroupWrite(bytes(15))))


def test_extended_frame_carries_long_lsdu():
    telegram = Telegram.extended(SENSOR, ROOM_GROUP, GroupWrite(bytes(range(40))))
    assert decode_telegram(encode_telegram(telegram)) == telegram


def test_truncated_frames():
    with pytest.raises(TruncatedFrame):
        decode_telegram(REFERENCE_FRAME[:5])
    longer = bytearray(encode_telegram(group_write_dpt9(SENSOR, ROOM_GROUP, 21.0)))
    shorter = longer[:-2]
    shorter.append(compute_checksum(shorter))
    with pytest.raises(TruncatedFrame):
        decode_telegram(bytes(shorter))


def test_last_octet_flipped_is_bad_checksum():
    raw = bytearray(REFERENCE_FRAME)
    raw[-1] ^= 0xFF
    with pytest.raises(BadChecksum):
        decode_telegram(bytes(raw))


def test_unknown_apci():
    raw = bytearray(REFERENCE_FRAME)
    raw[6], raw[7] = 0x03, 0x00
    raw[-1] = compute_checksum(raw[:-1])
    with pytest.raises(UnknownApci):
        decode_telegram(bytes(raw))


def test_hex_dump_round_trip():
    assert hex_dump(REFERENCE_FRAME) == "bc 11 01 09 02 e1 00 81 38"
    assert parse_hex("bc 11 01 09 02 e1 00 81 38") == REFERENCE_FRAME


# --- propiedades ----------------------------------------------------------

individual_addresses = st.integers(0, 0xFFFF).map(IndividualAddress.from_int)
group_addresses = st.integers(0, 0xFFFF).map(GroupAddress.from_int)
lte_tags = st.builds(LteTagAddress, st.sampled_from(sorted(LTE_KINDS, key=lambda k: k.value)), st.integers(0, 0xFFFF))


def _group_values(max_data: int):
    compact = st.integers(0, 0x3F).map(lambda v: bytes([v]))
    wide = st.binary(min_size=1, max_size=max_data)
    return st.one_of(
        st.just(GroupRead()),
        st.builds(GroupWrite, compact, st.just(True)),
        st.builds(GroupResponse, compact, st.just(True)),
        st.builds(GroupWrite, wide),
        st.builds(GroupResponse, wide),
    )


lte_services = st.one_of(
    st.builds(LtePropRead, st.integers(0, 0xFFFF), st.integers(0, 0xFF), st.integers(0, 0xFF)),
    st.builds(LtePropResponse, st.integers(0, 0xFFFF), st.integers(0, 0xFF), st.integers(0, 0xFF), st.binary(max_size=20)),
    st.builds(LtePropWrite, st.integers(0, 0xFFFF), st.integers(0, 0xFF), st.integers(0, 0xFF), st.binary(max_size=20)),
)


@st.composite
def telegrams(draw):
    source = draw(individual_addresses)
    hop_count = draw(st.integers(0, 7))
    priority = draw(st.integers(0, 3))
    repeat = draw(st.booleans())
    if draw(st.booleans()):
        destination = draw(st.one_of(group_addresses, individual_addresses))
        control = ControlField(FrameType.STANDARD, repeat, priority)
        return Telegram(source, destination, draw(_group_values(14)), hop_count, control)
    destination = draw(st.one_of(group_addresses, individual_addresses, lte_tags))
    lsdu = draw(st.one_of(_group_values(60), lte_services))
    return Telegram.extended(source, destination, lsdu, hop_count, priority, repeat)


@settings(max_examples=10_000, deadline=None)
@given(telegrams())
def test_round_trip(telegram):
    raw = encode_telegram(telegram)
    decoded = decode_telegram(raw)
    assert decoded == telegram
    assert encode_telegram(decoded) == raw
    assert raw[-1] == compute_checksum(raw[:-1])


@settings(max_examples=500, deadline=None)
@given(telegrams(), st.data())
def test_single_bit_flip_is_bad_checksum(telegram, data):
    raw = bytearray(encode_telegram(telegram))
    bit = data.draw(st.integers(0, len(raw) * 8 - 1))
    raw[bit // 8] ^= 1 << (bit % 8)
    with pytest.raises(BadChecksum):
        decode_telegram(bytes(raw))


# --- saltos ---------------------------------------------------------------

def test_decrement_hop_multicast():
    telegram = group_write_dpt9(SENSOR, ROOM_GROUP, 21.0, hop_count=6)
    decremented = decrement_hop(telegram)
    assert decremented.hop_count == 5
    raw = encode_telegram(decremented)
    assert (raw[5] >> 4) & 0x07 == 5
    assert raw[-1] == compute_checksum(raw[:-1])


def test_hop_seven_is_never_decremented():
    telegram = Telegram(SENSOR, GroupAddress(0), GroupRead(), hop_count=7)
    assert decrement_hop(telegram) == telegram


def test_hop_zero_floor():
    telegram = Telegram(SENSOR, ROOM_GROUP, GroupRead(), hop_count=0)
    decremented = decrement_hop(telegram)
    assert decremented.hop_count == 0
    assert not decremented.forwardable


def test_decrement_hop_keeps_extended_control_in_sync():
    telegram = Telegram.extended(SENSOR, LteTagAddress(EffKind.LTE_GEO_UPPER, 7), LtePropRead(1, 1, 51), hop_count=6)
    decremented = decrement_hop(telegram)
    assert decremented.ext_control.hop_count == 5
    assert decode_telegram(encode_telegram(decremented)) == decremented


# --- DPT9 -----------------------------------------------------------------

@pytest.mark.parametrize("celsius, code", [(0.0, 0x0000), (22.0, 0x0C4C), (-10.0, 0x8418), (0.5, 0x0032)])
def test_dpt9_reference_codes(celsius, code):
    assert encode_dpt9_code(celsius) == code
    assert encode_dpt9(celsius) == code.to_bytes(2, "big")


@pytest.mark.parametrize("celsius", [-10.0, 0.5, 35.27, 22.005, -273.0])
def test_dpt9_resolution(celsius):
    code = encode_dpt9_code(celsius)
    assert abs(decode_dpt9_code(code) - celsius) <= 0.005 * 2 ** dpt9_exponent(code) + 1e-9


def test_dpt9_decode_is_total_except_invalid_code():
    for code in range(0x10000):
        if code == INVALID_CODE:
            with pytest.raises(InvalidCode):
                decode_dpt9_code(code)
            continue
        value = decode_dpt9_code(code)
        again = encode_dpt9_code(value)
        assert decode_dpt9_code(again) == value
        assert encode_dpt9_code(decode_dpt9_code(again)) == again


@pytest.mark.parametrize("celsius", [float("nan"), float("inf"), DPT9_MAX * 1.01, DPT9_MIN * 1.01])
def test_dpt9_out_of_range(celsius):
    with pytest.raises(OutOfRange):
        encode_dpt9(celsius)


def test_dpt9_needs_two_octets():
    with pytest.raises(InvalidCode):
        decode_dpt9(b"\x0c")


def _rounding_bound(code: int) -> float:
    # una mantisa -2048 puede venir de redondear -1024 con un exponente más
    exponent = dpt9_exponent(code)
    if code & 0x87FF == 0x8000 and exponent < 15:
        exponent += 1
    return 0.005 * 2 ** exponent * (1 + 1e-9)


@given(st.floats(min_value=DPT9_MIN, max_value=DPT9_MAX, allow_nan=False))
def test_dpt9_encode_is_idempotent(celsius):
    code = encode_dpt9_code(celsius)
    assert encode_dpt9_code(decode_dpt9_code(code)) == code
    assert abs(decode_dpt9_code(code) - celsius) <= _rounding_bound(code)


@pytest.mark.parametrize("celsius, code", [(-20.488, 0x8000), (-20.49, 0x8000), (-40.97, 0x8800)])
def test_dpt9_uses_smallest_exponent_after_rounding(celsius, code):
    assert encode_dpt9_code(celsius) == code
    assert encode_dpt9_code(decode_dpt9_code(code)) == code
    assert quantize_dpt9(quantize_dpt9(celsius)) == quantize_dpt9(celsius)


def test_rewrite_keeps_addresses_and_hop():
    original = group_write_dpt9(SENSOR, ROOM_GROUP, 22.0, hop_count=5)
    rewritten = rewrite_dpt9(original, 23.0)
    assert (rewritten.source, rewritten.destination, rewritten.hop_count) == (SENSOR, ROOM_GROUP, 5)
    assert read_dpt9(rewritten) == 23.0
    assert encode_telegram(rewritten)[-1] != encode_telegram(original)[-1]
