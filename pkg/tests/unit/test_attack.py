"""Pruebas del relé MITM, los falsificadores y el modelo de retardo."""

import json

import numpy as np
import pytest

from attack import (
    AttackError,
    AttackScenario,
    BiasAdd,
    DelayModel,
    Override,
    Passthrough,
    RelayPair,
    UndecodableFrame,
    UnknownFalsifier,
    build_falsifier,
    relay_process,
    single_device_mitm,
)
from bus_sim import BusSimulator, PassiveTap, SensorConfig, TemperatureSensor
from knx_codec import (
    GroupAddress,
    GroupRead,
    GroupWrite,
    IndividualAddress,
    Telegram,
    decode_telegram,
    encode_dpt9,
    encode_telegram,
    group_write_dpt9,
    read_dpt9,
)
from knx_codec.dpt9 import decode_dpt9_code, dpt9_exponent

SENSOR = IndividualAddress(1, 1, 10)
ROOM_GROUP = GroupAddress.three_level(1, 0, 1)
SENSOR_SIDE, CONTROLLER_SIDE = 1, 0


def _pair(falsifier, delay=None):
    return RelayPair(SENSOR_SIDE, CONTROLLER_SIDE, delay or DelayModel(0.0, 0.0), falsifier)


# --- falsificadores -------------------------------------------------------

def test_bias_adds_one_degree():
    pair = _pair(build_falsifier("bias", 1.0, SENSOR, ROOM_GROUP))
    emission = relay_process(pair, group_write_dpt9(SENSOR, ROOM_GROUP, 22.0), 10.0)
    assert read_dpt9(decode_telegram(emission.raw)) == 23.0
    assert emission.modified
    assert emission.segment == CONTROLLER_SIDE
    assert pair.stats()["modified"] == 1


def test_override_sends_nearest_code():
    pair = _pair(build_falsifier("override", 22.005, SENSOR, ROOM_GROUP))
    emission = relay_process(pair, group_write_dpt9(SENSOR, ROOM_GROUP, 19.4), 10.0)
    telegram = decode_telegram(emission.raw)
    assert telegram.lsdu.data == encode_dpt9(22.005)
    assert telegram.source == SENSOR


def test_passthrough_is_byte_identical():
    delay = DelayModel(0.05, 0.02, seed=1)
    pair = _pair(Passthrough(), delay)
    raw = encode_telegram(group_write_dpt9(SENSOR, ROOM_GROUP, 21.5))
    emission = relay_process(pair, raw, 100.0)
    assert emission.raw == raw
    assert not emission.modified
    assert emission.time >= 100.0


def test_non_victim_traffic_is_untouched():
    pair = _pair(BiasAdd(1.0, SENSOR, ROOM_GROUP))
    other_source = group_write_dpt9(IndividualAddress(1, 1, 11), ROOM_GROUP, 21.0)
    other_group = group_write_dpt9(SENSOR, GroupAddress.three_level(1, 0, 2), 21.0)
    read = Telegram(SENSOR, ROOM_GROUP, GroupRead())
    for telegram in (other_source, other_group, read):
        raw = encode_telegram(telegram)
        assert relay_process(pair, raw, 0.0).raw == raw


def test_controller_to_sensor_is_always_passthrough():
    pair = _pair(BiasAdd(1.0))
    raw = encode_telegram(group_write_dpt9(SENSOR, ROOM_GROUP, 22.0))
    emission = relay_process(pair, raw, 0.0, from_segment=CONTROLLER_SIDE)
    assert emission.raw == raw
    assert emission.segment == SENSOR_SIDE


def test_relay_does_not_touch_hop_count():
    pair = _pair(BiasAdd(1.0))
    emission = relay_process(pair, group_write_dpt9(SENSOR, ROOM_GROUP, 22.0, hop_count=6), 0.0)
    assert decode_telegram(emission.raw).hop_count == 6


def test_undecodable_frame_is_counted_and_dropped():
    pair = _pair(BiasAdd(1.0))
    raw = bytearray(encode_telegram(group_write_dpt9(SENSOR, ROOM_GROUP, 22.0)))
    raw[-1] ^= 0x01
    with pytest.raises(UndecodableFrame):
        relay_process(pair, bytes(raw), 0.0)
    assert pair.stats()["dropped"] == 1
    assert pair.stats()["forwarded"] == 0


@pytest.mark.parametrize("celsius", [-5.0, 0.0, 19.37, 21.5, 35.27])
@pytest.mark.parametrize("bias", [0.5, 1.0, 2.0])
def test_bias_is_within_one_quantum(celsius, bias):
    telegram = group_write_dpt9(SENSOR, ROOM_GROUP, celsius)
    sent = read_dpt9(telegram)
    falsified = read_dpt9(BiasAdd(bias).apply(telegram))
    code = int.from_bytes(encode_dpt9(sent + bias), "big")
    assert abs(falsified - (sent + bias)) <= 0.01 * 2 ** dpt9_exponent(code)
    assert falsified == decode_dpt9_code(code)


def test_unknown_falsifier():
    with pytest.raises(UnknownFalsifier):
        build_falsifier("drift", 1.0)


def test_falsifier_kinds():
    assert isinstance(build_falsifier("override", 22.005), Override)
    assert build_falsifier("passthrough").is_identity
    assert BiasAdd(1.0).describe() == "bias(1)"


def test_broadcast_group_cannot_be_the_victim():
    with pytest.raises(AttackError):
        build_falsifier("bias", 1.0, SENSOR, GroupAddress.three_level(0, 0, 0))


# --- retardo --------------------------------------------------------------

def test_delays_are_never_negative():
    delay = DelayModel(0.01, 0.05, seed=3)
    samples = np.array([delay.sample() for _ in range(5000)])
    assert samples.min() >= 0.0
    assert (samples == 0.0).any()


def test_uniform_delay_matches_mean_and_sd():
    delay = DelayModel(0.05, 0.02, distribution="uniform", seed=4)
    samples = np.array([delay.sample() for _ in range(20000)])
    assert samples.mean() == pytest.approx(0.05, abs=0.002)
    assert samples.std() == pytest.approx(0.02, abs=0.002)


def test_delay_is_seeded():
    first, second = DelayModel(seed=9), DelayModel(seed=9)
    assert [first.sample() for _ in range(5)] == [second.sample() for _ in range(5)]


def test_zero_delay_model():
    delay = DelayModel(0.0, 0.0)
    assert delay.is_zero
    assert delay.emission_time(12.5) == 12.5


def test_burst_mode_releases_in_groups():
    delay = DelayModel(0.0, 0.0, burst_interval=0.5, burst_spacing=0.002)
    times = [delay.emission_time(t) for t in (0.1, 0.2, 0.3, 0.7)]
    assert times == pytest.approx([0.5, 0.502, 0.504, 1.0])


def test_invalid_delay():
    with pytest.raises(ValueError):
        DelayModel(-0.1, 0.0)


# --- topologías -----------------------------------------------------------

def _relay_run(falsifier, t_end=3600.0):
    sim = BusSimulator(segments=(CONTROLLER_SIDE, SENSOR_SIDE))
    sensor_tap, controller_tap = PassiveTap(), PassiveTap()
    sensor = TemperatureSensor(SensorConfig(SENSOR, ROOM_GROUP, period_jitter_sd=0.5, seed=2))
    pair = _pair(falsifier, DelayModel(0.05, 0.02, seed=5))
    sim.attach_device(SENSOR_SIDE, sensor)
    sim.attach_device(SENSOR_SIDE, sensor_tap)
    sim.attach_device(CONTROLLER_SIDE, controller_tap)
    sim.attach_device(SENSOR_SIDE, pair)
    sim.attach_device(CONTROLLER_SIDE, pair)
    sim.run_until(t_end)
    return sensor_tap.records, controller_tap.records, pair


def test_relay_pair_conserves_temperature_telegrams():
    sensor_side, controller_side, pair = _relay_run(BiasAdd(1.0, SENSOR, ROOM_GROUP))
    assert len(controller_side) == len(sensor_side) == 60
    assert pair.stats()["modified"] == 60
    sent = [read_dpt9(decode_telegram(r.raw)) for r in sensor_side]
    seen = [read_dpt9(decode_telegram(r.raw)) for r in controller_side]
    assert seen == [value + 1.0 for value in sent]


def test_relay_adds_latency():
    sensor_side, controller_side, _ = _relay_run(Passthrough())
    lags = [c.timestamp - s.timestamp for s, c in zip(sensor_side, controller_side)]
    assert min(lags) >= -1e-6
    assert np.mean(lags) == pytest.approx(0.05, abs=0.01)


def _single_device(falsifier, t_end=3600.0):
    sim = BusSimulator()
    sim.attach_device(0, TemperatureSensor(SensorConfig(SENSOR, ROOM_GROUP, period_jitter_sd=0.0)))
    return single_device_mitm(sim, 0, falsifier, t_end, DelayModel(0.05, 0.0))


def test_single_device_doubles_temperature_telegrams():
    capture = _single_device(BiasAdd(1.0, SENSOR, ROOM_GROUP))
    values = [read_dpt9(t) for t in capture.telegrams() if isinstance(t.lsdu, GroupWrite)]
    assert len(values) == 120
    assert values.count(21.5) == 60
    assert values.count(22.5) == 60


def test_single_device_passthrough_duplicates_payloads():
    capture = _single_device(Passthrough())
    payloads = [r.raw for r in capture.records]
    assert len(payloads) == 120
    assert len(set(payloads)) == 1


# --- escenarios -----------------------------------------------------------

def test_scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({
        "name": "attack_ii",
        "falsifier": {"kind": "Override", "value": 22.005},
        "delay": {"base": 0.05, "jitter_sd": 0.01, "dist": "uniform", "seed": 3},
    }))
    scenario = AttackScenario.load(path)
    assert scenario.falsifier_kind == "override"
    falsifier = scenario.build_falsifier(SENSOR, ROOM_GROUP)
    assert isinstance(falsifier, Override)
    assert falsifier.victim_group == ROOM_GROUP
    delay = scenario.build_delay(seed=99)
    assert delay.seed == 3
    assert delay.distribution.value == "uniform"
    assert AttackScenario.from_dict(scenario.to_dict()).to_dict() == scenario.to_dict()


@pytest.mark.parametrize("document", [
    {},
    {"falsifier": {"value": 1.0}},
    {"falsifier": {"kind": "bias"}, "delay": {"base": -1}},
    {"falsifier": {"kind": "bias"}, "delay": {"dist": "cauchy"}},
    {"falsifier": {"kind": "bias"}, "extra": 1},
])
def test_invalid_scenarios(document):
    with pytest.raises(AttackError):
        AttackScenario.from_dict(document)


def test_unknown_falsifier_in_scenario():
    with pytest.raises(UnknownFalsifier):
        AttackScenario.from_dict({"falsifier": {"kind": "drift"}})
