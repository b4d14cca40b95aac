#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Montaje de los bancos de pruebas simulados.

Segmento 0: controlador, tráfico de fondo y la escucha pasiva cuyo registro
es el conjunto de datos del detector. Segmento 1: el sensor, cuando la
topología lo separa del controlador (acoplador de línea o par de relés).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from attack import AttackScenario, RelayPair, SingleDeviceFalsifier
from bus_sim import (
    BackgroundConfig,
    BackgroundTraffic,
    BusSimulator,
    CaptureSeries,
    Controller,
    ControllerConfig,
    LineCoupler,
    Origin,
    PassiveTap,
    SensorConfig,
    TemperatureSensor,
    constant_temperature,
)
from hvac_sim import WeatherTrace
from knx_codec import IndividualAddress, LteTagAddress
from utils.logger import get_logger

from .experiment_config import ExperimentConfig
from .seeds import SeedPlan

logger = get_logger(__name__)

CONTROLLER_SEGMENT = 0
SENSOR_SEGMENT = 1
COUPLER_ADDRESS = IndividualAddress(1, 1, 0)


@dataclass
class CaptureRun:
    """Resultado de una simulación: la captura del lado del controlador y contadores."""

    capture: CaptureSeries
    sensor_side: Optional[CaptureSeries]
    stats: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Testbed:
    sim: BusSimulator
    sensor: TemperatureSensor
    controller: Controller
    tap: PassiveTap
    sensor_tap: Optional[PassiveTap] = None
    relay: Optional[RelayPair] = None
    injector: Optional[SingleDeviceFalsifier] = None
    coupler: Optional[LineCoupler] = None
    background: Optional[BackgroundTraffic] = None

    def run(self, duration: float, origin: Origin) -> CaptureRun:
        sim_stats = self.sim.run_until(duration)
        stats: Dict[str, Any] = {
            "origin": origin.value,
            "duration_s": duration,
            "events_processed": sim_stats["events_processed"],
            "transmitted": {str(k): v for k, v in sim_stats["transmitted"].items()},
            "sensor_reports": self.sensor.sent,
            "sensor_responses": self.sensor.responses,
            "controller_accepted": len(self.controller.history),
            "controller_audit_events": len(self.controller.audit_events),
            "poll": dict(self.controller.poll_stats),
            "captured": len(self.tap.records),
        }
        if self.relay is not None:
            stats["relay"] = self.relay.stats()
        if self.injector is not None:
            stats["injected"] = self.injector.injected
        if self.coupler is not None:
            stats["coupler"] = {"forwarded": self.coupler.forwarded, "dropped": self.coupler.dropped}
        if self.background is not None:
            stats["background_sent"] = self.background.sent
        sensor_side = self.sensor_tap.capture(origin, 0.0, duration) if self.sensor_tap is not None else None
        return CaptureRun(self.tap.capture(origin, 0.0, duration), sensor_side, stats)


def _temperature_source(config: ExperimentConfig):
    sensor = config.bus["sensor"]
    if sensor.get("temperature_csv"):
        return WeatherTrace.from_csv(config.resolve(sensor["temperature_csv"]))
    return constant_temperature(float(sensor["temperature"]))


def _sensor(config: ExperimentConfig, seeds: SeedPlan) -> TemperatureSensor:
    section = config.bus["sensor"]
    return TemperatureSensor(SensorConfig(
        address=section["address"],
        group=section["group"],
        period=float(section["period"]),
        period_jitter_sd=float(section["jitter_sd"]),
        temperature_source=_temperature_source(config),
        seed=seeds.seed("sensor"),
        lte_tag=LteTagAddress(section["lte_kind"], section["lte_tag"]),
        response_latency=float(section["response_latency"]),
    ))


def _controller(config: ExperimentConfig, seeds: SeedPlan) -> Controller:
    section = config.bus["controller"]
    sensor = config.bus["sensor"]
    allowlist = section["allowlist"]
    return Controller(ControllerConfig(
        address=section["address"],
        subscribed_groups=frozenset({sensor["group"]}),
        auth_allowlist=frozenset(allowlist) if allowlist is not None else None,
        poll_period=float(section["poll_period"]),
        poll_enabled=bool(section["poll_enabled"]),
        poll_target=LteTagAddress(sensor["lte_kind"], sensor["lte_tag"]),
        poll_offset=float(section["poll_offset"]),
        poll_gap=float(section["poll_gap"]),
        poll_gap_jitter_sd=float(section["poll_gap_jitter_sd"]),
        response_timeout=float(section["response_timeout"]),
        seed=seeds.seed("controller"),
    ))


def _background(config: ExperimentConfig, seeds: SeedPlan) -> Optional[BackgroundTraffic]:
    section = config.bus["background"]
    if not section["enabled"] or section["rate"] <= 0:
        return None
    return BackgroundTraffic(BackgroundConfig(
        rate=float(section["rate"]),
        read_fraction=float(section["read_fraction"]),
        seed=seeds.seed("background"),
    ))


def build_baseline_testbed(config: ExperimentConfig, seeds: SeedPlan) -> Testbed:
    """
    Red sin ataque. Con topología `shared` sensor y controlador comparten
    segmento; con `coupled` el sensor cuelga de otra línea tras un acoplador.
    """
    coupled = config.bus["topology"] == "coupled"
    segments = (CONTROLLER_SEGMENT, SENSOR_SEGMENT) if coupled else (CONTROLLER_SEGMENT,)
    sim = BusSimulator(segments, frame_latency=float(config.bus["frame_latency"]))

    tap = PassiveTap()
    sim.attach_device(CONTROLLER_SEGMENT, tap)
    controller = _controller(config, seeds)
    sim.attach_device(CONTROLLER_SEGMENT, controller)
    background = _background(config, seeds)
    if background is not None:
        sim.attach_device(CONTROLLER_SEGMENT, background)

    coupler = None
    sensor_tap = None
    sensor_segment = CONTROLLER_SEGMENT
    if coupled:
        coupler = LineCoupler(COUPLER_ADDRESS, (SENSOR_SEGMENT, CONTROLLER_SEGMENT))
        sim.attach_device(SENSOR_SEGMENT, coupler)
        sim.attach_device(CONTROLLER_SEGMENT, coupler)
        sensor_tap = PassiveTap()
        sim.attach_device(SENSOR_SEGMENT, sensor_tap)
        sensor_segment = SENSOR_SEGMENT
    sensor = _sensor(config, seeds)
    sim.attach_device(sensor_segment, sensor)
    return Testbed(sim, sensor, controller, tap, sensor_tap=sensor_tap, coupler=coupler, background=background)


def build_relay_testbed(config: ExperimentConfig, seeds: SeedPlan,
                        scenario: Optional[AttackScenario] = None) -> Testbed:
    """
    Red con el par de relés: el sensor queda aislado en su segmento y todo lo
    que cruza pasa por el relé, que falsifica las lecturas hacia el controlador.
    """
    scenario = scenario or config.attack_scenario()
    sim = BusSimulator((CONTROLLER_SEGMENT, SENSOR_SEGMENT), frame_latency=float(config.bus["frame_latency"]))

    tap = PassiveTap()
    sim.attach_device(CONTROLLER_SEGMENT, tap)
    controller = _controller(config, seeds)
    sim.attach_device(CONTROLLER_SEGMENT, controller)
    background = _background(config, seeds)
    if background is not None:
        sim.attach_device(CONTROLLER_SEGMENT, background)

    sensor_section = config.bus["sensor"]
    falsifier = scenario.build_falsifier(sensor_section["address"], sensor_section["group"])
    relay = RelayPair(SENSOR_SEGMENT, CONTROLLER_SEGMENT, scenario.build_delay(seeds.seed("relay.delay")), falsifier)
    sim.attach_device(SENSOR_SEGMENT, relay)
    sim.attach_device(CONTROLLER_SEGMENT, relay)

    sensor_tap = PassiveTap()
    sim.attach_device(SENSOR_SEGMENT, sensor_tap)
    sensor = _sensor(config, seeds)
    sim.attach_device(SENSOR_SEGMENT, sensor)
    return Testbed(sim, sensor, controller, tap, sensor_tap=sensor_tap, relay=relay, background=background)


def build_single_device_testbed(config: ExperimentConfig, seeds: SeedPlan,
                                scenario: Optional[AttackScenario] = None) -> Testbed:
    """Un único nodo atacante en el segmento compartido: el controlador ve original y copia."""
    scenario = scenario or config.attack_scenario()
    testbed = build_baseline_testbed(config, seeds)
    sensor_section = config.bus["sensor"]
    falsifier = scenario.build_falsifier(sensor_section["address"], sensor_section["group"])
    injector = SingleDeviceFalsifier(falsifier, scenario.build_delay(seeds.seed("relay.delay")))
    testbed.sim.attach_device(CONTROLLER_SEGMENT, injector)
    testbed.injector = injector
    return testbed


def simulate_capture(config: ExperimentConfig, attacked: bool,
                     scenario: Optional[AttackScenario] = None) -> CaptureRun:
    """
    Simula `bus.duration_h` horas y devuelve la captura etiquetada.

    Las capturas con y sin ataque usan semillas independientes derivadas de
    la raíz con los prefijos `attack` y `baseline`.
    """
    duration = float(config.bus["duration_h"]) * 3600.0
    root = SeedPlan(config.seed)
    if not attacked:
        run = build_baseline_testbed(config, root.child("baseline")).run(duration, Origin.NO_ATTACK)
    elif config.attack["topology"] == "single_device":
        run = build_single_device_testbed(config, root.child("attack"), scenario).run(duration, Origin.ATTACK)
    else:
        run = build_relay_testbed(config, root.child("attack"), scenario).run(duration, Origin.ATTACK)
    logger.info(
        f"Simulación {'con' if attacked else 'sin'} ataque: {run.stats['captured']} telegramas capturados "
        f"en {duration / 3600.0:g} h"
    )
    return run
