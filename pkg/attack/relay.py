#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Par de relés MITM y la variante degenerada de un solo dispositivo.

El par parte la red en dos segmentos (sensor y controlador) y hace de cable
transparente entre ellos: no decrementa saltos y conserva la dirección de
origen, así que el controlador no ve más que los telegramas falsificados.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from bus_sim import BusDevice, BusSimulator, CaptureSeries, Delivery, Origin, PassiveTap
from knx_codec import KnxCodecError, Telegram, decode_telegram, encode_telegram
from utils.logger import get_logger

from .delay import DelayModel
from .errors import UndecodableFrame
from .falsifiers import Falsifier

logger = get_logger(__name__)


class Direction(Enum):
    SENSOR_TO_CONTROLLER = "sensor->controller"
    CONTROLLER_TO_SENSOR = "controller->sensor"


@dataclass(frozen=True)
class RelayEmission:
    raw: bytes
    time: float
    segment: int
    modified: bool


class RelayPair(BusDevice):
    """Dos nodos puente entre el segmento del sensor y el del controlador."""

    name = "MITM Relay Pair"

    def __init__(self, sensor_side: int, controller_side: int, delay: DelayModel, falsifier: Falsifier):
        if sensor_side == controller_side:
            raise ValueError("El par de relés necesita dos segmentos distintos")
        self.sensor_side = sensor_side
        self.controller_side = controller_side
        self.delay = delay
        self.falsifier = falsifier
        self.forward_stats: Counter = Counter()

    def stats(self) -> dict:
        totals = {"forwarded": 0, "modified": 0, "dropped": 0}
        for (_, outcome), count in self.forward_stats.items():
            totals[outcome] += count
        per_direction = {
            f"{direction.value}:{outcome}": count
            for (direction, outcome), count in sorted(self.forward_stats.items(), key=lambda item: (item[0][0].value, item[0][1]))
        }
        return {**totals, **per_direction}

    def relay_process(self, raw: bytes, arrival: float, from_segment: int) -> RelayEmission:
        """
        Decide qué sale por el otro lado y cuándo.

        Args:
            raw: Trama recibida
            arrival: Instante de emisión original de la trama
            from_segment: Segmento por el que llegó

        Returns:
            Emisión planificada (octetos, instante y segmento de salida)

        Raises:
            UndecodableFrame: Si la trama no se puede decodificar (queda contada como descartada)
        """
        if from_segment == self.sensor_side:
            direction, out_segment = Direction.SENSOR_TO_CONTROLLER, self.controller_side
        else:
            direction, out_segment = Direction.CONTROLLER_TO_SENSOR, self.sensor_side
        try:
            telegram = decode_telegram(raw)
        except KnxCodecError as error:
            self.forward_stats[(direction, "dropped")] += 1
            raise UndecodableFrame(f"Trama descartada en {direction.value}: {error}") from error

        out = bytes(raw)
        modified = False
        if direction == Direction.SENSOR_TO_CONTROLLER and self.falsifier.matches(telegram):
            try:
                out = encode_telegram(self.falsifier.apply(telegram))
            except KnxCodecError as error:
                logger.warning(f"⚠️ No se pudo falsificar el telegrama, se reenvía intacto: {error}")
            modified = out != raw
        if modified:
            self.forward_stats[(direction, "modified")] += 1
        self.forward_stats[(direction, "forwarded")] += 1
        return RelayEmission(out, self.delay.emission_time(arrival), out_segment, modified)

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        try:
            emission = self.relay_process(delivery.raw, delivery.sent_at, delivery.segment)
        except UndecodableFrame as error:
            logger.debug(str(error))
            return
        sim.transmit(emission.segment, emission.raw, sender=self, sent_at=emission.time)


def relay_process(
    pair: RelayPair,
    frame: Union[Telegram, bytes],
    arrival: float,
    from_segment: Optional[int] = None,
) -> RelayEmission:
    """Atajo funcional; por defecto el telegrama llega por el lado del sensor."""
    raw = encode_telegram(frame) if isinstance(frame, Telegram) else bytes(frame)
    segment = pair.sensor_side if from_segment is None else from_segment
    return pair.relay_process(raw, arrival, segment)


class SingleDeviceFalsifier(BusDevice):
    """
    Un único nodo en el segmento compartido: reemite una copia (falsificada)
    de cada telegrama víctima, de modo que el original también llega.
    """

    name = "Single-device MITM"

    def __init__(self, falsifier: Falsifier, delay: Optional[DelayModel] = None):
        self.falsifier = falsifier
        self.delay = delay or DelayModel()
        self.injected = 0
        self._segment: Optional[int] = None

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        self._segment = segment

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        try:
            telegram = delivery.telegram
        except KnxCodecError:
            return
        if not self.falsifier.matches(telegram):
            return
        copy = encode_telegram(self.falsifier.apply(telegram))
        sim.transmit(self._segment, copy, sender=self, sent_at=max(sim.now, self.delay.emission_time(delivery.time)))
        self.injected += 1


def single_device_mitm(
    sim: BusSimulator,
    segment: int,
    falsifier: Falsifier,
    t_end: float,
    delay: Optional[DelayModel] = None,
) -> CaptureSeries:
    """
    Ataca con un solo nodo en el segmento compartido y devuelve lo que observa
    el controlador: originales y copias modificadas.
    """
    tap = PassiveTap()
    sim.attach_device(segment, tap)
    sim.attach_device(segment, SingleDeviceFalsifier(falsifier, delay))
    sim.run_until(t_end)
    return tap.capture(Origin.ATTACK, end=t_end)
