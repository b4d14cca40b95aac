#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Modelos de dispositivos del bus: escucha pasiva, sensor de temperatura,
controlador, acoplador de línea y tráfico de fondo.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from knx_codec import (
    GroupAddress,
    GroupRead,
    GroupWrite,
    IndividualAddress,
    KnxCodecError,
    LtePropRead,
    LtePropResponse,
    LteTagAddress,
    Telegram,
    carries_dpt9,
    decrement_hop,
    encode_dpt9,
    encode_telegram,
    group_write_dpt9,
    read_dpt9,
)
from utils.logger import get_logger

from .capture import TIMESTAMP_DECIMALS, CaptureRecord, CaptureSeries, Origin
from .errors import UndecodablePayload
from .simulator import BusSimulator, Delivery

logger = get_logger(__name__)

TemperatureSource = Callable[[float], float]


def constant_temperature(celsius: float) -> TemperatureSource:
    return lambda _t: celsius


class BusDevice(ABC):
    """Clase base de todo lo que se conecta a un segmento."""

    name = "Base Device"

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        """Se llama al conectar el dispositivo; aquí se planifica la actividad propia."""

    @abstractmethod
    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        """
        Procesa un telegrama entregado en uno de los segmentos del dispositivo.

        Args:
            sim: Simulación en curso
            delivery: Entrega con los octetos, el segmento y los instantes
        """


class PassiveTap(BusDevice):
    """Escucha pasiva: registra todo lo que circula por el segmento."""

    name = "Passive Tap"

    def __init__(self):
        self.records: List[CaptureRecord] = []
        self.attached_at: Optional[float] = None

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        if self.attached_at is None:
            self.attached_at = sim.now

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        self.records.append(CaptureRecord(round(delivery.time, TIMESTAMP_DECIMALS), delivery.segment, delivery.raw))

    def capture(self, origin: Origin = Origin.UNLABELED, start: Optional[float] = None,
                end: Optional[float] = None) -> CaptureSeries:
        if start is None:
            start = self.attached_at or 0.0
        return CaptureSeries(list(self.records), origin, start, end)


@dataclass
class SensorConfig:
    address: IndividualAddress
    group: GroupAddress
    period: float = 60.0
    period_jitter_sd: float = 0.5
    temperature_source: TemperatureSource = field(default_factory=lambda: constant_temperature(21.5))
    seed: int = 0
    lte_tag: Optional[LteTagAddress] = None
    response_latency: float = 0.03
    phase: Optional[float] = None

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"El periodo del sensor debe ser positivo: {self.period}")
        if self.period_jitter_sd < 0:
            raise ValueError(f"La desviación del jitter no puede ser negativa: {self.period_jitter_sd}")
        if self.phase is None:
            self.phase = self.period / 2


class TemperatureSensor(BusDevice):
    """
    Sensor de temperatura de sala.

    Publica un GroupWrite DPT9 en los instantes `phase + k·period` más un
    jitter gaussiano truncado a ±10 % del periodo, y contesta las lecturas de
    propiedades LTE dirigidas a su etiqueta.
    """

    name = "Temperature Sensor"

    def __init__(self, config: SensorConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._segment: Optional[int] = None
        self.sent = 0
        self.responses = 0

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        self._segment = segment
        first = max(0, math.ceil((sim.now - self.config.phase) / self.config.period))
        self._schedule_report(sim, first)

    def _schedule_report(self, sim: BusSimulator, index: int) -> None:
        config = self.config
        limit = 0.1 * config.period
        jitter = float(np.clip(self._rng.normal(0.0, config.period_jitter_sd), -limit, limit))
        sim.schedule(max(sim.now, config.phase + index * config.period + jitter), self._report, sim, index)

    def _report(self, sim: BusSimulator, index: int) -> None:
        celsius = self.config.temperature_source(sim.now)
        telegram = group_write_dpt9(self.config.address, self.config.group, celsius)
        sim.transmit(self._segment, encode_telegram(telegram), sender=self)
        self.sent += 1
        self._schedule_report(sim, index + 1)

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        tag = self.config.lte_tag
        if tag is None:
            return
        try:
            telegram = delivery.telegram
        except KnxCodecError:
            return
        if isinstance(telegram.lsdu, LtePropRead) and telegram.destination == tag:
            sim.schedule_in(self.config.response_latency, self._respond, sim, telegram.lsdu)

    def _respond(self, sim: BusSimulator, request: LtePropRead) -> None:
        value = encode_dpt9(self.config.temperature_source(sim.now))
        response = Telegram.extended(
            self.config.address,
            self.config.lte_tag,
            LtePropResponse(request.ot, request.oi, request.pid, value),
        )
        sim.transmit(self._segment, encode_telegram(response), sender=self)
        self.responses += 1


class IngestOutcome(Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    IGNORED = "ignored"


@dataclass(frozen=True)
class ReportedValue:
    value: float
    timestamp: float
    source: IndividualAddress


@dataclass(frozen=True)
class AuditEvent:
    timestamp: float
    source: IndividualAddress
    group: GroupAddress
    reason: str


PropertyRef = Tuple[int, int, int]

DEFAULT_POLL_PROPERTIES: Tuple[PropertyRef, ...] = tuple((0x0001, 1, pid) for pid in (51, 52, 53, 54, 55, 56))


@dataclass
class ControllerConfig:
    address: IndividualAddress
    subscribed_groups: FrozenSet[GroupAddress]
    auth_allowlist: Optional[FrozenSet[IndividualAddress]] = None
    poll_period: float = 5.0
    poll_enabled: bool = True
    poll_target: Optional[LteTagAddress] = None
    poll_properties: Sequence[PropertyRef] = DEFAULT_POLL_PROPERTIES
    poll_offset: float = 1.0
    poll_gap: float = 0.03
    poll_gap_jitter_sd: float = 0.02
    response_timeout: float = 1.0
    seed: int = 0

    def __post_init__(self):
        self.subscribed_groups = frozenset(self.subscribed_groups)
        if any(group.is_broadcast for group in self.subscribed_groups):
            raise ValueError("El controlador no puede suscribirse a la dirección de difusión 0/0/0")
        if self.auth_allowlist is not None:
            self.auth_allowlist = frozenset(self.auth_allowlist)
        if self.polling and self.poll_period <= 0:
            raise ValueError(f"El periodo de sondeo debe ser positivo: {self.poll_period}")

    @property
    def polling(self) -> bool:
        return self.poll_enabled and self.poll_target is not None and bool(self.poll_properties)


class Controller(BusDevice):
    """
    Controlador de sala (el papel del DXR2).

    Guarda el último valor de cada grupo suscrito y, si está activado, sondea
    propiedades LTE del sensor con parada y espera: una petición cada vez,
    la siguiente tras la respuesta o tras el timeout.
    """

    name = "Room Controller"

    def __init__(self, config: ControllerConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._segment: Optional[int] = None
        self.latest: Dict[GroupAddress, ReportedValue] = {}
        self.history: List[ReportedValue] = []
        self.audit_events: List[AuditEvent] = []
        self.undecodable = 0
        self.poll_stats = {"requests": 0, "responses": 0, "timeouts": 0, "overruns": 0}
        self._cycle: Optional[List[PropertyRef]] = None
        self._pending: Optional[Tuple[int, PropertyRef]] = None
        self._token = 0

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        self._segment = segment
        if self.config.polling:
            period = self.config.poll_period
            first = max(0, math.ceil((sim.now - self.config.poll_offset) / period))
            sim.schedule(self.config.poll_offset + first * period, self._start_cycle, sim, first)

    def ingest(self, telegram: Telegram, timestamp: float) -> IngestOutcome:
        """
        Aplica un telegrama al estado del controlador.

        Returns:
            ACCEPTED si actualiza el valor, REJECTED si la lista blanca lo
            descarta, IGNORED si no va dirigido a un grupo suscrito

        Raises:
            UndecodablePayload: Si el grupo es de temperatura y el dato no es un DPT9
        """
        group = telegram.destination
        if not isinstance(telegram.lsdu, GroupWrite) or group not in self.config.subscribed_groups:
            return IngestOutcome.IGNORED
        allowlist = self.config.auth_allowlist
        if allowlist is not None and telegram.source not in allowlist:
            event = AuditEvent(timestamp, telegram.source, group, "origen fuera de la lista blanca")
            self.audit_events.append(event)
            logger.warning(f"⚠️ Telegrama rechazado de {telegram.source} para {group} en t={timestamp:.3f}")
            return IngestOutcome.REJECTED
        if not carries_dpt9(telegram):
            raise UndecodablePayload(f"El grupo {group} espera un DPT9 y llegó {telegram.lsdu!r}")
        try:
            value = read_dpt9(telegram)
        except KnxCodecError as error:
            raise UndecodablePayload(str(error)) from error
        reported = ReportedValue(value, timestamp, telegram.source)
        self.latest[group] = reported
        self.history.append(reported)
        return IngestOutcome.ACCEPTED

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        try:
            telegram = delivery.telegram
        except KnxCodecError:
            self.undecodable += 1
            return
        if isinstance(telegram.lsdu, LtePropResponse):
            self._on_response(sim, telegram.lsdu)
            return
        try:
            self.ingest(telegram, delivery.time)
        except UndecodablePayload as error:
            self.undecodable += 1
            logger.warning(f"❌ Valor ilegible en t={delivery.time:.3f}: {error}")

    # --- sondeo LTE -------------------------------------------------------

    def _start_cycle(self, sim: BusSimulator, index: int) -> None:
        sim.schedule(self.config.poll_offset + (index + 1) * self.config.poll_period, self._start_cycle, sim, index + 1)
        if self._cycle is not None:
            self.poll_stats["overruns"] += 1
            return
        self._cycle = list(self.config.poll_properties)
        self._send_next(sim)

    def _send_next(self, sim: BusSimulator) -> None:
        if not self._cycle:
            self._cycle = None
            return
        prop = self._cycle.pop(0)
        self._token += 1
        self._pending = (self._token, prop)
        request = Telegram.extended(self.config.address, self.config.poll_target, LtePropRead(*prop))
        sim.transmit(self._segment, encode_telegram(request), sender=self)
        self.poll_stats["requests"] += 1
        sim.schedule_in(self.config.response_timeout, self._on_timeout, sim, self._token)

    def _on_response(self, sim: BusSimulator, response: LtePropResponse) -> None:
        if self._pending is None or self._pending[1] != (response.ot, response.oi, response.pid):
            return
        self._pending = None
        self.poll_stats["responses"] += 1
        gap = self.config.poll_gap + abs(float(self._rng.normal(0.0, self.config.poll_gap_jitter_sd)))
        sim.schedule_in(gap, self._send_next, sim)

    def _on_timeout(self, sim: BusSimulator, token: int) -> None:
        if self._pending is None or self._pending[0] != token:
            return
        self._pending = None
        self.poll_stats["timeouts"] += 1
        self._send_next(sim)


def controller_ingest(controller: Controller, telegram: Telegram, timestamp: float = 0.0) -> IngestOutcome:
    return controller.ingest(telegram, timestamp)


class LineCoupler(BusDevice):
    """
    Acoplador entre dos segmentos.

    Reenvía al otro segmento todo telegrama con saltos restantes, restando
    uno salvo si vale 7; los que llegan con 0 saltos se descartan.
    """

    name = "Line Coupler"

    def __init__(self, address: IndividualAddress, segments: Tuple[int, int]):
        if not address.is_coupler:
            logger.warning(f"La dirección {address} no es de acoplador (dispositivo 0)")
        self.address = address
        self.segments = tuple(segments)
        self.forwarded = 0
        self.dropped = 0

    def forward(self, telegram: Telegram) -> Optional[Telegram]:
        if not telegram.forwardable:
            self.dropped += 1
            return None
        self.forwarded += 1
        return decrement_hop(telegram)

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        try:
            telegram = delivery.telegram
        except KnxCodecError:
            self.dropped += 1
            return
        forwarded = self.forward(telegram)
        if forwarded is None:
            return
        other = self.segments[1] if delivery.segment == self.segments[0] else self.segments[0]
        sim.transmit(other, encode_telegram(forwarded), sender=self)


def coupler_forward(coupler: LineCoupler, telegram: Telegram) -> Optional[Telegram]:
    return coupler.forward(telegram)


@dataclass
class BackgroundConfig:
    rate: float = 0.05
    sources: Sequence[IndividualAddress] = (
        IndividualAddress(1, 1, 40),
        IndividualAddress(1, 1, 41),
        IndividualAddress(1, 1, 42),
    )
    groups: Sequence[GroupAddress] = (
        GroupAddress.three_level(2, 0, 1),
        GroupAddress.three_level(2, 0, 2),
        GroupAddress.three_level(3, 1, 7),
    )
    read_fraction: float = 0.5
    seed: int = 0


class BackgroundTraffic(BusDevice):
    """Charla de fondo: GroupRead/GroupWrite a otros grupos con llegadas de Poisson."""

    name = "Background Traffic"

    def __init__(self, config: BackgroundConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._segment: Optional[int] = None
        self.sent = 0

    def on_attach(self, sim: BusSimulator, segment: int) -> None:
        self._segment = segment
        if self.config.rate > 0:
            sim.schedule_in(float(self._rng.exponential(1.0 / self.config.rate)), self._emit, sim)

    def _emit(self, sim: BusSimulator) -> None:
        rng = self._rng
        source = self.config.sources[int(rng.integers(len(self.config.sources)))]
        group = self.config.groups[int(rng.integers(len(self.config.groups)))]
        if rng.random() < self.config.read_fraction:
            lsdu = GroupRead()
        else:
            lsdu = GroupWrite(bytes([int(rng.integers(0, 64))]), compact=True)
        sim.transmit(self._segment, encode_telegram(Telegram(source, group, lsdu)), sender=self)
        self.sent += 1
        sim.schedule_in(float(rng.exponential(1.0 / self.config.rate)), self._emit, sim)

    def receive(self, sim: BusSimulator, delivery: Delivery) -> None:
        pass
