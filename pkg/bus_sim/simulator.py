"""
Simulación de eventos discretos de segmentos KNX TP1.

Cada segmento es un medio compartido: todo telegrama transmitido llega, tras
una latencia fija por trama, a todos los dispositivos conectados al segmento
salvo al emisor. Los eventos se procesan en orden (tiempo, secuencia de
inserción), así que dos ejecuciones con la misma semilla son idénticas.
"""

import heapq
import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, List, Optional

from knx_codec import Telegram, decode_telegram
from utils.logger import get_logger

from .errors import UnknownSegment

logger = get_logger(__name__)

DEFAULT_FRAME_LATENCY = 0.02


@dataclass
class Delivery:
    """Un telegrama tal y como lo ve un dispositivo: octetos, segmento y tiempos."""

    segment: int
    raw: bytes
    sent_at: float
    time: float

    @cached_property
    def telegram(self) -> Telegram:
        # se decodifica una sola vez y se comparte entre todos los receptores
        return decode_telegram(self.raw)


@dataclass
class DeviceHandle:
    segment: int
    device: Any
    attached_at: float


@dataclass(order=True)
class _Event:
    time: float
    seq: int
    callback: Callable = field(compare=False)
    args: tuple = field(compare=False, default=())


class BusSimulator:
    """Planificador de eventos y medio compartido de uno o más segmentos."""

    def __init__(self, segments: Iterable[int] = (0,), frame_latency: float = DEFAULT_FRAME_LATENCY):
        if frame_latency < 0:
            raise ValueError(f"La latencia por trama no puede ser negativa: {frame_latency}")
        self.now = 0.0
        self.frame_latency = frame_latency
        self._queue: List[_Event] = []
        self._seq = itertools.count()
        self._devices: Dict[int, List[Any]] = {int(segment): [] for segment in segments}
        self.transmitted: Counter = Counter()
        self.events_processed = 0

    @property
    def segments(self) -> List[int]:
        return sorted(self._devices)

    def _require_segment(self, segment: int) -> None:
        if segment not in self._devices:
            raise UnknownSegment(f"Segmento {segment} inexistente; segmentos: {self.segments}")

    def schedule(self, time: float, callback: Callable, *args: Any) -> None:
        if time < self.now:
            raise ValueError(f"No se puede planificar en el pasado: {time} < {self.now}")
        heapq.heappush(self._queue, _Event(time, next(self._seq), callback, args))

    def schedule_in(self, delay: float, callback: Callable, *args: Any) -> None:
        self.schedule(self.now + delay, callback, *args)

    def attach_device(self, segment: int, device: Any) -> DeviceHandle:
        """
        Conecta un dispositivo a un segmento.

        A partir de ese momento el dispositivo recibe cada telegrama entregado
        en el segmento. Si el dispositivo define `on_attach`, se le llama para
        que planifique su actividad.

        Raises:
            UnknownSegment: Si el segmento no existe
        """
        self._require_segment(segment)
        self._devices[segment].append(device)
        hook = getattr(device, "on_attach", None)
        if hook is not None:
            hook(self, segment)
        logger.debug(f"{type(device).__name__} conectado al segmento {segment} en t={self.now:.3f}")
        return DeviceHandle(segment, device, self.now)

    def transmit(self, segment: int, raw: bytes, sender: Any = None, sent_at: Optional[float] = None) -> Delivery:
        """
        Pone una trama en el segmento.

        Args:
            segment: Segmento destino
            raw: Trama codificada
            sender: Dispositivo emisor (no recibe su propia trama)
            sent_at: Instante de emisión; por defecto, ahora. Un repetidor
                transparente puede emitir con el instante original de la trama.

        Returns:
            La entrega planificada
        """
        self._require_segment(segment)
        sent_at = self.now if sent_at is None else sent_at
        delivery = Delivery(segment, bytes(raw), sent_at, sent_at + self.frame_latency)
        self.transmitted[segment] += 1
        self.schedule(delivery.time, self._deliver, delivery, sender)
        return delivery

    def _deliver(self, delivery: Delivery, sender: Any) -> None:
        for device in list(self._devices[delivery.segment]):
            if device is not sender:
                device.receive(self, delivery)

    def run_until(self, t_end: float) -> Dict[str, Any]:
        """
        Procesa todos los eventos con tiempo <= t_end.

        Returns:
            Estadísticas de la simulación hasta ese instante
        """
        if t_end < self.now:
            raise ValueError(f"t_end ({t_end}) anterior al instante actual ({self.now})")
        while self._queue and self._queue[0].time <= t_end:
            event = heapq.heappop(self._queue)
            self.now = event.time
            event.callback(*event.args)
            self.events_processed += 1
        self.now = t_end
        return self.stats()

    def stats(self) -> Dict[str, Any]:
        return {
            "time": self.now,
            "events_processed": self.events_processed,
            "pending_events": len(self._queue),
            "transmitted": {segment: self.transmitted[segment] for segment in self.segments},
        }
