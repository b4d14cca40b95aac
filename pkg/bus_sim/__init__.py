"""Simulación determinista de segmentos KNX TP1 y captura de tráfico."""

from .capture import CaptureRecord, CaptureSeries, Origin, meta_path
from .devices import (
    AuditEvent,
    BackgroundConfig,
    BackgroundTraffic,
    BusDevice,
    Controller,
    ControllerConfig,
    IngestOutcome,
    LineCoupler,
    PassiveTap,
    ReportedValue,
    SensorConfig,
    TemperatureSensor,
    constant_temperature,
    controller_ingest,
    coupler_forward,
)
from .errors import BusSimError, UndecodablePayload, UnknownSegment
from .simulator import DEFAULT_FRAME_LATENCY, BusSimulator, Delivery, DeviceHandle

__all__ = [
    "AuditEvent", "BackgroundConfig", "BackgroundTraffic", "BusDevice", "BusSimError", "BusSimulator",
    "CaptureRecord", "CaptureSeries", "Controller", "ControllerConfig", "DEFAULT_FRAME_LATENCY",
    "Delivery", "DeviceHandle", "IngestOutcome", "LineCoupler", "Origin", "PassiveTap",
    "ReportedValue", "SensorConfig", "TemperatureSensor", "UndecodablePayload", "UnknownSegment",
    "constant_temperature", "controller_ingest", "coupler_forward", "meta_path",
]
