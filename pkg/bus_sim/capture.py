"""
Capturas de tráfico: registros con marca de tiempo y su formato JSON Lines.

Una línea por registro: {"t": segundos, "seg": segmento, "raw": hex}. Junto al
fichero se guarda `<nombre>.meta.json` con el intervalo observado y la
etiqueta de origen, para que las ventanas de detección se alineen con el
inicio de la captura.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Union

import numpy as np

from knx_codec import Telegram, decode_telegram

TIMESTAMP_DECIMALS = 6


class Origin(Enum):
    ATTACK = "attack"
    NO_ATTACK = "no-attack"
    UNLABELED = "unlabeled"


@dataclass(frozen=True)
class CaptureRecord:
    timestamp: float
    segment: int
    raw: bytes

    @property
    def telegram(self) -> Telegram:
        return decode_telegram(self.raw)

    def to_json(self) -> str:
        payload = {"t": round(self.timestamp, TIMESTAMP_DECIMALS), "seg": self.segment, "raw": self.raw.hex()}
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "CaptureRecord":
        payload = json.loads(line)
        return cls(float(payload["t"]), int(payload["seg"]), bytes.fromhex(payload["raw"]))


@dataclass
class CaptureSeries:
    """
    Serie de registros ordenada por tiempo.

    `start` y `end` delimitan el intervalo observado, que puede ser más amplio
    que el primer y el último registro.
    """

    records: List[CaptureRecord] = field(default_factory=list)
    origin: Origin = Origin.UNLABELED
    start: float = 0.0
    end: Optional[float] = None

    def __post_init__(self):
        timestamps = self.timestamps
        if len(timestamps) > 1 and np.any(np.diff(timestamps) < 0):
            raise ValueError("Los registros de una captura deben estar ordenados por tiempo")
        if self.end is None:
            self.end = float(timestamps[-1]) if len(timestamps) else self.start

    def __len__(self) -> int:
        return len(self.records)

    @property
    def timestamps(self) -> np.ndarray:
        return np.array([record.timestamp for record in self.records], dtype=float)

    @property
    def span(self) -> float:
        return self.end - self.start

    def filter(self, predicate: Callable[[CaptureRecord], bool]) -> "CaptureSeries":
        return CaptureSeries([r for r in self.records if predicate(r)], self.origin, self.start, self.end)

    def on_segment(self, segment: int) -> "CaptureSeries":
        return self.filter(lambda record: record.segment == segment)

    def telegrams(self) -> Iterable[Telegram]:
        for record in self.records:
            yield record.telegram

    def write_jsonl(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            for record in self.records:
                handle.write(record.to_json() + "\n")
        meta = {"origin": self.origin.value, "start": self.start, "end": self.end, "records": len(self.records)}
        with open(meta_path(path), "w", encoding="utf-8") as handle:
            json.dump(meta, handle, indent=2, sort_keys=True)
        return path

    @classmethod
    def read_jsonl(cls, path: Union[str, Path], origin: Optional[Origin] = None) -> "CaptureSeries":
        """
        Lee una captura y, si existe, su fichero de metadatos.

        Args:
            path: Fichero JSON Lines
            origin: Etiqueta a imponer; si falta se usa la de los metadatos
        """
        path = Path(path)
        with open(path, "r", encoding="utf-8") as handle:
            records = [CaptureRecord.from_json(line) for line in handle if line.strip()]
        meta = {}
        if meta_path(path).exists():
            with open(meta_path(path), "r", encoding="utf-8") as handle:
                meta = json.load(handle)
        if origin is None:
            origin = Origin(meta.get("origin", Origin.UNLABELED.value))
        start = meta.get("start", records[0].timestamp if records else 0.0)
        return cls(records, origin, float(start), meta.get("end"))


def meta_path(path: Union[str, Path]) -> Path:
    return Path(path).with_suffix(".meta.json")
