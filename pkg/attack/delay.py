"""
Modelo de retardo del relé: red entre las dos Raspberry más el propio reenvío.

El modo ráfaga retiene los telegramas hasta el siguiente instante de vaciado
y los suelta seguidos, separados `burst_spacing` segundos.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np


class DelayDistribution(Enum):
    GAUSS = "gauss"
    UNIFORM = "uniform"


@dataclass
class DelayModel:
    base_delay: float = 0.05
    jitter_sd: float = 0.02
    distribution: DelayDistribution = DelayDistribution.GAUSS
    seed: int = 0
    burst_interval: Optional[float] = None
    burst_spacing: float = 0.002
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)
    _last_emission: Optional[float] = field(init=False, default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.base_delay < 0 or self.jitter_sd < 0:
            raise ValueError(f"Retardo y jitter deben ser >= 0: {self.base_delay}, {self.jitter_sd}")
        if self.burst_interval is not None and self.burst_interval <= 0:
            raise ValueError(f"El intervalo de ráfaga debe ser positivo: {self.burst_interval}")
        self.distribution = DelayDistribution(self.distribution)
        self._rng = np.random.default_rng(self.seed)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], seed: Optional[int] = None) -> "DelayModel":
        """Construye el modelo desde el bloque `delay` de un escenario."""
        return cls(
            base_delay=float(data.get("base", 0.05)),
            jitter_sd=float(data.get("jitter_sd", 0.02)),
            distribution=DelayDistribution(data.get("dist", "gauss")),
            seed=int(data["seed"]) if "seed" in data else (seed or 0),
            burst_interval=data.get("burst_interval"),
            burst_spacing=float(data.get("burst_spacing", 0.002)),
        )

    @property
    def is_zero(self) -> bool:
        return self.base_delay == 0 and self.jitter_sd == 0 and self.burst_interval is None

    def sample(self) -> float:
        """Retardo de un telegrama; nunca negativo."""
        if self.distribution == DelayDistribution.GAUSS:
            value = self.base_delay + self.jitter_sd * self._rng.standard_normal()
        else:
            half_width = math.sqrt(3.0) * self.jitter_sd
            value = self._rng.uniform(self.base_delay - half_width, self.base_delay + half_width)
        return max(0.0, float(value))

    def emission_time(self, arrival: float) -> float:
        emission = arrival + self.sample()
        if self.burst_interval is not None:
            flush = math.ceil(emission / self.burst_interval) * self.burst_interval
            if self._last_emission is not None and self._last_emission >= flush:
                emission = self._last_emission + self.burst_spacing
            else:
                emission = flush
        self._last_emission = emission
        return emission
