"""Trazas de temperatura muestreadas e interpoladas linealmente."""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd

# Día de verano cálido y húmedo, una muestra por hora desde las 7:00
DEFAULT_START = 7 * 3600.0
DEFAULT_HOURLY_AMBIENT = (25.0, 26.5, 28.5, 30.0, 31.0, 32.0, 32.5, 33.0, 33.0, 32.0, 31.0, 29.5, 28.0)


@dataclass(frozen=True)
class WeatherTrace:
    """
    Serie (tiempo, temperatura) con tiempos estrictamente crecientes.

    Fuera del intervalo muestreado se mantiene el valor del extremo. La misma
    clase sirve como fuente de temperatura del sensor simulado.
    """

    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if not times or len(times) != len(values):
            raise ValueError("La traza necesita el mismo número (no nulo) de tiempos y valores")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("Los tiempos de la traza deben ser estrictamente crecientes")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def hourly(cls, values: Sequence[float], start: float = 0.0) -> "WeatherTrace":
        return cls(tuple(start + 3600.0 * i for i in range(len(values))), tuple(values))

    @classmethod
    def constant(cls, value: float) -> "WeatherTrace":
        return cls((0.0,), (value,))

    @classmethod
    def default_summer_day(cls) -> "WeatherTrace":
        return cls.hourly(DEFAULT_HOURLY_AMBIENT, DEFAULT_START)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "WeatherTrace":
        """Lee un CSV con columnas time_s y ambient_C."""
        frame = pd.read_csv(path)
        return cls(tuple(frame["time_s"]), tuple(frame["ambient_C"]))

    def at(self, t: float) -> float:
        return float(np.interp(t, self.times, self.values))

    def __call__(self, t: float) -> float:
        return self.at(t)
