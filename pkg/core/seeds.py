"""
Reparto determinista de la semilla raíz entre componentes.

Cada componente recibe una semilla derivada de la raíz y de su nombre, así
que una ejecución parcial obtiene los mismos números que la completa.
"""

import zlib
from dataclasses import dataclass

import numpy as np


def derive_seed(root: int, name: str) -> int:
    """Semilla de 32 bits para el componente `name` bajo la raíz `root`."""
    sequence = np.random.SeedSequence(root, spawn_key=(zlib.crc32(name.encode("utf-8")),))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class SeedPlan:
    root: int
    prefix: str = ""

    def seed(self, name: str) -> int:
        return derive_seed(self.root, f"{self.prefix}{name}")

    def child(self, prefix: str) -> "SeedPlan":
        return SeedPlan(self.root, f"{self.prefix}{prefix}.")
