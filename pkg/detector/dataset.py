"""Conjuntos de vectores de características con su partición entrenamiento/prueba."""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from bus_sim import Origin

from .features import FeatureKind, FeatureVector

DEFAULT_TRAIN_FRACTION = 0.7

LABEL_VALUES: Dict[Origin, int] = {Origin.NO_ATTACK: 0, Origin.ATTACK: 1}
VALUE_LABELS: Dict[int, Origin] = {value: origin for origin, value in LABEL_VALUES.items()}


def label_value(origin: Origin) -> int:
    if origin not in LABEL_VALUES:
        raise ValueError(f"Un vector sin etiqueta no puede entrar en un conjunto de entrenamiento: {origin}")
    return LABEL_VALUES[origin]


def stratified_split(labels: Sequence[int], train_fraction: float = DEFAULT_TRAIN_FRACTION,
                     seed: int = 0) -> tuple:
    """
    Partición estratificada y reproducible de índices.

    Cada clase aporta round(train_fraction · n_clase) elementos al
    entrenamiento y el resto a la prueba.

    Args:
        labels: Etiqueta entera de cada elemento
        train_fraction: Proporción destinada a entrenamiento, en (0, 1)
        seed: Semilla del barajado

    Returns:
        (índices de entrenamiento, índices de prueba), ambos ordenados
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"La proporción de entrenamiento debe estar en (0, 1): {train_fraction}")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for value in np.unique(labels):
        members = np.flatnonzero(labels == value)
        members = members[rng.permutation(members.size)]
        cut = int(round(train_fraction * members.size))
        train.append(members[:cut])
        test.append(members[cut:])
    train_index = np.sort(np.concatenate(train)) if train else np.array([], dtype=int)
    test_index = np.sort(np.concatenate(test)) if test else np.array([], dtype=int)
    return train_index.astype(int), test_index.astype(int)


@dataclass
class Dataset:
    """Vectores de un mismo tipo con una partición entrenamiento/prueba."""

    kind: FeatureKind
    vectors: List[FeatureVector]
    train_index: np.ndarray
    test_index: np.ndarray

    def __post_init__(self):
        if any(vector.kind != self.kind for vector in self.vectors):
            raise ValueError(f"Todos los vectores deben ser de tipo {self.kind.value}")
        self.train_index = np.asarray(self.train_index, dtype=int)
        self.test_index = np.asarray(self.test_index, dtype=int)
        union = np.concatenate([self.train_index, self.test_index])
        if union.size != len(self.vectors) or not np.array_equal(np.sort(union), np.arange(len(self.vectors))):
            raise ValueError("La partición debe cubrir cada vector exactamente una vez")

    @classmethod
    def split(cls, kind: FeatureKind, vectors: List[FeatureVector],
              train_fraction: float = DEFAULT_TRAIN_FRACTION, seed: int = 0) -> "Dataset":
        labels = [label_value(vector.label) for vector in vectors]
        train_index, test_index = stratified_split(labels, train_fraction, seed)
        return cls(kind, vectors, train_index, test_index)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def X(self) -> np.ndarray:
        if not self.vectors:
            return np.empty((0, 0))
        return np.vstack([vector.values for vector in self.vectors])

    @property
    def y(self) -> np.ndarray:
        return np.array([label_value(vector.label) for vector in self.vectors], dtype=int)

    def train_arrays(self) -> tuple:
        return self.X[self.train_index], self.y[self.train_index]

    def test_arrays(self) -> tuple:
        return self.X[self.test_index], self.y[self.test_index]

    def to_frame(self) -> pd.DataFrame:
        X = self.X
        frame = pd.DataFrame(X, columns=[f"f{i}" for i in range(X.shape[1])])
        frame.insert(0, "label", [vector.label.value for vector in self.vectors])
        return frame

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Escribe `label,f0,f1,...`, una fila por vector."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.10g")
        return path
