#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Características de los tiempos entre llegadas de telegramas.

Una captura se corta en ventanas de detección; de cada ventana salen la media,
la varianza, el par (media, varianza) o el vector de divergencias de
Jensen-Shannon frente a todas las ventanas de referencia sin ataque.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import rel_entr

from bus_sim import CaptureSeries, Origin

from .errors import EmptyResult, EmptySegment, SpecMismatch, TooFewRecords

LN2 = math.log(2.0)
DEFAULT_BINS = 50
DEFAULT_QUANTILE = 99.0


class FeatureKind(Enum):
    MEAN = "mean"
    VARIANCE = "variance"
    MEAN_VAR = "meanvar"
    JSD = "jsd"


@dataclass
class InterArrivalSegment:
    values: np.ndarray
    window: float
    start: float
    label: Origin = Origin.UNLABELED

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0):
            raise ValueError("Los tiempos entre llegadas no pueden ser negativos")


@dataclass
class FeatureVector:
    kind: FeatureKind
    values: np.ndarray
    label: Origin = Origin.UNLABELED

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)


def inter_arrivals(capture: CaptureSeries) -> np.ndarray:
    """
    Serie I_i = t_{i+1} - t_i de una captura.

    Raises:
        TooFewRecords: Con menos de dos registros
    """
    if len(capture) < 2:
        raise TooFewRecords(f"Se necesitan al menos 2 registros y hay {len(capture)}")
    return np.diff(capture.timestamps)


def window_count(series: CaptureSeries, window: float) -> int:
    return int(math.floor(series.span / window + 1e-9))


def segment(series: CaptureSeries, window: float) -> List[InterArrivalSegment]:
    """
    Corta la captura en ventanas consecutivas de `window` segundos desde su inicio.

    La última ventana incompleta se descarta. Un tiempo entre llegadas
    pertenece a una ventana solo si sus dos telegramas caen dentro de ella.

    Raises:
        EmptyResult: Si la captura no llega a una ventana completa
    """
    if window <= 0:
        raise ValueError(f"La ventana debe ser positiva: {window}")
    count = window_count(series, window)
    if count == 0:
        raise EmptyResult(f"La captura dura {series.span:.1f} s, menos que una ventana de {window:.1f} s")
    timestamps = series.timestamps
    boundaries = series.start + window * np.arange(count + 1)
    cuts = np.searchsorted(timestamps, boundaries, side="left")
    return [
        InterArrivalSegment(np.diff(timestamps[cuts[k]:cuts[k + 1]]), window, float(boundaries[k]), series.origin)
        for k in range(count)
    ]


@dataclass(frozen=True)
class HistogramSpec:
    """
    Bordes de los intervalos compartidos por todas las distribuciones de un experimento.

    El último intervalo es de desbordamiento: recoge todo lo que supera el
    borde final.
    """

    edges: Tuple[float, ...]

    def __post_init__(self):
        edges = tuple(float(edge) for edge in self.edges)
        if len(edges) < 2:
            raise ValueError("Un histograma necesita al menos dos bordes")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("Los bordes del histograma deben ser estrictamente crecientes")
        object.__setattr__(self, "edges", edges)

    @property
    def n_bins(self) -> int:
        return len(self.edges)

    @classmethod
    def from_baseline(cls, values: Iterable[float], bins: int = DEFAULT_BINS,
                      quantile: float = DEFAULT_QUANTILE) -> "HistogramSpec":
        """
        Intervalos iguales entre 0 y el percentil `quantile` de los tiempos de referencia.
        """
        values = np.asarray(list(values), dtype=float)
        if values.size == 0:
            raise EmptySegment("No hay tiempos de referencia para fijar el histograma")
        upper = float(np.percentile(values, quantile))
        if upper <= 0:
            upper = float(values.max()) if values.max() > 0 else 1e-3
        return cls(tuple(np.linspace(0.0, upper, bins + 1)))

    def bin_indices(self, values: np.ndarray) -> np.ndarray:
        indices = np.searchsorted(np.asarray(self.edges), values, side="right") - 1
        return np.clip(indices, 0, self.n_bins - 1)

    def histogram(self, values: Sequence[float]) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        return np.bincount(self.bin_indices(values), minlength=self.n_bins).astype(float)

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "overflow": True}

    @classmethod
    def from_dict(cls, data: dict) -> "HistogramSpec":
        return cls(tuple(data["edges"]))


@dataclass(frozen=True, eq=False)
class Distribution:
    probabilities: np.ndarray
    spec: Optional[HistogramSpec] = None

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1 or np.any(p < 0):
            raise ValueError("Una distribución es un vector de probabilidades no negativas")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"Las probabilidades suman {p.sum()}, no 1")
        if self.spec is not None and p.size != self.spec.n_bins:
            raise SpecMismatch(f"{p.size} probabilidades para {self.spec.n_bins} intervalos")
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def from_values(cls, values: Sequence[float], spec: HistogramSpec) -> "Distribution":
        counts = spec.histogram(values)
        total = counts.sum()
        if total == 0:
            raise EmptySegment("No se puede construir una distribución sin tiempos entre llegadas")
        return cls(counts / total, spec)


DistributionLike = Union[Distribution, Sequence[float], np.ndarray]


def _as_arrays(p: DistributionLike, q: DistributionLike) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(p, Distribution) and isinstance(q, Distribution):
        if p.spec is not None and q.spec is not None and p.spec != q.spec:
            raise SpecMismatch("Las distribuciones usan histogramas distintos")
    p_arr = p.probabilities if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    q_arr = q.probabilities if isinstance(q, Distribution) else np.asarray(q, dtype=float)
    if p_arr.shape != q_arr.shape:
        raise SpecMismatch(f"Dimensiones distintas: {p_arr.shape} y {q_arr.shape}")
    return p_arr, q_arr


def kl(p: DistributionLike, q: DistributionLike) -> float:
    """Divergencia de Kullback-Leibler en base 2; los intervalos con P=0 aportan 0."""
    p_arr, q_arr = _as_arrays(p, q)
    return float(rel_entr(p_arr, q_arr).sum() / LN2)


def jsd(p: DistributionLike, q: DistributionLike) -> float:
    """
    Divergencia de Jensen-Shannon en base 2, en [0, 1].

    Raises:
        SpecMismatch: Si las distribuciones no comparten histograma
    """
    p_arr, q_arr = _as_arrays(p, q)
    return float(jsd_matrix(p_arr[None, :], q_arr[None, :])[0, 0])


def jsd_matrix(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """
    JSD de cada fila de `p` contra cada fila de `q`.

    Returns:
        Matriz (len(p), len(q))
    """
    p = np.asarray(p, dtype=float)[:, None, :]
    q = np.asarray(q, dtype=float)[None, :, :]
    m = 0.5 * (p + q)
    value = 0.5 * (rel_entr(p, m).sum(axis=-1) + rel_entr(q, m).sum(axis=-1)) / LN2
    # soportes disjuntos: exactamente 1 aunque las sumas redondeen
    disjoint = ~np.any((p > 0) & (q > 0), axis=-1)
    return np.clip(np.where(disjoint, 1.0, value), 0.0, 1.0)


def jsd_feature_vector(seg: InterArrivalSegment, baseline: Sequence[Distribution],
                       spec: Optional[HistogramSpec] = None) -> FeatureVector:
    """
    Vector de JSD de un segmento frente a cada distribución de referencia.

    Args:
        seg: Segmento a describir
        baseline: Distribuciones de las ventanas sin ataque (no vacío)
        spec: Histograma compartido; por defecto el de la referencia

    Raises:
        SpecMismatch: Si la referencia mezcla histogramas o no coincide con `spec`
    """
    if not baseline:
        raise ValueError("La referencia no puede estar vacía")
    spec = spec or baseline[0].spec
    if spec is None or any(b.spec != spec for b in baseline):
        raise SpecMismatch("Todas las distribuciones de referencia deben compartir histograma")
    p = Distribution.from_values(seg.values, spec)
    matrix = np.vstack([b.probabilities for b in baseline])
    return FeatureVector(FeatureKind.JSD, jsd_matrix(p.probabilities[None, :], matrix)[0], seg.label)


def moment_features(seg: InterArrivalSegment, kind: FeatureKind = FeatureKind.MEAN_VAR) -> FeatureVector:
    """
    Media, varianza muestral (denominador n-1) o ambas.

    Raises:
        EmptySegment: Si el segmento no tiene valores
    """
    values = seg.values
    if values.size == 0:
        raise EmptySegment("El segmento no tiene tiempos entre llegadas")
    mean = float(values.mean())
    variance = float(values.var(ddof=1)) if values.size > 1 else 0.0
    if kind == FeatureKind.MEAN:
        features = [mean]
    elif kind == FeatureKind.VARIANCE:
        features = [variance]
    elif kind == FeatureKind.MEAN_VAR:
        features = [mean, variance]
    else:
        raise ValueError(f"{kind} no es una característica de momentos")
    return FeatureVector(kind, np.array(features), seg.label)


def feature_vectors(segments: Sequence[InterArrivalSegment], kind: FeatureKind,
                    baseline: Optional[Sequence[Distribution]] = None) -> List[FeatureVector]:
    """Calcula el mismo tipo de característica para varios segmentos."""
    if kind != FeatureKind.JSD:
        return [moment_features(seg, kind) for seg in segments]
    if not baseline:
        raise ValueError("La característica JSD necesita distribuciones de referencia")
    spec = baseline[0].spec
    reference = np.vstack([b.probabilities for b in baseline])
    rows = np.vstack([Distribution.from_values(seg.values, spec).probabilities for seg in segments])
    matrix = jsd_matrix(rows, reference)
    return [FeatureVector(kind, matrix[i], seg.label) for i, seg in enumerate(segments)]
