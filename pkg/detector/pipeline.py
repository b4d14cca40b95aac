#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Flujo completo del detector: ventanas → características → entrenamiento →
evaluación, y clasificación por ventanas de capturas nuevas.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from bus_sim import CaptureSeries, Origin

from utils.logger import get_logger

from .classifiers import BaseClassifier, build_classifier
from .dataset import DEFAULT_TRAIN_FRACTION, VALUE_LABELS, Dataset, label_value, stratified_split
from .errors import EmptyResult, SpecMismatch
from .features import (
    DEFAULT_BINS,
    DEFAULT_QUANTILE,
    Distribution,
    FeatureKind,
    FeatureVector,
    HistogramSpec,
    InterArrivalSegment,
    feature_vectors,
    segment,
)
from .model_store import DetectionModel

logger = get_logger(__name__)

DEFAULT_WINDOWS_MIN = (5, 10, 20, 30, 40, 50, 60)
ALL_FEATURES = (FeatureKind.MEAN, FeatureKind.VARIANCE, FeatureKind.MEAN_VAR, FeatureKind.JSD)
ALL_ALGORITHMS = ("tree", "svm")
SUITE_COLUMNS = ["window_min", "feature", "algorithm", "accuracy"]
VERDICT_COLUMNS = ["window_start_s", "verdict", "score"]


def _non_empty(segments: List[InterArrivalSegment], label: str) -> List[InterArrivalSegment]:
    kept = [seg for seg in segments if seg.values.size > 0]
    if len(kept) < len(segments):
        logger.warning(f"⚠️ {len(segments) - len(kept)} ventanas de {label} sin tiempos entre llegadas, descartadas")
    return kept


@dataclass
class WindowExperiment:
    """
    Segmentos de ataque y de referencia para una ventana, con la partición ya
    hecha a nivel de segmento.

    El histograma y las distribuciones de referencia salen solo de los
    segmentos sin ataque del entrenamiento, de modo que la prueba nunca
    influye en las características.
    """

    window: float
    segments: List[InterArrivalSegment]
    train_index: np.ndarray
    test_index: np.ndarray
    spec: HistogramSpec
    baseline: List[Distribution] = field(default_factory=list)

    def dataset(self, kind: FeatureKind) -> Dataset:
        vectors = feature_vectors(self.segments, kind, self.baseline)
        return Dataset(kind, vectors, self.train_index, self.test_index)


def build_window_experiment(
    attack: CaptureSeries,
    baseline: CaptureSeries,
    window: float,
    seed: int = 0,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    bins: int = DEFAULT_BINS,
    quantile: float = DEFAULT_QUANTILE,
) -> WindowExperiment:
    """
    Segmenta ambas capturas y fija partición, histograma y referencia.

    Args:
        attack: Captura etiquetada como ataque (conjunto A)
        baseline: Captura sin ataque (conjunto B)
        window: Ventana de detección en segundos
        seed: Semilla de la partición estratificada

    Raises:
        EmptyResult: Si alguna captura no cubre una ventana completa
    """
    attack_segments = _non_empty(
        [InterArrivalSegment(s.values, s.window, s.start, Origin.ATTACK) for s in segment(attack, window)], "ataque"
    )
    baseline_segments = _non_empty(
        [InterArrivalSegment(s.values, s.window, s.start, Origin.NO_ATTACK) for s in segment(baseline, window)],
        "referencia",
    )
    segments = attack_segments + baseline_segments
    labels = [label_value(seg.label) for seg in segments]
    train_index, test_index = stratified_split(labels, train_fraction, seed)

    reference = [segments[i] for i in train_index if segments[i].label == Origin.NO_ATTACK]
    if not reference:
        raise EmptyResult(f"Ninguna ventana de referencia de {window:.0f} s cae en el entrenamiento")
    spec = HistogramSpec.from_baseline(np.concatenate([seg.values for seg in reference]), bins, quantile)
    distributions = [Distribution.from_values(seg.values, spec) for seg in reference]
    logger.debug(
        f"Ventana {window:.0f} s: {len(attack_segments)} segmentos A, {len(baseline_segments)} B, "
        f"{len(reference)} de referencia"
    )
    return WindowExperiment(window, segments, train_index, test_index, spec, distributions)


def train(dataset: Dataset, algorithm: str, hyperparams: Optional[Dict[str, Any]] = None,
          seed: int = 0) -> BaseClassifier:
    """
    Entrena un clasificador con la parte de entrenamiento del conjunto.

    Raises:
        SingleClassTraining: Si el entrenamiento tiene una sola clase
        UnknownKind: Si el algoritmo no está registrado
    """
    classifier = build_classifier(algorithm, hyperparams, seed)
    X, y = dataset.train_arrays()
    return classifier.fit(X, y)


def evaluate(classifier: BaseClassifier, dataset: Dataset) -> float:
    """Tasa de detección: aciertos sobre la parte de prueba."""
    X, y = dataset.test_arrays()
    return classifier.accuracy(X, y)


def train_model(experiment: WindowExperiment, kind: FeatureKind, algorithm: str,
                hyperparams: Optional[Dict[str, Any]] = None, seed: int = 0) -> tuple:
    """
    Entrena y evalúa un modelo completo listo para guardar.

    Returns:
        (DetectionModel, precisión de prueba)
    """
    dataset = experiment.dataset(kind)
    classifier = train(dataset, algorithm, hyperparams, seed)
    accuracy = evaluate(classifier, dataset)
    model = DetectionModel(
        classifier=classifier,
        feature_kind=kind,
        window=experiment.window,
        spec=experiment.spec,
        baseline=experiment.baseline if kind == FeatureKind.JSD else [],
        metadata={"test_accuracy": accuracy, "train_size": int(dataset.train_index.size),
                  "test_size": int(dataset.test_index.size)},
    )
    return model, accuracy


@dataclass(frozen=True)
class Verdict:
    window_start: float
    verdict: Origin
    score: float
    features: FeatureVector = field(repr=False, compare=False)


def detect(
    model: DetectionModel,
    capture: CaptureSeries,
    window: Optional[float] = None,
    spec: Optional[HistogramSpec] = None,
    baseline: Optional[Sequence[Distribution]] = None,
) -> List[Verdict]:
    """
    Clasifica cada ventana completa de una captura.

    La ventana, el histograma y la referencia salen del modelo salvo que se
    indiquen explícitamente.

    Raises:
        EmptyResult: Si la captura no cubre ni una ventana
        SpecMismatch: Si la referencia no comparte el histograma
    """
    window = window or model.window
    spec = spec or model.spec
    baseline = list(baseline) if baseline is not None else model.baseline
    if any(b.spec != spec for b in baseline):
        raise SpecMismatch("La referencia no usa el histograma indicado")

    segments = _non_empty(segment(capture, window), "la captura")
    if not segments:
        raise EmptyResult("Ninguna ventana de la captura tiene tiempos entre llegadas")
    vectors = feature_vectors(segments, model.feature_kind, baseline)
    X = np.vstack([vector.values for vector in vectors])
    predictions = model.classifier.predict(X)
    scores = model.classifier.decision_scores(X)
    verdicts = [
        Verdict(seg.start, VALUE_LABELS[int(pred)], float(score), vector)
        for seg, pred, score, vector in zip(segments, predictions, scores, vectors)
    ]
    attacks = sum(v.verdict == Origin.ATTACK for v in verdicts)
    logger.info(f"Detección: {attacks}/{len(verdicts)} ventanas clasificadas como ataque")
    return verdicts


def verdicts_frame(verdicts: Sequence[Verdict]) -> pd.DataFrame:
    return pd.DataFrame(
        [(v.window_start, v.verdict.value, v.score) for v in verdicts], columns=VERDICT_COLUMNS
    )


def write_verdicts(verdicts: Sequence[Verdict], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    verdicts_frame(verdicts).to_csv(path, index=False, float_format="%.6f")
    return path


def run_detection_suite(
    attack: CaptureSeries,
    baseline: CaptureSeries,
    windows_min: Sequence[float] = DEFAULT_WINDOWS_MIN,
    kinds: Sequence[FeatureKind] = ALL_FEATURES,
    algorithms: Sequence[str] = ALL_ALGORITHMS,
    split_seed: int = 0,
    model_seed: int = 0,
    hyperparams: Optional[Dict[str, Dict[str, Any]]] = None,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    bins: int = DEFAULT_BINS,
    quantile: float = DEFAULT_QUANTILE,
) -> pd.DataFrame:
    """
    Tabla de tasas de detección para cada ventana, característica y algoritmo.

    Args:
        attack: Captura de ataque (A)
        baseline: Captura sin ataque (B)
        windows_min: Ventanas en minutos
        kinds: Tipos de característica
        algorithms: Identificadores de clasificador registrados
        split_seed: Semilla de la partición 70/30
        model_seed: Semilla de los clasificadores que la usan
        hyperparams: Hiperparámetros por algoritmo

    Returns:
        DataFrame con columnas window_min, feature, algorithm, accuracy
    """
    hyperparams = hyperparams or {}
    rows = []
    for window_min in windows_min:
        experiment = build_window_experiment(
            attack, baseline, float(window_min) * 60.0, split_seed, train_fraction, bins, quantile
        )
        for kind in kinds:
            dataset = experiment.dataset(kind)
            for algorithm in algorithms:
                classifier = train(dataset, algorithm, hyperparams.get(algorithm), model_seed)
                accuracy = evaluate(classifier, dataset)
                rows.append((window_min, kind.value, algorithm, accuracy))
                logger.info(f"🔍 {window_min:g} min · {kind.value} · {algorithm}: {accuracy:.3f}")
    return pd.DataFrame(rows, columns=SUITE_COLUMNS)
