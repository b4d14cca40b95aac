"""
Modelo de detección persistible: clasificador entrenado más todo lo necesario
para describir una captura nueva (ventana, tipo de característica, histograma
y distribuciones de referencia).
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from utils.logger import get_logger

from .classifiers import BaseClassifier, classifier_from_dict
from .errors import ModelFormatError
from .features import Distribution, FeatureKind, HistogramSpec

logger = get_logger(__name__)

FORMAT_VERSION = 1


@dataclass
class DetectionModel:
    classifier: BaseClassifier
    feature_kind: FeatureKind
    window: float
    spec: HistogramSpec
    baseline: List[Distribution] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.feature_kind == FeatureKind.JSD and not self.baseline:
            raise ValueError("Un modelo JSD necesita distribuciones de referencia")

    @property
    def algorithm(self) -> str:
        return self.classifier.kind

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "algorithm": self.algorithm,
            "feature_kind": self.feature_kind.value,
            "window_s": self.window,
            "classifier": self.classifier.to_dict(),
            "histogram": self.spec.to_dict(),
            "baseline": [d.probabilities.tolist() for d in self.baseline],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DetectionModel":
        """
        Raises:
            ModelFormatError: Versión no soportada o campos ausentes
        """
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"Versión de modelo no soportada: {version!r}")
        try:
            spec = HistogramSpec.from_dict(data["histogram"])
            return cls(
                classifier=classifier_from_dict(data["classifier"]),
                feature_kind=FeatureKind(data["feature_kind"]),
                window=float(data["window_s"]),
                spec=spec,
                baseline=[Distribution(p, spec) for p in data.get("baseline", [])],
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError, ValueError) as error:
            if isinstance(error, ModelFormatError):
                raise
            raise ModelFormatError(f"Modelo mal formado: {error}") from error


def save_model(model: DetectionModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info(f"Modelo {model.algorithm}/{model.feature_kind.value} guardado en {path}")
    return path


def load_model(path: Union[str, Path], expected_kind: Optional[FeatureKind] = None) -> DetectionModel:
    """
    Carga un modelo guardado con save_model().

    Args:
        path: Fichero JSON del modelo
        expected_kind: Si se indica, el tipo de característica que debe tener

    Raises:
        ModelFormatError: Si el fichero no es JSON válido o no es un modelo compatible
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as error:
        raise ModelFormatError(f"{path} no es JSON válido: {error}") from error
    if not isinstance(data, dict):
        raise ModelFormatError(f"{path} no contiene un objeto JSON")
    model = DetectionModel.from_dict(data)
    if expected_kind is not None and model.feature_kind != expected_kind:
        raise ModelFormatError(
            f"El modelo usa {model.feature_kind.value}, se esperaba {expected_kind.value}"
        )
    return model
