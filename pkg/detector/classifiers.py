#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Clasificadores binarios del detector: árbol CART con impureza de Gini y SVM
lineal entrenada por subgradiente.

Las etiquetas son 0 (sin ataque) y 1 (ataque). Ambos modelos son
deterministas para unos datos, hiperparámetros y semilla dados, y se
serializan a diccionarios aptos para JSON.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, List, Optional

import numpy as np

from core.registry import Registry
from utils.logger import get_logger

from .errors import ModelFormatError, SingleClassTraining

logger = get_logger(__name__)


class BaseClassifier(ABC):
    """Clase base para los clasificadores del detector."""

    kind: ClassVar[str] = "base"
    uses_seed: ClassVar[bool] = False

    def __init__(self):
        self.fitted = False

    @abstractmethod
    def fit(self, X: np.ndarray, y: np.ndarray) -> "BaseClassifier":
        """
        Entrena el modelo.

        Args:
            X: Matriz (n, d) de características
            y: Etiquetas 0/1 de longitud n

        Returns:
            El propio clasificador
        """

    @abstractmethod
    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        """Puntuación por fila: pureza de hoja en el árbol, valor de decisión en la SVM."""

    @abstractmethod
    def predict(self, X: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def hyperparams(self) -> Dict[str, Any]:
        pass

    @abstractmethod
    def state_dict(self) -> Dict[str, Any]:
        pass

    @abstractmethod
    def load_state(self, state: Dict[str, Any]) -> None:
        pass

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "hyperparams": self.hyperparams(), "state": self.state_dict()}

    def accuracy(self, X: np.ndarray, y: np.ndarray) -> float:
        y = np.asarray(y)
        if y.size == 0:
            raise ValueError("No se puede medir la precisión sobre un conjunto vacío")
        return float(np.mean(self.predict(X) == y))

    @staticmethod
    def _check_training_data(X: np.ndarray, y: np.ndarray) -> tuple:
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValueError(f"Dimensiones incompatibles: X {X.shape}, y {y.shape}")
        if y.size == 0:
            raise SingleClassTraining("El conjunto de entrenamiento está vacío")
        if np.unique(y).size < 2:
            raise SingleClassTraining(f"El entrenamiento solo contiene la clase {int(y[0])}")
        return X, y

    def _require_fitted(self) -> None:
        if not self.fitted:
            raise RuntimeError(f"El clasificador {self.kind} no está entrenado")


CLASSIFIERS: Registry[BaseClassifier] = Registry(BaseClassifier, "Clasificador")


@dataclass(frozen=True)
class _Split:
    feature: int
    threshold: float
    impurity: float


def _gini(positives: np.ndarray, totals: np.ndarray) -> np.ndarray:
    p = positives / totals
    return 2.0 * p * (1.0 - p)


@CLASSIFIERS.entry("tree")
class DecisionTree(BaseClassifier):
    """
    Árbol CART binario.

    Los umbrales son puntos medios entre valores distintos consecutivos y
    `x <= umbral` va a la izquierda. Ante impurezas iguales gana la
    característica de menor índice y, dentro de ella, el menor umbral.
    """

    kind = "tree"

    def __init__(self, max_depth: int = 8, min_leaf: int = 2):
        super().__init__()
        if max_depth < 0 or min_leaf < 1:
            raise ValueError(f"Hiperparámetros inválidos: max_depth={max_depth}, min_leaf={min_leaf}")
        self.max_depth = int(max_depth)
        self.min_leaf = int(min_leaf)
        self.nodes: List[Dict[str, Any]] = []

    def hyperparams(self) -> Dict[str, Any]:
        return {"max_depth": self.max_depth, "min_leaf": self.min_leaf}

    @property
    def depth(self) -> int:
        return max((node["depth"] for node in self.nodes), default=0)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        X, y = self._check_training_data(X, y)
        self.nodes = []
        self._grow(X, y, np.arange(y.size), 0)
        self._compile()
        self.fitted = True
        logger.debug(f"Árbol entrenado: {len(self.nodes)} nodos, profundidad {self.depth}")
        return self

    def _grow(self, X: np.ndarray, y: np.ndarray, rows: np.ndarray, depth: int) -> int:
        index = len(self.nodes)
        labels = y[rows]
        score = float(labels.mean())
        self.nodes.append({"depth": depth, "score": score, "samples": int(rows.size)})

        pure = score in (0.0, 1.0)
        if depth >= self.max_depth or pure or rows.size < 2 * self.min_leaf:
            return index
        split = self._best_split(X[rows], labels)
        if split is None or split.impurity >= 2.0 * score * (1.0 - score) - 1e-12:
            return index

        go_left = X[rows, split.feature] <= split.threshold
        self.nodes[index].update({"feature": split.feature, "threshold": split.threshold})
        self.nodes[index]["left"] = self._grow(X, y, rows[go_left], depth + 1)
        self.nodes[index]["right"] = self._grow(X, y, rows[~go_left], depth + 1)
        return index

    def _best_split(self, X: np.ndarray, y: np.ndarray) -> Optional[_Split]:
        n = y.size
        best: Optional[_Split] = None
        left_sizes = np.arange(1, n)
        for feature in range(X.shape[1]):
            order = np.argsort(X[:, feature], kind="stable")
            values = X[order, feature]
            positives_left = np.cumsum(y[order])[:-1].astype(float)
            positives_right = y.sum() - positives_left
            valid = (values[1:] != values[:-1]) \
                & (left_sizes >= self.min_leaf) & (n - left_sizes >= self.min_leaf)
            if not valid.any():
                continue
            impurity = (
                left_sizes * _gini(positives_left, left_sizes)
                + (n - left_sizes) * _gini(positives_right, n - left_sizes)
            ) / n
            impurity = np.where(valid, impurity, np.inf)
            position = int(np.argmin(impurity))
            if best is None or impurity[position] < best.impurity:
                threshold = 0.5 * (values[position] + values[position + 1])
                best = _Split(feature, float(threshold), float(impurity[position]))
        return best

    def _compile(self) -> None:
        if not self.nodes:
            raise ModelFormatError("Un árbol necesita al menos un nodo")
        self._feature = np.array([node.get("feature", -1) for node in self.nodes], dtype=int)
        self._threshold = np.array([node.get("threshold", 0.0) for node in self.nodes], dtype=float)
        self._left = np.array([node.get("left", i) for i, node in enumerate(self.nodes)], dtype=int)
        self._right = np.array([node.get("right", i) for i, node in enumerate(self.nodes)], dtype=int)
        self._score = np.array([node["score"] for node in self.nodes], dtype=float)

    def _leaves(self, X: np.ndarray) -> np.ndarray:
        self._require_fitted()
        X = np.atleast_2d(np.asarray(X, dtype=float))
        node = np.zeros(X.shape[0], dtype=int)
        rows = np.arange(X.shape[0])
        for _ in range(self.depth + 1):
            feature = self._feature[node]
            internal = feature >= 0
            if not internal.any():
                break
            go_left = X[rows, np.where(internal, feature, 0)] <= self._threshold[node]
            node = np.where(internal, np.where(go_left, self._left[node], self._right[node]), node)
        return node

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return self._score[self._leaves(X)]

    def predict(self, X: np.ndarray) -> np.ndarray:
        # empate de pureza 0.5: sin ataque
        return (self.decision_scores(X) > 0.5).astype(int)

    def state_dict(self) -> Dict[str, Any]:
        return {"nodes": [dict(node) for node in self.nodes]}

    def load_state(self, state: Dict[str, Any]) -> None:
        self.nodes = [dict(node) for node in state["nodes"]]
        self._compile()
        self.fitted = True


@CLASSIFIERS.entry("svm")
class LinearSvm(BaseClassifier):
    """
    SVM lineal: pérdida bisagra con regularización L2, optimizada por
    subgradiente en mini-lotes sobre características estandarizadas.
    """

    kind = "svm"
    uses_seed = True

    def __init__(self, lam: float = 1e-3, lr: float = 0.1, decay: float = 0.01,
                 epochs: int = 100, batch_size: int = 32, seed: int = 0):
        super().__init__()
        if lam < 0 or lr <= 0 or decay < 0 or epochs < 1 or batch_size < 1:
            raise ValueError("Hiperparámetros de la SVM fuera de rango")
        self.lam = float(lam)
        self.lr = float(lr)
        self.decay = float(decay)
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.seed = int(seed)
        self.weights = np.zeros(0)
        self.bias = 0.0
        self.mean = np.zeros(0)
        self.scale = np.ones(0)

    def hyperparams(self) -> Dict[str, Any]:
        return {
            "lam": self.lam, "lr": self.lr, "decay": self.decay,
            "epochs": self.epochs, "batch_size": self.batch_size, "seed": self.seed,
        }

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(np.asarray(X, dtype=float)) - self.mean) / self.scale

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearSvm":
        X, y = self._check_training_data(X, y)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        Z = self._standardize(X)
        signs = np.where(y == 1, 1.0, -1.0)

        n, d = Z.shape
        w = np.zeros(d)
        b = 0.0
        rng = np.random.default_rng(self.seed)
        for epoch in range(self.epochs):
            rate = self.lr / (1.0 + self.decay * epoch)
            order = rng.permutation(n)
            for begin in range(0, n, self.batch_size):
                batch = order[begin:begin + self.batch_size]
                Zb, sb = Z[batch], signs[batch]
                active = sb * (Zb @ w + b) < 1.0
                grad_w = self.lam * w - (sb[active, None] * Zb[active]).sum(axis=0) / batch.size
                grad_b = -sb[active].sum() / batch.size
                w = w - rate * grad_w
                b = b - rate * grad_b

        self.weights, self.bias = w, float(b)
        self.fitted = True
        logger.debug(f"SVM entrenada: d={d}, |w|={np.linalg.norm(w):.4f}, b={b:.4f}")
        return self

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        self._require_fitted()
        return self._standardize(X) @ self.weights + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_scores(X) > 0.0).astype(int)

    def state_dict(self) -> Dict[str, Any]:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
        }

    def load_state(self, state: Dict[str, Any]) -> None:
        self.weights = np.asarray(state["weights"], dtype=float)
        self.bias = float(state["bias"])
        self.mean = np.asarray(state["mean"], dtype=float)
        self.scale = np.asarray(state["scale"], dtype=float)
        if not self.weights.shape == self.mean.shape == self.scale.shape:
            raise ModelFormatError("Pesos y estadísticas de estandarización con dimensiones distintas")
        self.fitted = True


def build_classifier(kind: str, hyperparams: Optional[Dict[str, Any]] = None, seed: int = 0) -> BaseClassifier:
    """
    Instancia un clasificador registrado.

    La semilla solo se pasa a los clasificadores que la usan.

    Raises:
        UnknownKind: Si `kind` no está registrado
    """
    params = dict(hyperparams or {})
    entry_class = CLASSIFIERS.get_class(kind)
    if entry_class is not None and entry_class.uses_seed:
        params.setdefault("seed", seed)
    return CLASSIFIERS.create(kind, **params)


def classifier_from_dict(data: Dict[str, Any]) -> BaseClassifier:
    """
    Reconstruye un clasificador serializado con to_dict().

    Raises:
        ModelFormatError: Si faltan campos o el tipo no está registrado
    """
    try:
        kind = data["kind"]
        if kind not in CLASSIFIERS:
            raise ModelFormatError(f"Clasificador desconocido en el modelo: {kind!r}")
        classifier = CLASSIFIERS.create(kind, **data.get("hyperparams", {}))
        classifier.load_state(data["state"])
    except (KeyError, TypeError) as error:
        raise ModelFormatError(f"Clasificador mal formado: {error}") from error
    return classifier
