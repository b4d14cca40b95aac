"""Comandos del detector: características, entrenamiento, detección y tabla completa."""

from typing import Any, Dict

from detector import ALL_ALGORITHMS, FeatureKind

from .base_command import BaseCommand


def _positive_window(params: Dict[str, Any]) -> bool:
    window = params.get("window_min")
    return window is not None and float(window) > 0


class FeaturizeCommand(BaseCommand):
    """Exporta los vectores de características de una ventana a CSV."""

    name = "featurize"
    description = "Calcula vectores de características por ventana"

    def validate_params(self, params: Dict[str, Any]) -> bool:
        return _positive_window(params)

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        kinds = [FeatureKind(kind) for kind in params["features"]] if params.get("features") else None
        paths = self.orchestrator.featurize(float(params["window_min"]), kinds)
        return {"features": [str(path) for path in paths]}


class TrainCommand(BaseCommand):
    """Entrena y guarda un modelo para una ventana, característica y algoritmo."""

    name = "train"
    description = "Entrena un clasificador con la partición 70/30"

    def validate_params(self, params: Dict[str, Any]) -> bool:
        return _positive_window(params) and params.get("algorithm") in ALL_ALGORITHMS

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        path, accuracy = self.orchestrator.train(
            float(params["window_min"]), FeatureKind(params["feature"]), params["algorithm"]
        )
        return {"model": str(path), "accuracy": accuracy}


class DetectCommand(BaseCommand):
    """Clasifica cada ventana de una captura con un modelo guardado."""

    name = "detect"
    description = "Emite un veredicto por ventana"

    def validate_params(self, params: Dict[str, Any]) -> bool:
        return bool(params.get("model")) and bool(params.get("capture"))

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        path, verdicts = self.orchestrator.detect(params["model"], params["capture"], params.get("out"))
        attacks = sum(verdict.verdict.value == "attack" for verdict in verdicts)
        return {"verdicts": str(path), "windows": len(verdicts), "attack_windows": attacks}


class SuiteCommand(BaseCommand):
    """Tabla de tasas de detección; con `full` genera antes capturas e informe HVAC."""

    name = "suite"
    description = "Evaluación completa ventana × característica × algoritmo"

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        if params.get("full"):
            self.orchestrator.simulate()
            self.orchestrator.hvac()
        path, table = self.orchestrator.suite()
        return {"table_path": str(path), "table": table}
