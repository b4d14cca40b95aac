"""Comandos que generan datos: capturas del bus e impacto energético."""

from typing import Any, Dict

from core.orchestrator import CAPTURE_NAMES

from .base_command import BaseCommand


class SimulateCommand(BaseCommand):
    """Simula la red con y sin relé y guarda las capturas JSONL."""

    name = "simulate"
    description = "Genera las capturas de ataque y de referencia"

    def validate_params(self, params: Dict[str, Any]) -> bool:
        return set(params.get("which", CAPTURE_NAMES)) <= set(CAPTURE_NAMES)

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        which = tuple(params.get("which", CAPTURE_NAMES))
        runs = self.orchestrator.simulate(which)
        return {
            "captures": {name: str(self.orchestrator.capture_path(name)) for name in runs},
            "stats": {name: run.stats for name, run in runs.items()},
        }


class HvacCommand(BaseCommand):
    """Compara la energía del HVAC con y sin falsificación."""

    name = "hvac"
    description = "Mide la energía adicional de cada ataque"

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        result = self.orchestrator.hvac()
        return {
            "summary": [report.summary() for report in result["reports"]],
            "sweep": [report.summary() for report in result["sweep"]],
            "table_path": str(result["table_path"]),
        }
