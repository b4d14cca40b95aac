from typing import Any, Dict

from .base_command import BaseCommand


class ReportCommand(BaseCommand):
    """Figuras PNG y CSV listos para graficar a partir de los artefactos existentes."""

    name = "report"
    description = "Genera las figuras del experimento"

    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        return {"files": [str(path) for path in self.orchestrator.report()]}
