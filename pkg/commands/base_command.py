from abc import ABC, abstractmethod
from typing import Any, Dict

from core.orchestrator import ExperimentOrchestrator


class BaseCommand(ABC):
    """Clase base para todos los comandos del laboratorio"""

    name = "Base Command"
    description = "Comando base abstracto"

    def __init__(self, orchestrator: ExperimentOrchestrator):
        self.orchestrator = orchestrator

    @property
    def config(self):
        return self.orchestrator.config

    @abstractmethod
    def execute(self, params: Dict[str, Any]) -> Dict[str, Any]:
        """
        Lanza la operación del orquestador que corresponde al comando.

        Args:
            params: Opciones recogidas por la CLI

        Returns:
            Rutas escritas y contadores que la CLI muestra al usuario
        """

    def validate_params(self, params: Dict[str, Any]) -> bool:
        """Comprobaciones que click no cubre (rangos, combinaciones); por defecto, ninguna."""
        return True

    def run(self, params: Dict[str, Any]) -> Dict[str, Any]:
        """
        Valida y ejecuta.

        Raises:
            ValueError: Si los parámetros no son válidos
        """
        if not self.validate_params(params):
            raise ValueError(f"Parámetros no válidos para {self.name}: {params}")
        return self.execute(params)
