"""Excepciones del modelo HVAC."""

import math
from typing import Any, Dict


class NonFiniteState(RuntimeError):
    """Alguna magnitud del estado dejó de ser finita; la simulación se detiene."""

    def __init__(self, step_index: int, state: Dict[str, Any]):
        self.step_index = step_index
        self.state = state
        bad = sorted(key for key, value in state.items() if not math.isfinite(value))
        super().__init__(f"Estado no finito en el paso {step_index}: {', '.join(bad)}")
