"""Modelo HVAC simplificado para medir el coste energético de los datos falsos."""

from .errors import NonFiniteState
from .impact import EnergyReport, HvacRun, bias_sweep, run_attack_impact, simulate
from .model import CP_WATER, HvacParams, HvacState, PowerMap, hvac_step
from .weather import DEFAULT_START, WeatherTrace

__all__ = [
    "CP_WATER", "DEFAULT_START", "EnergyReport", "HvacParams", "HvacRun", "HvacState",
    "NonFiniteState", "PowerMap", "WeatherTrace", "bias_sweep", "hvac_step", "run_attack_impact",
    "simulate",
]
