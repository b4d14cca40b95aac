#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Impacto energético de una falsificación: dos simulaciones emparejadas (sin y
con ataque) sobre el mismo tiempo y la misma meteorología.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from attack.falsifiers import BiasAdd, Falsifier
from knx_codec import quantize_dpt9
from utils.logger import get_logger

from .model import HvacParams, HvacState, hvac_step
from .weather import DEFAULT_START, WeatherTrace

logger = get_logger(__name__)

TRACE_COLUMNS = [
    "time_s", "T_r", "T_r_reported", "P_fan_W", "P_pump_W", "P_chiller_W", "P_total_W", "E_total_kWh",
]
COMPONENTS = ("fan", "pump", "chiller")


def reported_temperature(celsius: float, falsifier: Optional[Falsifier] = None) -> float:
    """Lectura que decodifica el controlador: la del sensor y, si hay relé, la reescrita, ambas en DPT9."""
    on_wire = quantize_dpt9(celsius)
    if falsifier is None or falsifier.is_identity:
        return on_wire
    return quantize_dpt9(falsifier.apply_celsius(on_wire))


@dataclass
class HvacRun:
    final: HvacState
    trace: pd.DataFrame

    def energy(self) -> Dict[str, float]:
        return {
            "fan": self.final.E_fan,
            "pump": self.final.E_pump,
            "chiller": self.final.E_chiller,
            "total": self.final.E_total,
        }


def simulate(
    params: HvacParams,
    weather: WeatherTrace,
    falsifier: Optional[Falsifier] = None,
    start: float = DEFAULT_START,
    duration_hours: float = 12.0,
) -> HvacRun:
    """
    Integra el modelo durante `duration_hours` con la lectura notificada
    pasando por el falsificador (None equivale a no tener relé).

    Returns:
        Estado final y traza por paso con las columnas de TRACE_COLUMNS
    """
    if duration_hours <= 0:
        raise ValueError(f"La duración debe ser positiva: {duration_hours}")
    steps = int(round(duration_hours * 3600.0 / params.step))
    state = HvacState.initial(params, start)
    rows = []
    for _ in range(steps):
        reported = reported_temperature(state.T_r, falsifier)
        state = hvac_step(state, params, weather.at(state.time), reported)
        rows.append((
            state.time, state.T_r, state.T_r_reported, state.P_fan, state.P_pump,
            state.P_chiller, state.P_total, state.E_total,
        ))
    return HvacRun(state, pd.DataFrame(rows, columns=TRACE_COLUMNS))


@dataclass
class EnergyReport:
    scenario: str
    baseline_kwh: float
    attacked_kwh: float
    additional_kwh: Dict[str, float]
    baseline: HvacRun = field(repr=False)
    attacked: HvacRun = field(repr=False)

    def summary(self) -> Dict[str, object]:
        return {
            "scenario": self.scenario,
            "baseline_kwh": self.baseline_kwh,
            "attacked_kwh": self.attacked_kwh,
            "additional_kwh": dict(self.additional_kwh),
        }

    def write(self, out_dir: Union[str, Path]) -> Dict[str, Path]:
        """
        Escribe la traza atacada, la de referencia y el resumen JSON.

        Returns:
            Rutas escritas por tipo de artefacto
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {
            "baseline_csv": out_dir / "hvac_baseline.csv",
            "trace_csv": out_dir / f"hvac_{self.scenario}.csv",
            "summary_json": out_dir / f"hvac_{self.scenario}_summary.json",
        }
        self.baseline.trace.to_csv(paths["baseline_csv"], index=False, float_format="%.6f")
        self.attacked.trace.to_csv(paths["trace_csv"], index=False, float_format="%.6f")
        with open(paths["summary_json"], "w", encoding="utf-8") as handle:
            json.dump(self.summary(), handle, indent=2, sort_keys=True)
        return paths


def run_attack_impact(
    params: HvacParams,
    weather: WeatherTrace,
    falsifier: Falsifier,
    start: float = DEFAULT_START,
    duration_hours: float = 12.0,
    scenario: Optional[str] = None,
) -> EnergyReport:
    """
    Compara la energía con y sin ataque.

    Args:
        params: Parámetros HVAC
        weather: Temperatura exterior
        falsifier: Falsificación aplicada a la lectura de sala
        start: Instante de inicio del ataque (segundos desde medianoche)
        duration_hours: Duración del ataque

    Returns:
        Informe con la energía adicional por componente y total
    """
    baseline = simulate(params, weather, None, start, duration_hours)
    attacked = simulate(params, weather, falsifier, start, duration_hours)
    base_energy, attack_energy = baseline.energy(), attacked.energy()
    additional = {name: attack_energy[name] - base_energy[name] for name in (*COMPONENTS, "total")}
    report = EnergyReport(
        scenario=scenario or falsifier.describe(),
        baseline_kwh=base_energy["total"],
        attacked_kwh=attack_energy["total"],
        additional_kwh=additional,
        baseline=baseline,
        attacked=attacked,
    )
    logger.info(
        f"HVAC {report.scenario}: base {report.baseline_kwh:.2f} kWh, "
        f"ataque {report.attacked_kwh:.2f} kWh, adicional {additional['total']:.2f} kWh"
    )
    return report


def bias_sweep(
    params: HvacParams,
    weather: WeatherTrace,
    biases: Sequence[float],
    start: float = DEFAULT_START,
    duration_hours: float = 12.0,
) -> List[EnergyReport]:
    return [
        run_attack_impact(params, weather, BiasAdd(bias), start, duration_hours, scenario=f"bias_{bias:g}")
        for bias in biases
    ]
