#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Orquestador de experimentos: encadena simulación, impacto HVAC y detección
sobre un ExperimentConfig y deja todos los artefactos en su directorio de salida.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from attack import build_falsifier
from bus_sim import CaptureSeries, Origin
from detector import (
    FeatureKind,
    build_window_experiment,
    detect,
    load_model,
    run_detection_suite,
    save_model,
    train_model,
    write_verdicts,
)
from hvac_sim import EnergyReport, bias_sweep, run_attack_impact
from utils.logger import get_logger

from .experiment_config import ExperimentConfig
from .reporting import plot_detection_rates, plot_energy, plot_segment_histograms
from .scenarios import CaptureRun, simulate_capture
from .seeds import SeedPlan

logger = get_logger(__name__)

CAPTURE_NAMES = ("baseline", "attack")


class ExperimentOrchestrator:
    """Ejecuta las operaciones del laboratorio sobre una configuración."""

    def __init__(self, config: ExperimentConfig):
        """
        Args:
            config: Configuración ya validada (con las sobrescrituras de la CLI aplicadas)
        """
        self.config = config
        self.seeds = SeedPlan(config.seed)

    @property
    def output_dir(self) -> Path:
        return self.config.output_dir

    def path(self, *parts: str) -> Path:
        return self.output_dir.joinpath(*parts)

    def capture_path(self, name: str) -> Path:
        return self.path("captures", f"{name}.jsonl")

    # --- simulación -------------------------------------------------------

    def simulate(self, which: Sequence[str] = CAPTURE_NAMES) -> Dict[str, CaptureRun]:
        """
        Genera y guarda las capturas pedidas.

        Returns:
            Ejecución por nombre de captura
        """
        unknown = set(which) - set(CAPTURE_NAMES)
        if unknown:
            raise ValueError(f"Capturas desconocidas: {sorted(unknown)}")
        scenario = self.config.attack_scenario()
        runs: Dict[str, CaptureRun] = {}
        summary: Dict[str, Any] = {"config": self.config.summary()}
        for name in CAPTURE_NAMES:
            if name not in which:
                continue
            run = simulate_capture(self.config, attacked=(name == "attack"), scenario=scenario)
            run.capture.write_jsonl(self.capture_path(name))
            if run.sensor_side is not None:
                run.sensor_side.write_jsonl(self.capture_path(f"{name}_sensor_side"))
            runs[name] = run
            summary[name] = run.stats
        summary_path = self.path("captures", "simulation_summary.json")
        summary_path.parent.mkdir(parents=True, exist_ok=True)
        with open(summary_path, "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2, sort_keys=True)
        return runs

    def load_captures(self) -> Tuple[CaptureSeries, CaptureSeries]:
        """
        Lee las capturas de ataque y de referencia.

        Raises:
            FileNotFoundError: Si falta alguna; hay que ejecutar `simulate` antes
        """
        missing = [str(self.capture_path(name)) for name in CAPTURE_NAMES if not self.capture_path(name).exists()]
        if missing:
            raise FileNotFoundError(f"Faltan capturas: {', '.join(missing)}")
        attack = CaptureSeries.read_jsonl(self.capture_path("attack"), Origin.ATTACK)
        baseline = CaptureSeries.read_jsonl(self.capture_path("baseline"), Origin.NO_ATTACK)
        return attack, baseline

    # --- impacto HVAC -----------------------------------------------------

    def hvac(self) -> Dict[str, Any]:
        """
        Ejecuta la referencia frente a cada ataque configurado y el barrido de sesgos.

        Returns:
            Informes por ataque, informes del barrido y ruta de la tabla resumen
        """
        section = self.config.hvac
        params = self.config.hvac_params()
        weather = self.config.weather()
        start, hours = float(section["start"]), float(section["duration_h"])
        out_dir = self.path("hvac")

        reports: List[EnergyReport] = []
        for attack in section["attacks"]:
            falsifier = build_falsifier(attack["kind"], attack["value"])
            report = run_attack_impact(params, weather, falsifier, start, hours, scenario=attack["name"])
            report.write(out_dir)
            reports.append(report)
        sweep = bias_sweep(params, weather, section["bias_sweep"], start, hours)

        rows = []
        for report in reports + sweep:
            for component, value in report.additional_kwh.items():
                rows.append((report.scenario, component, report.baseline_kwh, report.attacked_kwh, value))
        table = pd.DataFrame(
            rows, columns=["scenario", "component", "baseline_kwh", "attacked_kwh", "additional_kwh"]
        )
        table_path = out_dir / "hvac_energy_summary.csv"
        out_dir.mkdir(parents=True, exist_ok=True)
        table.to_csv(table_path, index=False, float_format="%.6f")
        return {"reports": reports, "sweep": sweep, "table": table, "table_path": table_path}

    # --- detección --------------------------------------------------------

    def _experiment(self, window_min: float, captures: Optional[Tuple[CaptureSeries, CaptureSeries]] = None):
        attack, baseline = captures or self.load_captures()
        detector = self.config.detector
        return build_window_experiment(
            attack, baseline, float(window_min) * 60.0, self.seeds.seed("split"),
            detector["train_fraction"], detector["bins"], detector["quantile"],
        )

    def featurize(self, window_min: float, kinds: Optional[Sequence[FeatureKind]] = None) -> List[Path]:
        """Escribe un CSV de vectores por tipo de característica para una ventana."""
        experiment = self._experiment(window_min)
        paths = []
        for kind in kinds or self.config.feature_kinds:
            path = self.path("features", f"features_{kind.value}_{window_min:g}min.csv")
            experiment.dataset(kind).to_csv(path)
            paths.append(path)
        return paths

    def train(self, window_min: float, kind: FeatureKind, algorithm: str) -> Tuple[Path, float]:
        """
        Entrena, evalúa y guarda un modelo.

        Returns:
            (ruta del modelo, precisión de prueba)
        """
        experiment = self._experiment(window_min)
        params = self.config.classifier_params().get(algorithm)
        model, accuracy = train_model(experiment, kind, algorithm, params, self.seeds.seed("svm"))
        model.metadata.update({"seed": self.config.seed, "window_min": window_min})
        path = save_model(model, self.path("models", f"model_{algorithm}_{kind.value}_{window_min:g}min.json"))
        return path, accuracy

    def detect(self, model_path: Union[str, Path], capture_path: Union[str, Path],
               out_path: Optional[Union[str, Path]] = None) -> Tuple[Path, list]:
        """
        Clasifica una captura por ventanas con un modelo guardado.

        Raises:
            FileNotFoundError: Si falta el modelo o la captura
        """
        model_path, capture_path = Path(model_path), Path(capture_path)
        for required in (model_path, capture_path):
            if not required.exists():
                raise FileNotFoundError(f"No existe {required}")
        model = load_model(model_path)
        capture = CaptureSeries.read_jsonl(capture_path)
        verdicts = detect(model, capture)
        out_path = Path(out_path) if out_path else self.path("verdicts", f"verdicts_{capture_path.stem}.csv")
        return write_verdicts(verdicts, out_path), verdicts

    def suite(self) -> Tuple[Path, pd.DataFrame]:
        """Tabla completa ventana × característica × algoritmo."""
        attack, baseline = self.load_captures()
        detector = self.config.detector
        table = run_detection_suite(
            attack,
            baseline,
            windows_min=detector["windows_min"],
            kinds=self.config.feature_kinds,
            algorithms=detector["algorithms"],
            split_seed=self.seeds.seed("split"),
            model_seed=self.seeds.seed("svm"),
            hyperparams=self.config.classifier_params(),
            train_fraction=detector["train_fraction"],
            bins=detector["bins"],
            quantile=detector["quantile"],
        )
        path = self.path("suite", "detection_rates.csv")
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(path, index=False, float_format="%.6f")
        return path, table

    def report(self) -> List[Path]:
        """
        Figuras y CSV a partir de los artefactos ya generados.

        Raises:
            FileNotFoundError: Si no hay ni tabla de detección, ni resumen HVAC, ni capturas
        """
        out_dir = self.path("report")
        written: List[Path] = []
        suite_path = self.path("suite", "detection_rates.csv")
        if suite_path.exists():
            written += plot_detection_rates(pd.read_csv(suite_path), out_dir)
        hvac_path = self.path("hvac", "hvac_energy_summary.csv")
        if hvac_path.exists():
            written += plot_energy(pd.read_csv(hvac_path), out_dir)
        if all(self.capture_path(name).exists() for name in CAPTURE_NAMES):
            windows = self.config.detector["windows_min"]
            experiment = self._experiment(20 if 20 in windows else windows[0])
            attack = next(seg for seg in experiment.segments if seg.label == Origin.ATTACK)
            baseline = next(seg for seg in experiment.segments if seg.label == Origin.NO_ATTACK)
            written += plot_segment_histograms(attack, baseline, experiment.spec, out_dir)
        if not written:
            raise FileNotFoundError(f"Nada que representar en {self.output_dir}; ejecuta simulate, hvac o suite")
        logger.info(f"📊 Informe: {len(written)} ficheros en {out_dir}")
        return written
