#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
knxlab: laboratorio de falsificación de datos en KNX.

    python main.py [--config F] [--seed N] [--out DIR] simulate|hvac|featurize|train|detect|suite|report
"""

import os
import sys
from typing import Any, Dict, Type

import click
from dotenv import load_dotenv

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from commands import (  # noqa: E402
    BaseCommand,
    DetectCommand,
    FeaturizeCommand,
    HvacCommand,
    ReportCommand,
    SimulateCommand,
    SuiteCommand,
    TrainCommand,
)
from core.experiment_config import ConfigError, ExperimentConfig  # noqa: E402
from core.orchestrator import CAPTURE_NAMES, ExperimentOrchestrator  # noqa: E402
from core.registry import UnknownKind  # noqa: E402
from detector import ALL_ALGORITHMS, DetectorError, FeatureKind  # noqa: E402
from hvac_sim import NonFiniteState  # noqa: E402
from utils.logger import get_logger  # noqa: E402

logger = get_logger("knxlab")

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config", "settings.yaml")
FEATURE_CHOICES = click.Choice([kind.value for kind in FeatureKind])


def _run(ctx: click.Context, command_class: Type[BaseCommand], params: Dict[str, Any]) -> Dict[str, Any]:
    """Ejecuta un comando traduciendo los errores a códigos de salida de click."""
    command = command_class(ctx.obj)
    try:
        return command.run(params)
    except (ConfigError, UnknownKind) as error:
        raise click.UsageError(str(error), ctx=ctx)
    except FileNotFoundError as error:
        raise click.ClickException(f"❌ {error}")
    except NonFiniteState as error:
        raise click.ClickException(f"❌ Simulación HVAC inestable: {error}")
    except DetectorError as error:
        raise click.ClickException(f"❌ {type(error).__name__}: {error}")
    except ValueError as error:
        raise click.UsageError(str(error), ctx=ctx)


@click.group()
@click.option("--config", "config_path", default=DEFAULT_CONFIG, show_default=True,
              type=click.Path(dir_okay=False), help="Fichero YAML del experimento")
@click.option("--seed", type=int, default=None, help="Semilla raíz (sobrescribe la del fichero)")
@click.option("--out", "output_dir", type=click.Path(file_okay=False), default=None,
              help="Directorio de salida (sobrescribe el del fichero)")
@click.pass_context
def cli(ctx: click.Context, config_path: str, seed: int, output_dir: str):
    """Laboratorio de ataques MITM sobre KNX y su detección."""
    load_dotenv()
    try:
        config = ExperimentConfig.load(config_path).with_overrides(seed=seed, output_dir=output_dir)
    except ConfigError as error:
        raise click.UsageError(str(error), ctx=ctx)
    logger.debug(f"Configuración: {config.summary()}")
    ctx.obj = ExperimentOrchestrator(config)


@cli.command()
@click.option("--only", type=click.Choice(CAPTURE_NAMES), default=None, help="Generar solo una de las capturas")
@click.pass_context
def simulate(ctx: click.Context, only: str):
    """Genera las capturas con y sin relé."""
    which = (only,) if only else CAPTURE_NAMES
    result = _run(ctx, SimulateCommand, {"which": which})
    for name, stats in result["stats"].items():
        click.echo(f"✅ {name}: {stats['captured']} telegramas capturados → {result['captures'][name]}")
        click.echo(f"   📊 por segmento: {stats['transmitted']}")
        if "relay" in stats:
            relay = stats["relay"]
            click.echo(
                f"   🔍 relé: {relay['forwarded']} reenviados, {relay['modified']} modificados, "
                f"{relay['dropped']} descartados"
            )
        if "injected" in stats:
            click.echo(f"   🔍 copias inyectadas: {stats['injected']}")


@cli.command()
@click.pass_context
def hvac(ctx: click.Context):
    """Energía adicional de cada ataque frente a la referencia."""
    result = _run(ctx, HvacCommand, {})
    for summary in result["summary"] + result["sweep"]:
        extra = summary["additional_kwh"]
        click.echo(
            f"📊 {summary['scenario']}: {summary['attacked_kwh']:.2f} kWh "
            f"(+{extra['total']:.2f}; ventiladores {extra['fan']:+.2f}, bomba {extra['pump']:+.2f}, "
            f"enfriadora {extra['chiller']:+.2f})"
        )
    click.echo(f"✅ Resumen en {result['table_path']}")


@cli.command()
@click.option("--window", "window_min", type=float, required=True, help="Ventana de detección en minutos")
@click.option("--feature", "features", type=FEATURE_CHOICES, multiple=True, help="Tipos (por defecto, los de la configuración)")
@click.pass_context
def featurize(ctx: click.Context, window_min: float, features):
    """Escribe los vectores de características en CSV."""
    result = _run(ctx, FeaturizeCommand, {"window_min": window_min, "features": list(features)})
    for path in result["features"]:
        click.echo(f"✅ {path}")


@cli.command()
@click.option("--window", "window_min", type=float, required=True, help="Ventana de detección en minutos")
@click.option("--feature", type=FEATURE_CHOICES, default=FeatureKind.JSD.value, show_default=True)
@click.option("--algorithm", type=click.Choice(ALL_ALGORITHMS), default="svm", show_default=True)
@click.pass_context
def train(ctx: click.Context, window_min: float, feature: str, algorithm: str):
    """Entrena un clasificador y guarda el modelo."""
    result = _run(ctx, TrainCommand, {"window_min": window_min, "feature": feature, "algorithm": algorithm})
    click.echo(f"✅ Modelo en {result['model']} (precisión de prueba {result['accuracy']:.3f})")


@cli.command()
@click.option("--model", type=click.Path(dir_okay=False), required=True)
@click.option("--capture", type=click.Path(dir_okay=False), required=True)
@click.option("--verdicts", "out", type=click.Path(dir_okay=False), default=None, help="CSV de salida")
@click.pass_context
def detect(ctx: click.Context, model: str, capture: str, out: str):
    """Clasifica las ventanas de una captura."""
    result = _run(ctx, DetectCommand, {"model": model, "capture": capture, "out": out})
    click.echo(f"🔍 {result['attack_windows']}/{result['windows']} ventanas con ataque")
    click.echo(f"✅ Veredictos en {result['verdicts']}")


@cli.command()
@click.option("--full", is_flag=True, help="Simular capturas e impacto HVAC antes de la tabla")
@click.pass_context
def suite(ctx: click.Context, full: bool):
    """Tasas de detección por ventana, característica y algoritmo."""
    result = _run(ctx, SuiteCommand, {"full": full})
    table = result["table"]
    pivot = table.pivot_table(index="window_min", columns=["algorithm", "feature"], values="accuracy")
    click.echo(pivot.to_string(float_format=lambda v: f"{v:.3f}"))
    click.echo(f"✅ Tabla en {result['table_path']}")


@cli.command()
@click.pass_context
def report(ctx: click.Context):
    """Figuras y CSV para graficar."""
    result = _run(ctx, ReportCommand, {})
    for path in result["files"]:
        click.echo(f"📊 {path}")


if __name__ == "__main__":
    cli()
