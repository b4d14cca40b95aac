"""
Figuras y tablas listas para graficar: curvas de tasa de detección, barras de
energía adicional e histogramas de tiempos entre llegadas.
"""

from pathlib import Path
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from detector import HistogramSpec, InterArrivalSegment  # noqa: E402
from utils.logger import get_logger  # noqa: E402

logger = get_logger(__name__)

FEATURE_LABELS = {"mean": "media", "variance": "varianza", "meanvar": "(media, varianza)", "jsd": "JSD"}
PNG_METADATA = {"Software": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)
    return path


def plot_detection_rates(table: pd.DataFrame, out_dir: Path) -> List[Path]:
    """
    Una figura y un CSV pivotado (ventana × característica) por algoritmo.

    Args:
        table: Columnas window_min, feature, algorithm, accuracy
        out_dir: Directorio de salida
    """
    written = []
    for algorithm, rows in table.groupby("algorithm", sort=True):
        pivot = rows.pivot(index="window_min", columns="feature", values="accuracy").sort_index()
        csv_path = out_dir / f"detection_rates_{algorithm}.csv"
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        pivot.to_csv(csv_path, float_format="%.6f")
        written.append(csv_path)

        fig, ax = plt.subplots(figsize=(7, 4.5))
        for feature in pivot.columns:
            ax.plot(pivot.index, pivot[feature], marker="o", label=FEATURE_LABELS.get(feature, feature))
        ax.set_xlabel("Ventana de detección (min)")
        ax.set_ylabel("Tasa de detección")
        ax.set_ylim(0.0, 1.05)
        ax.set_title(f"Tasa de detección por ventana ({algorithm})")
        ax.grid(True, alpha=0.3)
        ax.legend()
        written.append(_save(fig, out_dir / f"detection_rates_{algorithm}.png"))
    return written


def plot_energy(summary: pd.DataFrame, out_dir: Path) -> List[Path]:
    """Barras de energía adicional por componente para cada escenario."""
    pivot = summary.pivot(index="scenario", columns="component", values="additional_kwh")
    columns = [c for c in ("fan", "pump", "chiller", "total") if c in pivot.columns]
    pivot = pivot[columns]
    csv_path = out_dir / "additional_energy.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    pivot.to_csv(csv_path, float_format="%.6f")

    fig, ax = plt.subplots(figsize=(8, 4.5))
    positions = np.arange(len(pivot.index))
    width = 0.8 / max(len(columns), 1)
    for offset, component in enumerate(columns):
        ax.bar(positions + offset * width, pivot[component], width, label=component)
    ax.set_xticks(positions + width * (len(columns) - 1) / 2)
    ax.set_xticklabels(pivot.index, rotation=20)
    ax.set_ylabel("Energía adicional (kWh)")
    ax.set_title("Coste energético de la falsificación")
    ax.legend()
    fig.tight_layout()
    return [csv_path, _save(fig, out_dir / "additional_energy.png")]


def plot_segment_histograms(attack: InterArrivalSegment, baseline: InterArrivalSegment,
                            spec: HistogramSpec, out_dir: Path) -> List[Path]:
    """Histograma de un segmento con ataque frente a uno sin ataque, con los intervalos compartidos."""
    counts: Dict[str, np.ndarray] = {
        "attack": spec.histogram(attack.values),
        "no_attack": spec.histogram(baseline.values),
    }
    edges = np.asarray(spec.edges)
    frame = pd.DataFrame({
        "bin_start_s": edges,
        "bin_end_s": np.append(edges[1:], np.inf),
        "attack": counts["attack"].astype(int),
        "no_attack": counts["no_attack"].astype(int),
    })
    csv_path = out_dir / "segment_histograms.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(csv_path, index=False, float_format="%.6f")

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    widths = np.diff(edges)
    for ax, (name, values) in zip(axes, counts.items()):
        # el intervalo de desbordamiento no se dibuja
        ax.bar(edges[:-1], values[:-1], widths, align="edge")
        ax.set_title("Con ataque" if name == "attack" else "Sin ataque")
        ax.set_xlabel("Tiempo entre llegadas (s)")
    axes[0].set_ylabel("Telegramas")
    fig.tight_layout()
    return [csv_path, _save(fig, out_dir / "segment_histograms.png")]
