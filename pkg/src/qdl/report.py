"""Deterministic CSV/JSON output and matplotlib rendering for the CLI.

CSV files are UTF-8, comma separated, '.' decimal, 17 significant digits
(lossless for doubles), first row a header naming each column with its units.
Every run also emits a JSON metadata sidecar with keys {command, params,
grids, formula_path, version}.  PNG rendering strips the creation date so
repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def write_csv(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    """Write equal-length columns under a header row."""
    n_rows = {len(c) for c in columns}
    if len(n_rows) != 1:
        raise ValueError("columns must have equal length")
    lines = [",".join(header)]
    for i in range(n_rows.pop()):
        lines.append(",".join(format_value(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def sidecar(command: str, params: dict, grids: dict, formula_path: str) -> dict:
    return {
        "command": command,
        "params": params,
        "grids": grids,
        "formula_path": formula_path,
        "version": __version__,
    }


def sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_line(
    png_path: Path,
    x: np.ndarray,
    series: Sequence[tuple[str, np.ndarray]],
    xlabel: str,
    ylabel: str,
    title: str,
) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, y in series:
        ax.plot(x, y, label=label, lw=1.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150, metadata={"Date": None})
    plt.close(fig)


def render_surface(
    png_path: Path,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    xlabel: str,
    ylabel: str,
    title: str,
) -> None:
    """Heat map of z sampled on the outer product of x and y (z.shape == (len(x), len(y)))."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    mesh = ax.pcolormesh(x, y, z.T, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150, metadata={"Date": None})
    plt.close(fig)
