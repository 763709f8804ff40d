"""Figure rendering over the simulator's sweep CSV contract.

The input is the flat CSV emitted by the simulator CLI (one row per grid
point and replication); this module never touches simulator internals. Each
figure kind declares the columns it needs, groups rows into series, and
aggregates replications into means with standard errors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class SchemaError(ValueError):
    """The CSV lacks columns the requested figure needs."""


class EmptySelectionError(ValueError):
    """No rows survive the figure's filter."""


FIGURE_KINDS = ("tare_vs_b2", "tacae_vs_b2", "pareto_throughput", "pareto_ee")

_BAND_COLUMNS = ["scheme", "model", "distance_m", "b2_fraction", "replication"]
REQUIRED_COLUMNS = {
    "tare_vs_b2": _BAND_COLUMNS + ["tare"],
    "tacae_vs_b2": _BAND_COLUMNS + ["tacae"],
    "pareto_throughput": _BAND_COLUMNS + ["tacae", "throughput_bps"],
    "pareto_ee": _BAND_COLUMNS + ["tacae", "energy_efficiency_bpj"],
}

_AXIS_LABELS = {
    "tare": "time-averaged reconstruction error",
    "tacae": "time-averaged cost of actuation error",
    "throughput_bps": "throughput (bit/s)",
    "energy_efficiency_bpj": "energy efficiency (bit/J)",
}


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str
    out_path: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"choose from {', '.join(FIGURE_KINDS)}")


@dataclass(frozen=True)
class SeriesInfo:
    label: str
    points: int


@dataclass(frozen=True)
class RenderInfo:
    kind: str
    out_path: str
    series: tuple[SeriesInfo, ...]

    @property
    def series_count(self) -> int:
        return len(self.series)


def read_rows(csv_path: str, required: list[str]) -> list[dict]:
    path = Path(csv_path)
    if not path.exists():
        raise FileNotFoundError(f"no such CSV: {csv_path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"CSV is missing columns: {', '.join(missing)}")
        rows = []
        for record in reader:
            row = dict(record)
            for col in ("distance_m", "b2_fraction", "tare", "tacae",
                        "throughput_bps", "energy_efficiency_bpj"):
                if col in row and row[col] != "":
                    row[col] = float(row[col])
            rows.append(row)
    return rows


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def _aggregate(rows: list[dict], group_keys: tuple[str, ...], x_key: str,
               y_key: str) -> dict[tuple, list[tuple[float, float, float]]]:
    """group tuple -> sorted list of (x, mean(y), stderr(y)) over replications."""
    buckets: dict[tuple, dict[float, list[float]]] = {}
    for row in rows:
        group = tuple(row[k] for k in group_keys)
        buckets.setdefault(group, {}).setdefault(row[x_key], []).append(row[y_key])
    out = {}
    for group, per_x in buckets.items():
        pts = []
        for x in sorted(per_x):
            mean, err = _mean_stderr(per_x[x])
            pts.append((x, mean, err))
        out[group] = pts
    return out


def _render_vs_band(rows: list[dict], y_key: str, ax) -> list[SeriesInfo]:
    rows = [r for r in rows if r["scheme"] == "fdma"]
    if not rows:
        raise EmptySelectionError("no reserved-band (fdma) rows to plot")
    series = _aggregate(rows, ("distance_m", "model"), "b2_fraction", y_key)
    infos = []
    for (distance, model) in sorted(series):
        pts = series[(distance, model)]
        xs, ys, es = zip(*pts)
        label = f"d={distance:g} m, {model.replace('_', '-')}"
        style = "-o" if model == "frame_based" else "--s"
        ax.errorbar(xs, ys, yerr=es, fmt=style, capsize=2, markersize=4,
                    label=label)
        infos.append(SeriesInfo(label=label, points=len(pts)))
    ax.set_xlabel("intermittent user's bandwidth share")
    ax.set_ylabel(_AXIS_LABELS[y_key])
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return infos


def _render_pareto(rows: list[dict], y_key: str, ax) -> list[SeriesInfo]:
    rows = [r for r in rows if r["model"] == "frame_based"]
    if not rows:
        raise EmptySelectionError("no frame-based rows to plot")
    infos = []
    fdma = [r for r in rows if r["scheme"] == "fdma"]
    curves = _aggregate(fdma, ("distance_m",), "b2_fraction", y_key)
    costs = _aggregate(fdma, ("distance_m",), "b2_fraction", "tacae")
    for (distance,) in sorted(curves):
        ys = curves[(distance,)]
        xs = costs[(distance,)]
        # parametrized by the bandwidth split: pair up per split point
        cx = [c for _, c, _ in xs]
        cy = [y for _, y, _ in ys]
        ey = [e for _, _, e in ys]
        label = f"d={distance:g} m, fdma"
        ax.errorbar(cx, cy, yerr=ey, fmt="-o", capsize=2, markersize=4,
                    label=label)
        infos.append(SeriesInfo(label=label, points=len(cx)))
    noma = [r for r in rows if r["scheme"] == "noma"]
    markers = _aggregate(noma, ("distance_m",), "b2_fraction", y_key)
    nom_costs = _aggregate(noma, ("distance_m",), "b2_fraction", "tacae")
    for (distance,) in sorted(markers):
        (_, y, ye), = markers[(distance,)]
        (_, c, _), = nom_costs[(distance,)]
        label = f"d={distance:g} m, noma"
        ax.errorbar([c], [y], yerr=[ye], fmt="*", markersize=12, capsize=2,
                    label=label)
        infos.append(SeriesInfo(label=label, points=1))
    ax.set_xlabel(_AXIS_LABELS["tacae"])
    ax.set_ylabel(_AXIS_LABELS[y_key])
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return infos


def render(spec: FigureSpec) -> RenderInfo:
    """Render one figure; returns the series layout for verification."""
    rows = read_rows(spec.csv_path, REQUIRED_COLUMNS[spec.kind])
    if not rows:
        raise EmptySelectionError("CSV holds no data rows")
    fig, ax = plt.subplots(figsize=(6.4, 4.2), constrained_layout=True)
    try:
        if spec.kind == "tare_vs_b2":
            infos = _render_vs_band(rows, "tare", ax)
        elif spec.kind == "tacae_vs_b2":
            infos = _render_vs_band(rows, "tacae", ax)
        elif spec.kind == "pareto_throughput":
            infos = _render_pareto(rows, "throughput_bps", ax)
        else:
            infos = _render_pareto(rows, "energy_efficiency_bpj", ax)
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return RenderInfo(kind=spec.kind, out_path=spec.out_path,
                      series=tuple(infos))
