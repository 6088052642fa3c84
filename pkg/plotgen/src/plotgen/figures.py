"""Figure renderers for the experiment CSVs.

Three kinds are supported: Pareto-front scatter comparisons, recovery
boxplots grouped by intervention count, and violin panels of schedule
measures. Every renderer returns a small info record with the statistics
it drew (medians, extrema, axis limits) so tests can cross-check the
figure against the raw data. Rendering is deterministic: fixed style, no
timestamps in image metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# Fixed salt keeps SVG element ids stable so repeat renders are byte-identical.
matplotlib.rcParams["svg.hashsalt"] = "plotgen"

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

MEASURE_COLUMNS = ["swing", "separability", "focus", "agility", "periodicity"]

FRONT_REQUIRED = ("method", "utility", "cost")
SCALING_REQUIRED = ("mode", "n", "trial", "recovered_fraction")

MARKERS = ["*", "x", "+", "o", "s", "D", "v", "^", "<", ">"]


class ColumnError(ValueError):
    """An input CSV lacks a required column."""


@dataclass
class FigureInfo:
    kind: str
    out_path: str
    methods: list[str] = field(default_factory=list)
    markers: dict[str, str] = field(default_factory=dict)
    xlim: tuple[float, float] = (0.0, 0.0)
    ylim: tuple[float, float] = (0.0, 0.0)
    data_extrema: dict[str, float] = field(default_factory=dict)
    medians: dict = field(default_factory=dict)
    panels: int = 0


def read_csv(path: str | Path, required: tuple[str, ...]) -> pd.DataFrame:
    frame = pd.read_csv(path, comment="#")
    for column in required:
        if column not in frame.columns:
            raise ColumnError(f"{path}: missing required column {column!r}")
    return frame


def _save(fig, out_path: str | Path) -> None:
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # Strip the date from SVG metadata so repeat renders are byte-identical.
    metadata = {"Date": None} if path.suffix.lower() == ".svg" else None
    fig.savefig(path, dpi=150, metadata=metadata)
    plt.close(fig)


def plot_pareto(
    fronts_csv: str | Path,
    out_path: str | Path,
    optimal_csv: str | Path | None = None,
    title: str = "Pareto fronts by method",
) -> FigureInfo:
    """Scatter each method's front with its own marker; optionally overlay
    the oracle front as a line."""
    frame = read_csv(fronts_csv, FRONT_REQUIRED)
    fig, ax = plt.subplots(figsize=(7, 5))
    methods = sorted(frame["method"].unique())
    markers: dict[str, str] = {}
    for index, method in enumerate(methods):
        rows = frame[frame["method"] == method].sort_values(["cost", "utility"])
        marker = MARKERS[index % len(MARKERS)]
        markers[method] = marker
        ax.scatter(rows["cost"], rows["utility"], marker=marker, s=70, label=method)
    if optimal_csv is not None:
        oracle = read_csv(optimal_csv, FRONT_REQUIRED).sort_values("cost")
        ax.plot(
            oracle["cost"],
            oracle["utility"],
            color="0.4",
            linestyle="--",
            linewidth=1,
            zorder=0,
            label="optimal",
        )
    ax.set_xlabel("cost")
    ax.set_ylabel("utility")
    ax.set_title(title)
    ax.legend()
    ax.margins(0.08)
    info = FigureInfo(
        kind="pareto",
        out_path=str(out_path),
        methods=methods,
        markers=markers,
        xlim=tuple(ax.get_xlim()),
        ylim=tuple(ax.get_ylim()),
        data_extrema={
            "cost_min": float(frame["cost"].min()),
            "cost_max": float(frame["cost"].max()),
            "utility_min": float(frame["utility"].min()),
            "utility_max": float(frame["utility"].max()),
        },
    )
    _save(fig, out_path)
    return info


def plot_scaling(
    scaling_csv: str | Path,
    out_path: str | Path,
    title: str = "Front recovery by intervention count",
) -> FigureInfo:
    """One panel per mode: boxplots of recovered fraction grouped by n.

    Whiskers extend to 1.5x the interquartile range; the middle bar is the
    median.
    """
    frame = read_csv(scaling_csv, SCALING_REQUIRED)
    modes = sorted(frame["mode"].unique())
    fig, axes = plt.subplots(
        1, len(modes), figsize=(4.2 * len(modes), 4.2), sharey=True, squeeze=False
    )
    medians: dict[str, dict[int, float]] = {}
    for ax, mode in zip(axes[0], modes):
        rows = frame[frame["mode"] == mode]
        ns = sorted(rows["n"].unique())
        data = [rows[rows["n"] == n]["recovered_fraction"].to_numpy() for n in ns]
        ax.boxplot(data, tick_labels=[str(n) for n in ns], whis=1.5)
        ax.set_title(mode)
        ax.set_xlabel("available interventions")
        medians[mode] = {int(n): float(np.median(values)) for n, values in zip(ns, data)}
    axes[0][0].set_ylabel("recovered fraction of optimal front")
    fig.suptitle(title)
    info = FigureInfo(
        kind="scaling",
        out_path=str(out_path),
        methods=modes,
        medians=medians,
        panels=len(modes),
    )
    _save(fig, out_path)
    return info


def plot_violins(
    measures_csv: str | Path,
    out_path: str | Path,
    group_column: str = "id",
    title: str = "Schedule measures",
) -> FigureInfo:
    """Five violins per group, one panel per measure.

    Violins are truncated at the data extrema (no tail extrapolation),
    scaled to equal width, and carry an embedded box showing the median and
    interquartile range.
    """
    frame = read_csv(measures_csv, ("id", *MEASURE_COLUMNS))
    if group_column not in frame.columns:
        raise ColumnError(f"{measures_csv}: missing group column {group_column!r}")
    groups = sorted(frame[group_column].astype(str).unique())
    fig, axes = plt.subplots(1, len(MEASURE_COLUMNS), figsize=(3.0 * len(MEASURE_COLUMNS), 4.0))
    medians: dict[str, dict[str, float]] = {measure: {} for measure in MEASURE_COLUMNS}
    for ax, measure in zip(axes, MEASURE_COLUMNS):
        sns.violinplot(
            data=frame.assign(**{group_column: frame[group_column].astype(str)}),
            x=group_column,
            y=measure,
            order=groups,
            cut=0,
            density_norm="width",
            linewidth=1,
            inner="box",
            ax=ax,
        )
        ax.set_title(measure)
        for group in groups:
            values = frame[frame[group_column].astype(str) == group][measure]
            medians[measure][group] = float(values.median())
    fig.suptitle(title)
    fig.tight_layout()
    info = FigureInfo(
        kind="violins",
        out_path=str(out_path),
        methods=groups,
        medians=medians,
        panels=len(MEASURE_COLUMNS),
    )
    _save(fig, out_path)
    return info
