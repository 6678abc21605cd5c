"""Figure rendering from experiment CSV files.

Four layouts are supported:

* ``fig1``      one aggregate CSV: an average-fitness panel on top and one
                panel per tracked step frequency below it;
* ``fig2``      two aggregate CSVs (with clamping, without): average
                fitness of both plus a clamped-locus-count panel;
* ``fig3``      like ``fig2`` but plotting best fitness;
* ``refractal`` a dense value-matrix CSV rendered as a greyscale image,
                normalized linearly to the full shade range per image.

Error bars are drawn every ``cadence`` generations: +-5 standard errors on
fitness series, +-3 on frequency and locus-count series.  Rendering is
read-only over its inputs and deterministic: the same CSVs and spec yield
the same pixel dimensions and series counts.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "RenderResult", "render"]

FITNESS_SE_MULT = 5
FREQ_SE_MULT = 3

_LAYOUTS = ("fig1", "fig2", "fig3", "refractal")


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]   # CSV paths; fig2/fig3 take (clamped, plain)
    layout: str               # fig1 | fig2 | fig3 | refractal
    output: str               # image path (PNG)
    cadence: int = 1          # generations between error bars

    def __post_init__(self):
        if self.layout not in _LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}; expected one of {_LAYOUTS}")
        if self.cadence < 1:
            raise ValueError("cadence must be >= 1")
        object.__setattr__(self, "inputs", tuple(self.inputs))
        expected = 2 if self.layout in ("fig2", "fig3") else 1
        if len(self.inputs) != expected:
            raise ValueError(f"layout {self.layout} takes {expected} input file(s)")


@dataclass(frozen=True)
class RenderResult:
    """What was drawn, for scripting and testing."""

    output: str
    panels: int
    series_per_panel: tuple[int, ...]
    error_bars_per_series: int
    pixel_size: tuple[int, int] = field(default=(0, 0))


def _read_columns(path: str) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty CSV")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return {
        name: np.array([float(r[name]) for r in rows])
        for name in reader.fieldnames
    }


def _require(cols: dict[str, np.ndarray], needed: list[str], path: str) -> None:
    missing = [c for c in needed if c not in cols]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")


def _step_columns(cols: dict[str, np.ndarray]) -> list[str]:
    names = [c for c in cols if re.fullmatch(r"step\d+_freq_mean", c)]
    return sorted(names, key=lambda c: int(re.findall(r"\d+", c)[0]))


def _bar_count(n: int, cadence: int) -> int:
    return math.ceil(n / cadence)


def _errorbar(ax, x, mean, se, mult, cadence, label=None):
    ax.errorbar(x, mean, yerr=mult * se, errorevery=cadence, capsize=2, label=label)


def _render_fig1(spec: FigureSpec) -> RenderResult:
    path = spec.inputs[0]
    cols = _read_columns(path)
    _require(cols, ["generation", "mean_avg_fitness", "se_avg_fitness"], path)
    steps = _step_columns(cols)
    x = cols["generation"]

    fig, axes = plt.subplots(
        1 + len(steps), 1, figsize=(6, 2.2 * (1 + len(steps))), sharex=True
    )
    axes = np.atleast_1d(axes)
    _errorbar(axes[0], x, cols["mean_avg_fitness"], cols["se_avg_fitness"],
              FITNESS_SE_MULT, spec.cadence)
    axes[0].set_ylabel("avg fitness")
    for ax, name in zip(axes[1:], steps):
        se_name = name.replace("_mean", "_se")
        _require(cols, [se_name], path)
        _errorbar(ax, x, cols[name], cols[se_name], FREQ_SE_MULT, spec.cadence)
        ax.set_ylabel(name.replace("_freq_mean", ""))
        ax.set_ylim(-0.05, 1.05)
    axes[-1].set_xlabel("generation")
    return _finish(fig, spec, panels=1 + len(steps),
                   series_per_panel=(1,) * (1 + len(steps)),
                   bars=_bar_count(len(x), spec.cadence))


def _render_comparison(spec: FigureSpec, value_col: str, se_col: str) -> RenderResult:
    clamped_path, plain_path = spec.inputs
    clamped = _read_columns(clamped_path)
    plain = _read_columns(plain_path)
    for cols, path in ((clamped, clamped_path), (plain, plain_path)):
        _require(cols, ["generation", value_col, se_col], path)
    _require(clamped, ["clamped_loci_mean"], clamped_path)

    fig, axes = plt.subplots(2, 1, figsize=(6, 5.5), sharex=True)
    x = clamped["generation"]
    _errorbar(axes[0], x, clamped[value_col], clamped[se_col],
              FITNESS_SE_MULT, spec.cadence, label="clamping")
    _errorbar(axes[0], plain["generation"], plain[value_col], plain[se_col],
              FITNESS_SE_MULT, spec.cadence, label="no clamping")
    axes[0].set_ylabel(value_col.replace("mean_", "").replace("_", " "))
    axes[0].legend()
    _errorbar(axes[1], x, clamped["clamped_loci_mean"],
              np.zeros_like(x), FREQ_SE_MULT, spec.cadence)
    axes[1].set_ylabel("clamped loci")
    axes[1].set_xlabel("generation")
    return _finish(fig, spec, panels=2, series_per_panel=(2, 1),
                   bars=_bar_count(len(x), spec.cadence))


def _render_refractal(spec: FigureSpec) -> RenderResult:
    path = spec.inputs[0]
    with open(path) as fh:
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    if not rows:
        raise ValueError(f"{path}: empty matrix")
    grid = np.array(rows)
    # linear min/max normalization: the image always uses the full shade
    # range; a constant matrix renders as a uniform image
    plt.imsave(spec.output, grid, cmap="gray", vmin=grid.min(), vmax=grid.max())
    return RenderResult(
        output=spec.output, panels=1, series_per_panel=(1,),
        error_bars_per_series=0, pixel_size=grid.shape[::-1],
    )


def _finish(fig, spec: FigureSpec, panels: int, series_per_panel, bars: int) -> RenderResult:
    fig.tight_layout()
    fig.savefig(spec.output, dpi=100)
    w, h = fig.canvas.get_width_height()
    plt.close(fig)
    return RenderResult(
        output=spec.output, panels=panels,
        series_per_panel=tuple(series_per_panel),
        error_bars_per_series=bars, pixel_size=(w, h),
    )


def render(spec: FigureSpec) -> RenderResult:
    if spec.layout == "fig1":
        return _render_fig1(spec)
    if spec.layout == "fig2":
        return _render_comparison(spec, "mean_avg_fitness", "se_avg_fitness")
    if spec.layout == "fig3":
        return _render_comparison(spec, "mean_best_fitness", "se_best_fitness")
    return _render_refractal(spec)
