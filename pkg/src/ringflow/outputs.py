"""Result serialization: trajectory CSVs, metric series, summary JSON, SVG charts.

Files written per run directory:

    densities.csv   one row per (step, cell): step, time, cell, x,
                    rho1, rho2, m2, rho_total.  The flow column of the
                    final step is padded with 0 (fluxes live on intervals).
    metrics.csv     one row per step: step, time, normalized_l2,
                    hm1_deviation.
    summary.json    configuration echo plus terminal metrics and
                    diagnostics (includes wall time, so it is not part of
                    the byte-reproducibility guarantee; the CSVs are).
    *.svg           optional line charts: total density snapshots at
                    t in {0, T/4, T/2, T} and the two metric histories.

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .costs import hm1_deviation_slice, normalized_l2_metric
from .domain import Grid
from .optimizer import RunTrajectories


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


@dataclass
class RunSummary:
    """Per-run metric series and diagnostics."""

    label: str
    config: dict
    normalized_l2: list[float]
    hm1_deviation: list[float]
    terminal_normalized_l2: float
    terminal_hm1_deviation: float
    max_m2: float
    av_mass_used: float
    wall_time: float
    outer_iterations: list[int] = field(default_factory=list)
    window_statuses: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "config": self.config,
            "terminal_normalized_l2": self.terminal_normalized_l2,
            "terminal_hm1_deviation": self.terminal_hm1_deviation,
            "max_m2": self.max_m2,
            "av_mass_used": self.av_mass_used,
            "wall_time": self.wall_time,
            "outer_iterations": self.outer_iterations,
            "window_statuses": self.window_statuses,
            "normalized_l2": self.normalized_l2,
            "hm1_deviation": self.hm1_deviation,
        }


def build_summary(label: str, cfg: ExperimentConfig, run: RunTrajectories,
                  grid: Grid, wall_time: float,
                  outer_iterations: list[int] | None = None,
                  window_statuses: list[str] | None = None,
                  av_mass_used: float = 0.0) -> RunSummary:
    """Compute the metric series of a finished run."""
    nt = grid.nt
    series_l2 = [normalized_l2_metric(run.rho1[:, n], run.rho2[:, n], grid)
                 for n in range(nt + 1)]
    series_hm1 = [hm1_deviation_slice(run.total[:, n], grid)
                  for n in range(nt + 1)]
    return RunSummary(
        label=label, config=cfg.as_dict(),
        normalized_l2=series_l2, hm1_deviation=series_hm1,
        terminal_normalized_l2=series_l2[-1],
        terminal_hm1_deviation=series_hm1[-1],
        max_m2=float(run.m2.max()) if run.m2.size else 0.0,
        av_mass_used=av_mass_used, wall_time=wall_time,
        outer_iterations=list(outer_iterations or []),
        window_statuses=list(window_statuses or []))


def write_outputs(summary: RunSummary, run: RunTrajectories, grid: Grid,
                  out_dir: str, emit_svg: bool = False) -> list[str]:
    """Write all result files for one run; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    written.append(_write_densities_csv(run, grid, os.path.join(out_dir, "densities.csv")))
    written.append(_write_metrics_csv(summary, grid, os.path.join(out_dir, "metrics.csv")))
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "w", encoding="ascii") as fh:
        json.dump(summary.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(summary_path)
    if emit_svg:
        written.extend(write_svg_charts(summary, run, grid, out_dir))
    return written


def _write_densities_csv(run: RunTrajectories, grid: Grid, path: str) -> str:
    nx, nt = grid.nx, grid.nt
    x = grid.cell_centers()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("step,time,cell,x,rho1,rho2,m2,rho_total\n")
        for n in range(nt + 1):
            t = n * grid.dt
            for j in range(nx):
                m2 = run.m2[j, n] if n < nt else 0.0
                fh.write(f"{n},{_fmt(t)},{j},{_fmt(x[j])},{_fmt(run.rho1[j, n])},"
                         f"{_fmt(run.rho2[j, n])},{_fmt(m2)},"
                         f"{_fmt(run.rho1[j, n] + run.rho2[j, n])}\n")
    return path


def _write_metrics_csv(summary: RunSummary, grid: Grid, path: str) -> str:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("step,time,normalized_l2,hm1_deviation\n")
        for n, (ml2, mh) in enumerate(zip(summary.normalized_l2,
                                          summary.hm1_deviation)):
            fh.write(f"{n},{_fmt(n * grid.dt)},{_fmt(ml2)},{_fmt(mh)}\n")
    return path


def read_densities_csv(path: str) -> RunTrajectories:
    """Reconstruct run trajectories from densities.csv (exact round-trip)."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().rstrip("\n").split(",")
        if header != ["step", "time", "cell", "x", "rho1", "rho2", "m2", "rho_total"]:
            raise ValueError(f"unexpected densities.csv header in {path}")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    steps = np.array([int(r[0]) for r in rows])
    cells = np.array([int(r[2]) for r in rows])
    nt, nx = steps.max(), cells.max() + 1
    rho1 = np.zeros((nx, nt + 1))
    rho2 = np.zeros((nx, nt + 1))
    m2 = np.zeros((nx, nt))
    for r in rows:
        n, j = int(r[0]), int(r[2])
        rho1[j, n] = float(r[4])
        rho2[j, n] = float(r[5])
        if n < nt:
            m2[j, n] = float(r[6])
    return RunTrajectories(rho1=rho1, rho2=rho2, m2=m2)


# -- minimal SVG line charts -------------------------------------------------

_SVG_W, _SVG_H = 640, 420
_MARGIN = 56
_STROKES = ("#888888", "#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def svg_line_chart(series: list[tuple[str, np.ndarray, np.ndarray]],
                   title: str, x_label: str, y_label: str, path: str) -> str:
    """Write a dependency-free SVG line chart (one polyline per series)."""
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    inner_w = _SVG_W - 2 * _MARGIN
    inner_h = _SVG_H - 2 * _MARGIN

    def sx(v):
        return _MARGIN + (v - x_lo) / (x_hi - x_lo) * inner_w

    def sy(v):
        return _SVG_H - _MARGIN - (v - y_lo) / (y_hi - y_lo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}"'
        f' viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W / 2:.1f}" y="24" text-anchor="middle"'
        f' font-size="15" font-family="sans-serif">{title}</text>',
        # axes
        f'<line x1="{_MARGIN}" y1="{_SVG_H - _MARGIN}" x2="{_SVG_W - _MARGIN}"'
        f' y2="{_SVG_H - _MARGIN}" stroke="black" class="axis"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}"'
        f' y2="{_SVG_H - _MARGIN}" stroke="black" class="axis"/>',
        f'<text x="{_SVG_W / 2:.1f}" y="{_SVG_H - 12}" text-anchor="middle"'
        f' font-size="12" font-family="sans-serif">{x_label}</text>',
        f'<text x="16" y="{_SVG_H / 2:.1f}" text-anchor="middle" font-size="12"'
        f' font-family="sans-serif" transform="rotate(-90 16 {_SVG_H / 2:.1f})">'
        f'{y_label}</text>',
        f'<text x="{_MARGIN}" y="{_SVG_H - _MARGIN + 16}" font-size="10"'
        f' font-family="sans-serif">{x_lo:.4g}</text>',
        f'<text x="{_SVG_W - _MARGIN}" y="{_SVG_H - _MARGIN + 16}" text-anchor="end"'
        f' font-size="10" font-family="sans-serif">{x_hi:.4g}</text>',
        f'<text x="{_MARGIN - 4}" y="{_SVG_H - _MARGIN}" text-anchor="end"'
        f' font-size="10" font-family="sans-serif">{y_lo:.4g}</text>',
        f'<text x="{_MARGIN - 4}" y="{_MARGIN + 4}" text-anchor="end"'
        f' font-size="10" font-family="sans-serif">{y_hi:.4g}</text>',
    ]
    for idx, (name, sx_vals, sy_vals) in enumerate(series):
        color = _STROKES[idx % len(_STROKES)]
        pts = " ".join(f"{sx(px):.2f},{sy(py):.2f}"
                       for px, py in zip(sx_vals, sy_vals))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}"'
                     f' stroke-width="1.5"><title>{name}</title></polyline>')
        parts.append(f'<text x="{_SVG_W - _MARGIN + 4}" y="{_MARGIN + 14 * idx + 10}"'
                     f' font-size="10" font-family="sans-serif" fill="{color}">'
                     f'{name}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


def write_svg_charts(summary: RunSummary, run: RunTrajectories, grid: Grid,
                     out_dir: str) -> list[str]:
    """Density snapshots at t in {0, T/4, T/2, T} plus metric history charts."""
    nt = grid.nt
    x = grid.cell_centers()
    snap_steps = [0, nt // 4, nt // 2, nt]
    snaps = [(f"t={n * grid.dt:.4g}", x, run.total[:, n]) for n in snap_steps]
    times = np.arange(nt + 1) * grid.dt
    written = [
        svg_line_chart(snaps, "Total density snapshots", "x [mi]", "density",
                       os.path.join(out_dir, "density_snapshots.svg")),
        svg_line_chart([("normalized L2", times, np.asarray(summary.normalized_l2))],
                       "Normalized L2 metric", "t [min]", "metric",
                       os.path.join(out_dir, "metric_normalized_l2.svg")),
        svg_line_chart([("mix-norm deviation", times, np.asarray(summary.hm1_deviation))],
                       "Mix-norm deviation", "t [min]", "deviation energy",
                       os.path.join(out_dir, "metric_hm1.svg")),
    ]
    return written


__all__ = ["RunSummary", "build_summary", "write_outputs",
           "read_densities_csv", "svg_line_chart", "write_svg_charts"]
