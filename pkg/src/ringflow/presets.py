"""Experiment presets reproducing the reference ring-road runs.

Each preset expands into one or more ExperimentConfig instances, runs the
pipeline on the canonical initial density 3.5 + 2*sin(pi*x), and writes
result files into one subdirectory per run.

Available presets:

    baseline      uncontrolled propagation only
    fig2-l2-n1    L2 cost, single horizon (N=1)
    fig5-hm1-n2   mix-norm cost, receding horizon with N=2
    fig9-capped   mix-norm cost, N=2, controlled flux capped at 2.5
    fig4-sweep    baseline plus L2 cost runs for N in {1, 2, 4, 8}

The figure presets pin the initial controlled density to the literal
previous-iterate split (initial_split_mode="paper-literal"): that is the
formulation whose alternation reproduces the reference behavior, whereas
the free split lets the subproblem avoid recruiting vehicles at all.
"""

from __future__ import annotations

import os
import time
from typing import Callable, Optional

from .config import ConfigError, ExperimentConfig, with_overrides
from .domain import build_grid, make_scenario, paper_initial_density, validate_scenario
from .optimizer import (ProgressSink, RunTrajectories, receding_horizon,
                        uncontrolled_run)
from .outputs import RunSummary, build_summary, write_outputs

PRESET_NAMES = ("baseline", "fig2-l2-n1", "fig5-hm1-n2", "fig9-capped", "fig4-sweep")

_FIG_COMMON = dict(initial_split_mode="paper-literal")


def _preset_configs(name: str) -> list[tuple[str, bool, ExperimentConfig]]:
    """Expand a preset into (label, uncontrolled, config) runs."""
    base = ExperimentConfig()
    if name == "baseline":
        return [("baseline", True, base)]
    if name == "fig2-l2-n1":
        return [("l2-n1", False,
                 with_overrides(base, cost_kind="l2", horizon_splits=1, **_FIG_COMMON))]
    if name == "fig5-hm1-n2":
        return [("hm1-n2", False,
                 with_overrides(base, cost_kind="hm1", horizon_splits=2, **_FIG_COMMON))]
    if name == "fig9-capped":
        return [("hm1-n2-capped", False,
                 with_overrides(base, cost_kind="hm1", horizon_splits=2,
                                flow_cap=2.5, **_FIG_COMMON))]
    if name == "fig4-sweep":
        runs: list[tuple[str, bool, ExperimentConfig]] = [("baseline", True, base)]
        for n in (1, 2, 4, 8):
            runs.append((f"l2-n{n}", False,
                         with_overrides(base, cost_kind="l2", horizon_splits=n,
                                        **_FIG_COMMON)))
        return runs
    raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


def run_experiment(cfg: ExperimentConfig, label: str, uncontrolled: bool = False,
                   progress: Optional[ProgressSink] = None
                   ) -> tuple[RunSummary, RunTrajectories]:
    """Run one experiment (controlled pipeline or uncontrolled baseline)."""
    params = cfg.to_params()
    grid = build_grid(params, nx=cfg.nx, cfl=cfg.cfl)
    scenario = make_scenario(grid, paper_initial_density(grid))
    violations = validate_scenario(params, scenario)
    if violations:
        raise ConfigError("invalid scenario: " + "; ".join(violations))

    start = time.perf_counter()
    if uncontrolled:
        run = uncontrolled_run(scenario, params, grid)
        iterations: list[int] = []
        statuses: list[str] = []
        av_mass = 0.0
    else:
        result = receding_horizon(scenario, params, grid, cfg.to_outer_config(),
                                  budget_renewal=cfg.budget_renewal,
                                  progress=progress)
        run = result.trajectories
        iterations = result.window_iterations
        statuses = result.window_statuses
        av_mass = max(result.window_av_mass)
    wall = time.perf_counter() - start

    summary = build_summary(label, cfg, run, grid, wall,
                            outer_iterations=iterations,
                            window_statuses=statuses, av_mass_used=av_mass)
    return summary, run


def run_preset(name: str, out_dir: Optional[str] = None,
               emit_svg: Optional[bool] = None,
               progress: Optional[ProgressSink] = None,
               config_overrides: Optional[dict] = None,
               writer: Callable = write_outputs) -> list[RunSummary]:
    """Execute a preset and write each run's outputs to out_dir/<label>/.

    config_overrides (e.g. a smaller nx) apply to every run of the preset;
    failures in one run do not discard the outputs already written.
    """
    runs = _preset_configs(name)
    root = out_dir if out_dir is not None else os.path.join("out", name)
    summaries: list[RunSummary] = []
    errors: list[str] = []
    for label, uncontrolled, cfg in runs:
        cfg = with_overrides(cfg, preset=name)
        if config_overrides:
            cfg = with_overrides(cfg, **config_overrides)
        if emit_svg is not None:
            cfg = with_overrides(cfg, emit_svg=emit_svg)
        try:
            summary, run = run_experiment(cfg, label, uncontrolled=uncontrolled,
                                          progress=progress)
        except Exception as exc:  # preserve partial preset results
            errors.append(f"{label}: {exc}")
            continue
        params = cfg.to_params()
        grid = build_grid(params, nx=cfg.nx, cfl=cfg.cfl)
        writer(summary, run, grid, os.path.join(root, label), emit_svg=cfg.emit_svg)
        summaries.append(summary)
    if errors:
        raise RuntimeError(
            f"preset {name!r} finished with failures ({len(summaries)} runs "
            f"written): " + "; ".join(errors))
    return summaries


__all__ = ["PRESET_NAMES", "run_experiment", "run_preset"]
