"""Outer alternation and receding-horizon drivers.

One horizon is solved by alternating two steps: (1) freeze the
uncontrolled density rho1 and solve the convex subproblem for the
controlled plan, (2) re-propagate rho1 with the Godunov scheme against
the new controlled trajectory, starting from rho0 - rho2_0.  The
alternation stops after a prescribed number of iterations or when the
rho1 trajectory stops changing; convergence is not guaranteed (limit
cycles are possible), so the last iterate is returned.

The receding-horizon driver solves a full-length horizon, commits only
the first 1/N of it, re-forms the scenario from the committed final
state, and repeats until [0, T] is covered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import socp
from .costs import cost_breakdown
from .domain import ControlPlan, Grid, Params, ScenarioState, make_scenario
from .godunov import LwrFlux, propagate_hv, proportional_split_propagate

BUDGET_RENEWAL_MODES = ("renew", "no-renew")


@dataclass(frozen=True)
class OuterLoopConfig:
    """Settings of the outer alternation and the inner conic solves."""

    max_outer_iters: int = 10
    rel_change_stop: float = 1e-3
    cost_kind: str = "hm1"
    tol_primal: float = 1e-6
    tol_dual: float = 1e-6
    solver_max_iters: int = 200

    def __post_init__(self) -> None:
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")
        if self.cost_kind not in ("l2", "hm1"):
            raise ValueError(f"cost_kind must be 'l2' or 'hm1', got {self.cost_kind!r}")


@dataclass(frozen=True)
class ProgressRecord:
    """One outer-iteration progress sample handed to a caller-supplied sink."""

    window: int
    iteration: int
    objective: float
    primal_residual: float
    dual_residual: float
    rel_change: float


ProgressSink = Callable[[ProgressRecord], None]


@dataclass
class HorizonSolution:
    """Result of the alternation over one full horizon."""

    plan: ControlPlan
    rho1_traj: np.ndarray
    cost_history: list[float]
    converged: bool
    iterations: int
    status: str
    reports: list[socp.SolveReport] = field(repr=False, default_factory=list)


def initialize(scenario: ScenarioState, params: Params, grid: Grid,
               rho2_0_init: Optional[np.ndarray] = None) -> tuple[np.ndarray, np.ndarray]:
    """Budget-saturating proportional split propagated without control.

    The controlled share starts as beta * rho_hat0 (or an explicit split)
    and both populations move at the common LWR speed, so the total
    follows the single-population model and the split is advected
    passively.  Returns (rho1_traj, rho2_traj), each (nx, nt+1).
    """
    if rho2_0_init is None:
        rho2_0_init = params.incentive_fraction * scenario.rho_hat0
    flux = LwrFlux(u0=params.free_flow_speed, rho_star=params.max_density)
    return proportional_split_propagate(scenario.rho0, rho2_0_init, grid, flux)


def solve_horizon(scenario: ScenarioState, params: Params, grid: Grid,
                  cfg: OuterLoopConfig,
                  pinned_rho2_0: Optional[np.ndarray] = None,
                  progress: Optional[ProgressSink] = None,
                  window: int = 0) -> HorizonSolution:
    """Run the two-step alternation over one horizon and return the last iterate.

    If a subproblem turns out infeasible or fails at iteration i > 1, the
    iterate i-1 is returned with status "infeasible-stop"; a first-iteration
    failure propagates as an exception.
    """
    flux = LwrFlux(u0=params.free_flow_speed, rho_star=params.max_density)
    rho1_traj, _ = initialize(scenario, params, grid, rho2_0_init=pinned_rho2_0)

    plan: Optional[ControlPlan] = None
    reports: list[socp.SolveReport] = []
    cost_history: list[float] = []
    converged = False
    status = "max-outer-iters"
    iterations = 0

    for i in range(1, cfg.max_outer_iters + 1):
        try:
            problem = socp.assemble(rho1_traj, scenario, params, grid,
                                    cfg.cost_kind, pinned_rho2_0=pinned_rho2_0)
            new_plan, report = socp.solve(problem, tol_primal=cfg.tol_primal,
                                          tol_dual=cfg.tol_dual,
                                          max_iters=cfg.solver_max_iters)
            if report.status == "infeasible":
                raise socp.InfeasibleProblemError(
                    f"solver reported infeasible ({report.engine_status})")
        except socp.InfeasibleProblemError:
            if plan is None:
                raise
            status = "infeasible-stop"
            break

        plan = new_plan
        reports.append(report)
        rho1_new = propagate_hv(scenario.rho0 - plan.rho2_0, plan.rho2, grid, flux)
        breakdown = cost_breakdown(rho1_new, plan.rho2, plan.m2, grid,
                                   params.state_weight, cfg.cost_kind,
                                   scenario.rho_bar)
        cost_history.append(breakdown.weighted_total)

        denom = float(np.linalg.norm(rho1_traj))
        rel_change = float(np.linalg.norm(rho1_new - rho1_traj)) / max(denom, 1e-300)
        rho1_traj = rho1_new
        iterations = i
        if progress is not None:
            progress(ProgressRecord(window=window, iteration=i,
                                    objective=report.objective,
                                    primal_residual=report.primal_residual,
                                    dual_residual=report.dual_residual,
                                    rel_change=rel_change))
        if rel_change < cfg.rel_change_stop:
            converged = True
            status = "converged"
            break

    return HorizonSolution(plan=plan, rho1_traj=rho1_traj,
                           cost_history=cost_history, converged=converged,
                           iterations=iterations, status=status, reports=reports)


@dataclass
class RunTrajectories:
    """Stitched space-time fields of one complete run over [0, T]."""

    rho1: np.ndarray   # (nx, nt+1)
    rho2: np.ndarray   # (nx, nt+1)
    m2: np.ndarray     # (nx, nt)

    @property
    def total(self) -> np.ndarray:
        return self.rho1 + self.rho2


@dataclass
class RecedingHorizonRun:
    """Stitched receding-horizon result with per-window diagnostics.

    boundary_handoffs pairs each window boundary's committed final total
    with the total the next window started from (equal unless the commit
    left the physical bounds and had to be projected back).
    """

    trajectories: RunTrajectories
    window_iterations: list[int]
    window_statuses: list[str]
    window_av_mass: list[float]
    cost_histories: list[list[float]]
    boundary_handoffs: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    window_reports: list[list[socp.SolveReport]] = field(repr=False, default_factory=list)


def receding_horizon(scenario: ScenarioState, params: Params, grid: Grid,
                     cfg: OuterLoopConfig, budget_renewal: str = "renew",
                     progress: Optional[ProgressSink] = None) -> RecedingHorizonRun:
    """Split [0, T] into N windows, each controlled by a full-horizon solve.

    Every window solves over a full horizon of length T starting from the
    current state, commits the first T/N of control and states, and hands
    the final committed slice to the next window as its initial condition
    (totals are copied exactly, so the stitched total density is
    continuous).  Budget policy at window boundaries:

    * "renew": the controlled subpopulation may be re-selected, subject to
      the same incentive budget against the current (re-formed) scenario;
    * "no-renew": the controlled density present at the boundary is carried
      forward as a pinned initial split and no new mass is recruited.
    """
    if budget_renewal not in BUDGET_RENEWAL_MODES:
        raise ValueError(f"budget_renewal must be one of {BUDGET_RENEWAL_MODES}")
    n_windows = params.horizon_splits
    nx, nt = grid.nx, grid.nt
    if nt % n_windows != 0:
        raise ValueError("grid step count is not divisible by horizon_splits")
    ntw = nt // n_windows

    rho1 = np.empty((nx, nt + 1))
    rho2 = np.empty((nx, nt + 1))
    m2 = np.empty((nx, nt))
    window_iterations: list[int] = []
    window_statuses: list[str] = []
    window_av_mass: list[float] = []
    cost_histories: list[list[float]] = []
    handoffs: list[tuple[np.ndarray, np.ndarray]] = []
    window_reports: list[list[socp.SolveReport]] = []

    current = scenario
    carried_rho2: Optional[np.ndarray] = None
    for w in range(n_windows):
        pin = carried_rho2 if (budget_renewal == "no-renew" and w > 0) else None
        sol = solve_horizon(current, params, grid, cfg, pinned_rho2_0=pin,
                            progress=progress, window=w)
        window_iterations.append(sol.iterations)
        window_statuses.append(sol.status)
        window_av_mass.append(float(sol.plan.rho2_0.sum() * grid.dx))
        cost_histories.append(sol.cost_history)
        window_reports.append(sol.reports)

        start = w * ntw
        rho1[:, start:start + ntw] = sol.rho1_traj[:, :ntw]
        rho2[:, start:start + ntw] = sol.plan.rho2[:, :ntw]
        m2[:, start:start + ntw] = sol.plan.m2[:, :ntw]
        if w == n_windows - 1:
            rho1[:, nt] = sol.rho1_traj[:, ntw]
            rho2[:, nt] = sol.plan.rho2[:, ntw]

        boundary_rho1 = sol.rho1_traj[:, ntw]
        boundary_rho2 = sol.plan.rho2[:, ntw]
        # exact hand-off: the next scenario's total is the committed state
        total_next = boundary_rho1 + boundary_rho2
        if w < n_windows - 1:
            rho0_next = np.clip(total_next, 0.0, params.max_density)
            handoffs.append((total_next, rho0_next))
            current = make_scenario(grid, rho0_next)
            carried_rho2 = np.clip(boundary_rho2, 0.0, None)

    return RecedingHorizonRun(
        trajectories=RunTrajectories(rho1=rho1, rho2=rho2, m2=m2),
        window_iterations=window_iterations, window_statuses=window_statuses,
        window_av_mass=window_av_mass, cost_histories=cost_histories,
        boundary_handoffs=handoffs, window_reports=window_reports)


def simulate_uncontrolled(scenario: ScenarioState, params: Params,
                          grid: Grid) -> np.ndarray:
    """Single-population LWR propagation of the total density over [0, T]."""
    flux = LwrFlux(u0=params.free_flow_speed, rho_star=params.max_density)
    return propagate_hv(scenario.rho0, np.zeros((grid.nx, grid.nt + 1)), grid, flux)


def uncontrolled_run(scenario: ScenarioState, params: Params,
                     grid: Grid) -> RunTrajectories:
    """Uncontrolled baseline packaged as run trajectories (rho2 = m2 = 0)."""
    total = simulate_uncontrolled(scenario, params, grid)
    return RunTrajectories(rho1=total, rho2=np.zeros_like(total),
                           m2=np.zeros((grid.nx, grid.nt)))


__all__ = [
    "BUDGET_RENEWAL_MODES", "OuterLoopConfig", "ProgressRecord", "ProgressSink",
    "HorizonSolution", "initialize", "solve_horizon", "RunTrajectories",
    "RecedingHorizonRun", "receding_horizon", "simulate_uncontrolled",
    "uncontrolled_run",
]
