"""Physical quantities, grid construction, and scenario validation.

Two vehicle populations share a circular road: an uncontrolled population
with density rho1 that follows the LWR model, and a controlled population
with density rho2 whose flux m2 = rho2*v2 is a free optimization variable.
Densities are stored in normalized units (max density rho_star = 10 means
one unit = 50 veh/mi for the reference scenario).

Field conventions used throughout the package:

    density field   rho[cell, step]   shape (nx, nt+1), knots 0..nt
    flow field      m[cell, step]     shape (nx, nt),   interval fluxes 0..nt-1

Cell j covers [j*dx, (j+1)*dx) with center x_j = (j + 1/2)*dx; cell nx-1
is adjacent to cell 0 (periodic ring).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

DEFAULT_NX = 48
DEFAULT_CFL = 0.5

#: Reference uniform density used by the normalized L2 congestion metric.
UNIFORM_DENSITY_REF = 3.5

DENSITY_CAP_MODES = ("max-density", "mean-density")
INITIAL_SPLIT_MODES = ("free", "paper-literal")


class CflViolationError(ValueError):
    """Time step too large for the advective stability limit."""


class BoundViolationError(RuntimeError):
    """A propagated field left its physical bounds by more than tolerance."""


@dataclass(frozen=True)
class Params:
    """Physical, cost, and policy parameters of a control scenario.

    Attributes
    ----------
    domain_length : float
        Ring circumference |Omega| [mi].
    horizon : float
        Control horizon T [min].
    free_flow_speed : float
        Free-flow speed u0 [mi/min].
    max_density : float
        Jam density rho_star (normalized density units).
    state_weight : float
        Weight c multiplying the state cost in the objective.
    incentive_fraction : float
        Fraction beta in [0, 1] of incentivizable vehicle mass that may be
        recruited into the controlled population.
    horizon_splits : int
        Receding-horizon split count N; control is committed in windows of
        length horizon / N.
    flow_cap : float, optional
        Upper bound on the controlled flux m2 (e.g. single-lane capacity).
    density_cap_mode : str
        "max-density" caps rho2 by rho_star - rho1 (physical jam bound);
        "mean-density" caps by rho_bar - rho1 (literal subproblem bound).
    initial_split_mode : str
        "free" lets the optimizer choose the initial controlled density
        under the incentive budget; "paper-literal" pins it to
        rho0 - rho1(.,0) of the previous outer iterate.
    """

    domain_length: float = 2.0
    horizon: float = 8.0
    free_flow_speed: float = 1.0
    max_density: float = 10.0
    state_weight: float = 0.1
    incentive_fraction: float = 0.2
    horizon_splits: int = 1
    flow_cap: Optional[float] = None
    density_cap_mode: str = "max-density"
    initial_split_mode: str = "free"

    def __post_init__(self) -> None:
        for name in ("domain_length", "horizon", "free_flow_speed",
                     "max_density", "state_weight"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0.0 <= self.incentive_fraction <= 1.0:
            raise ValueError("incentive_fraction must lie in [0, 1]")
        if not (isinstance(self.horizon_splits, int) and self.horizon_splits >= 1):
            raise ValueError("horizon_splits must be a positive integer")
        if self.flow_cap is not None and not self.flow_cap > 0:
            raise ValueError("flow_cap must be positive when set")
        if self.density_cap_mode not in DENSITY_CAP_MODES:
            raise ValueError(f"density_cap_mode must be one of {DENSITY_CAP_MODES}")
        if self.initial_split_mode not in INITIAL_SPLIT_MODES:
            raise ValueError(f"initial_split_mode must be one of {INITIAL_SPLIT_MODES}")


@dataclass(frozen=True)
class Grid:
    """Periodic space-time discretization of one control horizon."""

    nx: int
    nt: int
    dx: float
    dt: float
    cfl_number: float

    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    def times(self) -> np.ndarray:
        return np.arange(self.nt + 1) * self.dt


def build_grid(params: Params, nx: int = DEFAULT_NX, cfl: float = DEFAULT_CFL) -> Grid:
    """Build the space-time grid for one full horizon.

    dx = domain_length / nx.  dt is the largest step satisfying
    dt <= cfl * dx / u0 such that every receding-horizon window
    horizon / horizon_splits contains a whole number of steps.

    Raises
    ------
    ValueError
        If nx < 8 or cfl is outside (0, 1].
    """
    if nx < 8:
        raise ValueError(f"nx must be at least 8, got {nx}")
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    dx = params.domain_length / nx
    bound = cfl * dx / params.free_flow_speed
    window = params.horizon / params.horizon_splits
    steps_per_window = int(np.ceil(window / bound - 1e-12))
    dt = window / steps_per_window
    nt = steps_per_window * params.horizon_splits
    return Grid(nx=nx, nt=nt, dx=dx, dt=dt, cfl_number=cfl)


def paper_initial_density(grid: Grid) -> np.ndarray:
    """Reference initial total density 3.5 + 2*sin(pi*x) at cell centers."""
    x = grid.cell_centers()
    rho0 = 3.5 + 2.0 * np.sin(np.pi * x)
    rho0.flags.writeable = False
    return rho0


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ScenarioState:
    """Initial condition of a horizon: total and incentivizable densities.

    rho_bar and rho_hat_bar are the midpoint-rule masses of rho0 and
    rho_hat0; the incentive budget for the controlled population's initial
    mass is incentive_fraction * rho_hat_bar.
    """

    rho0: np.ndarray
    rho_hat0: np.ndarray
    rho_bar: float
    rho_hat_bar: float


def make_scenario(grid: Grid, rho0: np.ndarray,
                  rho_hat0: Optional[np.ndarray] = None) -> ScenarioState:
    """Assemble a ScenarioState; rho_hat0 defaults to rho0 (everyone recruitable)."""
    rho0 = _readonly(rho0)
    if rho0.shape != (grid.nx,):
        raise ValueError(f"rho0 must have shape ({grid.nx},), got {rho0.shape}")
    rho_hat0 = rho0 if rho_hat0 is None else _readonly(rho_hat0)
    if rho_hat0.shape != rho0.shape:
        raise ValueError("rho_hat0 must match rho0 in shape")
    return ScenarioState(
        rho0=rho0,
        rho_hat0=rho_hat0,
        rho_bar=float(rho0.sum() * grid.dx),
        rho_hat_bar=float(rho_hat0.sum() * grid.dx),
    )


def validate_scenario(params: Params, scenario: ScenarioState) -> list[str]:
    """Collect constraint violations of an initial condition.

    Returns a list of human-readable violation messages; an empty list
    means the scenario is admissible.
    """
    violations: list[str] = []
    rho0, rho_hat0 = scenario.rho0, scenario.rho_hat0
    if np.any(rho0 < 0):
        violations.append("rho0 has negative entries")
    if np.any(rho0 > params.max_density):
        j = int(np.argmax(rho0))
        violations.append(
            f"rho0 exceeds max_density {params.max_density} (cell {j}: {rho0[j]:g})")
    if np.any(rho_hat0 < 0):
        violations.append("rho_hat0 has negative entries")
    if np.any(rho_hat0 > rho0 + 1e-12):
        violations.append("rho_hat0 exceeds rho0 somewhere")
    if not 0.0 <= params.incentive_fraction <= 1.0:
        violations.append(
            f"incentive_fraction {params.incentive_fraction} outside [0, 1]")
    return violations


@dataclass(frozen=True)
class ControlPlan:
    """Optimized controlled-population plan over one horizon.

    rho2_0 is the initial controlled density (nx,), m2 the space-time flux
    (nx, nt), and rho2 the controlled density trajectory (nx, nt+1)
    consistent with the linear transport discretization.
    """

    rho2_0: np.ndarray
    m2: np.ndarray
    rho2: np.ndarray

    def velocity(self) -> np.ndarray:
        """Controlled velocity v2 = m2 / rho2 on flux intervals, 0 where rho2 = 0."""
        rho_left = self.rho2[:, :-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            v2 = np.where(rho_left > 0, self.m2 / np.where(rho_left > 0, rho_left, 1.0), 0.0)
        return v2


def check_density_bounds(rho: np.ndarray, rho_star: float,
                         tol: float = 1e-12, what: str = "density") -> None:
    """Raise BoundViolationError if rho leaves [0, rho_star] by more than tol."""
    low = float(rho.min())
    high = float(rho.max())
    if low < -tol or high > rho_star + tol:
        raise BoundViolationError(
            f"{what} outside [0, {rho_star}] beyond tolerance: "
            f"min={low:.3e}, max={high:.3e}")


__all__ = [
    "DEFAULT_NX", "DEFAULT_CFL", "UNIFORM_DENSITY_REF",
    "DENSITY_CAP_MODES", "INITIAL_SPLIT_MODES",
    "CflViolationError", "BoundViolationError",
    "Params", "Grid", "build_grid", "paper_initial_density",
    "ScenarioState", "make_scenario", "validate_scenario",
    "ControlPlan", "check_density_bounds",
]
