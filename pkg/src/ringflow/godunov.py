"""First-order Godunov scheme for the uncontrolled population.

The uncontrolled density rho1 obeys a scalar conservation law with the
coupled LWR flux

    f(rho1; rho2) = u0 * rho1 * (1 - (rho1 + rho2) / rho_star),

where the controlled density rho2 enters as a frozen, space-time varying
parameter.  For fixed rho2 the flux is concave in rho1 with critical
density (rho_star - rho2) / 2, so the exact Riemann interface flux is the
classic min/max rule for concave fluxes.  rho2 is localized at interfaces
as the arithmetic mean of the two adjacent cells, which reduces to the
exact single-parameter scheme when rho2 is spatially uniform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import BoundViolationError, CflViolationError, Grid, check_density_bounds

#: Bound violations at or below this size are clamped; larger ones raise.
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class LwrFlux:
    """Coupled LWR flux f(rho1; rho2) with free-flow speed u0 and jam density rho_star."""

    u0: float
    rho_star: float

    def velocity(self, rho1, rho2):
        """Speed u0 * (1 - (rho1 + rho2)/rho_star); negative if inputs exceed rho_star."""
        return self.u0 * (1.0 - (np.asarray(rho1) + np.asarray(rho2)) / self.rho_star)

    def __call__(self, rho1, rho2):
        return np.asarray(rho1) * self.velocity(rho1, rho2)

    def critical_density(self, rho2):
        """Argmax of rho1 -> f(rho1; rho2) for frozen rho2."""
        return 0.5 * (self.rho_star - np.asarray(rho2))


def interface_flux(rho_left, rho_right, rho2_iface, flux: LwrFlux):
    """Godunov flux at an interface for the concave coupled LWR flux.

    For rho_left <= rho_right the flux is the minimum of f over
    [rho_left, rho_right] (attained at an endpoint); otherwise the maximum
    over [rho_right, rho_left], which is f at the critical density when it
    lies inside the interval and the larger endpoint value when not.
    """
    rho_left = np.asarray(rho_left, dtype=float)
    rho_right = np.asarray(rho_right, dtype=float)
    rho2_iface = np.asarray(rho2_iface, dtype=float)
    f_left = flux(rho_left, rho2_iface)
    f_right = flux(rho_right, rho2_iface)
    crit = flux.critical_density(rho2_iface)
    crit_inside = (crit >= rho_right) & (crit <= rho_left)
    rarefaction = np.minimum(f_left, f_right)
    shock = np.where(crit_inside, flux(crit, rho2_iface), np.maximum(f_left, f_right))
    return np.where(rho_left <= rho_right, rarefaction, shock)


def godunov_step(rho1: np.ndarray, rho2_now: np.ndarray, grid: Grid,
                 flux: LwrFlux) -> np.ndarray:
    """Advance rho1 by one conservative step with frozen rho2.

    Interface rho2 is the mean of the adjacent cells.  The update is
    rho1_j - (dt/dx) * (F_{j+1/2} - F_{j-1/2}) with periodic wrap.  Results
    may be clamped to [0, rho_star] by at most CLAMP_TOL; larger violations
    raise BoundViolationError.
    """
    if grid.dt * flux.u0 / grid.dx > 1.0 + 1e-14:
        raise CflViolationError(
            f"dt*u0/dx = {grid.dt * flux.u0 / grid.dx:.6f} exceeds 1")
    rho2_iface = 0.5 * (rho2_now + np.roll(rho2_now, -1))  # at j+1/2
    f_plus = interface_flux(rho1, np.roll(rho1, -1), rho2_iface, flux)
    f_minus = np.roll(f_plus, 1)
    out = rho1 - (grid.dt / grid.dx) * (f_plus - f_minus)
    check_density_bounds(out, flux.rho_star, tol=CLAMP_TOL, what="rho1 after Godunov step")
    return np.clip(out, 0.0, flux.rho_star)


def propagate_hv(rho1_init: np.ndarray, rho2_traj: np.ndarray, grid: Grid,
                 flux: LwrFlux) -> np.ndarray:
    """Roll out rho1 over the horizon against a frozen rho2 trajectory.

    Parameters
    ----------
    rho1_init : (nx,) initial uncontrolled density.
    rho2_traj : (nx, nt+1) frozen controlled density; step n values are
        used for the step n -> n+1 update.

    Returns
    -------
    (nx, nt+1) trajectory including the initial slice.
    """
    nx, nt = grid.nx, grid.nt
    if rho2_traj.shape != (nx, nt + 1):
        raise ValueError(f"rho2_traj must have shape ({nx}, {nt + 1}), got {rho2_traj.shape}")
    if np.any(rho1_init + rho2_traj[:, 0] > flux.rho_star + 1e-9):
        raise BoundViolationError("initial rho1 + rho2 exceeds rho_star")
    out = np.empty((nx, nt + 1))
    out[:, 0] = rho1_init
    current = np.array(rho1_init, dtype=float)
    for n in range(nt):
        current = godunov_step(current, rho2_traj[:, n], grid, flux)
        out[:, n + 1] = current
    return out


def single_population_step(rho: np.ndarray, grid: Grid, flux: LwrFlux) -> np.ndarray:
    """One Godunov step of the plain (uncoupled) LWR model."""
    return godunov_step(rho, np.zeros_like(rho), grid, flux)


def proportional_split_propagate(rho_total0: np.ndarray, rho2_0: np.ndarray,
                                 grid: Grid, flux: LwrFlux) -> tuple[np.ndarray, np.ndarray]:
    """Propagate both populations with the controlled one driven at the HV speed.

    Both populations then move with the common velocity field, the total
    follows single-population LWR, and the controlled share is advected as
    a passive fraction using donor-cell (upwind) splitting of the Godunov
    interface fluxes.  The LWR flux is nonnegative on [0, rho_star], so the
    donor cell is always the left one.

    Returns (rho1_traj, rho2_traj), each (nx, nt+1).
    """
    nx, nt = grid.nx, grid.nt
    rho = np.array(rho_total0, dtype=float)
    rho2 = np.array(rho2_0, dtype=float)
    if np.any(rho2 < -1e-12) or np.any(rho2 > rho + 1e-12):
        raise ValueError("rho2_0 must satisfy 0 <= rho2_0 <= rho_total0")
    rho1_traj = np.empty((nx, nt + 1))
    rho2_traj = np.empty((nx, nt + 1))
    rho1_traj[:, 0] = rho - rho2
    rho2_traj[:, 0] = rho2
    zeros = np.zeros(nx)
    for n in range(nt):
        f_plus = interface_flux(rho, np.roll(rho, -1), zeros, flux)
        frac = np.where(rho > 0, rho2 / np.where(rho > 0, rho, 1.0), 0.0)
        f2_plus = frac * f_plus  # donor-cell split of the total flux
        rho = rho - (grid.dt / grid.dx) * (f_plus - np.roll(f_plus, 1))
        rho2 = rho2 - (grid.dt / grid.dx) * (f2_plus - np.roll(f2_plus, 1))
        check_density_bounds(rho, flux.rho_star, tol=CLAMP_TOL, what="total density")
        rho = np.clip(rho, 0.0, flux.rho_star)
        rho2 = np.clip(rho2, 0.0, rho)
        rho1_traj[:, n + 1] = rho - rho2
        rho2_traj[:, n + 1] = rho2
    return rho1_traj, rho2_traj


__all__ = [
    "CLAMP_TOL", "LwrFlux", "interface_flux", "godunov_step",
    "propagate_hv", "single_population_step", "proportional_split_propagate",
]
