"""Linear Lax-Friedrichs transport for the controlled population.

The controlled density obeys the continuity equation with flux m2.  The
classical Lax-Friedrichs update

    rho_j^{n+1} = (rho_{j-1}^n + rho_{j+1}^n)/2 - dt/(2 dx) * (m_{j+1}^n - m_{j-1}^n)

is linear in (rho, m2), which is what lets the frozen-HV subproblem treat
every time step as a set of linear equality constraints.  Fluxes are
indexed on intervals: m2[:, n] drives the step from knot n to knot n+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class LaxFriedrichsOperator:
    """Periodic Lax-Friedrichs stencil on nx cells with steps dx, dt."""

    nx: int
    dx: float
    dt: float

    @property
    def flux_weight(self) -> float:
        return self.dt / (2.0 * self.dx)


def lf_step(rho2: np.ndarray, m2: np.ndarray, op: LaxFriedrichsOperator) -> np.ndarray:
    """One Lax-Friedrichs step; exactly mass conserving on the periodic ring."""
    if rho2.shape != (op.nx,) or m2.shape != (op.nx,):
        raise ValueError(f"fields must have shape ({op.nx},)")
    avg = 0.5 * (np.roll(rho2, 1) + np.roll(rho2, -1))
    return avg - op.flux_weight * (np.roll(m2, -1) - np.roll(m2, 1))


def rollout(rho2_0: np.ndarray, m2: np.ndarray, op: LaxFriedrichsOperator) -> np.ndarray:
    """Apply lf_step over all flux intervals.

    Parameters
    ----------
    rho2_0 : (nx,) initial controlled density.
    m2 : (nx, nt) interval fluxes.

    Returns
    -------
    (nx, nt+1) density trajectory.
    """
    nx, nt = m2.shape[0], m2.shape[1]
    if nx != op.nx:
        raise ValueError(f"m2 must have {op.nx} rows, got {nx}")
    out = np.empty((nx, nt + 1))
    out[:, 0] = rho2_0
    for n in range(nt):
        out[:, n + 1] = lf_step(out[:, n], m2[:, n], op)
    return out


def as_equality_constraints(op: LaxFriedrichsOperator, nt: int) -> sp.csr_matrix:
    """Export the rollout dynamics as sparse equality rows A x = 0.

    The variable vector x stacks density knots first and fluxes second:

        x = [rho2(j, n) for n in 0..nt, j in 0..nx-1]   (index n*nx + j)
            + [m2(j, n) for n in 0..nt-1, j in 0..nx-1] (offset nx*(nt+1))

    Row (n*nx + j) encodes knot (j, n+1) minus its Lax-Friedrichs
    predecessor: a rollout of any (rho2_0, m2) satisfies A x = 0 to
    machine precision.
    """
    nx = op.nx
    lam = op.flux_weight
    n_rho = nx * (nt + 1)
    j = np.arange(nx)
    jm, jp = (j - 1) % nx, (j + 1) % nx
    rows, cols, vals = [], [], []
    for n in range(nt):
        r = n * nx + j
        rows.extend([r, r, r, r, r])
        cols.extend([
            (n + 1) * nx + j,          # rho2(j, n+1)
            n * nx + jm,               # rho2(j-1, n)
            n * nx + jp,               # rho2(j+1, n)
            n_rho + n * nx + jp,       # m2(j+1, n)
            n_rho + n * nx + jm,       # m2(j-1, n)
        ])
        vals.extend([
            -np.ones(nx), np.full(nx, 0.5), np.full(nx, 0.5),
            np.full(nx, -lam), np.full(nx, lam),
        ])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    shape = (nx * nt, n_rho + nx * nt)
    return sp.csr_matrix((vals, (rows, cols)), shape=shape)


__all__ = ["LaxFriedrichsOperator", "lf_step", "rollout", "as_equality_constraints"]
