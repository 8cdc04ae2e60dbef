"""Control and congestion cost functionals plus reporting metrics.

The optimization trades off a kinetic (control-effort) term against one of
two congestion measures of the total density rho1 + rho2:

* an L2 cost, the plain squared density integrated over space and time;
* an inverse-Sobolev (mix-norm) cost that weights each spatial Fourier
  mode kappa of the deviation from the mean by (2*pi*kappa/|Omega|)^-2,
  so low-frequency lumps cost most and fine-grained ripples cost least.

Spatial integrals use the midpoint rule on cell centers.  Density-only
time integrals use the trapezoid rule on knots; the kinetic term uses
left-endpoint rectangles on flux intervals, matching the staggering of
the flow field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Grid, UNIFORM_DENSITY_REF


@dataclass(frozen=True)
class SpectralWeights:
    """Inverse-Laplacian weights w_kappa = (2*pi*kappa/|Omega|)^-2, kappa = 1..nx/2."""

    domain_length: float
    weights: np.ndarray  # index kappa-1

    @classmethod
    def for_grid(cls, nx: int, domain_length: float) -> "SpectralWeights":
        kappa = np.arange(1, nx // 2 + 1)
        w = (2.0 * np.pi * kappa / domain_length) ** (-2.0)
        w.flags.writeable = False
        return cls(domain_length=domain_length, weights=w)


def time_weights_trapezoid(nt: int, dt: float) -> np.ndarray:
    """Trapezoid quadrature weights over knots 0..nt."""
    w = np.full(nt + 1, dt)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def kinetic_cost(rho2: np.ndarray, m2: np.ndarray, grid: Grid) -> float:
    """Control effort sum of m2^2 / rho2 * dx * dt over (cell, flux interval).

    Follows the perspective-function convention 0^2/0 = 0; a positive flux
    through a zero-density cell makes the cost +inf (infeasible transport).
    rho2 is sampled at the left knot of each interval.
    """
    rho_left = np.asarray(rho2)[:, :-1]
    m2 = np.asarray(m2)
    if m2.shape != rho_left.shape:
        raise ValueError("m2 must have one fewer time slice than rho2")
    zero_rho = rho_left <= 0.0
    if np.any(zero_rho & (np.abs(m2) > 0.0)):
        return float("inf")
    ratio = np.where(zero_rho, 0.0, m2 ** 2 / np.where(zero_rho, 1.0, rho_left))
    return float(ratio.sum() * grid.dx * grid.dt)


def l2_density_cost(rho1: np.ndarray, rho2: np.ndarray, grid: Grid) -> float:
    """Squared total density integrated over space and time (trapezoid in time)."""
    total = np.asarray(rho1) + np.asarray(rho2)
    tw = time_weights_trapezoid(total.shape[1] - 1, grid.dt)
    return float(((total ** 2).sum(axis=0) * grid.dx * tw).sum())


def _deviation_energy_slice(total_slice: np.ndarray, weights: SpectralWeights) -> float:
    """Mix-norm energy of one spatial slice via the complex DFT.

    Computes |Omega| * sum over nonzero DFT bins of w_kappa* |c_kappa|^2
    with c = fft(slice)/nx and kappa* the aliased physical wavenumber,
    which equals the continuum integral of |(-Laplace)^(-1/2)(slice - mean)|^2.
    """
    nx = total_slice.shape[0]
    coef = np.fft.fft(total_slice) / nx
    bins = np.arange(1, nx)
    kappa_star = np.minimum(bins, nx - bins)
    w = weights.weights[kappa_star - 1]
    return float(weights.domain_length * np.sum(w * np.abs(coef[1:]) ** 2))


def hm1_deviation_slice(total_slice: np.ndarray, grid: Grid) -> float:
    """Mix-norm deviation energy of a single time slice of total density."""
    weights = SpectralWeights.for_grid(grid.nx, grid.nx * grid.dx)
    return _deviation_energy_slice(np.asarray(total_slice), weights)


def hm1_density_cost(rho1: np.ndarray, rho2: np.ndarray, grid: Grid,
                     rho_bar: float) -> float:
    """Mix-norm congestion cost (1/rho_bar) * integral over time of the slice energy."""
    if not rho_bar > 0:
        raise ValueError("rho_bar must be positive")
    total = np.asarray(rho1) + np.asarray(rho2)
    weights = SpectralWeights.for_grid(grid.nx, grid.nx * grid.dx)
    tw = time_weights_trapezoid(total.shape[1] - 1, grid.dt)
    energies = np.array([
        _deviation_energy_slice(total[:, n], weights) for n in range(total.shape[1])
    ])
    return float((energies * tw).sum() / rho_bar)


def normalized_l2_metric(rho1_slice: np.ndarray, rho2_slice: np.ndarray,
                         grid: Grid) -> float:
    """Congestion metric (1/(3.5^2 |Omega|)) * integral of (rho1+rho2)^2 dx.

    Equals 1 exactly when the total density is uniform at the reference
    value 3.5; larger values indicate concentration.
    """
    total = np.asarray(rho1_slice) + np.asarray(rho2_slice)
    domain_length = grid.nx * grid.dx
    return float((total ** 2).sum() * grid.dx
                 / (UNIFORM_DENSITY_REF ** 2 * domain_length))


@dataclass(frozen=True)
class CostBreakdown:
    """Kinetic and state cost components with their weighted sum."""

    kinetic: float
    state: float
    weighted_total: float


def cost_breakdown(rho1: np.ndarray, rho2: np.ndarray, m2: np.ndarray,
                   grid: Grid, state_weight: float, cost_kind: str,
                   rho_bar: float) -> CostBreakdown:
    """Evaluate the full objective for a (rho1, rho2, m2) triple."""
    kin = kinetic_cost(rho2, m2, grid)
    if cost_kind == "l2":
        state = l2_density_cost(rho1, rho2, grid)
    elif cost_kind == "hm1":
        state = hm1_density_cost(rho1, rho2, grid, rho_bar)
    else:
        raise ValueError(f"unknown cost_kind {cost_kind!r}")
    return CostBreakdown(kinetic=kin, state=state,
                         weighted_total=kin + state_weight * state)


def spectral_transform(nx: int, domain_length: float) -> np.ndarray:
    """Real transform matrix M (nx-1, nx) with ||M s||^2 = slice deviation energy.

    Rows are cosine/sine basis vectors at cell centers, scaled by the
    square-rooted mix-norm weights, so the weighted spectral energy of any
    slice s is the plain Euclidean norm of M s.  Used to express the
    mix-norm objective as a diagonal quadratic in auxiliary variables.
    """
    j = np.arange(nx)
    weights = SpectralWeights.for_grid(nx, domain_length).weights
    rows = []
    for kappa in range(1, (nx - 1) // 2 + 1):
        angle = 2.0 * np.pi * kappa * (j + 0.5) / nx
        scale = np.sqrt(domain_length / 2.0 * weights[kappa - 1]) * 2.0 / nx
        rows.append(scale * np.cos(angle))
        rows.append(scale * np.sin(angle))
    if nx % 2 == 0:
        # Nyquist bin appears once in the DFT sum
        nyquist = np.sqrt(domain_length * weights[nx // 2 - 1]) / nx
        rows.append(nyquist * np.cos(np.pi * (j + 0.5)))
    return np.array(rows)


__all__ = [
    "SpectralWeights", "time_weights_trapezoid", "kinetic_cost",
    "l2_density_cost", "hm1_deviation_slice", "hm1_density_cost",
    "normalized_l2_metric", "CostBreakdown", "cost_breakdown",
    "spectral_transform",
]
