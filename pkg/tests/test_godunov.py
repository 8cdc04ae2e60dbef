import numpy as np
import pytest

from ringflow.domain import (BoundViolationError, CflViolationError, Grid,
                             Params, build_grid, paper_initial_density)
from ringflow.godunov import (LwrFlux, godunov_step, interface_flux,
                              proportional_split_propagate, propagate_hv)

FLUX = LwrFlux(u0=1.0, rho_star=10.0)


def reference_godunov_step(rho1, rho2, dt, dx, u0, rho_star):
    """Independent scalar-conservation-law oracle: explicit per-interface loop."""
    nx = len(rho1)
    out = np.empty(nx)
    flux_at = lambda r, r2: u0 * r * (1.0 - (r + r2) / rho_star)
    f_iface = np.empty(nx)  # F_{j+1/2}
    for j in range(nx):
        left = rho1[j]
        right = rho1[(j + 1) % nx]
        r2 = 0.5 * (rho2[j] + rho2[(j + 1) % nx])
        crit = 0.5 * (rho_star - r2)
        if left <= right:
            f_iface[j] = min(flux_at(left, r2), flux_at(right, r2))
        elif right <= crit <= left:
            f_iface[j] = flux_at(crit, r2)
        else:
            f_iface[j] = max(flux_at(left, r2), flux_at(right, r2))
    for j in range(nx):
        out[j] = rho1[j] - dt / dx * (f_iface[j] - f_iface[(j - 1) % nx])
    return out


def test_velocity_closed_forms():
    assert FLUX.velocity(5.0, 5.0) == pytest.approx(0.0, abs=1e-15)
    assert FLUX.velocity(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert FLUX.velocity(3.0, 4.0) == pytest.approx(0.3, abs=1e-15)


def test_interface_flux_closed_forms():
    assert interface_flux(5.0, 5.0, 0.0, FLUX) == pytest.approx(2.5, abs=1e-14)
    assert interface_flux(2.0, 8.0, 0.0, FLUX) == pytest.approx(1.6, abs=1e-14)
    assert interface_flux(8.0, 2.0, 0.0, FLUX) == pytest.approx(2.5, abs=1e-14)


def test_interface_flux_consistency():
    rng = np.random.default_rng(7)
    rho = rng.uniform(0, 10, size=200)
    rho2 = rng.uniform(0, 10 - rho)
    assert np.array_equal(interface_flux(rho, rho, rho2, FLUX), FLUX(rho, rho2))


def _grid(nx, cfl=0.5):
    return build_grid(Params(), nx=nx, cfl=cfl)


def test_step_keeps_uniform_state_unchanged():
    grid = _grid(16)
    rho1 = np.full(16, 4.0)
    rho2 = np.full(16, 1.0)
    out = godunov_step(rho1, rho2, grid, FLUX)
    assert np.allclose(out, rho1, atol=1e-15)


def test_step_conserves_mass_on_random_fields():
    rng = np.random.default_rng(11)
    for _ in range(200):
        nx = int(rng.integers(8, 97))
        grid = _grid(nx)
        rho1 = rng.uniform(0, 10, size=nx)
        rho2 = rng.uniform(0, 10 - rho1)
        out = godunov_step(rho1, rho2, grid, FLUX)
        assert abs(out.sum() - rho1.sum()) <= 1e-12 * rho1.sum()


def test_step_matches_independent_oracle_cell_by_cell():
    grid = _grid(48)
    rho1 = paper_initial_density(grid).copy()
    rho2 = np.zeros(48)
    for _ in range(5):
        expected = reference_godunov_step(rho1, rho2, grid.dt, grid.dx, 1.0, 10.0)
        got = godunov_step(rho1, rho2, grid, FLUX)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-14)
        rho1 = got


def test_step_matches_oracle_with_varying_rho2():
    rng = np.random.default_rng(3)
    grid = _grid(24)
    for _ in range(20):
        rho1 = rng.uniform(0, 6, size=24)
        rho2 = rng.uniform(0, 3, size=24)
        expected = reference_godunov_step(rho1, rho2, grid.dt, grid.dx, 1.0, 10.0)
        got = godunov_step(rho1, rho2, grid, FLUX)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-14)


def test_step_maximum_principle_with_uniform_rho2():
    rng = np.random.default_rng(5)
    for _ in range(50):
        nx = int(rng.integers(8, 64))
        grid = _grid(nx)
        rho1 = rng.uniform(0, 8, size=nx)
        rho2 = np.full(nx, rng.uniform(0, 2))
        out = godunov_step(rho1, rho2, grid, FLUX)
        assert out.min() >= rho1.min() - 1e-12
        assert out.max() <= rho1.max() + 1e-12


def test_step_is_monotone_in_each_cell():
    # desk-scale finite-difference check of the monotone-scheme property
    rng = np.random.default_rng(9)
    grid = _grid(8)
    rho1 = rng.uniform(0.5, 7.5, size=8)
    rho2 = rng.uniform(0, 2, size=8)
    base = godunov_step(rho1, rho2, grid, FLUX)
    h = 1e-6
    for j in range(8):
        bumped = rho1.copy()
        bumped[j] += h
        out = godunov_step(bumped, rho2, grid, FLUX)
        assert np.all(out - base >= -1e-12)


def test_step_rejects_cfl_violation():
    grid = Grid(nx=16, nt=10, dx=0.125, dt=0.2, cfl_number=1.6)
    with pytest.raises(CflViolationError):
        godunov_step(np.full(16, 3.0), np.zeros(16), grid, FLUX)


def test_step_rejects_nonphysical_result():
    grid = _grid(16)
    rho1 = np.full(16, 10.0)
    rho2 = np.zeros(16)
    rho2[::2] = 5.0  # negative fluxes with nonzero divergence push rho1 above the cap
    with pytest.raises(BoundViolationError):
        godunov_step(rho1, rho2, grid, FLUX)


def test_propagation_of_uniform_state_is_constant():
    grid = _grid(16)
    traj = propagate_hv(np.full(16, 2.0), np.zeros((16, grid.nt + 1)), grid, FLUX)
    assert np.allclose(traj, 2.0, atol=1e-14)


def test_propagation_conserves_mass_at_every_step():
    grid = _grid(48)
    rho0 = paper_initial_density(grid)
    traj = propagate_hv(rho0, np.zeros((48, grid.nt + 1)), grid, FLUX)
    masses = traj.sum(axis=0) * grid.dx
    assert np.all(np.abs(masses - masses[0]) <= 1e-12 * masses[0])


def test_two_population_split_tracks_single_population_total():
    # AVs driven at the HV speed: total must follow single-population LWR
    # within first-order scheme tolerance (L1 difference <= 2 dx per unit time)
    beta = 0.2
    grid = _grid(48)
    rho0 = paper_initial_density(grid)
    single = propagate_hv(rho0, np.zeros((48, grid.nt + 1)), grid, FLUX)
    rho2_traj = beta * single
    rho1 = propagate_hv((1 - beta) * rho0, rho2_traj, grid, FLUX)
    total = rho1 + rho2_traj
    for n in (grid.nt // 2, grid.nt):
        t = n * grid.dt
        l1 = np.abs(total[:, n] - single[:, n]).sum() * grid.dx
        assert l1 <= 2.0 * grid.dx * t


def test_proportional_split_advects_fraction_exactly():
    beta = 0.2
    grid = _grid(48)
    rho0 = paper_initial_density(grid)
    rho1_traj, rho2_traj = proportional_split_propagate(rho0, beta * rho0, grid, FLUX)
    single = propagate_hv(rho0, np.zeros((48, grid.nt + 1)), grid, FLUX)
    np.testing.assert_allclose(rho1_traj + rho2_traj, single, rtol=0, atol=1e-12)
    np.testing.assert_allclose(rho2_traj, beta * single, rtol=0, atol=1e-12)
