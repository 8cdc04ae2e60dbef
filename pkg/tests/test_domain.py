import numpy as np
import pytest

from ringflow.domain import (ControlPlan, Grid, Params, build_grid,
                             make_scenario, paper_initial_density,
                             validate_scenario)


def test_grid_spacing_matches_definition():
    grid = build_grid(Params(), nx=48)
    assert grid.dx == pytest.approx(1.0 / 24.0, abs=1e-15)
    assert grid.nx == 48


def test_grid_dt_divides_window_and_respects_cfl():
    params = Params(horizon_splits=2)  # T=8, u0=1
    grid = build_grid(params, nx=48, cfl=0.5)
    assert grid.dt <= 1.0 / 48.0 + 1e-15
    window = params.horizon / params.horizon_splits
    steps = window / grid.dt
    assert steps == pytest.approx(round(steps), abs=1e-9)
    assert grid.nt % params.horizon_splits == 0


def test_grid_rejects_out_of_range_inputs():
    with pytest.raises(ValueError):
        build_grid(Params(), nx=4)
    with pytest.raises(ValueError):
        build_grid(Params(), nx=48, cfl=0.0)
    with pytest.raises(ValueError):
        build_grid(Params(), nx=48, cfl=1.5)


def test_grid_construction_is_deterministic():
    a = build_grid(Params(horizon_splits=4), nx=64, cfl=0.4)
    b = build_grid(Params(horizon_splits=4), nx=64, cfl=0.4)
    assert a == b


def test_initial_density_closed_form_values():
    # nx=10 puts cell centers exactly at x = 0.5 and x = 1.5
    grid = Grid(nx=10, nt=1, dx=0.2, dt=0.1, cfl_number=0.5)
    rho0 = paper_initial_density(grid)
    assert rho0[2] == pytest.approx(5.5, abs=1e-12)   # x = 0.5
    assert rho0[7] == pytest.approx(1.5, abs=1e-12)   # x = 1.5


@pytest.mark.parametrize("nx", [8, 12, 48, 96])
def test_initial_density_total_mass_is_seven(nx):
    grid = build_grid(Params(), nx=nx)
    rho0 = paper_initial_density(grid)
    assert rho0.sum() * grid.dx == pytest.approx(7.0, abs=1e-10)


def test_budget_value_for_reference_scenario():
    params = Params()
    grid = build_grid(params)
    scenario = make_scenario(grid, paper_initial_density(grid))
    assert params.incentive_fraction * scenario.rho_hat_bar == pytest.approx(1.4, abs=1e-10)


def test_validate_scenario_accepts_reference_setup():
    params = Params()
    grid = build_grid(params)
    scenario = make_scenario(grid, paper_initial_density(grid))
    assert validate_scenario(params, scenario) == []


def test_validate_scenario_reports_density_above_cap():
    params = Params()
    grid = build_grid(params)
    rho0 = paper_initial_density(grid).copy()
    rho0[3] = 11.0
    violations = validate_scenario(params, make_scenario(grid, rho0))
    assert any("max_density" in v for v in violations)


def test_validate_scenario_reports_bad_beta():
    params = Params()
    # the constructor rejects beta outside [0, 1]; forge the value to check
    # that validation reports rather than throws
    object.__setattr__(params, "incentive_fraction", 1.2)
    grid = build_grid(Params())
    scenario = make_scenario(grid, paper_initial_density(grid))
    violations = validate_scenario(params, scenario)
    assert any("incentive_fraction" in v for v in violations)


def test_validate_scenario_reports_rho_hat_above_rho0():
    params = Params()
    grid = build_grid(params)
    rho0 = paper_initial_density(grid)
    violations = validate_scenario(params, make_scenario(grid, rho0, rho_hat0=rho0 * 1.5))
    assert any("rho_hat0" in v for v in violations)


def test_params_rejects_nonpositive_and_invalid_values():
    with pytest.raises(ValueError):
        Params(max_density=0.0)
    with pytest.raises(ValueError):
        Params(incentive_fraction=1.2)
    with pytest.raises(ValueError):
        Params(horizon_splits=0)
    with pytest.raises(ValueError):
        Params(flow_cap=-1.0)
    with pytest.raises(ValueError):
        Params(density_cap_mode="bogus")
    with pytest.raises(ValueError):
        Params(initial_split_mode="bogus")


def test_control_plan_velocity_handles_vacuum():
    rho2 = np.array([[1.0, 2.0], [0.0, 0.0]])
    m2 = np.array([[0.5], [0.0]])
    plan = ControlPlan(rho2_0=rho2[:, 0], m2=m2, rho2=rho2)
    v2 = plan.velocity()
    assert v2[0, 0] == pytest.approx(0.5)
    assert v2[1, 0] == 0.0
