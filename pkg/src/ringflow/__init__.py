"""Incentivized mixed-traffic density control on a periodic ring road.

A fraction of the vehicle flow is recruited (under an incentive budget)
into a directly controlled subpopulation whose initial placement and
space-time flux are optimized so that the total traffic density
approaches uniform.  The uncontrolled remainder follows the LWR model.
The solver alternates between a convex conic subproblem (controlled flow
against frozen uncontrolled density, discretized with Lax-Friedrichs) and
Godunov re-propagation of the uncontrolled density, inside a
receding-horizon loop.
"""

from .config import ConfigError, ExperimentConfig, parse_config, serialize_config
from .costs import (CostBreakdown, SpectralWeights, cost_breakdown,
                    hm1_density_cost, hm1_deviation_slice, kinetic_cost,
                    l2_density_cost, normalized_l2_metric)
from .domain import (BoundViolationError, CflViolationError, ControlPlan, Grid,
                     Params, ScenarioState, build_grid, make_scenario,
                     paper_initial_density, validate_scenario)
from .godunov import LwrFlux, godunov_step, interface_flux, propagate_hv
from .lax_friedrichs import (LaxFriedrichsOperator, as_equality_constraints,
                             lf_step, rollout)
from .optimizer import (HorizonSolution, OuterLoopConfig, RecedingHorizonRun,
                        RunTrajectories, initialize, receding_horizon,
                        simulate_uncontrolled, solve_horizon, uncontrolled_run)
from .outputs import RunSummary, build_summary, read_densities_csv, write_outputs
from .presets import PRESET_NAMES, run_experiment, run_preset
from .socp import (ConicProblem, InfeasibleProblemError, KktResiduals,
                   SolveReport, assemble, kkt_check, solve, write_problem_dump)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ExperimentConfig", "parse_config", "serialize_config",
    "CostBreakdown", "SpectralWeights", "cost_breakdown", "hm1_density_cost",
    "hm1_deviation_slice", "kinetic_cost", "l2_density_cost",
    "normalized_l2_metric",
    "BoundViolationError", "CflViolationError", "ControlPlan", "Grid",
    "Params", "ScenarioState", "build_grid", "make_scenario",
    "paper_initial_density", "validate_scenario",
    "LwrFlux", "godunov_step", "interface_flux", "propagate_hv",
    "LaxFriedrichsOperator", "as_equality_constraints", "lf_step", "rollout",
    "HorizonSolution", "OuterLoopConfig", "RecedingHorizonRun",
    "RunTrajectories", "initialize", "receding_horizon",
    "simulate_uncontrolled", "solve_horizon", "uncontrolled_run",
    "RunSummary", "build_summary", "read_densities_csv", "write_outputs",
    "PRESET_NAMES", "run_experiment", "run_preset",
    "ConicProblem", "InfeasibleProblemError", "KktResiduals", "SolveReport",
    "assemble", "kkt_check", "solve", "write_problem_dump",
    "__version__",
]
