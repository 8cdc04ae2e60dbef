"""Frozen-HV convex subproblem as a second-order cone program.

With the uncontrolled density rho1 frozen in space and time, choosing the
controlled initial density rho2_0 and flux m2 to minimize

    sum t * dx * dt  +  state_weight * state_cost(rho1_frozen + rho2)

subject to the Lax-Friedrichs dynamics, nonnegativity, density caps, the
incentive budget, and the rotated-cone epigraphs m2^2 <= rho2 * t is a
convex conic-quadratic problem.  This module assembles the problem in an
explicit block form (ConicProblem), solves it with the Clarabel
interior-point engine, and re-verifies every residual independently of
the engine (kkt_check).

Variable vector layout, everything cell-major within a time step
(flat index = step * nx + cell):

    rho2 knots    nx*(nt+1)   offset 0
    m2 fluxes     nx*nt       offset o_m
    t epigraph    nx*nt       offset o_t
    rho2_0        nx          offset o_r0
    spectral aux  (nx-1)*(nt+1) when cost_kind == "hm1", offset o_z

The rotated cones are handed to the engine as 3-dimensional second-order
cones via (rho + t, 2 m, rho - t).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

import clarabel

from .costs import spectral_transform, time_weights_trapezoid
from .domain import ControlPlan, Grid, Params, ScenarioState
from .lax_friedrichs import LaxFriedrichsOperator, as_equality_constraints

PIN_TOL = 1e-9


class InfeasibleProblemError(RuntimeError):
    """The constraint data admit no feasible point (detected at assembly)."""


@dataclass(frozen=True)
class VariableLayout:
    """Index bookkeeping for the flat variable vector."""

    nx: int
    nt: int
    has_spectral: bool

    @property
    def n_rho(self) -> int:
        return self.nx * (self.nt + 1)

    @property
    def n_m(self) -> int:
        return self.nx * self.nt

    @property
    def n_spectral(self) -> int:
        return (self.nx - 1) * (self.nt + 1) if self.has_spectral else 0

    @property
    def o_m(self) -> int:
        return self.n_rho

    @property
    def o_t(self) -> int:
        return self.n_rho + self.n_m

    @property
    def o_r0(self) -> int:
        return self.n_rho + 2 * self.n_m

    @property
    def o_spectral(self) -> int:
        return self.o_r0 + self.nx

    @property
    def n_var(self) -> int:
        return self.o_spectral + self.n_spectral

    def rho_index(self, j, n):
        return np.asarray(n) * self.nx + np.asarray(j)

    def m_index(self, j, n):
        return self.o_m + np.asarray(n) * self.nx + np.asarray(j)

    def t_index(self, j, n):
        return self.o_t + np.asarray(n) * self.nx + np.asarray(j)


@dataclass
class ConicProblem:
    """Block description of one frozen-HV subproblem.

    Equalities hold as A x = b; the budget is a single row A x <= rhs;
    bounds are elementwise lower <= x <= upper with +-inf for absent
    bounds (equal bounds pin a variable); cone_triples lists the variable
    indices (rho, m, t) of each rotated-cone membership m^2 <= rho * t.
    The objective is 0.5 x' diag(p_diag) x + q' x + obj_const.
    """

    layout: VariableLayout
    grid: Grid
    cost_kind: str
    a_dynamics: sp.csr_matrix
    a_initial: sp.csr_matrix
    a_spectral: Optional[sp.csr_matrix]
    b_spectral: Optional[np.ndarray]
    budget_row: sp.csr_matrix
    budget_rhs: float
    lower: np.ndarray
    upper: np.ndarray
    cone_triples: np.ndarray
    p_diag: np.ndarray
    q: np.ndarray
    obj_const: float
    rho1_frozen: np.ndarray = field(repr=False, default=None)

    @property
    def n_equality_rows(self) -> int:
        n = self.a_dynamics.shape[0] + self.a_initial.shape[0]
        if self.a_spectral is not None:
            n += self.a_spectral.shape[0]
        return n


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one conic solve with independently recomputed residuals."""

    status: str                  # optimal | max-iters | infeasible
    engine_status: str
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    wall_time: float
    x: np.ndarray = field(repr=False, default=None)
    z: np.ndarray = field(repr=False, default=None)


def assemble(rho1_frozen: np.ndarray, scenario: ScenarioState, params: Params,
             grid: Grid, cost_kind: str,
             pinned_rho2_0: Optional[np.ndarray] = None) -> ConicProblem:
    """Build the conic subproblem for one frozen rho1 trajectory.

    Parameters
    ----------
    rho1_frozen : (nx, nt+1) frozen uncontrolled density.
    cost_kind : "l2" or "hm1".
    pinned_rho2_0 : optional (nx,) array that fixes the initial controlled
        density exactly (used by the no-renewal receding-horizon policy).
        Without it, params.initial_split_mode decides: "free" leaves
        rho2_0 a decision variable in [0, rho0] under the budget row,
        "paper-literal" pins it to rho0 - rho1_frozen[:, 0].

    Raises
    ------
    InfeasibleProblemError
        If a density cap or pin is negative beyond tolerance.
    """
    nx, nt = grid.nx, grid.nt
    if cost_kind not in ("l2", "hm1"):
        raise ValueError(f"cost_kind must be 'l2' or 'hm1', got {cost_kind!r}")
    if rho1_frozen.shape != (nx, nt + 1):
        raise ValueError(f"rho1_frozen must have shape ({nx}, {nt + 1})")
    layout = VariableLayout(nx=nx, nt=nt, has_spectral=(cost_kind == "hm1"))
    n_var = layout.n_var
    domain_length = nx * grid.dx

    # dynamics rows reuse the Lax-Friedrichs export; its column layout
    # [rho2 | m2] matches the head of the global variable vector
    op = LaxFriedrichsOperator(nx=nx, dx=grid.dx, dt=grid.dt)
    a_lf = as_equality_constraints(op, nt)
    pad = sp.csr_matrix((a_lf.shape[0], n_var - a_lf.shape[1]))
    a_dynamics = sp.hstack([a_lf, pad], format="csr")

    # initial coupling rho2(., 0) - rho2_0 = 0
    j = np.arange(nx)
    a_initial = sp.csr_matrix(
        (np.concatenate([np.ones(nx), -np.ones(nx)]),
         (np.concatenate([j, j]),
          np.concatenate([layout.rho_index(j, 0), layout.o_r0 + j]))),
        shape=(nx, n_var))

    # bounds
    lower = np.full(n_var, -np.inf)
    upper = np.full(n_var, np.inf)
    lower[:layout.n_rho] = 0.0

    cap_value = params.max_density if params.density_cap_mode == "max-density" \
        else scenario.rho_bar
    cap = cap_value - rho1_frozen
    if np.any(cap < -PIN_TOL):
        worst = float(cap.min())
        raise InfeasibleProblemError(
            f"density cap {cap_value:g} minus frozen rho1 is negative "
            f"(min {worst:.3e}); no feasible rho2 exists")
    upper[:layout.n_rho] = np.clip(cap, 0.0, None).T.ravel()

    lower[layout.o_m:layout.o_m + layout.n_m] = 0.0
    if params.flow_cap is not None:
        upper[layout.o_m:layout.o_m + layout.n_m] = params.flow_cap

    if pinned_rho2_0 is not None:
        pin = np.asarray(pinned_rho2_0, dtype=float)
    elif params.initial_split_mode == "paper-literal":
        pin = scenario.rho0 - rho1_frozen[:, 0]
    else:
        pin = None
    if pin is not None:
        if pin.shape != (nx,):
            raise ValueError(f"pinned rho2_0 must have shape ({nx},)")
        if np.any(pin < -PIN_TOL) or np.any(pin > scenario.rho0 + PIN_TOL):
            raise InfeasibleProblemError(
                "pinned rho2_0 leaves [0, rho0]; cannot satisfy the split constraint")
        pin = np.clip(pin, 0.0, scenario.rho0)
        lower[layout.o_r0:layout.o_r0 + nx] = pin
        upper[layout.o_r0:layout.o_r0 + nx] = pin
    else:
        lower[layout.o_r0:layout.o_r0 + nx] = 0.0
        upper[layout.o_r0:layout.o_r0 + nx] = scenario.rho0

    # incentive budget on the initial controlled mass
    budget_row = sp.csr_matrix(
        (np.full(nx, grid.dx), (np.zeros(nx, dtype=int), layout.o_r0 + j)),
        shape=(1, n_var))
    budget_rhs = params.incentive_fraction * scenario.rho_hat_bar

    # one rotated cone per (cell, flux interval), rho2 taken at the left knot
    steps = np.repeat(np.arange(nt), nx)
    cells = np.tile(j, nt)
    cone_triples = np.column_stack([
        layout.rho_index(cells, steps),
        layout.m_index(cells, steps),
        layout.t_index(cells, steps),
    ])

    # objective
    p_diag = np.zeros(n_var)
    q = np.zeros(n_var)
    obj_const = 0.0
    q[layout.o_t:layout.o_t + layout.n_m] = grid.dx * grid.dt
    tw = time_weights_trapezoid(nt, grid.dt)
    c = params.state_weight
    a_spectral = None
    b_spectral = None
    if cost_kind == "l2":
        knot_w = np.repeat(tw, nx) * grid.dx * c  # per-knot quadrature weight
        p_diag[:layout.n_rho] = 2.0 * knot_w
        flat_rho1 = rho1_frozen.T.ravel()
        q[:layout.n_rho] += 2.0 * knot_w * flat_rho1
        obj_const = float(np.sum(knot_w * flat_rho1 ** 2))
    else:
        m_spec = spectral_transform(nx, domain_length)
        n_rows_slice = nx - 1
        m_coo = sp.coo_matrix(m_spec)
        rows, cols, vals = [], [], []
        for n in range(nt + 1):
            base = n * n_rows_slice
            rows.append(base + m_coo.row)
            cols.append(layout.rho_index(m_coo.col, n))
            vals.append(-m_coo.data)
            rows.append(base + np.arange(n_rows_slice))
            cols.append(layout.o_spectral + base + np.arange(n_rows_slice))
            vals.append(np.ones(n_rows_slice))
        a_spectral = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n_rows_slice * (nt + 1), n_var))
        b_spectral = (m_spec @ rho1_frozen).T.ravel()
        p_diag[layout.o_spectral:] = 2.0 * (c / scenario.rho_bar) * np.repeat(tw, n_rows_slice)

    return ConicProblem(
        layout=layout, grid=grid, cost_kind=cost_kind,
        a_dynamics=a_dynamics, a_initial=a_initial,
        a_spectral=a_spectral, b_spectral=b_spectral,
        budget_row=budget_row, budget_rhs=float(budget_rhs),
        lower=lower, upper=upper, cone_triples=cone_triples,
        p_diag=p_diag, q=q, obj_const=obj_const,
        rho1_frozen=np.array(rho1_frozen),
    )


@dataclass(frozen=True)
class StandardForm:
    """Engine-facing data: min 0.5 x'Px + q'x s.t. A x + s = b, s in K.

    Cone order: one zero cone (block equalities then pinned variables),
    one nonnegative cone (budget, lower-bound rows, upper-bound rows),
    then one 3-dimensional second-order cone per rotated-cone triple.
    """

    p: sp.csc_matrix
    q: np.ndarray
    a: sp.csc_matrix
    b: np.ndarray
    n_zero: int
    n_nonneg: int
    n_soc: int


def standard_form(problem: ConicProblem) -> StandardForm:
    """Flatten the block description into solver standard form."""
    n_var = problem.layout.n_var
    blocks = [problem.a_dynamics, problem.a_initial]
    rhs = [np.zeros(problem.a_dynamics.shape[0]), np.zeros(problem.a_initial.shape[0])]
    if problem.a_spectral is not None:
        blocks.append(problem.a_spectral)
        rhs.append(problem.b_spectral)

    pinned = np.flatnonzero(np.isfinite(problem.lower)
                            & (problem.lower == problem.upper))
    if pinned.size:
        blocks.append(sp.csr_matrix(
            (np.ones(pinned.size), (np.arange(pinned.size), pinned)),
            shape=(pinned.size, n_var)))
        rhs.append(problem.lower[pinned])
    n_zero = sum(b.shape[0] for b in blocks)

    free_mask = np.ones(n_var, dtype=bool)
    free_mask[pinned] = False
    lo_idx = np.flatnonzero(np.isfinite(problem.lower) & free_mask)
    hi_idx = np.flatnonzero(np.isfinite(problem.upper) & free_mask)
    blocks.append(problem.budget_row)
    rhs.append(np.array([problem.budget_rhs]))
    blocks.append(sp.csr_matrix(
        (-np.ones(lo_idx.size), (np.arange(lo_idx.size), lo_idx)),
        shape=(lo_idx.size, n_var)))
    rhs.append(-problem.lower[lo_idx])
    blocks.append(sp.csr_matrix(
        (np.ones(hi_idx.size), (np.arange(hi_idx.size), hi_idx)),
        shape=(hi_idx.size, n_var)))
    rhs.append(problem.upper[hi_idx])
    n_nonneg = 1 + lo_idx.size + hi_idx.size

    # rotated cone (rho, m, t) -> second-order cone rows (rho+t, 2m, rho-t)
    tri = problem.cone_triples
    n_soc = tri.shape[0]
    soc_rows = (3 * np.arange(n_soc)[:, None] + np.array([0, 0, 1, 2, 2])).ravel()
    soc_cols = np.column_stack([
        tri[:, 0], tri[:, 2], tri[:, 1], tri[:, 0], tri[:, 2]]).ravel()
    soc_vals = np.tile(np.array([-1.0, -1.0, -2.0, -1.0, 1.0]), n_soc)
    blocks.append(sp.csr_matrix((soc_vals, (soc_rows, soc_cols)),
                                shape=(3 * n_soc, n_var)))
    rhs.append(np.zeros(3 * n_soc))

    a = sp.vstack(blocks, format="csc")
    b = np.concatenate(rhs)
    p = sp.diags(problem.p_diag, format="csc")
    return StandardForm(p=p, q=problem.q.copy(), a=a, b=b,
                        n_zero=n_zero, n_nonneg=n_nonneg, n_soc=n_soc)


_STATUS_MAP = {
    "Solved": "optimal",
    "AlmostSolved": "max-iters",
    "MaxIterations": "max-iters",
    "MaxTime": "max-iters",
    "InsufficientProgress": "max-iters",
    "NumericalError": "max-iters",
    "PrimalInfeasible": "infeasible",
    "DualInfeasible": "infeasible",
    "AlmostPrimalInfeasible": "infeasible",
    "AlmostDualInfeasible": "infeasible",
}


def solve(problem: ConicProblem, tol_primal: float = 1e-6,
          tol_dual: float = 1e-6, max_iters: int = 200) -> tuple[ControlPlan, SolveReport]:
    """Solve the subproblem with Clarabel and cross-check the residuals.

    The engine is run well below the requested tolerances so that the
    independent kkt_check and the rollout cross-check pass with headroom.
    A reported status of "optimal" is downgraded to "max-iters" if the
    recomputed residuals exceed the requested tolerances.
    """
    sf = standard_form(problem)
    cones = []
    if sf.n_zero:
        cones.append(clarabel.ZeroConeT(sf.n_zero))
    if sf.n_nonneg:
        cones.append(clarabel.NonnegativeConeT(sf.n_nonneg))
    cones.extend([clarabel.SecondOrderConeT(3)] * sf.n_soc)

    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.max_iter = max_iters
    settings.tol_feas = min(tol_primal * 1e-3, 1e-9)
    settings.tol_gap_abs = min(tol_dual * 1e-3, 1e-9)
    settings.tol_gap_rel = min(tol_dual * 1e-3, 1e-9)

    t0 = time.perf_counter()
    solution = clarabel.DefaultSolver(sf.p, sf.q, sf.a, sf.b, cones, settings).solve()
    wall = time.perf_counter() - t0

    x = np.asarray(solution.x)
    z = np.asarray(solution.z)
    status = _STATUS_MAP.get(str(solution.status), "max-iters")
    residuals = kkt_check(problem, x=x, z=z)
    if status == "optimal" and not (residuals.max_primal <= tol_primal
                                    and residuals.max_dual <= tol_dual):
        status = "max-iters"

    layout = problem.layout
    rho2 = x[:layout.n_rho].reshape(layout.nt + 1, layout.nx).T.copy()
    m2 = x[layout.o_m:layout.o_m + layout.n_m].reshape(layout.nt, layout.nx).T.copy()
    rho2_0 = x[layout.o_r0:layout.o_r0 + layout.nx].copy()
    plan = ControlPlan(rho2_0=rho2_0, m2=m2, rho2=rho2)
    report = SolveReport(
        status=status, engine_status=str(solution.status),
        objective=float(solution.obj_val + problem.obj_const),
        primal_residual=residuals.max_primal, dual_residual=residuals.max_dual,
        iterations=int(solution.iterations), wall_time=wall, x=x, z=z)
    return plan, report


@dataclass(frozen=True)
class KktResiduals:
    """Independently recomputed optimality residuals.

    Primal entries measure constraint violation of the point itself; the
    dual entries are populated only when dual multipliers are supplied.
    """

    dynamics: float
    initial: float
    spectral: float
    pins: float
    box: float
    budget: float
    cone: float
    stationarity: Optional[float] = None
    dual_cone: Optional[float] = None
    complementarity: Optional[float] = None

    @property
    def max_primal(self) -> float:
        return max(self.dynamics, self.initial, self.spectral,
                   self.pins, self.box, self.budget, self.cone)

    @property
    def max_dual(self) -> float:
        parts = [v for v in (self.stationarity, self.dual_cone, self.complementarity)
                 if v is not None]
        return max(parts) if parts else float("nan")


def vector_from_plan(problem: ConicProblem, plan: ControlPlan) -> np.ndarray:
    """Embed a ControlPlan into the flat variable vector.

    Epigraph entries are set tight (m^2/rho2, zero where both vanish) and
    spectral auxiliaries to their defining transform values, so residuals
    reflect the plan's own dynamics/bounds/budget violations.
    """
    layout = problem.layout
    x = np.zeros(layout.n_var)
    x[:layout.n_rho] = plan.rho2.T.ravel()
    x[layout.o_m:layout.o_m + layout.n_m] = plan.m2.T.ravel()
    rho_left = plan.rho2[:, :-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t_tight = np.where(rho_left > 0,
                           plan.m2 ** 2 / np.where(rho_left > 0, rho_left, 1.0), 0.0)
    x[layout.o_t:layout.o_t + layout.n_m] = t_tight.T.ravel()
    x[layout.o_r0:layout.o_r0 + layout.nx] = plan.rho2_0
    if problem.a_spectral is not None:
        # z = M (rho1_frozen + rho2), encoded as b_spectral + M rho2
        m_rows = problem.a_spectral[:, :layout.n_rho]
        x[layout.o_spectral:] = problem.b_spectral - m_rows @ x[:layout.n_rho]
    return x


def kkt_check(problem: ConicProblem, plan: Optional[ControlPlan] = None,
              x: Optional[np.ndarray] = None,
              z: Optional[np.ndarray] = None) -> KktResiduals:
    """Recompute all residuals from the problem data alone.

    Accepts either a ControlPlan (primal checks only) or raw solver
    vectors x and optionally duals z in standard-form row order.
    """
    if x is None:
        if plan is None:
            raise ValueError("provide either plan or x")
        x = vector_from_plan(problem, plan)
    layout = problem.layout

    def inf_norm(v) -> float:
        return float(np.max(np.abs(v))) if np.size(v) else 0.0

    r_dyn = inf_norm(problem.a_dynamics @ x)
    r_init = inf_norm(problem.a_initial @ x)
    r_spec = inf_norm(problem.a_spectral @ x - problem.b_spectral) \
        if problem.a_spectral is not None else 0.0

    pinned = np.isfinite(problem.lower) & (problem.lower == problem.upper)
    r_pin = inf_norm(x[pinned] - problem.lower[pinned])
    free = ~pinned
    lo_viol = np.where(np.isfinite(problem.lower) & free,
                       problem.lower - x, -np.inf)
    hi_viol = np.where(np.isfinite(problem.upper) & free,
                       x - problem.upper, -np.inf)
    r_box = float(max(0.0, lo_viol.max(), hi_viol.max()))
    r_budget = float(max(0.0, (problem.budget_row @ x)[0] - problem.budget_rhs))

    tri = problem.cone_triples
    rho_c, m_c, t_c = x[tri[:, 0]], x[tri[:, 1]], x[tri[:, 2]]
    soc_margin = np.sqrt((2 * m_c) ** 2 + (rho_c - t_c) ** 2) - (rho_c + t_c)
    r_cone = float(max(0.0, soc_margin.max()))

    stat = dual_cone = comp = None
    if z is not None:
        sf = standard_form(problem)
        stat = inf_norm(sf.p @ x + sf.q + sf.a.T @ z) / (1.0 + inf_norm(sf.q))
        z_nn = z[sf.n_zero:sf.n_zero + sf.n_nonneg]
        viol_nn = float(max(0.0, -(z_nn.min() if z_nn.size else 0.0)))
        z_soc = z[sf.n_zero + sf.n_nonneg:].reshape(sf.n_soc, 3)
        margins = np.sqrt(z_soc[:, 1] ** 2 + z_soc[:, 2] ** 2) - z_soc[:, 0]
        viol_soc = float(max(0.0, margins.max())) if sf.n_soc else 0.0
        dual_cone = max(viol_nn, viol_soc)
        s = sf.b - sf.a @ x
        obj = 0.5 * float(x @ (sf.p @ x)) + float(sf.q @ x)
        comp = abs(float(s @ z)) / (1.0 + abs(obj))

    return KktResiduals(dynamics=r_dyn, initial=r_init, spectral=r_spec,
                        pins=r_pin, box=r_box, budget=r_budget, cone=r_cone,
                        stationarity=stat, dual_cone=dual_cone,
                        complementarity=comp)


def write_problem_dump(problem: ConicProblem, path) -> None:
    """Write the problem in a plain-text triplet format for external solvers.

    Layout: header lines (dimensions, block sizes, objective constant),
    then one section per block.  Matrix sections list `row col value`
    triplets; vector sections list `index value` pairs; `bounds` lists
    `index lower upper` for variables with at least one finite bound, and
    `cones` lists the (rho, m, t) variable indices of each rotated cone.
    All values use 17 significant digits.
    """
    layout = problem.layout

    def s(v: float) -> str:
        return format(v, ".17g")

    def matrix_lines(mat: sp.spmatrix) -> list[str]:
        coo = mat.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [f"{coo.row[i]} {coo.col[i]} {s(coo.data[i])}" for i in order]

    lines = [
        "ringflow-conic-problem v1",
        f"cost_kind {problem.cost_kind}",
        f"nx {layout.nx} nt {layout.nt}",
        f"vars {layout.n_var} rho2 {layout.n_rho} m2 {layout.n_m}"
        f" epigraph {layout.n_m} rho2_0 {layout.nx} spectral {layout.n_spectral}",
        f"objective_const {s(problem.obj_const)}",
    ]
    sections: list[tuple[str, list[str]]] = [
        ("p_diag", [f"{i} {s(v)}" for i, v in enumerate(problem.p_diag) if v != 0.0]),
        ("q", [f"{i} {s(v)}" for i, v in enumerate(problem.q) if v != 0.0]),
        ("dynamics", matrix_lines(problem.a_dynamics)),
        ("initial", matrix_lines(problem.a_initial)),
    ]
    if problem.a_spectral is not None:
        sections.append(("spectral", matrix_lines(problem.a_spectral)))
        sections.append(("spectral_rhs",
                         [f"{i} {s(v)}" for i, v in enumerate(problem.b_spectral)]))
    sections.append(("budget",
                     matrix_lines(problem.budget_row) + [f"rhs {s(problem.budget_rhs)}"]))
    finite = np.isfinite(problem.lower) | np.isfinite(problem.upper)
    sections.append(("bounds", [
        f"{i} {s(problem.lower[i])} {s(problem.upper[i])}"
        for i in np.flatnonzero(finite)
    ]))
    sections.append(("cones", [f"{a} {b} {c}" for a, b, c in problem.cone_triples]))
    for name, body in sections:
        lines.append(f"section {name} {len(body)}")
        lines.extend(body)
    lines.append("end")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_problem_dump(path) -> dict:
    """Parse a problem dump back into plain arrays (used for cross-validation)."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if lines[0] != "ringflow-conic-problem v1":
        raise ValueError("not a ringflow conic problem dump")
    out: dict = {"cost_kind": lines[1].split()[1]}
    out["nx"], out["nt"] = int(lines[2].split()[1]), int(lines[2].split()[3])
    head = lines[3].split()
    out["n_var"] = int(head[1])
    out["objective_const"] = float(lines[4].split()[1])
    i = 5
    while i < len(lines) and lines[i] != "end":
        _, name, count = lines[i].split()
        body = lines[i + 1:i + 1 + int(count)]
        out[name] = [tuple(tok.split()) for tok in body]
        i += 1 + int(count)
    return out


__all__ = [
    "InfeasibleProblemError", "VariableLayout", "ConicProblem", "SolveReport",
    "assemble", "standard_form", "solve", "KktResiduals", "vector_from_plan",
    "kkt_check", "write_problem_dump", "read_problem_dump",
]
