"""Experiment configuration: JSON surface, defaults, validation.

A configuration is a flat JSON object.  Every key is optional; the
defaults reproduce the reference ring-road scenario (|Omega| = 2 mi,
T = 8 min, u0 = 1 mi/min, rho_star = 10, c = 0.1, beta = 0.2, nx = 48,
cfl = 0.5, N = 1, mix-norm cost).  Unknown keys are rejected.

Recognized keys and defaults::

    domain_length       2.0        horizon            8.0
    free_flow_speed     1.0        max_density        10.0
    state_weight        0.1        beta               0.2
    horizon_splits      1          flow_cap           null
    density_cap_mode    "max-density"
    initial_split_mode  "free"     budget_renewal     "renew"
    nx                  48         cfl                0.5
    cost_kind           "hm1"      max_outer_iters    10
    rel_change_stop     1e-3       tol_primal         1e-6
    tol_dual            1e-6       solver_max_iters   200
    out_dir             "out"      emit_svg           false
    preset              null
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from typing import Optional

from .domain import Params
from .optimizer import BUDGET_RENEWAL_MODES, OuterLoopConfig


class ConfigError(ValueError):
    """Malformed or semantically invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one experiment run."""

    domain_length: float = 2.0
    horizon: float = 8.0
    free_flow_speed: float = 1.0
    max_density: float = 10.0
    state_weight: float = 0.1
    beta: float = 0.2
    horizon_splits: int = 1
    flow_cap: Optional[float] = None
    density_cap_mode: str = "max-density"
    initial_split_mode: str = "free"
    budget_renewal: str = "renew"
    nx: int = 48
    cfl: float = 0.5
    cost_kind: str = "hm1"
    max_outer_iters: int = 10
    rel_change_stop: float = 1e-3
    tol_primal: float = 1e-6
    tol_dual: float = 1e-6
    solver_max_iters: int = 200
    out_dir: str = "out"
    emit_svg: bool = False
    preset: Optional[str] = None

    def to_params(self) -> Params:
        return Params(
            domain_length=self.domain_length, horizon=self.horizon,
            free_flow_speed=self.free_flow_speed, max_density=self.max_density,
            state_weight=self.state_weight, incentive_fraction=self.beta,
            horizon_splits=self.horizon_splits, flow_cap=self.flow_cap,
            density_cap_mode=self.density_cap_mode,
            initial_split_mode=self.initial_split_mode)

    def to_outer_config(self) -> OuterLoopConfig:
        return OuterLoopConfig(
            max_outer_iters=self.max_outer_iters,
            rel_change_stop=self.rel_change_stop, cost_kind=self.cost_kind,
            tol_primal=self.tol_primal, tol_dual=self.tol_dual,
            solver_max_iters=self.solver_max_iters)

    def as_dict(self) -> dict:
        return asdict(self)


_INT_KEYS = {"horizon_splits", "nx", "max_outer_iters", "solver_max_iters"}
_FLOAT_KEYS = {"domain_length", "horizon", "free_flow_speed", "max_density",
               "state_weight", "beta", "flow_cap", "cfl", "rel_change_stop",
               "tol_primal", "tol_dual"}
_STR_KEYS = {"density_cap_mode", "initial_split_mode", "budget_renewal",
             "cost_kind", "out_dir"}
_BOOL_KEYS = {"emit_svg"}


def _coerce(key: str, value):
    if key in _BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigError(f"key {key!r} must be a boolean, got {value!r}")
        return value
    if key == "preset":
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"key 'preset' must be a string or null, got {value!r}")
        return value
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"key {key!r} must be a string, got {value!r}")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
        return value
    if key in _FLOAT_KEYS:
        if value is None and key == "flow_cap":
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key {key!r} must be a number, got {value!r}")
        return float(value)
    raise ConfigError(f"unknown configuration key {key!r}")


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Collect semantic violations (delegates parameter checks to Params)."""
    errors: list[str] = []
    try:
        cfg.to_params()
    except ValueError as exc:
        errors.append(str(exc))
    try:
        cfg.to_outer_config()
    except ValueError as exc:
        errors.append(str(exc))
    if cfg.nx < 8:
        errors.append(f"nx must be at least 8, got {cfg.nx}")
    if not 0.0 < cfg.cfl <= 1.0:
        errors.append(f"cfl must lie in (0, 1], got {cfg.cfl}")
    if cfg.budget_renewal not in BUDGET_RENEWAL_MODES:
        errors.append(f"budget_renewal must be one of {BUDGET_RENEWAL_MODES}")
    if cfg.tol_primal <= 0 or cfg.tol_dual <= 0:
        errors.append("solver tolerances must be positive")
    if cfg.rel_change_stop <= 0:
        errors.append("rel_change_stop must be positive")
    return errors


def parse_config(text: str) -> ExperimentConfig:
    """Parse a JSON configuration string; empty input means all defaults.

    Raises ConfigError with line information on syntax errors and with a
    joined message listing all semantic violations.
    """
    text = text.strip()
    if not text:
        data = {}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"configuration syntax error at line {exc.lineno}, "
                f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    coerced = {key: _coerce(key, value) for key, value in data.items()}
    try:
        cfg = ExperimentConfig(**coerced)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    errors = validate_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))
    return cfg


def serialize_config(cfg: ExperimentConfig) -> str:
    """Render a configuration as canonical JSON (round-trips losslessly)."""
    return json.dumps(cfg.as_dict(), indent=2, sort_keys=True) + "\n"


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Copy a configuration with replaced fields, re-running validation."""
    new = replace(cfg, **overrides)
    errors = validate_config(new)
    if errors:
        raise ConfigError("; ".join(errors))
    return new


__all__ = ["ConfigError", "ExperimentConfig", "parse_config",
           "serialize_config", "validate_config", "with_overrides"]
