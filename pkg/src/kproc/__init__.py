"""Simulation and numerical verification for uniform-entrance jump processes
with heavy-tailed holding weights, and the matching trap model on the
complete graph."""

from .aging import (
    CONDITIONAL,
    INDICATOR,
    AgingCurve,
    c_theta,
    corollary_limit,
    corr_transform_limit_check,
    lambda0,
    lambda0_density,
    lambda0_prime,
    lambda_hat,
    lambda_mc,
    lambda_tilde,
    phi1,
    phi2,
    write_curve_csv,
)
from .analytics import (
    TransformResult,
    corr_transform,
    entrance_transform,
    first_hit_transform,
    green,
    green_xy,
    laplace_exit,
    omega,
)
from .backend import backend_name
from .env import (
    Environment,
    env_from_weights,
    load_env,
    sample_gamma,
    save_env,
    tail_mass_estimate,
)
from .kprocess import (
    KParams,
    Trajectory,
    corr_mc,
    entrance_state,
    entrance_states,
    entrance_time_mc,
    exit_transform_mc,
    first_hit_time_mc,
    green_mc,
    laplace_transform_mc,
    read_trajectory_csv,
    simulate_k,
    sojourn_lengths,
    state_at,
    write_trajectory_csv,
)
from .rng import MCEstimate, SeedSpec
from .states import INFINITY, State, is_infinite
from .trapmodel import (
    UNIFORM,
    TrapEnv,
    load_trap_env,
    rescaled_env,
    sample_trap_env,
    save_trap_env,
    simulate_trap,
)

__version__ = "0.1.0"

__all__ = [
    "AgingCurve",
    "CONDITIONAL",
    "Environment",
    "INDICATOR",
    "INFINITY",
    "KParams",
    "MCEstimate",
    "SeedSpec",
    "State",
    "Trajectory",
    "TransformResult",
    "TrapEnv",
    "UNIFORM",
    "backend_name",
    "c_theta",
    "corollary_limit",
    "corr_mc",
    "corr_transform",
    "corr_transform_limit_check",
    "entrance_state",
    "entrance_states",
    "entrance_time_mc",
    "entrance_transform",
    "env_from_weights",
    "exit_transform_mc",
    "first_hit_time_mc",
    "first_hit_transform",
    "green",
    "green_mc",
    "green_xy",
    "is_infinite",
    "lambda0",
    "lambda0_density",
    "lambda0_prime",
    "lambda_hat",
    "lambda_mc",
    "lambda_tilde",
    "laplace_exit",
    "laplace_transform_mc",
    "load_env",
    "load_trap_env",
    "omega",
    "phi1",
    "phi2",
    "read_trajectory_csv",
    "rescaled_env",
    "sample_gamma",
    "sample_trap_env",
    "save_env",
    "save_trap_env",
    "simulate_k",
    "simulate_trap",
    "sojourn_lengths",
    "state_at",
    "tail_mass_estimate",
    "write_curve_csv",
    "write_trajectory_csv",
]
