"""Aging functionals, their Monte Carlo estimators, and the limit laws.

The two-time quantity of interest is the probability that the process,
started uniformly and observed at a small time t, keeps its value for a
further window theta*t. As t shrinks this converges (for almost every
environment) to a generalized-arcsine law in the ratio theta alone; the
closed forms below give that limit, its density and derivative, the
companion ratio transform, and the hat/tilde pair whose difference
reproduces the limit exactly.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .analytics import corr_transform
from .env import Environment, check_alpha
from .kernels import run_to_target
from .kprocess import KParams, Trajectory, state_at
from .quadrature import g_norm, integral_01, integral_power_left, weight_norm
from .rng import SeedSpec, mean_and_se, run_chunked

__all__ = [
    "INDICATOR",
    "CONDITIONAL",
    "AgingCurve",
    "phi1",
    "phi2",
    "lambda_mc",
    "lambda0",
    "lambda0_prime",
    "lambda0_density",
    "c_theta",
    "lambda_hat",
    "lambda_tilde",
    "corollary_limit",
    "corr_transform_limit_check",
    "write_curve_csv",
]

INDICATOR = "indicator"
CONDITIONAL = "conditional"

_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class AgingCurve:
    """Values of an aging curve over an increasing theta grid. Monte Carlo
    curves carry standard errors and the observation time t; analytic limit
    curves have empty std_errors and t = None."""

    theta_grid: np.ndarray
    values: np.ndarray
    std_errors: np.ndarray
    alpha: float
    t: float | None = None

    def __post_init__(self) -> None:
        grid = np.ascontiguousarray(self.theta_grid, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        errors = np.ascontiguousarray(self.std_errors, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("theta_grid must be a nonempty 1-d array")
        if np.any(grid < 0.0) or np.any(np.diff(grid) <= 0.0):
            raise ValueError("theta_grid must be nonnegative and strictly increasing")
        if values.shape != grid.shape:
            raise ValueError("values must match theta_grid in length")
        if np.any(values < -_MONOTONE_SLACK) or np.any(values > 1.0 + _MONOTONE_SLACK):
            raise ValueError("curve values must lie in [0, 1]")
        if np.any(np.diff(values) > _MONOTONE_SLACK):
            raise ValueError("curve values must be nonincreasing in theta")
        if errors.size and (errors.shape != grid.shape or np.any(errors < 0.0)):
            raise ValueError("std_errors must be empty or nonnegative, matching the grid")
        check_alpha(self.alpha)
        if self.t is not None and not (self.t > 0.0 and math.isfinite(self.t)):
            raise ValueError(f"t must be positive and finite, got {self.t!r}")
        object.__setattr__(self, "theta_grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "std_errors", errors)
        object.__setattr__(self, "alpha", float(self.alpha))
        for arr in (grid, values, errors):
            arr.setflags(write=False)


def _check_window(traj: Trajectory, t: float, tprime: float) -> None:
    if not t > 0.0 or not tprime > 0.0:
        raise ValueError("t and tprime must be positive")
    if t + tprime > traj.horizon:
        raise ValueError(f"window [{t}, {t + tprime}] exceeds horizon {traj.horizon}")


def phi1(traj: Trajectory, t: float, tprime: float) -> int:
    """1 iff the (merged) path is constant on [t, t + tprime]."""
    _check_window(traj, t, tprime)
    lo = int(np.searchsorted(traj.times, t, side="right"))
    hi = int(np.searchsorted(traj.times, t + tprime, side="right"))
    return 1 if lo == hi else 0


def phi2(traj: Trajectory, t: float, tprime: float) -> int:
    """1 iff the path holds the same value at t and at t + tprime."""
    _check_window(traj, t, tprime)
    return 1 if state_at(traj, t) == state_at(traj, t + tprime) else 0


def _lambda_chunk(count, seed, weights, c, t, thetas, estimator):
    rng = seed.generator()
    targets = np.full(count, t)
    state, _, merged = run_to_target(weights, c, targets, 0, rng)
    windows = thetas * t
    if estimator == INDICATOR:
        vals = (merged[:, None] > windows[None, :]).astype(np.float64)
        sums = vals.sum(axis=0)
        return np.concatenate(([count, 0.0], sums, sums))
    finite = state > 0
    rejected = count - int(finite.sum())
    n = weights.size
    gamma_at = weights[state[finite] - 1]
    if c == 0.0:
        # Residual of the merged sojourn: self-placements thin the jump rate.
        rates = (n - 1) / (n * gamma_at)
    else:
        rates = 1.0 / gamma_at
    vals = np.exp(-np.outer(rates, windows))
    return np.concatenate(([count - rejected, float(rejected)],
                           vals.sum(axis=0), (vals * vals).sum(axis=0)))


def lambda_mc(params: KParams, t: float, theta_grid, reps: int, seed: SeedSpec,
              estimator: str = CONDITIONAL, workers: int = 1) -> AgingCurve:
    """Monte Carlo aging curve at observation time t over a theta grid,
    started uniformly (the chain's entrance from the unstable state).

    INDICATOR averages, per replica, the event that the value at t persists
    through [t, t + theta*t]. CONDITIONAL replaces the indicator by its
    exact conditional probability given the state at t (zero extra variance
    from the residual clock); the two agree in expectation at every
    truncation level. Replicas sitting at the unstable state at t (possible
    only for c > 0) are rejected from CONDITIONAL with a counted warning.
    """
    if params.env.alpha is None:
        raise ValueError("the environment must carry a tail index alpha")
    if not t > 0.0 or not math.isfinite(t):
        raise ValueError(f"t must be positive and finite, got {t!r}")
    if estimator not in (INDICATOR, CONDITIONAL):
        raise ValueError(f"estimator must be INDICATOR or CONDITIONAL, got {estimator!r}")
    thetas = np.ascontiguousarray(theta_grid, dtype=np.float64)
    if thetas.ndim != 1 or thetas.size == 0:
        raise ValueError("theta_grid must be a nonempty 1-d array")
    if np.any(thetas < 0.0) or np.any(np.diff(thetas) <= 0.0):
        raise ValueError("theta_grid must be nonnegative and strictly increasing")
    if reps < 1:
        raise ValueError(f"reps must be a positive integer, got {reps!r}")

    args = (params.weights, params.c, float(t), thetas, estimator)
    stats = run_chunked(_lambda_chunk, reps, seed, args, workers)
    used, rejected = stats[0], stats[1]
    if rejected:
        warnings.warn(f"rejected {int(rejected)} of {reps} replicas at the "
                      "unstable state at time t", stacklevel=2)
    if used < 1.0:
        raise ValueError("all replicas were rejected; increase reps")
    k = thetas.size
    sums, sumsq = stats[2:2 + k], stats[2 + k:]
    values = np.empty(k)
    errors = np.empty(k)
    for i in range(k):
        values[i], errors[i] = mean_and_se(used, float(sums[i]), float(sumsq[i]))
    return AgingCurve(theta_grid=thetas, values=values, std_errors=errors,
                      alpha=params.env.alpha, t=float(t))


def lambda0(theta: float, alpha: float) -> float:
    """The limiting aging curve: the upper tail of the generalized-arcsine
    distribution, as a function of the window ratio theta >= 0."""
    check_alpha(alpha)
    if theta < 0.0:
        raise ValueError(f"theta must be nonnegative, got {theta!r}")
    if theta == 0.0:
        return 1.0
    a = float(alpha)
    integral = integral_power_left(lambda v: (1.0 - v) ** (-a), a, upper=1.0 / (1.0 + theta))
    return math.sin(math.pi * a) / math.pi * integral


def lambda0_prime(theta: float, alpha: float) -> float:
    """Derivative of lambda0 in theta (closed form, negative for theta > 0)."""
    check_alpha(alpha)
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    a = float(alpha)
    return -math.sin(math.pi * a) / math.pi * theta ** (-a) / (1.0 + theta)


def lambda0_density(z: float, alpha: float) -> float:
    """Density at z > 0 of the limit in distribution of (time / weight at the
    occupied state); its Laplace transform is lambda0."""
    check_alpha(alpha)
    if not z > 0.0:
        raise ValueError(f"z must be positive, got {z!r}")
    a = float(alpha)
    if z < 50.0:
        inner = a * integral_power_left(lambda s: math.exp(-(1.0 - s) * z), a)
    else:
        # Large z concentrates the s-integral in a 1/z layer at s=1 that
        # adaptive subdivision can miss; rescale v = (1-s)z to spread it out.
        # The clipped remainder beyond v = z/2 is below e^(-z/2), negligible.
        top = min(0.5 * z, 745.0)
        inner = (a / z) * top * integral_01(
            lambda u: (1.0 - top * u / z) ** (a - 1.0) * math.exp(-top * u))
    return z ** (a - 1.0) * inner / (g_norm(a) * weight_norm(a))


def c_theta(theta: float, alpha: float) -> float:
    """Ratio transform of the environment averages: the limit of the
    two-time correlation transform along mu = lambda/theta."""
    check_alpha(alpha)
    if theta < 0.0:
        raise ValueError(f"theta must be nonnegative, got {theta!r}")
    if theta == 0.0:
        return 1.0
    a = float(alpha)
    head = integral_power_left(lambda w: 1.0 / ((1.0 + w) * (theta + w)), 2.0 - a)
    tail = integral_power_left(lambda s: 1.0 / ((1.0 + s) * (1.0 + theta * s)), a)
    return (head + tail) / weight_norm(a)


def _exp_ratio(arg: float, power: float, s: float) -> float:
    """e^(-arg/s) * s^power with the 0*inf corner at s -> 0 sent to 0."""
    if arg / s > 745.0:
        return 0.0
    return math.exp(-arg / s) * s ** power


def lambda_hat(theta: float, alpha: float) -> float:
    """First term of the hat/tilde decomposition of the aging limit."""
    check_alpha(alpha)
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    a = float(alpha)
    head = integral_power_left(lambda v: math.exp(-theta * v), a)
    tail = integral_01(lambda s: _exp_ratio(theta, -1.0 - a, s))
    return (head + tail) / (g_norm(a) * weight_norm(a))


def lambda_tilde(theta: float, alpha: float) -> float:
    """Second term of the decomposition, a genuinely nested double integral."""
    check_alpha(alpha)
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    a = float(alpha)

    def inner(s: float) -> float:
        arg = (1.0 + theta) - s
        head = integral_power_left(lambda v: math.exp(-arg * v), 1.0 + a)
        tail = integral_01(lambda r: _exp_ratio(arg, -2.0 - a, r))
        return head + tail

    outer = integral_power_left(inner, 1.0 + a)
    return outer / (g_norm(a) * weight_norm(a))


def corollary_limit(theta: float, alpha: float, psi1, psi2) -> float:
    """Limit value psi1(theta) * lambda0(theta) minus the integral of
    psi2(s, theta) against the derivative of lambda0 over (0, theta)."""
    check_alpha(alpha)
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    a = float(alpha)
    first = float(psi1(theta))
    if not math.isfinite(first):
        raise ValueError(f"psi1({theta}) is not finite")

    def weighted(s: float) -> float:
        v = float(psi2(s, theta))
        if not math.isfinite(v):
            raise ValueError(f"psi2({s}, {theta}) is not finite")
        return v / (1.0 + s)

    integral = integral_power_left(weighted, 1.0 - a, upper=theta)
    return first * lambda0(theta, a) + math.sin(math.pi * a) / math.pi * integral


def corr_transform_limit_check(alpha: float, theta: float, lambda_big: float,
                               env: Environment) -> tuple[float, float]:
    """The finite-environment correlation transform at (lambda, lambda/theta)
    next to its deterministic limit c_theta, for convergence experiments."""
    check_alpha(alpha)
    if not theta > 0.0 or not lambda_big > 0.0:
        raise ValueError("theta and lambda_big must be positive")
    finite_value = corr_transform(env, lambda_big, lambda_big / theta).value
    return finite_value, c_theta(theta, alpha)


def write_curve_csv(curve: AgingCurve, path: str | os.PathLike) -> None:
    """Write `theta,value,std_error` rows; analytic curves get std_error 0."""
    errors = curve.std_errors if curve.std_errors.size else np.zeros(curve.theta_grid.size)
    with open(path, "w") as fh:
        fh.write("theta,value,std_error\n")
        for th, v, se in zip(curve.theta_grid, curve.values, errors):
            fh.write(f"{th:.17g},{v:.17g},{se:.17g}\n")
