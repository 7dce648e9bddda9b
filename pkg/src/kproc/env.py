"""Heavy-tailed random environments: ordered positive weight sequences.

The canonical environment is the ordered jump sequence of a stable
subordinator over a unit interval: with T_1 < T_2 < ... the arrival times of
a unit-rate Poisson process, the i-th largest weight is T_i^(-1/alpha).
Truncating after n_terms keeps the largest n_terms weights exactly; the
discarded mass is summarized by tail_mass_estimate.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .rng import SeedSpec

__all__ = [
    "Environment",
    "check_alpha",
    "sample_gamma",
    "tail_mass_estimate",
    "env_from_weights",
    "save_env",
    "load_env",
]


def check_alpha(alpha: float) -> float:
    """Validate a tail exponent, which must lie strictly inside (0, 1)."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must lie in the open interval (0, 1), got {alpha!r}")
    return alpha


@dataclass(frozen=True, eq=False)
class Environment:
    """Nonincreasing positive weights plus sampling provenance.

    weights: trap depths (mean holding times), largest first.
    alpha: tail exponent the weights were sampled at; None for hand-built
        environments.
    tail_estimate: estimated total weight beyond the truncation; 0 when the
        weight list is exact by construction.
    """

    weights: np.ndarray
    alpha: float | None = None
    tail_estimate: float = 0.0

    def __post_init__(self) -> None:
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty one-dimensional sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        if np.any(np.diff(w) > 0.0):
            raise ValueError("weights must be nonincreasing")
        if self.alpha is not None:
            object.__setattr__(self, "alpha", check_alpha(self.alpha))
        t = float(self.tail_estimate)
        if not math.isfinite(t) or t < 0.0:
            raise ValueError(f"tail_estimate must be finite and nonnegative, got {t!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "tail_estimate", t)
        w.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.weights.size)

    def weight(self, site: int) -> float:
        """Weight of a 1-based site index."""
        if not 1 <= site <= self.n:
            raise ValueError(f"site must be in [1, {self.n}], got {site}")
        return float(self.weights[site - 1])


def tail_mass_estimate(alpha: float, n_terms: int) -> float:
    """Estimated expected weight mass discarded beyond the first n_terms.

    The i-th weight decays like i^(-1/alpha), so the discarded mass is about
    the integral of x^(-1/alpha) beyond n_terms:
    (alpha/(1-alpha)) * n_terms^(1-1/alpha).
    """
    alpha = check_alpha(alpha)
    n_terms = int(n_terms)
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    return (alpha / (1.0 - alpha)) * n_terms ** (1.0 - 1.0 / alpha)


def sample_gamma(alpha: float, n_terms: int, seed: SeedSpec) -> Environment:
    """Sample the n_terms largest subordinator jumps over a unit interval.

    Exact for the retained terms: the i-th weight is T_i^(-1/alpha) with T_i
    the i-th unit-rate Poisson arrival, which is decreasing by construction.
    """
    alpha = check_alpha(alpha)
    n_terms = int(n_terms)
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    arrivals = np.cumsum(seed.generator().standard_exponential(n_terms))
    weights = arrivals ** (-1.0 / alpha)
    return Environment(weights=weights, alpha=alpha,
                       tail_estimate=tail_mass_estimate(alpha, n_terms))


def env_from_weights(weights) -> Environment:
    """Build an exact environment from arbitrary positive weights (sorted here)."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty one-dimensional sequence")
    return Environment(weights=np.sort(w)[::-1], alpha=None, tail_estimate=0.0)


def save_env(env: Environment, path: str | os.PathLike) -> None:
    """Write an environment as .env.json."""
    doc = {
        "alpha": env.alpha,
        "weights": env.weights.tolist(),
        "tail_estimate": env.tail_estimate,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_env(path: str | os.PathLike) -> Environment:
    """Read an environment written by save_env."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        weights = doc["weights"]
        alpha = doc["alpha"]
        tail = doc["tail_estimate"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not an environment file: {path}") from exc
    return Environment(weights=np.asarray(weights, dtype=np.float64),
                       alpha=alpha, tail_estimate=tail)
