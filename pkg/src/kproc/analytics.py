"""Closed-form Laplace-transform analytics for the uniform-entrance chain.

Every operation evaluates a transform as a finite sum over the environment's
retained weights and reports, alongside the value, a bound on what the
discarded tail could have contributed. Site arguments are 1-based indices
into the weight list; INFINITY denotes the unstable state, whose weight is 0
by convention, so it is a valid y argument everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import Environment
from .states import INFINITY, State, check_site, is_infinite

__all__ = [
    "TransformResult",
    "laplace_exit",
    "entrance_transform",
    "green",
    "green_xy",
    "corr_transform",
    "first_hit_transform",
    "omega",
]


@dataclass(frozen=True)
class TransformResult:
    """A transform value plus a bound on the truncated-tail contribution."""

    value: float
    truncation_error_bound: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"transform value must be finite, got {self.value!r}")
        if not self.truncation_error_bound >= 0.0:
            raise ValueError("truncation_error_bound must be nonnegative, "
                             f"got {self.truncation_error_bound!r}")


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise ValueError(f"{name} must be positive and finite, got {x!r}")
    return x


def _check_nonneg(name: str, x: float) -> float:
    x = float(x)
    if not x >= 0.0 or not math.isfinite(x):
        raise ValueError(f"{name} must be nonnegative and finite, got {x!r}")
    return x


def _resolvent_terms(weights: np.ndarray, lam: float) -> np.ndarray:
    # lam*g/(1 + lam*g) per site; the building block of every sum below.
    lg = lam * weights
    return lg / (1.0 + lg)


def laplace_exit(gamma_x: float, lam: float) -> float:
    """Transform E[e^(-lambda * exit time)] of the sojourn at a site of weight gamma_x.

    The sojourn is Exponential with mean gamma_x, so the value is
    1/(1 + lambda*gamma_x).
    """
    gamma_x = _check_positive("gamma_x", gamma_x)
    lam = _check_nonneg("lambda", lam)
    return 1.0 / (1.0 + lam * gamma_x)


def _entrance_sites(env: Environment, A) -> np.ndarray:
    sites = np.unique(np.asarray(list(A), dtype=np.int64))
    if sites.size == 0:
        raise ValueError("A must be a nonempty set of site indices")
    if sites[0] < 1 or sites[-1] > env.n:
        raise ValueError(f"A must contain site indices in [1, {env.n}]")
    return sites


def entrance_transform(env: Environment, A, lam: float,
                       from_infinity: bool = True,
                       y: State | None = None) -> TransformResult:
    """Transform E[e^(-lambda * first entrance time into A)].

    Started at the unstable state (from_infinity=True) the value is
    |A| / (|A| + S) with S the sum of lambda*g/(1+lambda*g) over sites outside
    A; started at a site y outside A it is the same divided by
    (1 + lambda*gamma(y)), since the walk must first sit out its sojourn at y.
    The reported bound is lambda*tail_estimate, which dominates the discarded
    complement terms (and the induced value error, since the value is at most
    one and the tail only enlarges the denominator).
    """
    lam = _check_nonneg("lambda", lam)
    sites = _entrance_sites(env, A)
    if from_infinity:
        if y is not None:
            raise ValueError("y must be None when from_infinity is set")
    else:
        if y is None:
            raise ValueError("y is required when from_infinity is not set")
        if not is_infinite(y):
            y_site = check_site(y, env.n, "y")
            if y_site in sites:
                raise ValueError(f"y={y_site} must lie outside A")

    terms = _resolvent_terms(env.weights, lam)
    size_a = float(sites.size)
    complement_sum = float(terms.sum() - terms[sites - 1].sum())
    value = size_a / (size_a + complement_sum)
    if not from_infinity and not is_infinite(y):
        value /= 1.0 + lam * env.weight(int(y))
    return TransformResult(value=value,
                           truncation_error_bound=lam * env.tail_estimate)


def green(env: Environment, c: float, lam: float, x: State) -> TransformResult:
    """Probability of sitting at x at an independent Exponential(lambda) time,
    started at the unstable state.

    Value lam*g(x)/(1+lam*g(x)) over the normalizer c*lam + sum over sites;
    the unstable state itself carries mass c*lam over the same normalizer
    (zero when c=0). The bound propagates the worst-case tail enlargement of
    the normalizer: value * lambda * tail_estimate / normalizer.
    """
    c = _check_nonneg("c", c)
    lam = _check_positive("lambda", lam)
    terms = _resolvent_terms(env.weights, lam)
    denom = c * lam + float(terms.sum())
    if is_infinite(x):
        value = (c * lam) / denom if c > 0.0 else 0.0
    else:
        value = float(terms[check_site(x, env.n, "x") - 1]) / denom
    return TransformResult(value=value,
                           truncation_error_bound=value * lam * env.tail_estimate / denom)


def green_xy(env: Environment, c: float, lam: float, x: State, y: State) -> TransformResult:
    """Occupation transform started at y: green(x) / (1 + lambda*gamma(y)).

    gamma(INFINITY) = 0, so y = INFINITY reduces to green(x) exactly. As a
    process quantity the factorization describes occupation of x != y from a
    start at y; the formula is returned for every (x, y) pair regardless.
    """
    base = green(env, c, lam, x)
    if is_infinite(y):
        return base
    factor = 1.0 + _check_positive("lambda", lam) * env.weight(check_site(y, env.n, "y"))
    return TransformResult(value=base.value / factor,
                           truncation_error_bound=base.truncation_error_bound / factor)


def corr_transform(env: Environment, lam: float, mu: float) -> TransformResult:
    """Two-time correlation transform c_lambda(mu).

    Value: sum over sites of the product of lambda- and mu-resolvent terms,
    normalized by the lambda-resolvent sum. It is the double Laplace transform
    (in both time arguments) of the probability that the chain's clock does
    not ring during an interval [s, s+t] observed from stationarity at s.
    Tail bound: each discarded numerator term is at most
    lambda*mu*gamma^2 <= lambda*mu*gamma_last*tail, each denominator term at
    most lambda*gamma; both propagated to the quotient.
    """
    lam = _check_positive("lambda", lam)
    mu = _check_positive("mu", mu)
    terms_lam = _resolvent_terms(env.weights, lam)
    terms_mu = _resolvent_terms(env.weights, mu)
    denom = float(terms_lam.sum())
    value = float((terms_lam * terms_mu).sum()) / denom
    tail = env.tail_estimate
    gamma_last = float(env.weights[-1])
    bound = (lam * mu * gamma_last * tail + value * lam * tail) / denom
    return TransformResult(value=value, truncation_error_bound=bound)


def first_hit_transform(env: Environment, c: float, x: State, lam: float) -> TransformResult:
    """Transform E[e^(-lambda * first hitting time of x)] from the unstable state.

    Value (1 + c*lambda + S)^(-1) with S summing lambda*g/(1+lambda*g) over
    the sites other than x. Bound: lambda*tail_estimate dominates the
    discarded terms of S (and the induced value error).
    """
    c = _check_nonneg("c", c)
    lam = _check_positive("lambda", lam)
    site = check_site(x, env.n, "x")
    terms = _resolvent_terms(env.weights, lam)
    others = float(terms.sum() - terms[site - 1])
    value = 1.0 / (1.0 + c * lam + others)
    return TransformResult(value=value,
                           truncation_error_bound=lam * env.tail_estimate)


def omega(env: Environment, i: int, j: int, r: float) -> TransformResult:
    """The auxiliary decay transform (1 + S_i(r))^(-j).

    S_i(r) sums r*g/(1+r*g) over all sites when i=0 and over sites other than
    site 1 when i=1; j is 1 or 2. Bound: by the derivative of (1+S)^(-j), a
    tail increment of at most r*tail_estimate moves the value by at most
    value * j * r * tail_estimate / (1 + S).
    """
    if i not in (0, 1):
        raise ValueError(f"i must be 0 or 1, got {i!r}")
    if j not in (1, 2):
        raise ValueError(f"j must be 1 or 2, got {j!r}")
    r = _check_positive("r", r)
    terms = _resolvent_terms(env.weights, r)
    s = float(terms.sum())
    if i == 1:
        s -= float(terms[0])
    value = (1.0 + s) ** (-j)
    bound = value * j * r * env.tail_estimate / (1.0 + s)
    return TransformResult(value=value, truncation_error_bound=bound)
