"""Independent oracles for the closed-form transforms and chain statistics.

Everything here deliberately avoids the package's own quadrature layer: the
integrals run on fixed composite-Simpson grids after explicit endpoint
substitutions, derivatives come from centered finite differences, and chain
occupations come from a brute-force generator solve. Agreement between these
routines and the package is a two-route check, not a self-comparison.
"""

import math

import numpy as np


def simpson(values: np.ndarray, step: float) -> np.ndarray:
    """Composite Simpson rule along the last axis (odd sample count)."""
    if values.shape[-1] % 2 != 1:
        raise ValueError("need an odd number of samples")
    acc = (values[..., 0] + values[..., -1]
           + 4.0 * values[..., 1:-1:2].sum(axis=-1)
           + 2.0 * values[..., 2:-1:2].sum(axis=-1))
    return acc * step / 3.0


def simpson_01(f, points: int = 2 ** 16 + 1) -> float:
    """Simpson integral of a vectorized integrand over [0, 1]."""
    u = np.linspace(0.0, 1.0, points)
    return float(simpson(f(u), u[1] - u[0]))


def power_left(f, p: float, upper: float = 1.0, points: int = 2 ** 16 + 1) -> float:
    """integral of f(v) v^(p-1) over (0, upper), substituting u = (v/upper)^p.

    The substitution absorbs the v^(p-1) weight exactly, so Simpson sees
    f(upper * u^(1/p)) * upper^p / p, smooth whenever f is.
    """
    return upper ** p / p * simpson_01(lambda u: f(upper * u ** (1.0 / p)), points)


def lambda0_oracle(theta: float, alpha: float) -> float:
    # (sin(pi a)/pi) * integral over (0, 1/(1+theta)) of v^(a-1) (1-v)^(-a) dv
    b = 1.0 / (1.0 + theta)
    val = power_left(lambda v: (1.0 - v) ** (-alpha), alpha, upper=b)
    return math.sin(math.pi * alpha) / math.pi * val


def lambda0_prime_fd(f, theta: float, alpha: float, h: float = 1e-4) -> float:
    # centered finite difference; O(h^2) truncation error
    return (f(theta + h, alpha) - f(theta - h, alpha)) / (2.0 * h)


def weight_norm_oracle(alpha: float) -> float:
    # integral over (0, inf) of w^(-a)/(1+w) dw, split at 1 and flipped
    head = power_left(lambda w: 1.0 / (1.0 + w), 1.0 - alpha)
    tail = power_left(lambda s: 1.0 / (1.0 + s), alpha)
    return head + tail


def c_theta_oracle(theta: float, alpha: float) -> float:
    # integral over (0, inf) of w^(1-a)/((1+w)(theta+w)) dw, normalized
    head = power_left(lambda w: 1.0 / ((1.0 + w) * (theta + w)), 2.0 - alpha)
    tail = power_left(lambda s: 1.0 / ((1.0 + s) * (1.0 + theta * s)), alpha)
    return (head + tail) / weight_norm_oracle(alpha)


def lambda_hat_closed(theta: float, alpha: float) -> float:
    # integral over (0, inf) of e^(-theta/w) w^(-1-a) dw equals
    # theta^(-a) Gamma(a) after w = theta/x, so the normalized value is
    # sin(pi a)/(pi a) * theta^(-a)
    return math.sin(math.pi * alpha) / (math.pi * alpha) * theta ** (-alpha)


def lambda_tilde_oracle(theta: float, alpha: float) -> float:
    # the inner w-integral has the closed form q^(-1-a) Gamma(1+a) at
    # q = 1 + theta - s, collapsing the double integral to
    # (sin(pi a)/pi) * integral over (0,1) of s^a (1+theta-s)^(-1-a) ds
    val = power_left(lambda s: (1.0 + theta - s) ** (-1.0 - alpha), 1.0 + alpha)
    return math.sin(math.pi * alpha) / math.pi * val


def _norm(alpha: float) -> float:
    return math.gamma(alpha + 1.0) * math.pi / math.sin(math.pi * alpha)


def _density_inner(z: np.ndarray, alpha: float, points: int = 2 ** 14 + 1) -> np.ndarray:
    """a * integral over (0,1) of s^(a-1) e^(-(1-s)z) ds, vectorized over z.

    Small z: substitute u = s^a, leaving e^(-(1-u^(1/a))z) on a unit grid.
    Large z: the mass sits in a 1/z layer at s = 1, so integrate the layer
    variable v = (1-s)z over (0, min(z/2, 745)) instead; the clipped
    remainder is below e^(-z/2).
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    out = np.empty_like(z)
    u = np.linspace(0.0, 1.0, points)
    step = u[1] - u[0]
    s = u ** (1.0 / alpha)

    for lo in range(0, z.size, 512):
        zc = z[lo:lo + 512]
        res = np.empty_like(zc)
        small = zc < 50.0
        if small.any():
            vals = np.exp(-(1.0 - s)[None, :] * zc[small, None])
            res[small] = simpson(vals, step)
        big = ~small
        if big.any():
            zb = zc[big]
            top = np.minimum(0.5 * zb, 745.0)
            v = u[None, :] * top[:, None]
            vals = (1.0 - v / zb[:, None]) ** (alpha - 1.0) * np.exp(-v)
            res[big] = alpha / zb * top * simpson(vals, step)
        out[lo:lo + 512] = res
    return out


def density_oracle(z, alpha: float) -> np.ndarray:
    """Vectorized Simpson evaluation of the sojourn-ratio limit density."""
    z = np.atleast_1d(np.asarray(z, dtype=np.float64))
    return z ** (alpha - 1.0) * _density_inner(z, alpha) / _norm(alpha)


def _density_head(alpha: float, theta: float, points: int) -> float:
    """integral of e^(-theta z) density(z) over (0, 1], with u = z^a.

    The Simpson integrand is e^(-theta z) density(z) z^(1-a) / a at
    z = u^(1/a); its u = 0 limit is 1/norm because the inner integral
    tends to 1 as z tends to 0.
    """
    u = np.linspace(0.0, 1.0, points)
    z = u[1:] ** (1.0 / alpha)
    vals = np.concatenate(([1.0 / _norm(alpha)],
                           np.exp(-theta * z) * density_oracle(z, alpha)
                           * z ** (1.0 - alpha)))
    return float(simpson(vals, u[1] - u[0])) / alpha


def _density_tail(alpha: float, theta: float, points: int) -> float:
    """integral of e^(-theta z) density(z) over (1, inf), flipped to s = 1/z.

    The flipped integrand e^(-theta/s) density(1/s) s^(-2) behaves like
    (a/norm) s^(-a) near s = 0, so substitute u = s^(1-a); the remaining
    factor j(s) = e^(-theta/s) density(1/s) s^(a-2) has limit a/norm at 0
    when theta = 0 and limit 0 otherwise.
    """
    u = np.linspace(0.0, 1.0, points)
    s = u[1:] ** (1.0 / (1.0 - alpha))
    j0 = alpha / _norm(alpha) if theta == 0.0 else 0.0
    vals = np.concatenate(([j0],
                           np.exp(-theta / s) * density_oracle(1.0 / s, alpha)
                           * s ** (alpha - 2.0)))
    return float(simpson(vals, u[1] - u[0])) / (1.0 - alpha)


def density_normalization_oracle(alpha: float, points: int = 2 ** 12 + 1) -> float:
    """integral of density_oracle over (0, inf)."""
    return _density_head(alpha, 0.0, points) + _density_tail(alpha, 0.0, points)


def density_laplace_oracle(theta: float, alpha: float, points: int = 2 ** 12 + 1) -> float:
    """integral of e^(-theta z) density_oracle(z) over (0, inf)."""
    return _density_head(alpha, theta, points) + _density_tail(alpha, theta, points)


def stationary_infinity_fraction(weights, c: float) -> float:
    """Brute-force stationary occupation of the unstable state for c > 0.

    Builds the explicit (n+1)-state generator (state 0 holds Exp(c/n) then
    jumps uniformly; site x holds Exp(gamma_x) then returns) and solves
    pi Q = 0 directly.
    """
    w = np.asarray(weights, dtype=np.float64)
    n = w.size
    q = np.zeros((n + 1, n + 1))
    q[0, 1:] = (n / c) / n
    q[0, 0] = -n / c
    q[1:, 0] = 1.0 / w
    q[np.arange(1, n + 1), np.arange(1, n + 1)] = -1.0 / w
    a = np.vstack([q.T, np.ones(n + 1)])
    b = np.zeros(n + 2)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    return float(pi[0])


def frechet_cdf(w, alpha: float):
    """P(largest subordinator jump <= w) = exp(-w^(-alpha))."""
    w = np.asarray(w, dtype=np.float64)
    safe = np.where(w > 0.0, w, 1.0)
    return np.where(w > 0.0, np.exp(-safe ** (-alpha)), 0.0)
