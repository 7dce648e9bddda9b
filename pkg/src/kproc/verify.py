"""The acceptance-check suite behind the `verify` subcommand.

Each check computes a measured quantity and compares it against a
tolerance; checks are grouped so `--only <group>` can run a subset.
Randomized groups derive every stream from the base seed through fixed
offsets, so a group's results do not depend on which other groups run,
and chunked reduction makes them independent of the worker count.
"""

from __future__ import annotations

import json
import math
import os
import warnings

import numpy as np
from scipy import stats

from .aging import CONDITIONAL, c_theta, lambda0, lambda0_density, lambda_hat, lambda_mc, lambda_tilde
from .analytics import corr_transform, first_hit_transform, green, laplace_exit
from .backend import backend_name
from .env import Environment, env_from_weights, sample_gamma
from .kernels import run_to_target
from .kprocess import (
    KParams,
    corr_mc,
    entrance_states,
    exit_transform_mc,
    first_hit_time_mc,
    green_mc,
    laplace_transform_mc,
)
from .quadrature import integral_01, integral_power_left
from .rng import SeedSpec, run_chunked
from .states import INFINITY
from .trapmodel import rescaled_env, sample_trap_env

__all__ = ["DEFAULT_SEED", "GROUP_NAMES", "run_verify", "write_report"]

DEFAULT_SEED = 20260817

_ALPHAS = (0.3, 0.5, 0.8)
_THETAS = (0.25, 0.5, 1.0, 2.0, 4.0)

# Fixed stream offsets (scaled below 64 bits) so each check's randomness is a
# pure function of the base seed, independent of group selection.
_STRIDE = 1 << 20
_S_AC4_ENV = 1
_S_AC4 = 2          # 2..19 reserved for the transform checks
_S_AC5 = 20         # 20..22
_S_AC6_ENV = 30
_S_AC6 = 31         # 31..33
_S_AC7A = 40
_S_AC7B_ENV = 41
_S_AC7B = 42        # 42..43 (paired across the two models)
_S_AC8 = 50         # 50..149, one per sampled environment
_S_REPRO = 200


def _stream(seed: int, offset: int) -> SeedSpec:
    return SeedSpec(seed).child(offset * _STRIDE)


def _check(name: str, measured: float, tolerance: float, comparison: str = "<",
           note: str | None = None) -> dict:
    if comparison == "<":
        passed = measured < tolerance
    elif comparison == ">=":
        passed = measured >= tolerance
    else:
        raise ValueError(f"unknown comparison {comparison!r}")
    entry = {
        "name": name,
        "measured": float(measured),
        "tolerance": float(tolerance),
        "comparison": comparison,
        "passed": bool(passed),
    }
    if note is not None:
        entry["note"] = note
    return entry


def _group_quadrature(seed: int, workers: int) -> list[dict]:
    checks = []
    for a in _ALPHAS:
        worst = max(
            abs(integral_01(lambda u: lambda0(th * u / (1.0 - u), a)) - c_theta(th, a))
            for th in _THETAS)
        checks.append(_check(f"inversion-identity-alpha-{a}", worst, 1e-6))

    for a in _ALPHAS:
        diffs = [lambda_hat(th, a) - lambda_tilde(th, a) - lambda0(th, a) for th in _THETAS]
        worst = max(abs(d) for d in diffs)
        note = None
        if worst >= 1e-6:
            ratios = [(lambda_hat(th, a) - lambda_tilde(th, a)) / lambda0(th, a)
                      for th in _THETAS]
            if max(ratios) - min(ratios) < 1e-9 * max(1.0, abs(ratios[0])):
                note = (f"uniform multiplicative offset {ratios[0]!r}: the "
                        "normalization convention for the gamma-integral "
                        "constant needs review")
        checks.append(_check(f"decomposition-identity-alpha-{a}", worst, 1e-6, note=note))

    for a in _ALPHAS:
        head = integral_power_left(lambda z: lambda0_density(z, a) * z ** (1.0 - a), a)
        tail = integral_power_left(lambda s: lambda0_density(1.0 / s, a) * s ** (a - 2.0),
                                   1.0 - a)
        checks.append(_check(f"density-normalization-alpha-{a}", abs(head + tail - 1.0), 1e-6))

    for a in _ALPHAS:
        for th in (0.5, 1.0, 2.0):
            lap = integral_01(
                lambda u: math.exp(-th * u / (1.0 - u))
                * lambda0_density(u / (1.0 - u), a) / (1.0 - u) ** 2)
            checks.append(_check(f"laplace-correspondence-alpha-{a}-theta-{th:g}",
                                 abs(lap - lambda0(th, a)), 1e-6))
    return checks


def _transform_checks(tag: str, env: Environment, seed: int, base_offset: int,
                      workers: int, reps: int) -> list[dict]:
    lam = 1.0
    checks = []
    p0 = KParams(env=env, c=0.0)
    pc = KParams(env=env, c=0.5)

    est = exit_transform_mc(p0, 1, lam, reps, _stream(seed, base_offset), workers=workers)
    checks.append(_check(f"transforms-exit-{tag}",
                         abs(est.value - laplace_exit(env.weight(1), lam)),
                         3.0 * est.std_error))

    taus = first_hit_time_mc(p0, 1, reps, _stream(seed, base_offset + 1), workers=workers)
    est = laplace_transform_mc(taus, lam)
    checks.append(_check(f"transforms-first-hit-{tag}",
                         abs(est.value - first_hit_transform(env, 0.0, 1, lam).value),
                         3.0 * est.std_error))

    est = green_mc(p0, 1, lam, reps, _stream(seed, base_offset + 2), workers=workers)
    checks.append(_check(f"transforms-green-c0-{tag}",
                         abs(est.value - green(env, 0.0, lam, 1).value),
                         3.0 * est.std_error))

    est = green_mc(pc, 1, lam, reps, _stream(seed, base_offset + 3), workers=workers)
    checks.append(_check(f"transforms-green-cpos-{tag}",
                         abs(est.value - green(env, 0.5, lam, 1).value),
                         3.0 * est.std_error))

    est = green_mc(pc, INFINITY, lam, reps, _stream(seed, base_offset + 4), workers=workers)
    checks.append(_check(f"transforms-green-inf-{tag}",
                         abs(est.value - green(env, 0.5, lam, INFINITY).value),
                         3.0 * est.std_error))

    est = corr_mc(p0, lam, lam, reps, _stream(seed, base_offset + 5), workers=workers)
    checks.append(_check(f"transforms-corr-{tag}",
                         abs(est.value - corr_transform(env, lam, lam).value),
                         3.0 * est.std_error))
    return checks


def _group_transforms(seed: int, workers: int) -> list[dict]:
    reps = 1_000_000
    two_site = env_from_weights([1.0, 0.5])
    sampled = sample_gamma(0.5, 1000, _stream(seed, _S_AC4_ENV))
    checks = _transform_checks("two-site", two_site, seed, _S_AC4, workers, reps)
    checks += _transform_checks("sampled", sampled, seed, _S_AC4 + 6, workers, reps)
    return checks


_ENTRANCE_SETS = {
    2: [1, 500],
    5: [1, 2, 10, 100, 1000],
    20: list(range(1, 11)) + [50, 100, 200, 300, 400, 500, 600, 700, 800, 900],
}


def _group_entrance(seed: int, workers: int) -> list[dict]:
    env = sample_gamma(0.5, 1000, _stream(seed, _S_AC4_ENV))
    params = KParams(env=env, c=0.0)
    reps = 100_000
    checks = []
    for k, (size, sites) in enumerate(sorted(_ENTRANCE_SETS.items())):
        states = entrance_states(params, sites, reps, _stream(seed, _S_AC5 + k),
                                 workers=workers)
        counts = np.bincount(states, minlength=env.n + 1)[sites]
        pvalue = stats.chisquare(counts).pvalue
        checks.append(_check(f"entrance-uniformity-size-{size}", pvalue, 1e-3,
                             comparison=">="))
    return checks


def _group_aging(seed: int, workers: int) -> list[dict]:
    env = sample_gamma(0.5, 10_000, _stream(seed, _S_AC6_ENV))
    params = KParams(env=env, c=0.0)
    grid = np.array(_THETAS)
    limit = np.array([lambda0(th, 0.5) for th in _THETAS])
    reps = 100_000
    deviations = []
    for k, t in enumerate((1e-2, 1e-3, 1e-4)):
        curve = lambda_mc(params, t, grid, reps, _stream(seed, _S_AC6 + k),
                          estimator=CONDITIONAL, workers=workers)
        deviations.append(float(np.max(np.abs(curve.values - limit))))
    checks = [_check("aging-deviation-t-0.0001", deviations[2], 0.03)]
    worst_increase = max(deviations[1] - deviations[0], deviations[2] - deviations[1])
    checks.append(_check("aging-deviation-monotone", worst_increase, 0.0,
                         note=f"deviations at t=0.01,0.001,0.0001: {deviations!r}"))
    return checks


_RANK_CELLS = [1, 2, 3, 4, 6, 11, 101]


def _occupied_chunk(count, seed, weights, scale, t, n):
    rng = seed.generator()
    targets = np.full(count, t / scale)
    state, _, _ = run_to_target(weights, 0.0, targets, 0, rng)
    hist, _ = np.histogram(state, bins=_RANK_CELLS + [n + 1])
    return hist.astype(np.float64)


def _group_scaling(seed: int, workers: int) -> list[dict]:
    n, a = 10_000, 0.5
    checks = []

    top = np.empty(1000)
    for i in range(1000):
        top[i] = sample_trap_env(n, a, _stream(seed, _S_AC7A).child(i)).tau[0]
    top *= float(n) ** (-1.0 / a)
    ks = stats.kstest(top, lambda w: np.exp(-np.asarray(w) ** -a))
    checks.append(_check("scaling-frechet-ks", float(ks.statistic), 0.05))

    trap = sample_trap_env(n, a, _stream(seed, _S_AC7B_ENV))
    macro = rescaled_env(trap)
    reps = 10_000
    for k, t in enumerate((0.1, 1.0)):
        pair_seed = _stream(seed, _S_AC7B + k)
        trap_counts = run_chunked(_occupied_chunk, reps, pair_seed,
                                  (trap.tau, trap.c_n, t, n), workers)
        k_counts = run_chunked(_occupied_chunk, reps, pair_seed,
                               (macro.weights, 1.0, t, n), workers)
        p1, p2 = trap_counts / reps, k_counts / reps
        var = p1 * (1.0 - p1) / reps + p2 * (1.0 - p2) / reps
        with np.errstate(invalid="ignore"):
            z = np.abs(p1 - p2) / np.sqrt(var)
        z[np.abs(p1 - p2) == 0.0] = 0.0
        checks.append(_check(f"scaling-occupied-rank-t-{t:g}", float(np.max(z)), 3.0))
    return checks


def _group_limit(seed: int, workers: int) -> list[dict]:
    a, theta, lam = 0.5, 1.0, 1e4
    target = c_theta(theta, a)
    hits = 0
    for i in range(100):
        env = sample_gamma(a, 100_000, _stream(seed, _S_AC8 + i))
        value = corr_transform(env, lam, lam / theta).value
        if abs(value - target) < 0.05:
            hits += 1
    return [_check("limit-corr-agreement", hits / 100.0, 0.95, comparison=">=")]


def _repro_probe(seed: int, workers: int) -> bytes:
    env = Environment(weights=np.array([1.0, 0.5]), alpha=0.5, tail_estimate=0.0)
    params = KParams(env=env, c=0.0)
    g = green_mc(params, 1, 1.0, 100_000, _stream(seed, _S_REPRO), workers=workers)
    curve = lambda_mc(params, 0.5, np.array([0.5, 1.0, 2.0]), 50_000,
                      _stream(seed, _S_REPRO + 1), estimator=CONDITIONAL,
                      workers=workers)
    states = entrance_states(params, [1, 2], 50_000, _stream(seed, _S_REPRO + 2),
                             workers=workers)
    payload = {
        "green": g.value,
        "green_se": g.std_error,
        "curve": curve.values.tolist(),
        "curve_se": curve.std_errors.tolist(),
        "entrance": np.bincount(states).tolist(),
    }
    return json.dumps(payload).encode()


def _group_repro(seed: int, workers: int) -> list[dict]:
    first = _repro_probe(seed, workers)
    second = _repro_probe(seed, workers)
    other = _repro_probe(seed, 2 if workers == 1 else 1)
    mismatches = float(first != second) + float(first != other)
    return [_check("repro-identical-across-runs-and-workers", mismatches, 0.5)]


GROUP_NAMES = ("quadrature", "transforms", "entrance", "aging", "scaling",
               "limit", "repro")

_GROUPS = {
    "quadrature": _group_quadrature,
    "transforms": _group_transforms,
    "entrance": _group_entrance,
    "aging": _group_aging,
    "scaling": _group_scaling,
    "limit": _group_limit,
    "repro": _group_repro,
}


def run_verify(only: list[str] | None = None, seed: int = DEFAULT_SEED,
               workers: int = 1, tolerances: dict[str, float] | None = None) -> dict:
    """Run the acceptance checks and return the report as a dict."""
    groups = list(GROUP_NAMES) if not only else list(only)
    for g in groups:
        if g not in _GROUPS:
            raise ValueError(f"unknown check group {g!r}; known: {', '.join(GROUP_NAMES)}")
    if workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers!r}")
    overrides = dict(tolerances or {})

    checks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for g in groups:
            checks.extend(_GROUPS[g](seed, workers))

    known = {c["name"] for c in checks}
    for name in overrides:
        if name not in known:
            raise ValueError(f"tolerance override for unknown check {name!r}")
    for c in checks:
        if c["name"] in overrides:
            c["tolerance"] = float(overrides[c["name"]])
            c["passed"] = (c["measured"] < c["tolerance"] if c["comparison"] == "<"
                           else c["measured"] >= c["tolerance"])

    # The worker count is deliberately absent: results do not depend on it,
    # and the report file must not either.
    return {
        "seed": int(seed),
        "backend": backend_name(),
        "groups": groups,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }


def write_report(report: dict, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
