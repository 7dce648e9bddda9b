"""The truncated uniform-entrance chain: simulation and hitting observables.

The chain on sites {1..n} holds at site x an Exponential time of mean
gamma(x) and then jumps to a uniformly chosen site (possibly x itself; such
draws are merged into one longer sojourn in emitted trajectories). With
c > 0 every jump routes through the unstable state INFINITY, held an
Exponential time of mean c/n. Starting "at INFINITY" with c = 0 means the
first site is uniform and entered at time 0.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .env import Environment
from .kernels import run_entrance, run_to_target
from .rng import DEFAULT_CHUNK, MCEstimate, SeedSpec, map_chunks, mean_and_se, run_chunked
from .states import INFINITY, State, check_site, is_infinite

__all__ = [
    "KParams",
    "Trajectory",
    "simulate_k",
    "state_at",
    "sojourn_lengths",
    "entrance_state",
    "entrance_states",
    "entrance_time_mc",
    "exit_transform_mc",
    "first_hit_time_mc",
    "laplace_transform_mc",
    "green_mc",
    "corr_mc",
    "write_trajectory_csv",
    "read_trajectory_csv",
]


@dataclass(frozen=True, eq=False)
class KParams:
    """Chain parameters: an environment, the unstable-holding weight c >= 0,
    and the truncation level n (defaults to the full environment)."""

    env: Environment
    c: float = 0.0
    n: int | None = None

    def __post_init__(self) -> None:
        c = float(self.c)
        if not math.isfinite(c) or c < 0.0:
            raise ValueError(f"c must be finite and nonnegative, got {self.c!r}")
        object.__setattr__(self, "c", c)
        n = self.env.n if self.n is None else int(self.n)
        if not 1 <= n <= self.env.n:
            raise ValueError(f"n must be in [1, {self.env.n}], got {self.n!r}")
        object.__setattr__(self, "n", n)

    @property
    def weights(self) -> np.ndarray:
        return self.env.weights[: self.n]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A piecewise-constant path: value start_state on [0, first event), then
    the event's new state from its time on (right-continuous).

    times: strictly increasing event times in (0, horizon];
    states: integer codes of the new state per event, 0 meaning INFINITY;
    consecutive values always differ (self-placements are merged upstream).
    """

    start_state: State
    times: np.ndarray
    states: np.ndarray
    horizon: float

    def __post_init__(self) -> None:
        times = np.ascontiguousarray(self.times, dtype=np.float64)
        states = np.ascontiguousarray(self.states, dtype=np.int64)
        if times.ndim != 1 or states.ndim != 1 or times.size != states.size:
            raise ValueError("times and states must be 1-d arrays of equal length")
        if not self.horizon > 0.0 or not math.isfinite(self.horizon):
            raise ValueError(f"horizon must be positive and finite, got {self.horizon!r}")
        if times.size:
            if times[0] <= 0.0 or np.any(np.diff(times) <= 0.0):
                raise ValueError("event times must be strictly increasing and positive")
            if times[-1] > self.horizon:
                raise ValueError("event times must not exceed the horizon")
            if np.any(states < 0):
                raise ValueError("state codes must be nonnegative")
            codes = np.concatenate(([_state_code(self.start_state)], states))
            if np.any(codes[1:] == codes[:-1]):
                raise ValueError("consecutive states must differ (merge self-placements)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "horizon", float(self.horizon))
        times.setflags(write=False)
        states.setflags(write=False)

    @property
    def events(self) -> list[tuple[float, State]]:
        return [(float(t), _state_from_code(int(s)))
                for t, s in zip(self.times, self.states)]


def _state_code(state: State) -> int:
    return 0 if is_infinite(state) else int(state)


def _state_from_code(code: int) -> State:
    return INFINITY if code == 0 else code


def _check_start(start: State, n: int) -> int:
    if is_infinite(start):
        return 0
    return check_site(start, n, "start")


def _draw_pieces(weights: np.ndarray, horizon: float, rng: np.random.Generator,
                 first_site: int | None) -> tuple[np.ndarray, np.ndarray]:
    """Uniformly placed sites and their sojourn durations until total time
    passes the horizon. A fixed first_site prepends one full sojourn there."""
    n = weights.size
    sites = []
    durations = []
    total = 0.0
    if first_site is not None:
        d = weights[first_site - 1] * rng.standard_exponential()
        sites.append(np.array([first_site], dtype=np.int64))
        durations.append(np.array([d]))
        total = d
    block = 4096
    while total <= horizon:
        u = rng.integers(1, n + 1, size=block)
        d = weights[u - 1] * rng.standard_exponential(block)
        sites.append(u)
        durations.append(d)
        total += float(d.sum())
    return np.concatenate(sites), np.concatenate(durations)


def _merged_events(start_code: int, sites: np.ndarray, boundaries: np.ndarray,
                   horizon: float) -> tuple[np.ndarray, np.ndarray]:
    """Event rows (time, new site) where the value changes, cut at horizon."""
    prev = np.concatenate(([start_code], sites[:-1]))
    change = sites != prev
    times = np.concatenate(([0.0], boundaries))[:-1]
    keep = change & (times <= horizon)
    return times[keep], sites[keep]


def simulate_k(params: KParams, start: State, horizon: float, seed: SeedSpec) -> Trajectory:
    """Simulate the chain and emit its merged trajectory over [0, horizon]."""
    if not horizon > 0.0 or not math.isfinite(horizon):
        raise ValueError(f"horizon must be positive and finite, got {horizon!r}")
    start_code = _check_start(start, params.n)
    weights = params.weights
    n = params.n
    rng = seed.generator()

    if params.c == 0.0:
        first_site = start_code if start_code else None
        sites, durations = _draw_pieces(weights, horizon, rng, first_site)
        boundaries = np.cumsum(durations)
        # From INFINITY the first uniform placement is the value at time 0.
        start_state: State = start_code if start_code else int(sites[0])
        times, states = _merged_events(_state_code(start_state), sites, boundaries, horizon)
        return Trajectory(start_state=start_state, times=times, states=states, horizon=horizon)

    # c > 0: sojourns alternate with unstable holds of mean c/n.
    c_hold = params.c / n
    seq_sites = []
    seq_durs = []
    total = 0.0
    if start_code:
        d = weights[start_code - 1] * rng.standard_exponential()
        seq_sites.append(np.array([start_code], dtype=np.int64))
        seq_durs.append(np.array([d]))
        total = d
    block = 2048
    while total <= horizon:
        u = rng.integers(1, n + 1, size=block)
        e = rng.standard_exponential((block, 2))
        durs = np.empty(2 * block)
        durs[0::2] = c_hold * e[:, 0]
        durs[1::2] = weights[u - 1] * e[:, 1]
        cycle_sites = np.empty(2 * block, dtype=np.int64)
        cycle_sites[0::2] = 0
        cycle_sites[1::2] = u
        seq_sites.append(cycle_sites)
        seq_durs.append(durs)
        total += float(durs.sum())
    sites = np.concatenate(seq_sites)
    boundaries = np.cumsum(np.concatenate(seq_durs))
    start_state = start_code if start_code else INFINITY
    times, states = _merged_events(_state_code(start_state), sites, boundaries, horizon)
    return Trajectory(start_state=start_state, times=times, states=states, horizon=horizon)


def state_at(traj: Trajectory, t: float) -> State:
    """Right-continuous value of the path at time t."""
    if not 0.0 <= t <= traj.horizon:
        raise ValueError(f"t must lie in [0, {traj.horizon}], got {t!r}")
    idx = int(np.searchsorted(traj.times, t, side="right"))
    if idx == 0:
        return traj.start_state
    return _state_from_code(int(traj.states[idx - 1]))


def sojourn_lengths(traj: Trajectory, x: State) -> np.ndarray:
    """Durations of the completed sojourns at x (the final clipped one is
    excluded from holding-time statistics)."""
    code = _state_code(x)
    values = np.concatenate(([_state_code(traj.start_state)], traj.states))
    bounds = np.concatenate(([0.0], traj.times, [traj.horizon]))
    durations = np.diff(bounds)
    mask = values == code
    mask[-1] = False
    return durations[mask]


def _membership(A, n: int) -> tuple[np.ndarray, np.ndarray]:
    sites = np.unique(np.asarray(list(A), dtype=np.int64))
    if sites.size == 0:
        raise ValueError("A must be a nonempty set of site indices")
    if sites[0] < 1 or sites[-1] > n:
        raise ValueError(f"A must contain site indices in [1, {n}]")
    in_a = np.zeros(n + 1, dtype=bool)
    in_a[sites] = True
    return sites, in_a


def _entrance_chunk(count, seed, weights, c, in_a, start_code):
    rng = seed.generator()
    site, tau = run_entrance(weights, c, in_a, start_code, count, rng)
    return site, tau


def _entrance_samples(params: KParams, A, reps: int, seed: SeedSpec, start: State,
                      workers: int) -> tuple[np.ndarray, np.ndarray]:
    _, in_a = _membership(A, params.n)
    start_code = _check_start(start, params.n)
    if start_code and in_a[start_code]:
        raise ValueError(f"start={start_code} must lie outside A")
    args = (params.weights, params.c, in_a, start_code)
    parts = list(map_chunks(_entrance_chunk, reps, seed, args, workers))
    return (np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]))


def entrance_state(params: KParams, A, seed: SeedSpec) -> State:
    """The value with which the chain, started at INFINITY, first enters A."""
    sites, _ = _entrance_samples(params, A, 1, seed, INFINITY, workers=1)
    return int(sites[0])


def entrance_states(params: KParams, A, reps: int, seed: SeedSpec,
                    workers: int = 1) -> np.ndarray:
    """Independent replicas of entrance_state, one stream per chunk."""
    sites, _ = _entrance_samples(params, A, reps, seed, INFINITY, workers)
    return sites


def entrance_time_mc(params: KParams, A, reps: int, seed: SeedSpec,
                     start: State = INFINITY, workers: int = 1) -> np.ndarray:
    """Samples of the first entrance time into A (from INFINITY by default,
    or from a site outside A)."""
    _, taus = _entrance_samples(params, A, reps, seed, start, workers)
    return taus


def first_hit_time_mc(params: KParams, x: State, reps: int, seed: SeedSpec,
                      workers: int = 1) -> np.ndarray:
    """Samples of the first hitting time of the single site x from INFINITY."""
    site = check_site(x, params.n, "x")
    return entrance_time_mc(params, [site], reps, seed, INFINITY, workers)


def laplace_transform_mc(samples: np.ndarray, lam: float) -> MCEstimate:
    """Empirical Laplace transform E[e^(-lambda * sample)] with standard error."""
    if not lam >= 0.0:
        raise ValueError(f"lambda must be nonnegative, got {lam!r}")
    samples = np.asarray(samples, dtype=np.float64)
    vals = np.exp(-lam * samples)
    value, se = mean_and_se(vals.size, float(vals.sum()), float((vals * vals).sum()))
    return MCEstimate(value=value, std_error=se, reps=int(vals.size))


def _exit_chunk(count, seed, gamma_x, lam):
    rng = seed.generator()
    vals = np.exp(-lam * gamma_x * rng.standard_exponential(count))
    return np.array([count, vals.sum(), (vals * vals).sum()])


def exit_transform_mc(params: KParams, x: State, lam: float, reps: int,
                      seed: SeedSpec, workers: int = 1) -> MCEstimate:
    """Monte Carlo estimate of E[e^(-lambda * sojourn at x)] by sampling the
    holding time at x directly."""
    site = check_site(x, params.n, "x")
    if not lam >= 0.0:
        raise ValueError(f"lambda must be nonnegative, got {lam!r}")
    gamma_x = float(params.weights[site - 1])
    stats = run_chunked(_exit_chunk, reps, seed, (gamma_x, lam), workers)
    value, se = mean_and_se(*stats)
    return MCEstimate(value=value, std_error=se, reps=int(stats[0]))


def _green_chunk(count, seed, weights, c, lam, x_code, start_code):
    rng = seed.generator()
    targets = rng.standard_exponential(count) / lam
    state, _, _ = run_to_target(weights, c, targets, start_code, rng)
    hits = (state == x_code).astype(np.float64)
    s = hits.sum()
    return np.array([count, s, s])


def green_mc(params: KParams, x: State, lam: float, reps: int, seed: SeedSpec,
             start: State = INFINITY, workers: int = 1) -> MCEstimate:
    """Monte Carlo occupation probability of x at an independent
    Exponential(lambda) time, started at INFINITY or at a given site."""
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    x_code = 0 if is_infinite(x) else check_site(x, params.n, "x")
    start_code = _check_start(start, params.n)
    args = (params.weights, params.c, lam, x_code, start_code)
    stats = run_chunked(_green_chunk, reps, seed, args, workers)
    value, se = mean_and_se(*stats)
    return MCEstimate(value=value, std_error=se, reps=int(stats[0]))


def _corr_chunk(count, seed, weights, c, lam, mu):
    rng = seed.generator()
    s_times = rng.standard_exponential(count) / lam
    windows = rng.standard_exponential(count) / mu
    _, raw, _ = run_to_target(weights, c, s_times, 0, rng)
    hits = (raw > windows).astype(np.float64)
    tot = hits.sum()
    return np.array([count, tot, tot])


def corr_mc(params: KParams, lam: float, mu: float, reps: int, seed: SeedSpec,
            workers: int = 1) -> MCEstimate:
    """Direct Monte Carlo of the two-time event behind the correlation
    transform: at s ~ Exp(lambda), the chain's clock stays silent for a
    further independent t ~ Exp(mu).

    At truncation level n the clock-silence event is what the n-term
    correlation formula transforms exactly; value constancy of the merged
    trajectory differs from it by self-placements, vanishing as n grows.
    """
    if not lam > 0.0 or not mu > 0.0:
        raise ValueError("lambda and mu must be positive")
    args = (params.weights, params.c, lam, mu)
    stats = run_chunked(_corr_chunk, reps, seed, args, workers)
    value, se = mean_and_se(*stats)
    return MCEstimate(value=value, std_error=se, reps=int(stats[0]))


def write_trajectory_csv(traj: Trajectory, path_or_file) -> None:
    """Write `time,state` rows; first row is time 0 with the start state;
    INFINITY is the literal token `inf`. Accepts a path or a text stream."""
    def token(code: int) -> str:
        return "inf" if code == 0 else str(code)

    def emit(fh) -> None:
        fh.write("time,state\n")
        fh.write(f"0,{token(_state_code(traj.start_state))}\n")
        for t, s in zip(traj.times, traj.states):
            fh.write(f"{t:.17g},{token(int(s))}\n")

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w") as fh:
            emit(fh)


def read_trajectory_csv(path: str | os.PathLike, horizon: float | None = None) -> Trajectory:
    """Read a trajectory written by write_trajectory_csv.

    The format does not store the horizon; pass it explicitly or the last
    event time (or 1.0 for a constant path) is used.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "time,state":
            raise ValueError(f"not a trajectory file: {path}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if not rows or float(rows[0][0]) != 0.0:
        raise ValueError("trajectory file must begin with a time-0 row")

    def parse_state(tok: str) -> int:
        return 0 if tok == "inf" else int(tok)

    start = _state_from_code(parse_state(rows[0][1]))
    times = np.array([float(r[0]) for r in rows[1:]])
    states = np.array([parse_state(r[1]) for r in rows[1:]], dtype=np.int64)
    if horizon is None:
        horizon = float(times[-1]) if times.size else 1.0
    return Trajectory(start_state=start, times=times, states=states, horizon=horizon)
