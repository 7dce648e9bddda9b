import numpy as np
import pytest
from scipy import stats

from kproc import (INFINITY, KParams, SeedSpec, TrapEnv, UNIFORM, load_trap_env,
                   rescaled_env, sample_gamma, sample_trap_env, save_trap_env,
                   simulate_k, simulate_trap, sojourn_lengths, state_at)

from oracles import frechet_cdf


def test_scaling_constant():
    trap = sample_trap_env(100, 0.5, SeedSpec(1))
    assert trap.c_n == pytest.approx(1e-4, rel=1e-14)  # 100 ** (-1/0.5)


def test_sampled_holding_times():
    trap = sample_trap_env(500, 0.5, SeedSpec(2))
    assert trap.tau.size == 500
    assert np.all(trap.tau >= 1.0)  # Pareto support starts at 1
    assert np.all(np.diff(trap.tau) <= 0.0)
    again = sample_trap_env(500, 0.5, SeedSpec(2))
    assert np.array_equal(trap.tau, again.tau)


def test_trap_env_validation():
    with pytest.raises(ValueError):
        TrapEnv(n=2, alpha=0.5, tau=np.array([1.0, 2.0]))  # increasing
    with pytest.raises(ValueError):
        TrapEnv(n=3, alpha=0.5, tau=np.array([2.0, 1.0]))  # wrong length
    with pytest.raises(ValueError):
        TrapEnv(n=2, alpha=0.5, tau=np.array([2.0, 0.0]))
    with pytest.raises(ValueError):
        TrapEnv(n=2, alpha=1.5, tau=np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        TrapEnv(n=2, alpha=0.5, tau=np.array([2.0, 1.0]), c_n=0.3)
    with pytest.raises(ValueError):
        TrapEnv(n=0, alpha=0.5, tau=np.array([]))


def test_rescaled_env_matches_scaling():
    trap = sample_trap_env(50, 0.4, SeedSpec(3))
    env = rescaled_env(trap)
    assert np.array_equal(env.weights, trap.c_n * trap.tau)
    assert env.alpha == trap.alpha
    assert env.tail_estimate == 0.0


def test_trap_chain_equals_truncated_chain():
    # with matched seeds the microscopic chain, rescaled, and the truncated
    # chain driven by weights c_n * tau consume identical draws
    trap = sample_trap_env(200, 0.5, SeedSpec(4))
    params = KParams(env=rescaled_env(trap), c=0.0)
    for s in (5, 6, 7):
        a = simulate_trap(trap, UNIFORM, 3.0, SeedSpec(s))
        b = simulate_k(params, INFINITY, 3.0, SeedSpec(s))
        assert a.start_state == b.start_state
        assert np.array_equal(a.states, b.states)
        np.testing.assert_allclose(a.times, b.times, rtol=1e-12)


def test_single_vertex_is_constant():
    trap = TrapEnv(n=1, alpha=0.5, tau=np.array([2.0]))
    traj = simulate_trap(trap, UNIFORM, 5.0, SeedSpec(8))
    assert traj.start_state == 1 and traj.times.size == 0
    traj = simulate_trap(trap, 1, 5.0, SeedSpec(9))
    assert traj.start_state == 1 and traj.times.size == 0


def test_simulate_trap_validation():
    trap = TrapEnv(n=2, alpha=0.5, tau=np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        simulate_trap(trap, UNIFORM, 0.0, SeedSpec(10))
    with pytest.raises(ValueError):
        simulate_trap(trap, 3, 1.0, SeedSpec(10))


def test_trajectory_structure():
    trap = sample_trap_env(20, 0.5, SeedSpec(11))
    traj = simulate_trap(trap, 7, 2.0, SeedSpec(12))
    assert traj.start_state == 7
    assert state_at(traj, 0.0) == 7
    assert np.all(traj.states >= 1) and np.all(traj.states <= 20)
    assert np.all(np.diff(traj.times) > 0.0)
    assert traj.times.size == 0 or traj.times[-1] <= 2.0


def test_uniform_start_is_uniform():
    trap = sample_trap_env(3, 0.5, SeedSpec(13))
    reps = 2000
    starts = np.array([simulate_trap(trap, UNIFORM, 1e-3, SeedSpec(14).child(i)).start_state
                       for i in range(reps)])
    counts = np.bincount(starts, minlength=4)[1:]
    p = stats.chisquare(counts).pvalue
    assert p > 1e-3


def test_merged_sojourns_exponential():
    # merging self-jumps leaves Exponential sojourns of mean c_n*tau_i*n/(n-1)
    trap = TrapEnv(n=2, alpha=0.5, tau=np.array([3.0, 1.5]))
    traj = simulate_trap(trap, UNIFORM, 3000.0, SeedSpec(15))
    lengths = sojourn_lengths(traj, 1)
    assert lengths.size > 500
    scale = trap.c_n * 3.0 * 2.0
    assert stats.kstest(lengths, "expon", args=(0.0, scale)).pvalue > 0.01


def test_deepest_trap_approaches_frechet():
    # c_n * tau_1 = n^(-1/alpha) * max of n Pareto draws; its law tends to
    # the Frechet CDF exp(-w^-alpha)
    vals = np.array([sample_trap_env(2000, 0.5, SeedSpec(100 + i)).tau[0] for i in range(300)])
    vals *= 2000.0 ** -2.0
    stat = stats.kstest(vals, lambda w: frechet_cdf(w, 0.5)).statistic
    assert stat < 0.08


def test_total_mass_matches_subordinator_truncation():
    # the rescaled trap mass c_n * sum(tau) and the truncated subordinator
    # mass sum(weights) tend to one stable law; compare the two samples
    n, reps = 500, 300
    a = np.array([sample_trap_env(n, 0.5, SeedSpec(1000 + i)).tau.sum() for i in range(reps)])
    a *= float(n) ** -2.0
    b = np.array([sample_gamma(0.5, n, SeedSpec(2000 + i)).weights.sum() for i in range(reps)])
    p = stats.ks_2samp(a, b).pvalue
    assert p > 1e-3


def test_trap_env_json_roundtrip(tmp_path):
    trap = sample_trap_env(30, 0.7, SeedSpec(16))
    path = tmp_path / "trap.json"
    save_trap_env(trap, path)
    back = load_trap_env(path)
    assert back.n == trap.n and back.alpha == trap.alpha and back.c_n == trap.c_n
    assert np.array_equal(back.tau, trap.tau)
    import json
    payload = json.loads(path.read_text())
    assert set(payload) == {"n", "alpha", "c_n", "tau"}
