import numpy as np
import pytest

from kproc import SeedSpec
from kproc.backend import HAS_NUMBA
from kproc.kernels import run_entrance, run_to_target

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")


def _both_backends(monkeypatch, fn):
    outs = []
    for backend in ("numba", "numpy"):
        monkeypatch.setenv("KPROC_BACKEND", backend)
        outs.append(fn())
    return outs


CASES = [
    (np.array([2.0, 1.0, 0.25]), 0.0, 0),
    (np.array([2.0, 1.0, 0.25]), 0.0, 2),
    (np.array([2.0, 1.0, 0.25]), 0.7, 0),
    (np.array([2.0, 1.0, 0.25]), 0.7, 3),
    (np.array([1.5]), 0.0, 0),
    (np.array([1.5]), 0.3, 1),
]


@needs_numba
@pytest.mark.parametrize("gamma,c,start", CASES)
def test_run_to_target_bit_identical(monkeypatch, gamma, c, start):
    def run():
        rng = SeedSpec(17).generator()
        targets = SeedSpec(18).generator().standard_exponential(500)
        return run_to_target(gamma, c, targets, start, rng)

    a, b = _both_backends(monkeypatch, run)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@needs_numba
@pytest.mark.parametrize("gamma,c,start", [case for case in CASES if case[0].size > 1])
def test_run_entrance_bit_identical(monkeypatch, gamma, c, start):
    in_a = np.zeros(gamma.size + 1, dtype=np.bool_)
    in_a[1] = True
    if start == 1:
        return

    def run():
        rng = SeedSpec(19).generator()
        return run_entrance(gamma, c, in_a, start, 500, rng)

    a, b = _both_backends(monkeypatch, run)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_single_site_merged_residual_is_infinite(monkeypatch):
    # one site can never change value, so the covering sojourn has no end
    monkeypatch.setenv("KPROC_BACKEND", "numpy")
    rng = SeedSpec(5).generator()
    states, raw, merged = run_to_target(np.array([1.0]), 0.0, np.array([0.5, 2.0]), 0, rng)
    assert np.array_equal(states, [1, 1])
    assert np.all(np.isfinite(raw))
    assert np.all(np.isinf(merged))


def test_backend_env_var_validation(monkeypatch):
    from kproc.backend import backend_name

    monkeypatch.setenv("KPROC_BACKEND", "numpy")
    assert backend_name() == "numpy"
    monkeypatch.setenv("KPROC_BACKEND", "bogus")
    with pytest.raises(ValueError):
        backend_name()


def test_covering_state_honors_target(monkeypatch):
    # raw residual is the time from the target to the next clock ring, so it
    # must be positive; merged residual can only be larger
    monkeypatch.setenv("KPROC_BACKEND", "numpy")
    rng = SeedSpec(23).generator()
    gamma = np.array([3.0, 1.0, 0.5, 0.1])
    targets = SeedSpec(29).generator().standard_exponential(300)
    states, raw, merged = run_to_target(gamma, 0.0, targets, 0, rng)
    assert np.all(states >= 1)
    assert np.all(raw > 0.0)
    assert np.all(merged >= raw)


def test_entrance_starts_outside_set(monkeypatch):
    monkeypatch.setenv("KPROC_BACKEND", "numpy")
    rng = SeedSpec(31).generator()
    gamma = np.array([1.0, 0.5, 0.25])
    in_a = np.zeros(4, dtype=np.bool_)
    in_a[2] = True
    sites, taus = run_entrance(gamma, 0.0, in_a, 0, 200, rng)
    assert np.all(sites == 2)
    assert np.all(taus >= 0.0)
