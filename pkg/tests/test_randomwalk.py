import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comptonlab.constants import DomainError, builtin_particles, compton_wavelength
from comptonlab.randomwalk import (
    WalkSpec,
    estimate_rms,
    rms_stretch,
    simulate_ensemble,
    simulate_walk,
    universe_consistency,
)

PION = builtin_particles()["pion"]
ELECTRON = builtin_particles()["electron"]


def test_rms_stretch_examples():
    # R = 1e28 cm, N = 1e80: 1e28 / 1e40
    assert rms_stretch(1e28, 1e80) == pytest.approx(1e-12, rel=1e-12, abs=0)
    assert rms_stretch(7.5, 1) == 7.5
    assert rms_stretch(10.0, 4) == 5.0


def test_rms_stretch_rejects_zero_steps():
    with pytest.raises(DomainError):
        rms_stretch(1.0, 0)


@pytest.mark.parametrize(
    "kwargs", [dict(steps=-1), dict(steps=1, step_length=0), dict(steps=1, dim=4), dict(steps=1, walkers=0)]
)
def test_walkspec_validation(kwargs):
    with pytest.raises(DomainError):
        WalkSpec(**kwargs)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_zero_steps_is_zero_vector(dim):
    d = simulate_walk(WalkSpec(steps=0, dim=dim, walkers=1, seed=3), 0)
    assert np.array_equal(d, np.zeros(dim))


@given(
    dim=st.sampled_from([1, 2, 3]),
    seed=st.integers(0, 2**64 - 1),
    index=st.integers(0, 10**6),
    length=st.floats(1e-20, 1e20),
)
@settings(max_examples=60, deadline=None)
def test_single_step_has_step_length(dim, seed, index, length):
    spec = WalkSpec(steps=1, step_length=length, dim=dim, walkers=index + 1, seed=seed)
    assert np.linalg.norm(simulate_walk(spec, index)) == pytest.approx(length, rel=1e-14, abs=0)


def test_walker_index_out_of_range():
    with pytest.raises(IndexError):
        simulate_walk(WalkSpec(steps=3, walkers=2), 2)


def test_same_seed_same_walk_and_independent_of_threads():
    spec = WalkSpec(steps=300, dim=3, walkers=2000, seed=12345)
    a = simulate_ensemble(spec, threads=1)
    b = simulate_ensemble(spec, threads=3)
    assert np.array_equal(a, b)
    assert np.array_equal(simulate_walk(spec, 17), a[17])


def test_different_seeds_differ():
    a = simulate_walk(WalkSpec(steps=50, walkers=1, seed=1), 0)
    b = simulate_walk(WalkSpec(steps=50, walkers=1, seed=2), 0)
    assert not np.array_equal(a, b)


def test_one_dimensional_four_steps_exact_expectation():
    # enumerate all 2^4 equally likely paths
    sq = [sum(path) ** 2 for path in itertools.product((-1, 1), repeat=4)]
    exact = sum(sq) / len(sq)
    assert exact == 4.0
    res = estimate_rms(WalkSpec(steps=4, dim=1, walkers=200_000, seed=5))
    assert abs(res.mean_square_displacement - exact) < 5 * res.stderr_msd
    assert res.rms_displacement == pytest.approx(2.0, rel=0.01, abs=0)
    # one-dimensional steps are +-1, so every displacement is an even integer
    d = simulate_ensemble(WalkSpec(steps=4, dim=1, walkers=100, seed=5))
    assert set(np.unique(d)) <= {-4.0, -2.0, 0.0, 2.0, 4.0}


def test_two_dimensional_rms_example():
    res = estimate_rms(WalkSpec(steps=100, step_length=0.5, dim=2, walkers=100_000, seed=11))
    assert res.rms_displacement == pytest.approx(5.0, rel=0.02, abs=0)


@pytest.mark.parametrize("dim", [2, 3])
def test_step_directions_are_isotropic(dim):
    # single unit steps: E[x_i] = 0 and E[x_i^2] = 1/dim for a uniform direction
    n = 60_000
    d = simulate_ensemble(WalkSpec(steps=1, dim=dim, walkers=n, seed=99))
    se_sq = (d**2).std(axis=0) / np.sqrt(n)
    assert np.all(np.abs(d.mean(axis=0)) < 5 / np.sqrt(n))
    assert np.all(np.abs((d**2).mean(axis=0) - 1 / dim) < 5 * se_sq)


@pytest.mark.parametrize("dim,steps", [(1, 1), (1, 37), (2, 10), (2, 250), (3, 3), (3, 1000)])
def test_mean_square_and_mean_vector_within_five_stderr(dim, steps):
    res = estimate_rms(WalkSpec(steps=steps, step_length=2.5, dim=dim, walkers=20_000, seed=dim * 1000 + steps))
    assert abs(res.mean_square_displacement - steps * 2.5**2) <= 5 * res.stderr_msd
    for m, se in zip(res.mean_displacement_vector, res.stderr_mean_vector):
        assert abs(m) <= 5 * se


def test_single_walker_flags_undefined_stderr():
    res = estimate_rms(WalkSpec(steps=10, walkers=1, seed=1))
    assert not res.stderr_defined
    assert math.isnan(res.stderr_rms)


def test_universe_consistency_pion():
    ratio = universe_consistency(1e28, 1e80, PION)
    assert ratio == pytest.approx(1e-12 / 1.41439e-13, rel=1e-4, abs=0)
    assert abs(math.log10(ratio)) < 1


def test_universe_consistency_inverse_identity():
    N = 1e80
    R = compton_wavelength(PION) * math.sqrt(N)
    assert universe_consistency(R, N, PION) == pytest.approx(1.0, rel=1e-15, abs=0)


def test_universe_consistency_electron_fails_order_of_magnitude():
    ratio = universe_consistency(1e28, 1e80, ELECTRON)
    assert ratio == pytest.approx(1e-12 / 3.8632e-11, rel=1e-4, abs=0)
    assert abs(math.log10(ratio)) > 1
