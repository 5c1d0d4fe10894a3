"""End-to-end acceptance checks, one or more tests per numbered criterion.

A summary line per criterion is printed at the end of the run (see conftest).
"""

import io
import json
import math
import time

import numpy as np
import pytest

from comptonlab.cli import run
from comptonlab.constants import CGS, builtin_particles, compton_time, compton_wavelength
from comptonlab.cosmology import (
    CosmologySpec,
    closed_form,
    exact_age,
    integrate_population,
    large_number_audit,
    sqrt_n_age,
)
from comptonlab.dirac import (
    LatticeSpec,
    checkerboard_propagate,
    gaussian_packet,
    mean_position_series,
    spectral_evolve,
    zitter_analyze,
)
from comptonlab.kerrnewman import KNConfig, electron_kn_check, kn_classify
from comptonlab.nelson import DiffusionSpec, QuantumModel, density_distance, diffusion_constant, evolve_ensemble
from comptonlab.randomwalk import WalkSpec, estimate_rms, universe_consistency

TABLE = builtin_particles()
PION, ELECTRON = TABLE["pion"], TABLE["electron"]


@pytest.mark.criterion(1)
def test_random_walk_rms():
    t0 = time.perf_counter()
    res = estimate_rms(WalkSpec(steps=10_000, step_length=1.0, dim=3, walkers=100_000, seed=1), threads=1)
    elapsed = time.perf_counter() - t0
    print(f"rms={res.rms_displacement:.4f} stderr={res.stderr_rms:.4f} time={elapsed:.1f}s")
    assert abs(res.rms_displacement / 100.0 - 1) <= 0.02
    assert elapsed <= 30.0


@pytest.mark.criterion(2)
def test_cosmic_stretch_within_one_dex():
    ratio = compton_wavelength(PION) * math.sqrt(1e80) / 1e28
    assert abs(math.log10(ratio)) <= 1
    assert 1 / universe_consistency(1e28, 1e80, PION) == pytest.approx(ratio, rel=1e-14, abs=0)


@pytest.mark.criterion(3)
@pytest.mark.parametrize("p", [PION, ELECTRON], ids=lambda p: p.name)
def test_diffusion_identities(p):
    nu = diffusion_constant(p, "compton")
    lam = compton_wavelength(p)
    assert abs(nu / (lam * CGS.c) - 1) <= 1e-12
    assert abs(math.sqrt(nu * compton_time(p)) / lam - 1) <= 1e-12


@pytest.mark.criterion(4)
def test_nelson_harmonic_ground_state_density():
    t0 = time.perf_counter()
    model = QuantumModel.harmonic(omega=1.0)
    ens = evolve_ensemble(model, DiffusionSpec(nu=1.0, dt=0.01, t_end=20.0, walkers=100_000, seed=1))
    dd = density_distance(ens, model)
    elapsed = time.perf_counter() - t0
    print(f"L1={dd.l1:.4f} bins={dd.bins} time={elapsed:.1f}s")
    assert dd.l1 < 0.03
    assert elapsed <= 120.0


@pytest.mark.criterion(4)
def test_nelson_free_packet_variance():
    t0 = time.perf_counter()
    model = QuantumModel.free_packet(sigma0=1.0, mass=1.0, hbar=1.0)
    t = model.spreading_time  # 2 m sigma0^2 / hbar
    ens = evolve_ensemble(model, DiffusionSpec(nu=1.0, dt=0.005, t_end=t, walkers=100_000, seed=2))
    x = ens.positions
    v = x.var(ddof=1)
    se = math.sqrt((np.mean((x - x.mean()) ** 4) - v * v) / x.size)
    expected = 1.0 * (1 + (t / 2.0) ** 2)
    print(f"var={v:.4f} expected={expected:.4f} se={se:.4f}")
    assert abs(v - expected) <= 3 * se
    assert time.perf_counter() - t0 <= 120.0


@pytest.mark.criterion(5)
def test_checkerboard_converges_to_spectral():
    errors, drifts = [], []
    for dx in (0.1, 0.05, 0.025, 0.0125):
        lat = LatticeSpec.for_time(dx, 40.0, 2.0)
        psi = gaussian_packet(lat.grid(), 1.0)
        exact = spectral_evolve(psi, 1.0, 2.0)
        errors.append(checkerboard_propagate(psi, lat, 1.0).l2_distance(exact))
        drifts.append(abs(exact.norm() - psi.norm()) / psi.norm())
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    print(f"ratios={np.round(ratios, 3).tolist()} max_drift={max(drifts):.1e}")
    assert np.all((ratios >= 1.7) & (ratios <= 2.3))
    assert max(drifts) <= 1e-12


@pytest.fixture(scope="module")
def rest_packet_series():
    grid = LatticeSpec(0.1, 400.0, 0).grid()
    ts = np.arange(0.0, 40 * np.pi, 0.05)
    both = mean_position_series(gaussian_packet(grid, 1.0), 1.0, ts)
    positive = mean_position_series(gaussian_packet(grid, 1.0, band="positive"), 1.0, ts)
    return ts, both, positive


@pytest.mark.criterion(6)
def test_zitterbewegung_rest_packet(rest_packet_series):
    ts, both, _ = rest_packet_series
    rep = zitter_analyze(both, ts, expected_frequency=2.0)
    print(f"omega={rep.dominant_frequency:.4f} bin={rep.frequency_resolution:.4f} amp={rep.oscillation_amplitude:.4f}")
    assert abs(rep.dominant_frequency - 2.0) <= rep.frequency_resolution
    assert rep.oscillation_amplitude <= 1.1 * 0.5


@pytest.mark.criterion(6)
def test_zitterbewegung_absent_for_positive_energy(rest_packet_series):
    ts, _, positive = rest_packet_series
    rep = zitter_analyze(positive, ts, expected_frequency=2.0)
    assert rep.oscillation_amplitude < 1e-3 * 0.5


@pytest.mark.criterion(7)
def test_electron_naked_singularity():
    res = kn_classify(KNConfig.from_particle(ELECTRON))
    ratio = electron_kn_check()
    print(f"b={res.b:.5e} ratio={ratio:.12f}")
    assert res.kind == "naked_singularity"
    assert 0.99 <= ratio <= 1.01


@pytest.mark.criterion(7)
def test_schwarzschild_limit_exact():
    for M in np.logspace(-30, 35, 131):
        r = kn_classify(KNConfig(float(M))).r_plus
        assert abs(r / (2 * CGS.G * M / CGS.c**2) - 1) <= 1e-12


@pytest.mark.criterion(8)
def test_rate_law_integration():
    tau = compton_time(PION)
    traj = integrate_population(CosmologySpec(N0=1.0, tau=tau, t_end=1e6 * tau, dt=1e3 * tau))
    err = np.max(np.abs(traj.N_values / closed_form(traj.times, 1.0, tau) - 1))
    print(f"max_rel_err={err:.2e} substeps={traj.substeps}")
    assert err <= 1e-6
    assert np.all(np.diff(traj.N_values) > 0)
    for N in (1e4, 1e8, 1e16):
        assert 1.9 <= exact_age(N, tau) / sqrt_n_age(N, tau) <= 2.0


@pytest.mark.criterion(9)
def test_large_number_audit():
    rows = large_number_audit(1e28, 1e80, PION, T_obs=4e17, M_obs=1e56)
    for r in rows:
        print(f"{r.relation:12s} {r.residual_dex:+.3f}")
    assert all(abs(r.residual_dex) <= 1.5 for r in rows)
    for name in ("rms_stretch", "age"):
        row = next(r for r in rows if r.relation == name)
        assert abs(row.residual_dex) <= 1.0


def _payload(argv):
    out = io.StringIO()
    assert run(argv, out, io.StringIO()) == 0
    return json.loads(out.getvalue())["results"]


STOCHASTIC = [
    ["walk", "--steps", "500", "--walkers", "4000", "--seed", "11"],
    ["nelson", "--walkers", "4000", "--seed", "11", "--t-end", "2"],
]


@pytest.mark.criterion(10)
@pytest.mark.parametrize("argv", STOCHASTIC, ids=lambda a: a[0])
@pytest.mark.parametrize("threads", ["1", "3"])
def test_reruns_are_byte_identical(argv, threads):
    full = ["--threads", threads, *argv]
    assert json.dumps(_payload(full)) == json.dumps(_payload(full))


@pytest.mark.criterion(10)
def test_walk_agrees_across_worker_counts():
    a = _payload(["--threads", "1", *STOCHASTIC[0]])
    b = _payload(["--threads", "4", *STOCHASTIC[0]])
    diff = abs(a["mean_square_displacement"] - b["mean_square_displacement"])
    assert diff <= 3 * math.hypot(a["stderr_msd"], b["stderr_msd"])


@pytest.mark.criterion(10)
def test_nelson_agrees_across_worker_counts():
    a = _payload(["--threads", "1", *STOCHASTIC[1]])
    b = _payload(["--threads", "4", *STOCHASTIC[1]])
    n = a["walkers"]
    se = math.sqrt(2 * a["exact_variance"] ** 2 / (n - 1))
    assert abs(a["sample_variance"] - b["sample_variance"]) <= 3 * math.sqrt(2) * se
