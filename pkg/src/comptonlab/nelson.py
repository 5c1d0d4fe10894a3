"""Nelson stochastic mechanics for two exactly solvable 1D wavefunctions.

Walkers follow the forward SDE

    dx = b(x, t) dt + sqrt(2 nu_N) dW,     nu_N = hbar / (2 m),

with forward drift b = v + u, current velocity v = (1/m) dS/dx and osmotic
velocity u = nu_N d(ln rho)/dx. If walkers start from rho = |psi(x, 0)|^2
they stay distributed as |psi(x, t)|^2.

Both built-in models have Gaussian densities of zero mean, so their drifts
are linear in x:

* harmonic ground state: rho = N(0, hbar/(2 m omega)), b = -omega x.
* free packet psi ~ exp(-x^2/(4 sigma0^2)): rho = N(0, sigma(t)^2) with
  sigma(t)^2 = sigma0^2 (1 + (t/t0)^2), t0 = 2 m sigma0^2 / hbar, and
  b = x [ (t/t0^2) / (1 + (t/t0)^2) - hbar / (2 m sigma(t)^2) ].
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np
from scipy import stats

from .constants import CGS, DomainError, Particle, PhysicalConstants, compton_wavelength
from .rng import check_seed, chunked, generator

CONVENTIONS = ("compton", "nelson")
MODELS = ("free_gaussian_packet", "harmonic_ground_state")
MAX_RATE_DT = 0.5


def diffusion_constant(p: Particle, convention: str = "compton", const: PhysicalConstants = CGS) -> float:
    """hbar/m ("compton") or hbar/(2m) ("nelson"), in cm^2/s."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    nu = const.hbar / p.mass
    return nu if convention == "compton" else 0.5 * nu


def mean_free_path_velocity(p: Particle, const: PhysicalConstants = CGS) -> float:
    """l * v with l the Compton wavelength and v = c; equals hbar/m."""
    return compton_wavelength(p, const) * const.c


def increment_scale(nu: float, dt: float) -> float:
    """RMS increment sqrt(<dx^2>) = sqrt(nu dt) of a Brownian coordinate."""
    if not nu > 0:
        raise DomainError(f"nu must be > 0, got {nu!r}")
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    return math.sqrt(nu * dt)


@dataclass(frozen=True)
class DiffusionSpec:
    nu: float
    convention: str = "compton"
    dt: float = 0.01
    t_end: float = 1.0
    walkers: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")
        if not self.nu > 0:
            raise DomainError(f"nu must be > 0, got {self.nu!r}")
        if not self.dt > 0:
            raise DomainError(f"dt must be > 0, got {self.dt!r}")
        if not self.t_end >= 0:
            raise DomainError(f"t_end must be >= 0, got {self.t_end!r}")
        if self.walkers < 1:
            raise DomainError(f"walkers must be >= 1, got {self.walkers}")
        check_seed(self.seed)

    @property
    def sde_nu(self) -> float:
        """Nelson's hbar/(2m), whichever convention ``nu`` was given in."""
        return 0.5 * self.nu if self.convention == "compton" else self.nu

    def time_steps(self) -> np.ndarray:
        n = int(math.floor(self.t_end / self.dt + 1e-9))
        steps = np.full(n, self.dt)
        rest = self.t_end - n * self.dt
        if rest > 1e-9 * self.dt:
            steps = np.append(steps, rest)
        return steps


@dataclass(frozen=True)
class QuantumModel:
    kind: str
    sigma0: float = 1.0
    omega: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.kind not in MODELS:
            raise ValueError(f"kind must be one of {MODELS}, got {self.kind!r}")
        for name in ("sigma0", "omega", "mass", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")

    @classmethod
    def free_packet(cls, sigma0: float = 1.0, mass: float = 1.0, hbar: float = 1.0):
        return cls("free_gaussian_packet", sigma0=sigma0, mass=mass, hbar=hbar)

    @classmethod
    def harmonic(cls, omega: float = 1.0, mass: float = 1.0, hbar: float = 1.0):
        return cls("harmonic_ground_state", omega=omega, mass=mass, hbar=hbar)

    @property
    def nelson_nu(self) -> float:
        return self.hbar / (2.0 * self.mass)

    @property
    def spreading_time(self) -> float:
        """t0 = 2 m sigma0^2 / hbar; the free packet variance doubles at t0."""
        return 2.0 * self.mass * self.sigma0**2 / self.hbar

    def variance(self, t: float) -> float:
        if self.kind == "harmonic_ground_state":
            return self.hbar / (2.0 * self.mass * self.omega)
        return self.sigma0**2 * (1.0 + (t / self.spreading_time) ** 2)

    def drift_rate(self, t: float) -> float:
        """k(t) in b(x, t) = k(t) x."""
        if t < 0:
            raise DomainError(f"t must be >= 0, got {t!r}")
        if self.kind == "harmonic_ground_state":
            return -self.omega
        t0 = self.spreading_time
        current = (t / t0**2) / (1.0 + (t / t0) ** 2)
        osmotic = -self.nelson_nu / self.variance(t)
        return current + osmotic

    def density(self, x, t: float = 0.0):
        return stats.norm.pdf(x, scale=math.sqrt(self.variance(t)))

    def cdf(self, x, t: float = 0.0):
        return stats.norm.cdf(x, scale=math.sqrt(self.variance(t)))

    def max_rate(self, t_end: float) -> float:
        if self.kind == "harmonic_ground_state":
            return self.omega
        # |k| is largest at t = 0, where it equals 1/t0
        return 1.0 / self.spreading_time


def drift_field(model: QuantumModel, x, t: float):
    """Forward drift b(x, t) in cm/s."""
    return model.drift_rate(t) * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class WalkerEnsemble:
    positions: np.ndarray
    time: float
    seed: int

    @property
    def walkers(self) -> int:
        return int(self.positions.shape[0])


@numba.njit(cache=True, nogil=True)
def _em_kernel(x, noise, rates, dts, sigmas):
    n_walk, n_step = noise.shape
    for i in range(n_walk):
        xi = x[i]
        for j in range(n_step):
            xi = xi + rates[j] * xi * dts[j] + sigmas[j] * noise[i, j]
        x[i] = xi


def euler_maruyama(x0, rates, dts, sigmas, noise) -> np.ndarray:
    """Euler-Maruyama for dx = k(t) x dt + s(t) dW with standard-normal ``noise``.

    Step j uses drift rate ``rates[j]``, step size ``dts[j]`` and increment
    scale ``sigmas[j]`` (already multiplied by sqrt(dt)).
    """
    x = np.array(x0, dtype=float, copy=True)
    noise = np.ascontiguousarray(noise, dtype=float).reshape(x.shape[0], -1)
    _em_kernel(x, noise, np.asarray(rates, float), np.asarray(dts, float), np.asarray(sigmas, float))
    return x


def _walker_noise(seed: int, block: range, n_steps: int) -> np.ndarray:
    out = np.empty((len(block), n_steps + 1))
    for row, i in enumerate(block):
        out[row] = generator(seed, i).standard_normal(n_steps + 1)
    return out


def evolve_ensemble(model: QuantumModel, spec: DiffusionSpec, threads: int = 1) -> WalkerEnsemble:
    """Sample |psi(x, 0)|^2 and integrate Nelson's SDE to ``spec.t_end``.

    Walker i draws its initial position and all increments from substream
    (seed, i), so results do not depend on ``threads``.
    """
    dts = spec.time_steps()
    if dts.size and model.max_rate(spec.t_end) * dts.max() >= MAX_RATE_DT:
        raise DomainError(
            f"unstable step: rate*dt = {model.max_rate(spec.t_end) * dts.max():.3g} "
            f">= {MAX_RATE_DT}; reduce dt"
        )
    times = np.concatenate(([0.0], np.cumsum(dts)[:-1])) if dts.size else dts
    rates = np.array([model.drift_rate(t) for t in times])
    sigmas = np.sqrt(2.0 * spec.sde_nu * dts)
    sd0 = math.sqrt(model.variance(0.0))
    out = np.empty(spec.walkers)

    def run(block: range):
        noise = _walker_noise(spec.seed, block, dts.size)
        x = sd0 * noise[:, 0]
        out[block.start:block.stop] = euler_maruyama(x, rates, dts, sigmas, noise[:, 1:])

    blocks = chunked(spec.walkers, threads, min_chunk=512)
    if threads <= 1:
        for b in blocks:
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, blocks))
    return WalkerEnsemble(out, float(spec.t_end), spec.seed)


def sample_exact(model: QuantumModel, t: float, n: int, seed: int = 0) -> np.ndarray:
    """Direct draws from |psi(x, t)|^2 (test oracle)."""
    g = generator(seed, 0)
    return math.sqrt(model.variance(t)) * g.standard_normal(n)


@dataclass(frozen=True)
class DensityDistance:
    l1: float
    ks: float
    bins: int
    degenerate: bool = False


def _edges(x: np.ndarray, bins) -> np.ndarray:
    if bins is None:
        bins = "fd"
    return np.histogram_bin_edges(x, bins=bins)


def density_distance(ensemble: WalkerEnsemble | np.ndarray, model: QuantumModel, bins=None) -> DensityDistance:
    """Binned L1 distance and KS statistic between walkers and |psi(x, t)|^2.

    L1 sums |empirical - exact| bin probabilities plus the exact mass outside
    the histogram range, so it lies in [0, 2]. Bins default to
    Freedman-Diaconis.
    """
    x, t = (ensemble.positions, ensemble.time) if isinstance(ensemble, WalkerEnsemble) else (np.asarray(ensemble), 0.0)
    if x.size == 0:
        raise ValueError("empty ensemble")
    if np.ptp(x) == 0:
        return DensityDistance(float("nan"), float("nan"), 0, degenerate=True)
    edges = _edges(x, bins)
    counts, _ = np.histogram(x, edges)
    p_emp = counts / x.size
    p_exact = np.diff(model.cdf(edges, t))
    outside = max(0.0, 1.0 - float(p_exact.sum()))
    l1 = float(np.abs(p_emp - p_exact).sum()) + outside
    ks = float(stats.kstest(x, lambda v: model.cdf(v, t)).statistic)
    return DensityDistance(l1, ks, len(edges) - 1)


def empirical_l1(a: np.ndarray, b: np.ndarray, bins=None) -> float:
    """Binned L1 distance between two samples on common edges."""
    both = np.concatenate([a, b])
    edges = _edges(both, bins)
    pa = np.histogram(a, edges)[0] / a.size
    pb = np.histogram(b, edges)[0] / b.size
    return float(np.abs(pa - pb).sum())
