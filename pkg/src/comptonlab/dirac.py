"""1+1D Dirac propagation: checkerboard path sum, spectral oracle, Zitterbewegung.

Representation: chiral, alpha = sigma_z, beta = sigma_x, so

    H = -i hbar c sigma_z d/dx + m c^2 sigma_x

and the two components are right- and left-movers. Any unitarily equivalent
choice gives the same observables; only <x>, norms and L2 distances are used
in checks.

Checkerboard: on the light-cone lattice dx = c dt each component hops one
cell along its light ray per step and picks up -i eps (eps = m c^2 dt / hbar)
when it reverses direction. The sign matches exp(-i H t / hbar) for the
sign of beta chosen here. Amplitudes are summed exactly with a transfer-matrix
update, no sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import NATURAL, DomainError, PhysicalConstants

EDGE_FRACTION = 0.05
EDGE_TOL = 1e-10
NYQUIST_FRACTION = 0.05
NYQUIST_TOL = 1e-10


@dataclass(frozen=True)
class LatticeSpec:
    dx: float
    extent: float
    steps: int
    c: float = 1.0

    def __post_init__(self):
        if not self.dx > 0:
            raise DomainError(f"dx must be > 0, got {self.dx!r}")
        if self.steps < 0:
            raise DomainError(f"steps must be >= 0, got {self.steps}")
        n = self.extent / self.dx
        if abs(n - round(n)) > 1e-9 * n or round(n) % 2 or round(n) < 2:
            raise DomainError(f"extent/dx must be an even integer, got {n!r}")

    @classmethod
    def for_time(cls, dx: float, extent: float, t: float, c: float = 1.0) -> "LatticeSpec":
        steps = round(t * c / dx)
        if abs(steps * dx / c - t) > 1e-9 * max(t, dx / c):
            raise DomainError(f"t = {t!r} is not a whole number of lattice steps dt = {dx / c!r}")
        return cls(dx, extent, steps, c)

    @property
    def dt(self) -> float:
        return self.dx / self.c

    @property
    def n(self) -> int:
        return round(self.extent / self.dx)

    def grid(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx


@dataclass
class SpinorField:
    """Two complex components on a uniform periodic position grid."""

    grid: np.ndarray
    amplitudes: np.ndarray  # shape (2, n)
    time: float = 0.0
    representation: str = "position"
    flags: list[str] = field(default_factory=list)

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.dx))

    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def mean_position(self) -> float:
        rho = self.density()
        return float(np.sum(self.grid * rho) / np.sum(rho))

    def l2_distance(self, other: "SpinorField") -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes - other.amplitudes) ** 2) * self.dx))


def wavenumbers(grid: np.ndarray) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(grid.size, d=grid[1] - grid[0])


def _hamiltonian_parts(k, m, const: PhysicalConstants):
    """Per-mode H = hz sigma_z + hx sigma_x and energy E >= 0."""
    hz = const.hbar * const.c * k
    hx = np.full_like(hz, m * const.c**2)
    return hz, hx, np.hypot(hz, hx)


def _apply_h(phi, hz, hx, scale):
    """scale * H applied per mode to phi (shape (2, n))."""
    up, dn = phi
    return np.array([scale * (hz * up + hx * dn), scale * (hx * up - hz * dn)])


def gaussian_packet(
    grid: np.ndarray,
    sigma: float,
    p0: float = 0.0,
    x0: float = 0.0,
    spinor=(1.0, 0.0),
    band: str = "both",
    m: float = 1.0,
    const: PhysicalConstants = NATURAL,
) -> SpinorField:
    """Normalized packet with |psi|^2 ~ exp(-(x-x0)^2 / (2 sigma^2)) and momentum p0.

    The default spinor (1, 0) is a pure right-mover; at rest it mixes the two
    energy bands equally. ``band="positive"`` projects onto positive energy.
    """
    if band not in ("both", "positive"):
        raise ValueError(f"band must be 'both' or 'positive', got {band!r}")
    env = np.exp(-((grid - x0) ** 2) / (4.0 * sigma**2) + 1j * p0 * grid / const.hbar)
    s = np.asarray(spinor, dtype=complex)
    amps = s[:, None] * env[None, :]
    if band == "positive":
        k = wavenumbers(grid)
        hz, hx, E = _hamiltonian_parts(k, m, const)
        phi = np.fft.fft(amps, axis=1)
        inv_e = np.divide(1.0, E, out=np.zeros_like(E), where=E > 0)
        phi = 0.5 * (phi + _apply_h(phi, hz, hx, inv_e))
        amps = np.fft.ifft(phi, axis=1)
    field_ = SpinorField(grid.astype(float), amps)
    field_.amplitudes /= field_.norm()
    return field_


def _edge_weight(f: SpinorField) -> float:
    rho = f.density()
    w = max(1, int(EDGE_FRACTION * rho.size))
    return float((rho[:w].sum() + rho[-w:].sum()) / rho.sum())


def _check_lattice(psi0: SpinorField, lat: LatticeSpec, const: PhysicalConstants):
    if psi0.representation != "position":
        raise ValueError("checkerboard needs a position-space field")
    if psi0.grid.size != lat.n or not math.isclose(psi0.dx, lat.dx, rel_tol=1e-12):
        raise ValueError("field grid does not match lattice")
    if not math.isclose(const.c, lat.c, rel_tol=1e-15):
        raise DomainError("lattice speed differs from c")


def checkerboard_steps(psi0: SpinorField, lat: LatticeSpec, m: float, const: PhysicalConstants = NATURAL):
    """Yield (right, left) amplitudes after each of ``lat.steps`` lattice steps."""
    _check_lattice(psi0, lat, const)
    eps = m * const.c**2 * lat.dt / const.hbar
    right, left = psi0.amplitudes.astype(complex, copy=True)
    for _ in range(lat.steps):
        right, left = right - 1j * eps * left, left - 1j * eps * right
        right = np.roll(right, 1)
        left = np.roll(left, -1)
        yield right, left


def checkerboard_propagate(psi0: SpinorField, lat: LatticeSpec, m: float, const: PhysicalConstants = NATURAL) -> SpinorField:
    """Exact sum over light-cone lattice paths, -i eps per direction reversal."""
    amps = psi0.amplitudes.astype(complex, copy=True)
    for right, left in checkerboard_steps(psi0, lat, m, const):
        amps = np.array([right, left])
    if lat.steps == 0:
        _check_lattice(psi0, lat, const)
    out = SpinorField(psi0.grid, amps, psi0.time + lat.steps * lat.dt)
    if _edge_weight(out) > EDGE_TOL or _edge_weight(psi0) > EDGE_TOL:
        out.flags.append("boundary")
    return out


def spectral_evolve(psi0: SpinorField, m: float, t: float, const: PhysicalConstants = NATURAL) -> SpinorField:
    """Exact evolution exp(-i H t / hbar), mode by mode."""
    phi = np.fft.fft(psi0.amplitudes, axis=1)
    k = wavenumbers(psi0.grid)
    hz, hx, E = _hamiltonian_parts(k, m, const)
    flags = []
    top = np.abs(k) >= (1.0 - NYQUIST_FRACTION) * np.abs(k).max()
    power = np.sum(np.abs(phi) ** 2, axis=0)
    if power[top].sum() > NYQUIST_TOL * power.sum():
        flags.append("aliasing")
    phase = E * t / const.hbar
    # sin(E t/hbar)/E written via sinc so that E = 0 (massless, k = 0) is regular
    sin_over_e = (t / const.hbar) * np.sinc(phase / np.pi)
    phi = np.cos(phase) * phi - 1j * _apply_h(phi, hz, hx, sin_over_e)
    amps = np.fft.ifft(phi, axis=1)
    return SpinorField(psi0.grid, amps, psi0.time + t, flags=flags)


def mean_position_series(psi0: SpinorField, m: float, times, const: PhysicalConstants = NATURAL) -> np.ndarray:
    """<x>(t) from exact spectral evolution at each requested time."""
    return np.array([spectral_evolve(psi0, m, t, const).mean_position() for t in times])


@dataclass(frozen=True)
class ZitterReport:
    dominant_frequency: float  # angular, 1/s
    oscillation_amplitude: float
    drift_velocity: float
    frequency_resolution: float


def zitter_analyze(series, times, expected_frequency: float | None = None) -> ZitterReport:
    """Dominant angular frequency and half peak-to-peak of the detrended <x>(t).

    With ``expected_frequency`` the sampling must span at least ten periods
    at eight or more samples per period.
    """
    y = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    if y.shape != t.shape or y.size < 16:
        raise ValueError("need matching series/times with at least 16 samples")
    step = np.diff(t)
    if not np.allclose(step, step[0], rtol=1e-9, atol=0):
        raise ValueError("times must be uniformly spaced")
    dt = float(step[0])
    span = dt * y.size
    if expected_frequency is not None:
        period = 2.0 * np.pi / expected_frequency
        if span < 10.0 * period:
            raise ValueError(f"under-resolved: {span / period:.2f} periods sampled, need >= 10")
        if period / dt < 8.0:
            raise ValueError(f"under-resolved: {period / dt:.2f} samples per period, need >= 8")
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    spec = np.abs(np.fft.rfft(resid))
    spec[0] = 0.0
    freqs = 2.0 * np.pi * np.fft.rfftfreq(y.size, d=dt)
    return ZitterReport(
        dominant_frequency=float(freqs[int(np.argmax(spec))]),
        oscillation_amplitude=float(0.5 * (resid.max() - resid.min())),
        drift_velocity=float(slope),
        frequency_resolution=float(2.0 * np.pi / span),
    )


def spin_flip_rate(m: float, const: PhysicalConstants = NATURAL) -> float:
    """m c^2 / hbar, the direction-reversal rate of the checkerboard."""
    return m * const.c**2 / const.hbar


def zitter_prediction(p: float, m: float, t: float, const: PhysicalConstants = NATURAL) -> dict[str, float]:
    """Single-momentum evaluation of the Dirac position operator.

    ``classical`` is c^2 p t / E. The oscillating term has coefficient
    (i/2) c hbar (alpha - c p/H) / H, whose matrix norm at momentum p is
    (c hbar / 2) (m c^2 / E) / E, so ``amplitude`` = hbar m c^3 / (2 E^2).
    It oscillates at ``frequency`` = 2E/hbar.
    """
    if not m > 0:
        raise DomainError(f"m must be > 0, got {m!r}")
    c = const.c
    E = math.hypot(c * p, m * c * c)
    return {
        "classical": c * c * p * t / E,
        "amplitude": const.hbar * m * c**3 / (2.0 * E * E),
        "frequency": 2.0 * E / const.hbar,
    }
