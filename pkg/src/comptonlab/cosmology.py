"""Fluctuational particle creation dN/dt = sqrt(N)/tau and large-number audit.

The rate law separates: sqrt(N(t)) = sqrt(N0) + t/(2 tau). That closed form
is the oracle; the RK4 integrator is what gets checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .constants import CGS, DomainError, Particle, PhysicalConstants, compton_time, compton_wavelength

# integration step is capped at this fraction of the growth time tau*sqrt(N0)
STEP_FRACTION = 0.1
AUDIT_TOLERANCE_DEX = 1.0
PION_HUBBLE_FORM = "m^3 = hbar^2 H / (G c)"


@dataclass(frozen=True)
class CosmologySpec:
    N0: float = 1.0
    tau: float = 1.0
    t_end: float = 1.0
    dt: float = 0.1

    def __post_init__(self):
        if not self.N0 >= 0:
            raise DomainError(f"N0 must be >= 0, got {self.N0!r}")
        if not self.tau > 0:
            raise DomainError(f"tau must be > 0, got {self.tau!r}")
        if not self.dt > 0:
            raise DomainError(f"dt must be > 0, got {self.dt!r}")
        if not self.t_end >= 0:
            raise DomainError(f"t_end must be >= 0, got {self.t_end!r}")


@dataclass(frozen=True)
class CosmologyTrajectory:
    times: np.ndarray
    N_values: np.ndarray
    monotone: bool
    substeps: int = 1

    @property
    def refined(self) -> bool:
        return self.substeps > 1


@dataclass(frozen=True)
class CosmicScales:
    T: float  # s
    R: float  # cm
    M_total: float  # g
    H: float  # 1/s


def creation_rate(N: float, tau: float) -> float:
    """dN/dt = sqrt(N) / tau."""
    if not N >= 0:
        raise DomainError(f"N must be >= 0, got {N!r}")
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    return math.sqrt(N) / tau


def closed_form(t, N0: float, tau: float):
    return (math.sqrt(N0) + np.asarray(t) / (2.0 * tau)) ** 2


@numba.njit(cache=True)
def _rk4(N0, tau, h, substeps, n_out):
    out = np.empty(n_out + 1)
    out[0] = N0
    N = N0
    for i in range(n_out):
        for _ in range(substeps):
            k1 = math.sqrt(N) / tau
            k2 = math.sqrt(N + 0.5 * h * k1) / tau
            k3 = math.sqrt(N + 0.5 * h * k2) / tau
            k4 = math.sqrt(N + h * k3) / tau
            N = N + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out[i + 1] = N
    return out


def substeps_for(spec: CosmologySpec) -> int:
    if spec.N0 == 0:
        return 1
    h_max = STEP_FRACTION * spec.tau * math.sqrt(spec.N0)
    return max(1, math.ceil(spec.dt / h_max - 1e-12))


def integrate_population(spec: CosmologySpec) -> CosmologyTrajectory:
    """RK4 with fixed step; samples every ``spec.dt``.

    If ``dt`` exceeds 0.1 tau sqrt(N0) each output interval is split into
    equal substeps; ``trajectory.substeps`` reports the split.
    """
    n_out = int(math.floor(spec.t_end / spec.dt + 1e-9))
    sub = substeps_for(spec)
    N = _rk4(float(spec.N0), float(spec.tau), spec.dt / sub, sub, n_out)
    times = spec.dt * np.arange(n_out + 1)
    monotone = bool(np.all(np.diff(N) > 0)) if spec.N0 > 0 else bool(np.all(np.diff(N) >= 0))
    return CosmologyTrajectory(times, N, monotone, sub)


def sqrt_n_age(N: float, tau: float) -> float:
    """T = tau sqrt(N)."""
    return tau * math.sqrt(N)


def exact_age(N: float, tau: float, N0: float = 1.0) -> float:
    """Time for the rate law to grow N0 into N: 2 tau (sqrt(N) - sqrt(N0))."""
    return 2.0 * tau * (math.sqrt(N) - math.sqrt(N0))


def derived_scales(N: float, p: Particle, const: PhysicalConstants = CGS) -> CosmicScales:
    """Age, radius, mass and Hubble rate of an N-particle universe of ``p``."""
    if not N >= 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    root = math.sqrt(N)
    R = compton_wavelength(p, const) * root
    return CosmicScales(T=compton_time(p, const) * root, R=R, M_total=N * p.mass, H=const.c / R)


def pion_hubble_mass(H: float, const: PhysicalConstants = CGS) -> float:
    """Mass with m^3 = hbar^2 H / (G c) (Weinberg's cube-root relation)."""
    if not H > 0:
        raise DomainError(f"H must be > 0, got {H!r}")
    return (const.hbar**2 * H / (const.G * const.c)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class AuditRow:
    relation: str
    ratio: float
    residual_dex: float
    passed: bool
    structural: bool
    note: str = ""


def large_number_audit(
    R: float,
    N: float,
    p: Particle,
    const: PhysicalConstants = CGS,
    *,
    T_obs: float | None = None,
    M_obs: float | None = None,
    R_obs: float | None = None,
    tolerance: float = AUDIT_TOLERANCE_DEX,
) -> list[AuditRow]:
    """log10 residuals of each large-number relation; pass if |residual| <= tolerance.

    Missing observations default to the scheme's own prediction, so their
    rows come out exactly zero. H is taken as c / R_obs.
    """
    if not R > 0:
        raise DomainError(f"R must be > 0, got {R!r}")
    sc = derived_scales(N, p, const)
    R_obs = R if R_obs is None else R_obs
    T_obs = sc.T if T_obs is None else T_obs
    M_obs = sc.M_total if M_obs is None else M_obs
    for name, v in (("R_obs", R_obs), ("T_obs", T_obs), ("M_obs", M_obs)):
        if not v > 0:
            raise DomainError(f"{name} must be > 0, got {v!r}")
    entries = [
        ("rms_stretch", sc.R / R, True, "compton_wavelength*sqrt(N)/R"),
        ("age", sc.T / T_obs, True, "compton_time*sqrt(N)/T_obs"),
        ("radius", sc.R / R_obs, True, "compton_wavelength*sqrt(N)/R_obs"),
        ("mass", sc.M_total / M_obs, True, "N*m/M_obs"),
        ("pion_hubble", pion_hubble_mass(const.c / R_obs, const) / p.mass, False,
         f"adopted form {PION_HUBBLE_FORM}, H = c/R_obs"),
    ]
    rows = []
    for name, ratio, structural, note in entries:
        res = math.log10(ratio)
        rows.append(AuditRow(name, ratio, res, abs(res) <= tolerance, structural, note))
    return rows
