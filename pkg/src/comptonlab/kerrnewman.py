"""Kerr-Newman horizon radii and the electron's naked singularity.

With r_g = G M / c^2 the horizons are r_(+/-) = r_g +/- sqrt(D), where

    D = r_g^2 - a^2 - r_Q^2,    r_Q^2 = G Q^2 / c^4   (Gaussian units).

D < 0 means no horizon: r_+ = r_g + i b with b = sqrt(-D). ``literal_charge``
swaps in G^2 Q^2 / c^8 for r_Q^2, which is not a length squared in Gaussian
units and is kept only for comparison.

Lengths are divided by the largest of r_g, a, r_Q before squaring, so
electron-scale inputs (r_g ~ 1e-55 cm) neither underflow nor lose the
dominant term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CGS, DomainError, Particle, PhysicalConstants, builtin_particles, compton_wavelength

EXTREMAL_RTOL = 1e-12


@dataclass(frozen=True)
class KNConfig:
    M: float  # g
    Q: float = 0.0  # esu
    a: float = 0.0  # cm

    def __post_init__(self):
        if not (self.M > 0 and math.isfinite(self.M)):
            raise DomainError(f"M must be > 0, got {self.M!r}")

    @classmethod
    def from_particle(cls, p: Particle, const: PhysicalConstants = CGS) -> "KNConfig":
        """Spin parameter a = S / (M c) with S = spin * hbar."""
        return cls(p.mass, p.charge, spin_parameter(p, const))


@dataclass(frozen=True)
class KNClassification:
    kind: str
    r_plus: float
    r_minus: float | None = None
    b: float | None = None


def spin_parameter(p: Particle, const: PhysicalConstants = CGS) -> float:
    return p.spin * const.hbar / (p.mass * const.c)


def _scaled_terms(cfg: KNConfig, const: PhysicalConstants, literal_charge: bool):
    """(scale, r_g/scale, a/scale, r_Q/scale)."""
    c2 = const.c * const.c
    r_g = const.G * cfg.M / c2
    if literal_charge:
        r_q = const.G * abs(cfg.Q) / (c2 * c2)
    else:
        r_q = math.sqrt(const.G) * abs(cfg.Q) / c2
    a = abs(cfg.a)
    scale = max(r_g, a, r_q)
    if scale == 0:
        # only possible with G = 0 and a = Q = 0: a point with no length scale
        return 1.0, 0.0, 0.0, 0.0
    return scale, r_g / scale, a / scale, r_q / scale


def kn_discriminant(cfg: KNConfig, const: PhysicalConstants = CGS, *, literal_charge: bool = False) -> float:
    """D = (GM/c^2)^2 - a^2 - GQ^2/c^4 in cm^2."""
    s, g, a, q = _scaled_terms(cfg, const, literal_charge)
    return (g * g - a * a - q * q) * s * s


def kn_classify(cfg: KNConfig, const: PhysicalConstants = CGS, *, literal_charge: bool = False) -> KNClassification:
    s, g, a, q = _scaled_terms(cfg, const, literal_charge)
    d = g * g - a * a - q * q
    r_g = g * s
    if abs(d) < EXTREMAL_RTOL * max(g * g, a * a):
        return KNClassification("extremal", r_g, r_g)
    if d > 0:
        root = math.sqrt(d)
        return KNClassification("black_hole", (g + root) * s, (g - root) * s)
    return KNClassification("naked_singularity", r_g, None, math.sqrt(-d) * s)


def electron_kn_check(
    particle: Particle | None = None,
    const: PhysicalConstants = CGS,
    *,
    literal_charge: bool = False,
) -> float:
    """b / (compton_wavelength / 2) for ``particle`` (default: the electron).

    Near 1 when the imaginary part of r_+ matches the Zitterbewegung
    amplitude; 0 if the configuration has a horizon.
    """
    if particle is None:
        particle = builtin_particles(const)["electron"]
    res = kn_classify(KNConfig.from_particle(particle, const), const, literal_charge=literal_charge)
    b = res.b if res.b is not None else 0.0
    return b / (0.5 * compton_wavelength(particle, const))
