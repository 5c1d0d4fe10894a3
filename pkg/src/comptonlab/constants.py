"""Physical constants (CGS-Gaussian), particle data and Compton/thermal scales.

Every other module takes its numbers from here. Values are rounded to four
significant figures (CODATA 2018 for the fundamental constants, PDG 2022 for
particle masses); see README.md for the table and its sources.

A plain-text key/value file can override any entry::

    # comment
    hbar = 1.055e-27
    G = 0.0
    particle.muon = 1.884e-25 -4.803e-10 0.5     # mass [g], charge [esu], spin [hbar]

The environment variable ``COMPTONLAB_CONSTANTS`` names a file loaded by
:func:`active_table`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

TABLE_VERSION = "2024.1"
CONFIG_ENV = "COMPTONLAB_CONSTANTS"


class DomainError(ValueError):
    """An argument lies outside the domain of a physical formula."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.055e-27  # erg s
    c: float = 2.998e10  # cm / s
    G: float = 6.674e-8  # cm^3 g^-1 s^-2
    k_B: float = 1.381e-16  # erg / K
    e: float = 4.803e-10  # esu

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            # G = 0 is allowed: it switches gravity off in Kerr-Newman checks.
            if not math.isfinite(v) or v < 0 or (v == 0 and f.name != "G"):
                raise DomainError(f"constant {f.name} must be positive, got {v!r}")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        """hbar = c = 1 units (G, k_B and e also set to 1)."""
        return cls(hbar=1.0, c=1.0, G=1.0, k_B=1.0, e=1.0)

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Particle:
    name: str
    mass: float  # g
    charge: float = 0.0  # esu
    spin: float = 0.0  # units of hbar

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"particle {self.name!r} needs mass > 0, got {self.mass!r}")
        if self.spin < 0:
            raise DomainError(f"particle {self.name!r} has negative spin {self.spin!r}")


CGS = PhysicalConstants()
NATURAL = PhysicalConstants.natural()

# name -> (mass [g], charge [units of e], spin [hbar])
_BUILTIN_PARTICLES = {
    "pion": (2.488e-25, 1.0, 0.0),  # pi+, 139.57 MeV
    "pion0": (2.406e-25, 0.0, 0.0),  # pi0, 134.98 MeV
    "electron": (9.109e-28, -1.0, 0.5),
    "muon": (1.884e-25, -1.0, 0.5),
    "proton": (1.673e-24, 1.0, 0.5),
    "neutron": (1.675e-24, 0.0, 0.5),
}


def builtin_particles(const: PhysicalConstants = CGS) -> dict[str, Particle]:
    return {
        name: Particle(name, mass, q * const.e, spin)
        for name, (mass, q, spin) in _BUILTIN_PARTICLES.items()
    }


def unit_particle(spin: float = 0.5) -> Particle:
    """m = 1 particle for natural-unit simulations."""
    return Particle("unit", 1.0, 0.0, spin)


@dataclass(frozen=True)
class ConstantsTable:
    constants: PhysicalConstants = CGS
    particles: dict[str, Particle] = field(default_factory=builtin_particles)
    version: str = TABLE_VERSION

    def particle(self, name: str) -> Particle:
        try:
            return self.particles[name]
        except KeyError:
            known = ", ".join(sorted(self.particles))
            raise KeyError(f"unknown particle {name!r} (known: {known})") from None

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "constants": self.constants.as_dict(),
            "particles": {
                n: {"mass": p.mass, "charge": p.charge, "spin": p.spin}
                for n, p in self.particles.items()
            },
        }


def dump_config(table: ConstantsTable) -> str:
    lines = [f"# comptonlab constants table {table.version}"]
    for k, v in table.constants.as_dict().items():
        lines.append(f"{k} = {v!r}")
    for name, p in table.particles.items():
        lines.append(f"particle.{name} = {p.mass!r} {p.charge!r} {p.spin!r}")
    return "\n".join(lines) + "\n"


def parse_config(text: str, base: ConstantsTable | None = None) -> ConstantsTable:
    """Apply ``key = value`` overrides in ``text`` on top of ``base``."""
    base = base or ConstantsTable()
    const_over: dict[str, float] = {}
    part_over: dict[str, Particle] = {}
    version = base.version
    names = {f.name for f in fields(PhysicalConstants)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in names:
            const_over[key] = float(value)
        elif key == "version":
            version = value
        elif key.startswith("particle."):
            pname = key[len("particle."):]
            parts = value.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: particle needs 'mass charge spin'")
            mass, charge, spin = map(float, parts)
            part_over[pname] = Particle(pname, mass, charge, spin)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")

    const = replace(base.constants, **const_over)
    particles = dict(base.particles)
    if "e" in const_over:
        # built-in charges follow the new elementary charge
        for name, p in builtin_particles(const).items():
            if name in particles and particles[name].charge == base.particles[name].charge:
                particles[name] = replace(particles[name], charge=p.charge)
    particles.update(part_over)
    return ConstantsTable(const, particles, version)


def load_config(path: str | os.PathLike) -> ConstantsTable:
    return parse_config(Path(path).read_text())


def active_table() -> ConstantsTable:
    """Default table, overridden by the file named in ``$COMPTONLAB_CONSTANTS``."""
    path = os.environ.get(CONFIG_ENV)
    return load_config(path) if path else ConstantsTable()


def _check_mass(p: Particle):
    if not p.mass > 0:
        raise DomainError(f"mass must be positive, got {p.mass!r}")


def compton_wavelength(p: Particle, const: PhysicalConstants = CGS, *, full: bool = False) -> float:
    """Reduced Compton wavelength hbar/(m c) in cm; ``full=True`` gives h/(m c)."""
    _check_mass(p)
    lam = const.hbar / (p.mass * const.c)
    return 2.0 * math.pi * lam if full else lam


def compton_time(p: Particle, const: PhysicalConstants = CGS) -> float:
    """Compton time hbar/(m c^2) in s."""
    _check_mass(p)
    return const.hbar / (p.mass * const.c * const.c)


def thermal_wavelength(p: Particle, T: float, const: PhysicalConstants = CGS) -> float:
    """sqrt(hbar^2 / (m k_B T)) in cm."""
    _check_mass(p)
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")
    return const.hbar / math.sqrt(p.mass * const.k_B * T)


def rest_temperature(p: Particle, const: PhysicalConstants = CGS) -> float:
    """Temperature with k_B T = m c^2."""
    return p.mass * const.c**2 / const.k_B
