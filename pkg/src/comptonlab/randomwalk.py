"""Monte-Carlo check of l = R / sqrt(N) for isotropic fixed-length walks.

Step directions
---------------
dim = 1
    +1 or -1 with equal probability, one random bit per step.
dim = 2
    von Neumann's trig-free method: draw (a, b) uniform in the unit disk by
    rejection, the direction is ((a^2 - b^2)/s, 2ab/s) with s = a^2 + b^2.
dim = 3
    Marsaglia (1972): (a, b) uniform in the unit disk, direction
    (2a sqrt(1-s), 2b sqrt(1-s), 1 - 2s).

All three give unit steps, so E|R|^2 = N l^2 exactly in every dimension.
Each raw 64-bit word supplies two 32-bit uniforms (a 2D/3D candidate) or 64
one-dimensional steps.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .constants import CGS, Particle, PhysicalConstants, compton_wavelength, DomainError
from .rng import RawWords, check_seed, chunked


@dataclass(frozen=True)
class WalkSpec:
    steps: int
    step_length: float = 1.0
    dim: int = 3
    walkers: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise DomainError(f"steps must be >= 0, got {self.steps}")
        if not self.step_length > 0:
            raise DomainError(f"step_length must be > 0, got {self.step_length}")
        if self.dim not in (1, 2, 3):
            raise DomainError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.walkers < 1:
            raise DomainError(f"walkers must be >= 1, got {self.walkers}")
        check_seed(self.seed)


@dataclass(frozen=True)
class WalkEnsembleResult:
    rms_displacement: float
    mean_displacement_vector: list[float]
    stderr_rms: float
    walkers: int
    seed: int
    # extras used by the statistical checks
    mean_square_displacement: float = 0.0
    stderr_msd: float = float("nan")
    stderr_mean_vector: list[float] = field(default_factory=list)
    stderr_defined: bool = True


def rms_stretch(R: float, N: float) -> float:
    """Typical stretch l = R / sqrt(N) of an N-step walk spanning R."""
    if not N >= 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    if not R > 0:
        raise DomainError(f"R must be > 0, got {R!r}")
    return R / math.sqrt(N)


_TWO_U32 = 2.0 / 4294967296.0


@numba.njit(cache=True, nogil=True)
def _walk_kernel(words, need, dim, acc):
    """Advance up to ``need`` steps using ``words``; returns (steps, words) used."""
    done = 0
    k = 0
    nw = words.shape[0]
    x = acc[0]
    if dim == 1:
        while done < need and k < nw:
            w = words[k]
            k += 1
            nbits = min(64, need - done)
            for j in range(nbits):
                x += 2.0 * float(np.int64((w >> np.uint64(j)) & np.uint64(1))) - 1.0
            done += nbits
        acc[0] = x
        return done, k
    y = acc[1]
    z = acc[2] if dim == 3 else 0.0
    # branchless rejection: rejected candidates contribute zero
    while done < need and k < nw:
        w = words[k]
        k += 1
        a = (float(np.int64(w >> np.uint64(32))) + 0.5) * _TWO_U32 - 1.0
        b = (float(np.int64(w & np.uint64(0xFFFFFFFF))) + 0.5) * _TWO_U32 - 1.0
        s = a * a + b * b
        ok = 1.0 if s < 1.0 else 0.0
        if dim == 2:
            inv = ok / s
            x += (a * a - b * b) * inv
            y += 2.0 * a * b * inv
        else:
            r = 2.0 * math.sqrt(max(1.0 - s, 0.0)) * ok
            x += a * r
            y += b * r
            z += (1.0 - 2.0 * s) * ok
        done += 1 if s < 1.0 else 0
    acc[0] = x
    acc[1] = y
    if dim == 3:
        acc[2] = z
    return done, k


def simulate_walk(spec: WalkSpec, walker_index: int) -> np.ndarray:
    """End-to-end displacement (cm) of walker ``walker_index``."""
    if not 0 <= walker_index < spec.walkers:
        raise IndexError(f"walker_index {walker_index} outside [0, {spec.walkers})")
    acc = np.zeros(spec.dim)
    remaining = spec.steps
    if remaining == 0:
        return acc
    src = RawWords(spec.seed, walker_index)
    if spec.dim == 1:
        words = src.take(-(-remaining // 64))
        _walk_kernel(words, remaining, 1, acc)
    else:
        # acceptance is pi/4; ask for a little more than the expected 1.273 n
        batch = int(1.3 * remaining) + 32
        while remaining > 0:
            words = src.take(batch)
            done, _ = _walk_kernel(words, remaining, spec.dim, acc)
            remaining -= done
            batch = int(1.3 * remaining) + 32
    return acc * spec.step_length


def simulate_ensemble(spec: WalkSpec, threads: int = 1) -> np.ndarray:
    """Displacements of all walkers, shape ``(walkers, dim)``, in walker order."""
    out = np.empty((spec.walkers, spec.dim))

    def run(block: range):
        for i in block:
            out[i] = simulate_walk(spec, i)

    blocks = chunked(spec.walkers, threads)
    if threads <= 1:
        for b in blocks:
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, blocks))
    return out


def summarize(disp: np.ndarray, seed: int) -> WalkEnsembleResult:
    m = disp.shape[0]
    r2 = np.einsum("ij,ij->i", disp, disp)
    msd = float(r2.mean())
    rms = math.sqrt(msd)
    mean_vec = disp.mean(axis=0)
    if m >= 2:
        se_msd = float(r2.std(ddof=1) / math.sqrt(m))
        # delta method: d sqrt(x) = dx / (2 sqrt(x))
        se_rms = se_msd / (2.0 * rms) if rms > 0 else 0.0
        se_vec = (disp.std(axis=0, ddof=1) / math.sqrt(m)).tolist()
        defined = True
    else:
        se_msd = se_rms = float("nan")
        se_vec = [float("nan")] * disp.shape[1]
        defined = False
    return WalkEnsembleResult(
        rms_displacement=rms,
        mean_displacement_vector=[float(v) for v in mean_vec],
        stderr_rms=se_rms,
        walkers=m,
        seed=seed,
        mean_square_displacement=msd,
        stderr_msd=se_msd,
        stderr_mean_vector=[float(v) for v in se_vec],
        stderr_defined=defined,
    )


def estimate_rms(spec: WalkSpec, threads: int = 1) -> WalkEnsembleResult:
    """Monte-Carlo estimate of the RMS end-to-end distance, expected l sqrt(N)."""
    return summarize(simulate_ensemble(spec, threads), spec.seed)


def universe_consistency(R: float, N: float, p: Particle, const: PhysicalConstants = CGS) -> float:
    """(R / sqrt(N)) / compton_wavelength(p); order unity when the coincidence holds."""
    return rms_stretch(R, N) / compton_wavelength(p, const)
