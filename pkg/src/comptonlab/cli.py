"""Command-line entry point: ``comptonlab <subcommand> [flags]``.

JSON documents have the fixed layout ``{"subcommand", "results", "metadata"}``;
``metadata.wall_time`` is the only field that varies between identical runs.
CSV outputs start with a fixed header row. Exit status is 0 on success and 2
on any validation error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .constants import (
    NATURAL,
    ConstantsTable,
    DomainError,
    Particle,
    active_table,
    compton_time,
    compton_wavelength,
    load_config,
    unit_particle,
)
from .rng import RNG_NAME


@dataclass
class RunMetadata:
    seed: int | None
    rng_name: str | None
    artifact_version: str
    subcommand: str
    wall_time: float


class UsageError(Exception):
    pass


def _clean(obj):
    """Plain JSON types; NaN/inf become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dump_json(subcommand: str, results: dict, seed: int | None, started: float) -> str:
    meta = RunMetadata(
        seed=seed,
        rng_name=RNG_NAME if seed is not None else None,
        artifact_version=__version__,
        subcommand=subcommand,
        wall_time=time.perf_counter() - started,
    )
    doc = {"subcommand": subcommand, "results": _clean(results), "metadata": _clean(asdict(meta))}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def dump_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _positive(name):
    def conv(text):
        v = float(text)
        if not (v > 0 and math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"{name} must be a positive number, got {text}")
        return v

    return conv


def _nonneg(name):
    def conv(text):
        v = float(text)
        if not (v >= 0 and math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {text}")
        return v

    return conv


def _count(name, minimum=0):
    def conv(text):
        try:
            v = int(float(text)) if "e" in text.lower() else int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {text}")
        return v

    return conv


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return v


def _particle(table: ConstantsTable, name: str) -> Particle:
    try:
        return table.particle(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


# subcommands -----------------------------------------------------------------


def cmd_constants(args, table):
    return table.to_json(), None


def cmd_walk(args, table):
    from .randomwalk import WalkSpec, simulate_ensemble, summarize

    spec = WalkSpec(args.steps, args.step_length, args.dim, args.walkers, args.seed)
    disp = simulate_ensemble(spec, args.threads)
    if args.output == "csv":
        axes = ["x", "y", "z"][: spec.dim]
        r2 = np.einsum("ij,ij->i", disp, disp)
        rows = ([i, *disp[i].tolist(), r2[i]] for i in range(spec.walkers))
        return dump_csv(["walker_index", *axes, "r2"], rows), None
    res = summarize(disp, spec.seed)
    out = asdict(res)
    out.update(
        steps=spec.steps,
        step_length=spec.step_length,
        dim=spec.dim,
        expected_rms=spec.step_length * math.sqrt(spec.steps),
    )
    if not res.stderr_defined:
        out["warning"] = "stderr undefined for fewer than 2 walkers"
    return out, spec.seed


def cmd_nelson(args, table):
    from .nelson import DiffusionSpec, QuantumModel, density_distance, diffusion_constant, evolve_ensemble

    if args.particle == "unit":
        const, particle = NATURAL, unit_particle()
    else:
        const, particle = table.constants, _particle(table, args.particle)
    nu = diffusion_constant(particle, args.convention, const)
    if args.model == "free":
        model = QuantumModel.free_packet(args.sigma0, particle.mass, const.hbar)
    else:
        model = QuantumModel.harmonic(args.omega, particle.mass, const.hbar)
    t_end = args.t_end
    if t_end is None:
        t_end = model.spreading_time if args.model == "free" else 20.0 / args.omega
    dt = args.dt if args.dt is not None else 0.01 * (model.spreading_time / 2 if args.model == "free" else 1.0 / args.omega)
    spec = DiffusionSpec(nu, args.convention, dt, t_end, args.walkers, args.seed)
    ens = evolve_ensemble(model, spec, args.threads)
    if args.output == "csv":
        return dump_csv(["walker_index", "x_final"], ([i, x] for i, x in enumerate(ens.positions))), None
    dd = density_distance(ens, model)
    x = ens.positions
    return {
        "model": model.kind,
        "particle": particle.name,
        "convention": args.convention,
        "nu": nu,
        "sde_nu": spec.sde_nu,
        "dt": spec.dt,
        "t_end": ens.time,
        "walkers": ens.walkers,
        "sample_mean": float(x.mean()),
        "sample_variance": float(x.var(ddof=1)) if x.size > 1 else None,
        "exact_variance": model.variance(ens.time),
        "density_distance": asdict(dd),
    }, spec.seed


def cmd_dirac(args, table):
    from .dirac import (
        LatticeSpec,
        checkerboard_steps,
        zitter_prediction,
        gaussian_packet,
        spectral_evolve,
        spin_flip_rate,
        zitter_analyze,
    )

    const = NATURAL if args.units == "natural" else table.constants
    m = args.m if args.m is not None else (1.0 if args.units == "natural" else _particle(table, "electron").mass)
    if m > 0:
        lam = const.hbar / (m * const.c)
        tau = lam / const.c
    else:
        lam, tau = 1.0, 1.0 / const.c
    sigma = args.sigma if args.sigma is not None else lam
    dx = args.dx if args.dx is not None else 0.1 * lam
    t_end = args.t_end if args.t_end is not None else 40.0 * math.pi * tau
    reach = const.c * t_end + 12.0 * sigma
    cells = 2 * math.ceil(reach / dx)
    lat = LatticeSpec.for_time(dx, cells * dx, round(t_end * const.c / dx) * dx / const.c, const.c)
    psi0 = gaussian_packet(lat.grid(), sigma, args.p0, spinor=(1.0, 0.0), band=args.band, m=m, const=const)

    times = [0.0]
    mean_x = [psi0.mean_position()]
    norms = [psi0.norm()]
    flags: list[str] = []
    if args.method == "checkerboard":
        for j, (r, l) in enumerate(checkerboard_steps(psi0, lat, m, const), 1):
            rho = np.abs(r) ** 2 + np.abs(l) ** 2
            times.append(j * lat.dt)
            mean_x.append(float(np.sum(psi0.grid * rho) / np.sum(rho)))
            norms.append(float(np.sqrt(np.sum(rho) * lat.dx)))
    else:
        for j in range(1, lat.steps + 1):
            f = spectral_evolve(psi0, m, j * lat.dt, const)
            flags.extend(x for x in f.flags if x not in flags)
            times.append(j * lat.dt)
            mean_x.append(f.mean_position())
            norms.append(f.norm())
    if args.output == "csv":
        return dump_csv(["t", "mean_x", "norm"], zip(times, mean_x, norms)), None
    zb = None
    zb_error = None
    if m > 0:
        try:
            zb = asdict(zitter_analyze(mean_x, times, 2.0 * m * const.c**2 / const.hbar))
        except ValueError as exc:
            zb_error = str(exc)
    results = {
        "units": args.units,
        "method": args.method,
        "band": args.band,
        "m": m,
        "sigma": sigma,
        "p0": args.p0,
        "dx": lat.dx,
        "dt": lat.dt,
        "steps": lat.steps,
        "extent": lat.extent,
        "spin_flip_rate": spin_flip_rate(m, const),
        "compton_wavelength": lam if m > 0 else None,
        "final_mean_x": mean_x[-1],
        "norm_drift": abs(norms[-1] - norms[0]) / norms[0],
        "flags": flags,
        "zitter": zb,
        "zitter_error": zb_error,
    }
    if m > 0:
        results["zitter_prediction"] = zitter_prediction(args.p0, m, t_end, const)
    return results, None


def cmd_kerr_newman(args, table):
    from .kerrnewman import KNConfig, kn_classify, kn_discriminant

    const = table.constants
    if args.particle is not None:
        p = _particle(table, args.particle)
        cfg = KNConfig.from_particle(p, const)
        source = {"particle": p.name}
    else:
        if args.mass is None:
            raise UsageError("give --particle or --mass")
        cfg = KNConfig(args.mass, args.charge, args.spin_param)
        p = None
        source = {"particle": None}
    res = kn_classify(cfg, const, literal_charge=args.literal_charge)
    out = {
        "input": {**source, "M": cfg.M, "Q": cfg.Q, "a": cfg.a, "literal_charge": args.literal_charge},
        "classification": asdict(res),
        "discriminant": kn_discriminant(cfg, const, literal_charge=args.literal_charge),
    }
    if p is not None and res.b is not None:
        out["b_over_half_compton"] = res.b / (0.5 * compton_wavelength(p, const))
    return out, None


def cmd_cosmo(args, table):
    from .cosmology import CosmologySpec, closed_form, sqrt_n_age, exact_age, integrate_population

    if args.tau is not None:
        tau = args.tau
    else:
        tau = compton_time(_particle(table, args.particle), table.constants)
    t_end = args.t_end if args.t_end is not None else 1e6 * tau
    dt = args.dt if args.dt is not None else 1e3 * tau
    spec = CosmologySpec(args.N0, tau, t_end, dt)
    traj = integrate_population(spec)
    if args.output == "csv":
        return dump_csv(["t", "N"], zip(traj.times, traj.N_values)), None
    exact = closed_form(traj.times, spec.N0, tau)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(exact > 0, np.abs(traj.N_values - exact) / exact, np.abs(traj.N_values))
    N_end = float(traj.N_values[-1])
    out = {
        "N0": spec.N0,
        "tau": tau,
        "t_end": float(traj.times[-1]),
        "dt": spec.dt,
        "substeps": traj.substeps,
        "samples": int(traj.times.size),
        "N_final": N_end,
        "monotone": traj.monotone,
        "max_rel_error_vs_closed_form": float(rel.max()),
    }
    if N_end >= 1 and spec.N0 >= 1:
        out["age_sqrt_n"] = sqrt_n_age(N_end, tau)
        out["age_exact"] = exact_age(N_end, tau, spec.N0)
    return out, None


def cmd_audit(args, table):
    from .cosmology import large_number_audit

    p = _particle(table, args.particle)
    rows = large_number_audit(
        args.R, args.N, p, table.constants,
        T_obs=args.T_obs, M_obs=args.M_obs, R_obs=args.R_obs, tolerance=args.tolerance,
    )
    return {
        "inputs": {"R": args.R, "N": args.N, "T_obs": args.T_obs, "M_obs": args.M_obs,
                   "R_obs": args.R_obs, "particle": p.name, "tolerance_dex": args.tolerance},
        "relations": [asdict(r) for r in rows],
        "all_pass": all(r.passed for r in rows),
    }, None


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="comptonlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"comptonlab {__version__}")
    ap.add_argument("--threads", type=_count("threads", 1), default=1, help="worker threads (default 1)")
    ap.add_argument("--config", help="constants override file (default: $COMPTONLAB_CONSTANTS)")
    sub = ap.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    sub.add_parser("constants", help="dump the active constants table as JSON")

    w = sub.add_parser("walk", help="random-walk RMS displacement ensemble")
    w.add_argument("--steps", type=_count("steps"), required=True)
    w.add_argument("--step-length", type=_positive("step-length"), default=1.0)
    w.add_argument("--dim", type=int, choices=(1, 2, 3), default=3)
    w.add_argument("--walkers", type=_count("walkers", 1), default=1000)
    w.add_argument("--seed", type=_seed, default=0)
    w.add_argument("--output", choices=("csv", "json"), default="json")

    n = sub.add_parser("nelson", help="Nelson diffusion against exact |psi|^2")
    n.add_argument("--model", choices=("free", "harmonic"), default="harmonic")
    n.add_argument("--sigma0", type=_positive("sigma0"), default=1.0)
    n.add_argument("--omega", type=_positive("omega"), default=1.0)
    n.add_argument("--particle", default="unit", help="table particle for CGS runs; 'unit' = natural units")
    n.add_argument("--convention", choices=("compton", "nelson"), default="compton")
    n.add_argument("--dt", type=_positive("dt"))
    n.add_argument("--t-end", type=_nonneg("t-end"))
    n.add_argument("--walkers", type=_count("walkers", 1), default=10_000)
    n.add_argument("--seed", type=_seed, default=0)
    n.add_argument("--output", choices=("csv", "json"), default="json")

    d = sub.add_parser("dirac", help="1+1D Dirac packet, <x>(t) and Zitterbewegung")
    d.add_argument("--m", type=_nonneg("m"))
    d.add_argument("--sigma", type=_positive("sigma"))
    d.add_argument("--p0", type=float, default=0.0)
    d.add_argument("--band", choices=("both", "positive"), default="both")
    d.add_argument("--dx", type=_positive("dx"))
    d.add_argument("--t-end", type=_nonneg("t-end"))
    d.add_argument("--method", choices=("checkerboard", "spectral"), default="spectral")
    d.add_argument("--units", choices=("cgs", "natural"), default="natural")
    d.add_argument("--output", choices=("csv", "json"), default="json")

    k = sub.add_parser("kerr-newman", help="classify a Kerr-Newman configuration")
    k.add_argument("--mass", type=_positive("mass"))
    k.add_argument("--charge", type=float, default=0.0)
    k.add_argument("--spin-param", type=float, default=0.0)
    k.add_argument("--particle")
    k.add_argument("--literal-charge", action="store_true", help="use G^2 Q^2 / c^8 for the charge term")
    k.add_argument("--output", choices=("json",), default="json")

    c = sub.add_parser("cosmo", help="integrate dN/dt = sqrt(N)/tau")
    c.add_argument("--N0", type=_nonneg("N0"), default=1.0)
    c.add_argument("--tau", type=_positive("tau"))
    c.add_argument("--particle", default="pion")
    c.add_argument("--t-end", type=_nonneg("t-end"))
    c.add_argument("--dt", type=_positive("dt"))
    c.add_argument("--output", choices=("csv", "json"), default="json")

    a = sub.add_parser("audit", help="large-number relations as log10 residuals")
    a.add_argument("--R", type=_positive("R"), default=1e28)
    a.add_argument("--N", type=_positive("N"), default=1e80)
    a.add_argument("--T-obs", type=_positive("T-obs"))
    a.add_argument("--M-obs", type=_positive("M-obs"))
    a.add_argument("--R-obs", type=_positive("R-obs"))
    a.add_argument("--particle", default="pion")
    a.add_argument("--tolerance", type=_positive("tolerance"), default=1.0)
    a.add_argument("--output", choices=("json",), default="json")
    return ap


COMMANDS = {
    "constants": cmd_constants,
    "walk": cmd_walk,
    "nelson": cmd_nelson,
    "dirac": cmd_dirac,
    "kerr-newman": cmd_kerr_newman,
    "cosmo": cmd_cosmo,
    "audit": cmd_audit,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        table = load_config(args.config) if args.config else active_table()
        payload, seed = COMMANDS[args.subcommand](args, table)
    except (UsageError, DomainError, ValueError, OSError) as exc:
        print(f"comptonlab {args.subcommand}: error: {exc}", file=stderr)
        return 2
    if isinstance(payload, str):
        stdout.write(payload)
    else:
        stdout.write(dump_json(args.subcommand, payload, seed, started))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
