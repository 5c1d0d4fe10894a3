"""Large-number audit for each table particle, plus the population integral."""

import argparse

from comptonlab.constants import builtin_particles, compton_time
from comptonlab.cosmology import CosmologySpec, derived_scales, integrate_population, large_number_audit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--R", type=float, default=1e28)
    ap.add_argument("--N", type=float, default=1e80)
    ap.add_argument("--T-obs", type=float, default=4e17)
    ap.add_argument("--M-obs", type=float, default=1e56)
    args = ap.parse_args()

    for name, p in builtin_particles().items():
        sc = derived_scales(args.N, p)
        rows = large_number_audit(args.R, args.N, p, T_obs=args.T_obs, M_obs=args.M_obs)
        cells = "  ".join(f"{r.relation}={r.residual_dex:+6.2f}" for r in rows)
        verdict = "pass" if all(r.passed for r in rows) else "FAIL"
        print(f"{name:9s} T={sc.T:9.3e} R={sc.R:9.3e}  {cells}  {verdict}")

    tau = compton_time(builtin_particles()["pion"])
    traj = integrate_population(CosmologySpec(N0=1.0, tau=tau, t_end=1e6 * tau, dt=1e5 * tau))
    print("\npion-tau population growth")
    for t, N in zip(traj.times, traj.N_values):
        print(f"  t/tau={t / tau:9.0f}  N={N:.6e}")


if __name__ == "__main__":
    main()
