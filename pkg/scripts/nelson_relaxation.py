"""Nelson walkers started from |psi|^2 stay on |psi(t)|^2.

Prints the L1 and KS distances of the ensemble to the exact density at a few
times, for the harmonic ground state and the spreading free packet.
"""

import argparse

from comptonlab.nelson import DiffusionSpec, QuantumModel, density_distance, evolve_ensemble


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--walkers", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    runs = [
        (QuantumModel.harmonic(omega=1.0), 0.01, (1.0, 5.0, 20.0)),
        (QuantumModel.free_packet(sigma0=1.0), 0.005, (0.5, 1.0, 2.0, 4.0)),
    ]
    for model, dt, times in runs:
        print(f"# {model.kind}")
        print(f"{'t':>6} {'var':>8} {'exact':>8} {'L1':>8} {'KS':>8}")
        for t in times:
            spec = DiffusionSpec(nu=1.0, dt=dt, t_end=t, walkers=args.walkers, seed=args.seed)
            ens = evolve_ensemble(model, spec, args.threads)
            dd = density_distance(ens, model)
            print(f"{t:6.2f} {ens.positions.var():8.4f} {model.variance(t):8.4f} {dd.l1:8.4f} {dd.ks:8.4f}")


if __name__ == "__main__":
    main()
