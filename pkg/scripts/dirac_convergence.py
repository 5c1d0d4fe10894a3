"""First-order convergence of the checkerboard propagator to the spectral solution."""

import argparse

from comptonlab.dirac import LatticeSpec, checkerboard_propagate, gaussian_packet, spectral_evolve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, default=2.0)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--p0", type=float, default=0.0)
    ap.add_argument("--extent", type=float, default=40.0)
    ap.add_argument("--levels", type=int, default=5)
    args = ap.parse_args()

    prev = None
    print(f"{'dx':>10} {'L2 error':>12} {'ratio':>8}")
    for i in range(args.levels):
        dx = 0.1 / 2**i
        lat = LatticeSpec.for_time(dx, args.extent, args.t)
        psi = gaussian_packet(lat.grid(), args.sigma, args.p0)
        err = checkerboard_propagate(psi, lat, 1.0).l2_distance(spectral_evolve(psi, 1.0, args.t))
        ratio = "" if prev is None else f"{prev / err:8.3f}"
        print(f"{dx:10.5f} {err:12.4e} {ratio}")
        prev = err


if __name__ == "__main__":
    main()
