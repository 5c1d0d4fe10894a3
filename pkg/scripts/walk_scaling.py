"""RMS displacement of seeded random walks against l*sqrt(N), for a range of N."""

import argparse

from comptonlab.randomwalk import WalkSpec, estimate_rms


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, choices=(1, 2, 3), default=3)
    ap.add_argument("--walkers", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(f"{'steps':>8} {'rms':>10} {'stderr':>8} {'sqrt(N)':>10} {'ratio':>8}")
    for steps in (10, 100, 1_000, 10_000):
        res = estimate_rms(WalkSpec(steps, 1.0, args.dim, args.walkers, args.seed), args.threads)
        expect = steps**0.5
        print(f"{steps:8d} {res.rms_displacement:10.4f} {res.stderr_rms:8.4f} {expect:10.4f} "
              f"{res.rms_displacement / expect:8.4f}")


if __name__ == "__main__":
    main()
