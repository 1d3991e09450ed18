"""Per-kernel time breakdown of ns2d RK4 steps at one or more resolutions."""

import argparse

from spectralkit.benchmark import format_profile, run_profile


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--iters", type=int, default=10)
    args = parser.parse_args()
    for n in args.n:
        rows, report = run_profile("ns2d", n, iters=args.iters)
        print(f"\nns2d {n}x{n}: {report.elapsed_per_iter:.4e} s/iter")
        print(format_profile(rows))


if __name__ == "__main__":
    main()
