"""Strong-scaling sweep: bench a solver over FFT worker counts.

Writes one bench report per (label, workers) pair into ``--out-dir`` and
prints the speedup table. On a single-core machine the speedups stay near
the baseline; the sweep mainly exercises the machinery.
"""

import argparse
import os
from pathlib import Path

from spectralkit.benchmark import compute_speedups, run_bench


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("solver", nargs="?", default="ns2d")
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--iters", type=int, default=20)
    parser.add_argument("--workers", type=int, nargs="+",
                        default=sorted({1, 2, os.cpu_count() or 1}))
    parser.add_argument("--repeat", type=int, default=2, help="best-of repeats per point")
    parser.add_argument("--out-dir", default="bench_reports")
    args = parser.parse_args()

    out = Path(args.out_dir)
    reports = []
    for workers in args.workers:
        for i in range(args.repeat):
            report, _ = run_bench(args.solver, args.n, iters=args.iters,
                                  workers=workers, label="scipy.fft")
            report.save(out / f"{args.solver}_{args.n}_w{workers}_{i}.ndrec")
            reports.append(report)
            print(f"workers={workers} run {i}: {report.elapsed_per_iter:.4e} s/iter")
    table = compute_speedups(reports)
    print(table.to_text())
    (out / "speedup.csv").write_text(table.to_csv(), encoding="utf-8")


if __name__ == "__main__":
    main()
