"""Command-line front end.

Subcommands::

    spectralkit run params.txt [key=value ...]
    spectralkit bench ns2d --n 256 --iters 20 --workers 1 --out bench.ndrec
    spectralkit speedup reports/*.ndrec --baseline auto --csv speedup.csv
    spectralkit profile ns2d --n 512 --iters 10
    spectralkit export <simdir> means --out means.csv

Exit codes: 0 success, 2 usage or configuration error, 3 numerical
divergence, 4 input/output error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .benchmark import BenchReport, compute_speedups, format_profile, run_bench, run_profile
from .errors import ConfigurationError, DivergenceError, RecordsError
from .params import load as load_params
from .params import parse_value_text

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4

EXPORT_STREAMS = {
    "means": "spatial_means.ndrec",
    "spectra": "spectra.ndrec",
    "budget": "spect_energy_budg.ndrec",
    "increments": "increments.ndrec",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def apply_overrides(params, overrides):
    """Apply ``key=value`` strings; values are parsed by the leaf's type."""
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        key = key.strip()
        kind = params.kind(key)
        params.set(key, parse_value_text(text.strip(), kind))


def cmd_run(args):
    from .base import build_simulation

    params = load_params(args.config).copy()
    apply_overrides(params, args.overrides)
    if args.root_dir is not None:
        params.output.root_dir = args.root_dir
    sim = build_simulation(params)
    summary = sim.time_stepping.start()
    where = sim.output.path if sim.output.path is not None else "(not saved)"
    print(f"done: {summary.iterations} iterations, t={summary.t!r}, directory {where}")
    return EXIT_OK


def _parse_n(text):
    """``"256"`` -> 256 (same extent on every axis), ``"256x128"`` -> [256, 128]."""
    try:
        values = [int(v) for v in text.lower().replace(",", "x").split("x") if v]
    except ValueError:
        raise ConfigurationError(f"bad grid extents {text!r}") from None
    if not values:
        raise ConfigurationError(f"bad grid extents {text!r}")
    return values[0] if len(values) == 1 else values


def cmd_bench(args):
    report, _ = run_bench(
        args.solver,
        _parse_n(args.n),
        iters=args.iters,
        workers=args.workers,
        seed=args.seed,
        label=args.label,
        dt=args.dt,
    )
    text = report.dumps()
    if args.out:
        report.save(args.out)
    print(text)
    return EXIT_OK


def cmd_speedup(args):
    reports = [BenchReport.load(p) for p in args.reports]
    table = compute_speedups(reports, baseline=args.baseline)
    print(table.to_text())
    if args.csv:
        Path(args.csv).write_text(table.to_csv(), encoding="utf-8")
    return EXIT_OK


def cmd_profile(args):
    rows, report = run_profile(
        args.solver, _parse_n(args.n), iters=args.iters, workers=args.workers
    )
    print(
        f"{report.solver} {'x'.join(map(str, report.n))}, {report.iterations} iterations, "
        f"{report.elapsed_total:.4f} s"
    )
    print(format_profile(rows))
    return EXIT_OK


def _g(value):
    return f"{float(value):.17g}"


def export_rows(stream, records):
    """Header and rows of the flat CSV view of ``records``."""
    if stream == "means":
        header = ["t", "it", "E", "Z", "eps_visc", "P_forcing", "dt"]
        rows = [
            [_g(r["t"]), r["it"], _g(r["E"]), "" if r["Z"] is None else _g(r["Z"]),
             _g(r["eps_visc"]), _g(r["P_forcing"]), _g(r["dt"])]
            for r in records
        ]
    elif stream == "spectra":
        header = ["t", "it", "k", "E"]
        rows = [
            [_g(r["t"]), r["it"], _g(k), _g(e)]
            for r in records
            for k, e in zip(r["k"], r["E"])
        ]
    elif stream == "budget":
        header = ["t", "it", "k", "T", "D"]
        rows = [
            [_g(r["t"]), r["it"], _g(k), _g(tk), _g(dk)]
            for r in records
            for k, tk, dk in zip(r["k"], r["T"], r["D"])
        ]
    elif stream == "increments":
        header = ["t", "it", "direction", "r", "order", "S"]
        rows = []
        for r in records:
            for p, table in r["S"].items():
                for i_dir, direction in enumerate(r["directions"]):
                    for rr, s in zip(r["r"][i_dir], table[i_dir]):
                        rows.append([_g(r["t"]), r["it"], direction, _g(rr), p, _g(s)])
    else:
        raise ConfigurationError(f"unknown stream {stream!r}")
    return header, rows


def cmd_export(args):
    from .output.ndrec import read_records

    simdir = Path(args.simdir)
    path = simdir / EXPORT_STREAMS[args.stream]
    if not path.exists():
        raise ConfigurationError(f"missing stream {args.stream!r}: no {path}")
    header, rows = export_rows(args.stream, read_records(path))
    out = Path(args.out) if args.out else simdir / f"{args.stream}.csv"
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="spectralkit", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a simulation from a params file")
    p.add_argument("config")
    p.add_argument("overrides", nargs="*", metavar="key=value")
    p.add_argument("--root-dir", default=None, help="where to create the run directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="time RK4 steps from a random field")
    p.add_argument("solver")
    p.add_argument("--n", required=True, help="extent, e.g. 256 or 256x128")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label", default="")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("speedup", help="strong-scaling speedups from bench reports")
    p.add_argument("reports", nargs="+")
    p.add_argument("--baseline", default="auto")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_speedup)

    p = sub.add_parser("profile", help="per-kernel time breakdown")
    p.add_argument("solver")
    p.add_argument("--n", required=True)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("export", help="write a record stream as CSV")
    p.add_argument("simdir")
    p.add_argument("stream", choices=sorted(EXPORT_STREAMS))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (RecordsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MemoryError:
        print("error: not enough memory for the requested grid", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
