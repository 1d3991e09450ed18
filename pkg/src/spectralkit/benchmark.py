"""Benchmark reports, strong-scaling speedups and profile tables.

The speedup of configuration ``alpha`` on ``n_p`` workers is::

    S_alpha(n_p) = T_fastest(n_p_min) * n_p_min / T_alpha(n_p)

where ``n_p_min`` is the smallest worker count present and ``T_fastest`` the
best time among the runs at ``n_p_min``. The fastest configuration at
``n_p_min`` therefore gets ``S = n_p_min`` by construction.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import platform
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import fft_backend
from .errors import ConfigurationError, RecordsError
from .output.ndrec import dumps_record, read_records


class AggregationError(ConfigurationError):
    """Reports that cannot be compared (different solver or grid)."""


def host_fingerprint():
    return {
        "node": platform.node(),
        "machine": platform.machine(),
        "system": platform.system(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "cpu_count": os.cpu_count(),
    }


def state_checksum(arr):
    """SHA-256 of the raw bytes of a state array."""
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()


@dataclass
class BenchReport:
    """Timing of one benchmark run.

    ``elapsed_total`` is stored as ``elapsed_per_iter * iterations`` so the
    invariant holds exactly in floating point.
    """

    solver: str
    n: list
    workers: int
    iterations: int
    elapsed_total: float
    elapsed_per_iter: float
    kernel_timers: dict
    label: str = ""
    seed: int = 0
    dt: float = 0.0
    forcing_enabled: bool = False
    io_enabled: bool = False
    state_checksum: str = ""
    host: dict = field(default_factory=host_fingerprint)

    @classmethod
    def from_elapsed(cls, elapsed, iterations, **kwargs):
        per_iter = elapsed / iterations
        return cls(
            elapsed_total=per_iter * iterations,
            elapsed_per_iter=per_iter,
            iterations=iterations,
            **kwargs,
        )

    @property
    def config_label(self):
        return self.label or f"{self.solver}"

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        return cls(**known)

    def dumps(self):
        return dumps_record(self.to_dict())

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps() + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path):
        records = read_records(path)
        if len(records) != 1:
            raise RecordsError(f"{path}: expected one bench record, found {len(records)}")
        return cls.from_dict(records[0])


def run_bench(
    solver,
    n,
    iters=20,
    workers=1,
    seed=0,
    label="",
    dt=None,
    warmup=1,
):
    """Time ``iters`` RK4 steps of ``solver`` from a random initial field.

    Forcing and every file output are disabled. ``warmup`` untimed steps run
    first so plan creation and first-touch allocation stay out of the timing.
    Returns ``(report, sim)``.
    """
    from time import perf_counter

    from .base import build_simulation, create_default_params, resolve

    if iters < 1:
        raise ConfigurationError("iters must be >= 1")
    params = create_default_params(solver).copy()
    dims = resolve(solver).dims
    n = list(n) if np.iterable(n) else [int(n)] * dims
    if len(n) != dims:
        raise ConfigurationError(f"{solver} needs {dims} extents, got {len(n)}")
    for name, value in zip("xyz", n):
        params.oper[f"n{name}"] = int(value)
    params.output.save = False
    params.output.period_print = 0
    params.forcing.enable = False
    params.preprocess.enable = False
    params.init_fields.type = "noise"
    params.init_fields.noise.seed = int(seed)
    ts = params.time_stepping
    ts.type_time_scheme = "RK4"
    if dt is None:
        dt = 0.1 * min(
            params.oper[f"L{name}"] / value for name, value in zip("xyz", n)
        )
    ts.fixed_dt = float(dt)
    ts.stop = "n_iters"
    ts.n_iters = int(iters)

    effective = fft_backend.set_num_workers(workers)
    sim = build_simulation(params)
    if warmup:
        sim.time_stepping.start(n_iters=warmup)
    t0 = perf_counter()
    summary = sim.time_stepping.start(n_iters=iters)
    elapsed = perf_counter() - t0

    report = BenchReport.from_elapsed(
        elapsed,
        iters,
        solver=solver,
        n=n,
        workers=effective,
        kernel_timers=summary.timers,
        label=label,
        seed=int(seed),
        dt=float(dt),
        forcing_enabled=sim.forcing is not None,
        io_enabled=sim.output.path is not None,
        state_checksum=state_checksum(sim.state.prognostic),
    )
    return report, sim


@dataclass
class SpeedupRow:
    label: str
    workers: int
    time: float
    speedup: float


@dataclass
class SpeedupTable:
    solver: str
    n: list
    np_min: int
    baseline: str
    t_baseline: float
    rows: list

    def get(self, label, workers):
        for row in self.rows:
            if row.label == label and row.workers == workers:
                return row.speedup
        raise KeyError((label, workers))

    def to_text(self):
        lines = [
            f"solver={self.solver} n={'x'.join(map(str, self.n))} "
            f"np_min={self.np_min} baseline={self.baseline}",
            f"{'label':<20} {'n_p':>5} {'T [s]':>14} {'S':>10}",
        ]
        for row in self.rows:
            lines.append(
                f"{row.label:<20} {row.workers:>5} {row.time:>14.6g} {row.speedup:>10.4f}"
            )
        return "\n".join(lines)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "workers", "time", "speedup"])
        for row in self.rows:
            writer.writerow(
                [row.label, row.workers, f"{row.time:.17g}", f"{row.speedup:.17g}"]
            )
        return buf.getvalue()


def compute_speedups(reports, baseline="auto", metric="elapsed_per_iter"):
    """Build a :class:`SpeedupTable` from bench reports.

    Several reports with the same label and worker count are reduced to their
    best time. ``baseline="auto"`` uses the fastest label at ``n_p_min``;
    otherwise the named label's time at ``n_p_min`` is the reference.
    """
    reports = list(reports)
    if not reports:
        raise AggregationError("no reports to aggregate")
    cases = {(r.solver, tuple(r.n)) for r in reports}
    if len(cases) > 1:
        desc = ", ".join(f"{s} {'x'.join(map(str, n))}" for s, n in sorted(cases))
        raise AggregationError(f"reports mix different cases: {desc}")
    best = {}
    for r in reports:
        key = (r.config_label, int(r.workers))
        t = float(getattr(r, metric))
        if t <= 0:
            raise AggregationError(f"non-positive time in report {key}")
        best[key] = min(best.get(key, t), t)

    np_min = min(w for _, w in best)
    at_min = {label: t for (label, w), t in best.items() if w == np_min}
    if baseline == "auto":
        baseline = min(at_min, key=lambda label: (at_min[label], label))
    elif baseline not in at_min:
        raise AggregationError(
            f"baseline {baseline!r} has no report at n_p_min={np_min}; "
            f"available: {sorted(at_min)}"
        )
    t_ref = at_min[baseline]
    rows = [
        SpeedupRow(label, w, t, t_ref * np_min / t)
        for (label, w), t in sorted(best.items(), key=lambda item: (item[0][1], item[0][0]))
    ]
    solver, n = cases.pop()
    return SpeedupTable(solver, list(n), np_min, baseline, t_ref, rows)


@dataclass
class ProfileRow:
    name: str
    seconds: float
    percent: float


def group_profile(timers, threshold=0.02, other="other"):
    """Rows ``(name, seconds, percent)`` sorted by decreasing time.

    Kernels below ``threshold`` of the total are merged into a single
    ``other`` row, placed last. Percentages sum to 100.
    """
    items = {k: float(v) for k, v in timers.items() if v > 0}
    total = sum(items.values())
    if total <= 0:
        return []
    rows = []
    rest = 0.0
    for name, sec in sorted(items.items(), key=lambda kv: (-kv[1], kv[0])):
        if sec / total >= threshold:
            rows.append(ProfileRow(name, sec, 100.0 * sec / total))
        else:
            rest += sec
    if rest > 0:
        rows.append(ProfileRow(other, rest, 100.0 * rest / total))
    return rows


def format_profile(rows):
    lines = [f"{'kernel':<16} {'seconds':>12} {'%':>7}"]
    for row in rows:
        lines.append(f"{row.name:<16} {row.seconds:>12.6f} {row.percent:>7.2f}")
    return "\n".join(lines)


def run_profile(solver, n, iters=10, workers=1, seed=0):
    """Bench run whose timers include the untimed remainder of the loop."""
    report, sim = run_bench(solver, n, iters=iters, workers=workers, seed=seed)
    timers = dict(report.kernel_timers)
    untimed = report.elapsed_total - sum(timers.values())
    if untimed > 0:
        timers["untimed"] = untimed
    return group_profile(timers), report
