"""On-the-fly outputs of a simulation (the ``sim.output`` object).

Simulation directory layout::

    <solver>_<nx>x<ny>_<YYYY-MM-DD>_<HH-MM-SS>/
        params.txt
        info_solver.txt
        spatial_means.ndrec
        spectra.ndrec
        spect_energy_budg.ndrec
        increments.ndrec
        snapshots/state_phys_t<time>.fld
        run.log
"""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from time import perf_counter

from ..errors import RecordsError
from ..params import serialize
from .increments import Increments, IncrementsRecord, compute_increments
from .ndrec import append_record, read_records
from .phys_fields import PhysFields, load_snapshot, save_snapshot, write_snapshot
from .print_stdout import STDOUT_LINE_RE, format_stdout_line, parse_stdout_line
from .spatial_means import SpatialMeans, SpatialMeansRecord, record_spatial_means
from .spect_energy_budg import (
    BudgetRecord,
    SpectEnergyBudget,
    compute_spectral_energy_budget,
)
from .spectra import Spectra, SpectrumRecord, compute_spectrum

__all__ = [
    "Output",
    "BudgetRecord",
    "IncrementsRecord",
    "SpatialMeansRecord",
    "SpectrumRecord",
    "STDOUT_LINE_RE",
    "append_record",
    "compute_increments",
    "compute_spectral_energy_budget",
    "compute_spectrum",
    "format_stdout_line",
    "load_snapshot",
    "parse_stdout_line",
    "read_records",
    "record_spatial_means",
    "save_snapshot",
    "write_snapshot",
]

logger = logging.getLogger(__name__)

STREAMS = ("spatial_means", "spectra", "spect_energy_budg", "increments")


def new_sim_dirname(short_name, n, now=None):
    now = now or datetime.now()
    return f"{short_name}_{'x'.join(str(v) for v in n)}_{now:%Y-%m-%d_%H-%M-%S}"


class Output:
    def __init__(self, sim, path=None, read_only=False):
        self.sim = sim
        p = sim.params.output
        self.read_only = read_only
        self.has_to_save = bool(p.save) and not read_only
        self.period_save = p.period_save
        self.period_print = p.period_print
        self.lines = []
        self._t_last_save = None
        self._wall0 = perf_counter()
        self._new_dir = False
        if path is not None:
            self.path = Path(path)
            if not self.path.is_dir():
                raise RecordsError(f"no simulation directory at {self.path}")
        elif self.has_to_save:
            self.path = self._make_dir(Path(p.root_dir))
            self._new_dir = True
        else:
            self.path = None

        self.spatial_means = SpatialMeans(self)
        self.spectra = Spectra(self)
        self.spect_energy_budg = SpectEnergyBudget(self)
        self.increments = Increments(self)
        self.phys_fields = PhysFields(self)

    @classmethod
    def _complete_params(cls, params, info):
        p = params._set_child(
            "output",
            dict(save=True, root_dir=".", period_save=0.5, period_print=10),
        )
        for name in STREAMS + ("phys_fields",):
            p._set_child(name, dict(enable=True))
        p.increments._set_leaf("orders", [2.0, 3.0, 4.0])

    def _make_dir(self, root):
        sim = self.sim
        root.mkdir(parents=True, exist_ok=True)
        base = new_sim_dirname(sim.info_solver.short_name, sim.oper.n)
        path = root / base
        i = 1
        while True:
            try:
                path.mkdir()
                return path
            except FileExistsError:
                path = root / f"{base}_{i}"
                i += 1

    def init_files(self):
        if not self.has_to_save:
            return
        params_path = self.path / "params.txt"
        if not params_path.exists():
            params_path.write_text(serialize(self.sim.params), encoding="utf-8")
            (self.path / "info_solver.txt").write_text(
                self.sim.info_solver.to_text(), encoding="utf-8"
            )
            self.log(f"{self.sim.info_solver.short_name} simulation created in {self.path}")

    def log(self, message):
        logger.info(message)
        if self.has_to_save:
            with open(self.path / "run.log", "a", encoding="utf-8") as f:
                f.write(message + "\n")

    def mark_saved_at(self, t):
        self._t_last_save = t

    def _save_due(self, t):
        if self._t_last_save is None:
            return True
        tol = 1e-9 * max(self.period_save, self.sim.time_stepping.dt)
        return t - self._t_last_save >= self.period_save - tol

    def print_stdout(self):
        sim = self.sim
        means = record_spatial_means(sim)
        line = format_stdout_line(
            means.it, means.t, means.dt, means.E, means.Z, perf_counter() - self._wall0
        )
        self.lines.append(line)
        print(line)
        if self.has_to_save:
            with open(self.path / "run.log", "a", encoding="utf-8") as f:
                f.write(line + "\n")
        return line

    def save_records(self):
        p = self.sim.params.output
        for name in STREAMS:
            if p[name].enable:
                getattr(self, name).save()
        if p.phys_fields.enable:
            self.phys_fields.save()
        self._t_last_save = self.sim.time_stepping.t

    def one_time_step(self):
        ts = self.sim.time_stepping
        if self.period_print > 0 and ts.it % self.period_print == 0:
            self.print_stdout()
        if self.has_to_save and self._save_due(ts.t):
            self.save_records()

    def end_of_simul(self):
        ts = self.sim.time_stepping
        if self.period_print > 0:
            self.print_stdout()
        if self.has_to_save and self._t_last_save != ts.t:
            self.save_records()
