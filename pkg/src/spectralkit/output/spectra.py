"""Shell-summed energy spectra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ndrec import append_record, read_records


@dataclass
class SpectrumRecord:
    t: float
    k: np.ndarray
    E: np.ndarray
    it: int = 0

    def to_dict(self):
        return {"t": self.t, "it": self.it, "k": self.k, "E": self.E}

    @classmethod
    def from_dict(cls, d):
        return cls(d["t"], np.array(d["k"]), np.array(d["E"]), d.get("it", 0))


def shell_index(grid):
    """Shell number of every stored mode: ``round(|k| / deltak)``."""
    return np.rint(grid.k_norm / grid.deltak_shells).astype(np.intp)


def shell_sum(grid, values):
    """Sum ``values`` (shape of the spectral grid) over shells."""
    idx = shell_index(grid)
    nshells = int(idx.max()) + 1
    return np.bincount(idx.ravel(), weights=np.ravel(values), minlength=nshells)


def compute_spectrum(grid, vel_hat, t=0.0, it=0):
    """Energy spectrum ``E(k)`` such that ``sum(E * deltak)`` is the energy.

    ``vel_hat`` holds one or more components stacked on the first axis.
    """
    vel_hat = np.asarray(vel_hat)
    if vel_hat.shape == grid.shape_spect:
        vel_hat = vel_hat[None]
    dk = grid.deltak_shells
    density = 0.5 * grid.weights * np.sum(vel_hat.real**2 + vel_hat.imag**2, axis=0)
    E = shell_sum(grid, density) / dk
    k = np.arange(E.size) * dk
    return SpectrumRecord(t, k, E, it)


class Spectra:
    filename = "spectra.ndrec"

    def __init__(self, output):
        self.output = output

    def compute(self):
        sim = self.output.sim
        vel = sim.to_velocity_fft(sim.state.state_spect)
        return compute_spectrum(sim.oper, vel, sim.time_stepping.t, sim.time_stepping.it)

    def save(self):
        record = self.compute()
        append_record(self.output.path / self.filename, record.to_dict())
        return record

    def load(self):
        return [
            SpectrumRecord.from_dict(d)
            for d in read_records(self.output.path / self.filename)
        ]
