"""Spectral energy budget: nonlinear transfer and viscous dissipation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ndrec import append_record, read_records
from .spectra import shell_sum


@dataclass
class BudgetRecord:
    t: float
    k: np.ndarray
    T: np.ndarray
    D: np.ndarray
    it: int = 0

    def to_dict(self):
        return {"t": self.t, "it": self.it, "k": self.k, "T": self.T, "D": self.D}

    @classmethod
    def from_dict(cls, d):
        return cls(d["t"], np.array(d["k"]), np.array(d["T"]), np.array(d["D"]), d.get("it", 0))


def compute_spectral_energy_budget(grid, vel_hat, vel_tend_hat, nu, t=0.0, it=0):
    """Shell sums of the transfer ``T`` and dissipation ``D`` spectra.

    ``T(k_s) = sum_{k in s} w_k Re(conj(u_k) . N_k)``,
    ``D(k_s) = -nu sum_{k in s} w_k |k|^2 |u_k|^2``.
    """
    vel_hat = np.asarray(vel_hat)
    vel_tend_hat = np.asarray(vel_tend_hat)
    if vel_hat.shape == grid.shape_spect:
        vel_hat = vel_hat[None]
        vel_tend_hat = vel_tend_hat[None]
    transfer = np.sum(
        vel_hat.real * vel_tend_hat.real + vel_hat.imag * vel_tend_hat.imag, axis=0
    )
    abs2 = np.sum(vel_hat.real**2 + vel_hat.imag**2, axis=0)
    T = shell_sum(grid, grid.weights * transfer)
    D = shell_sum(grid, -nu * grid.weights * grid.k_sq * abs2)
    k = np.arange(T.size) * grid.deltak_shells
    return BudgetRecord(t, k, T, D, it)


class SpectEnergyBudget:
    filename = "spect_energy_budg.ndrec"

    def __init__(self, output):
        self.output = output

    def compute(self):
        sim = self.output.sim
        vel = sim.to_velocity_fft(sim.state.state_spect)
        tend = sim.to_velocity_fft(sim.nonlin_tendency_spect())
        return compute_spectral_energy_budget(
            sim.oper, vel, tend, sim.viscosity, sim.time_stepping.t, sim.time_stepping.it
        )

    def save(self):
        record = self.compute()
        append_record(self.output.path / self.filename, record.to_dict())
        return record

    def load(self):
        return [
            BudgetRecord.from_dict(d)
            for d in read_records(self.output.path / self.filename)
        ]
