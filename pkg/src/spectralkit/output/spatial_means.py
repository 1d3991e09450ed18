"""Space-averaged energy, enstrophy, dissipation and injection."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..operators import inner
from .ndrec import append_record, read_records


@dataclass
class SpatialMeansRecord:
    t: float
    it: int
    E: float
    Z: float | None
    eps_visc: float
    P_forcing: float
    dt: float

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


def record_spatial_means(sim):
    oper = sim.oper
    state = sim.state.state_spect
    vel = sim.to_velocity_fft(state)
    E = 0.5 * inner(oper, vel, vel)
    rot = sim.compute_rot_fft(state)
    Z = None if rot is None else 0.5 * inner(oper, rot, rot)
    abs2 = np.sum(vel.real**2 + vel.imag**2, axis=0)
    eps = sim.viscosity * float(np.sum(oper.weights * oper.k_sq * abs2))
    P = 0.0
    forcing = sim.forcing
    if forcing is not None:
        it = sim.time_stepping.it
        if forcing.last_it != it:
            forcing.compute_spect(it)
        P = forcing.last_rate
    return SpatialMeansRecord(
        t=sim.time_stepping.t,
        it=sim.time_stepping.it,
        E=E,
        Z=Z,
        eps_visc=eps,
        P_forcing=P,
        dt=sim.time_stepping.dt,
    )


class SpatialMeans:
    filename = "spatial_means.ndrec"

    def __init__(self, output):
        self.output = output

    def compute(self):
        return record_spatial_means(self.output.sim)

    def save(self):
        record = self.compute()
        append_record(self.output.path / self.filename, record.to_dict())
        return record

    def load(self):
        return [
            SpatialMeansRecord.from_dict(d)
            for d in read_records(self.output.path / self.filename)
        ]
