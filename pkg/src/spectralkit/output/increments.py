"""Structure functions of velocity increments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from .ndrec import append_record, read_records


@dataclass
class IncrementsRecord:
    """``S[p][i, m]`` is the order-``p`` structure function along
    ``directions[i]`` at separation ``r[i, m] = m * dx``."""

    t: float
    directions: list
    r: np.ndarray
    S: dict = field(default_factory=dict)
    it: int = 0

    def to_dict(self):
        return {
            "t": self.t,
            "it": self.it,
            "directions": list(self.directions),
            "r": self.r,
            "S": {repr(float(p)): v for p, v in self.S.items()},
        }

    @classmethod
    def from_dict(cls, d):
        S = {float(p): np.array(v) for p, v in d["S"].items()}
        return cls(d["t"], list(d["directions"]), np.array(d["r"]), S, d.get("it", 0))


def _power(delta, p):
    if float(p).is_integer():
        return delta ** int(p)
    return np.abs(delta) ** p


def compute_increments(grid, fields, orders=(2, 3, 4), directions=None, t=0.0, it=0):
    """Structure functions ``S_p(r) = <(u(x + r e) - u(x))**p>``.

    Parameters
    ----------
    grid : SpectralGrid
    fields : ndarray
        A scalar physical field, or velocity components stacked on the first
        axis. With one component per axis the increments are longitudinal
        (component ``d`` along axis ``d``); otherwise the first component is
        used for every direction.
    orders : sequence of float
        Orders ``p >= 1``. Non-integer orders use ``|du|**p``.
    directions : sequence of int, optional
        Axes along which separations are taken (default: all).
    """
    orders = [float(p) for p in orders]
    if any(p < 1 for p in orders):
        raise ConfigurationError(f"structure function orders must be >= 1, got {orders}")
    fields = np.asarray(fields, dtype=float)
    if fields.shape == grid.shape_phys:
        fields = fields[None]
    directions = list(range(grid.dims)) if directions is None else list(directions)
    longitudinal = fields.shape[0] == grid.dims
    nr = min(grid.n[d] for d in directions) // 2 + 1
    r = np.zeros((len(directions), nr))
    S = {p: np.zeros((len(directions), nr)) for p in orders}
    for i, d in enumerate(directions):
        u = fields[d] if longitudinal else fields[0]
        axis = d
        r[i] = np.arange(nr) * grid.dx[d]
        for m in range(1, nr):
            delta = np.roll(u, -m, axis=axis) - u
            for p in orders:
                S[p][i, m] = _power(delta, p).mean()
    return IncrementsRecord(t, directions, r, S, it)


class Increments:
    filename = "increments.ndrec"

    def __init__(self, output):
        self.output = output

    def compute(self):
        sim = self.output.sim
        orders = sim.params.output.increments.orders
        return compute_increments(
            sim.oper, sim.velocity_phys(), orders,
            t=sim.time_stepping.t, it=sim.time_stepping.it,
        )

    def save(self):
        record = self.compute()
        append_record(self.output.path / self.filename, record.to_dict())
        return record

    def load(self):
        return [
            IncrementsRecord.from_dict(d)
            for d in read_records(self.output.path / self.filename)
        ]
