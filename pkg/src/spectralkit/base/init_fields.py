"""Initial conditions: constant, noise, dipole, from_file."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, DigestMismatchError, RecordsError
from ..operators import random_field

KINDS = ("constant", "noise", "dipole", "from_file")


class InitFields:
    """The ``sim.init_fields`` object; calling it initializes the state once."""

    def __init__(self, sim):
        self.sim = sim
        self.kind = sim.params.init_fields.type
        if self.kind not in KINDS:
            raise ConfigurationError(
                f"unknown init_fields.type {self.kind!r}; choose among {', '.join(KINDS)}"
            )

    @classmethod
    def _complete_params(cls, params, info):
        p = params._set_child("init_fields", dict(type="noise"))
        p._set_child("constant", dict(value=0.0))
        p._set_child("noise", dict(k_lo=2.0, k_hi=6.0, seed=0, velo_max=1.0))
        p._set_child("dipole", dict(circulation=1.0, radius=0.3))
        p._set_child("from_file", dict(path=""))

    def __call__(self):
        if self.kind == "from_file":
            path = self.sim.params.init_fields.from_file.path
            self.init_from_file(path)
        else:
            getattr(self, f"init_{self.kind}")()

    def init_constant(self):
        sim = self.sim
        value = sim.params.init_fields.constant.value
        keys = sim.state.keys_state_phys
        if "rot" in keys and value != 0:
            raise ConfigurationError(
                "a constant vorticity has a nonzero mean, which the vorticity "
                "formulation cannot hold"
            )
        full = np.full(sim.oper.shape_phys, float(value))
        sim.state.init_statephys_from(**{key: full for key in keys})

    def init_noise(self):
        sim = self.sim
        p = sim.params.init_fields.noise
        nvar = len(sim.state.keys_state_spect)
        arr = random_field(sim.oper, p.seed, (p.k_lo, p.k_hi), ncomp=nvar)
        arr = sim.make_admissible(arr)
        vel = sim.oper.ifft(sim.to_velocity_fft(arr))
        vmax = np.abs(vel).max()
        if vmax > 0:
            arr *= p.velo_max / vmax
        sim.state.init_statespect_from(**dict(zip(sim.state.keys_state_spect, arr)))

    def init_dipole(self):
        sim = self.sim
        oper = sim.oper
        if "rot_fft" not in sim.state.keys_state_spect or oper.dims != 2:
            raise ConfigurationError(
                f"dipole initialization needs a 2D vorticity solver, not {sim.info.short_name!r}"
            )
        p = sim.params.init_fields.dipole
        Lx, Ly = oper.L
        x, y = oper.coords()
        rot = np.zeros(oper.shape_phys)
        for sign, xc in ((1.0, 0.5 * Lx - 0.125 * Lx), (-1.0, 0.5 * Lx + 0.125 * Lx)):
            dx = (x - xc + 0.5 * Lx) % Lx - 0.5 * Lx
            dy = y - 0.5 * Ly
            r2 = dx**2 + dy**2
            rot += sign * p.circulation / (2 * np.pi * p.radius**2) * np.exp(-r2 / (2 * p.radius**2))
        rot_fft = sim.make_admissible(oper.fft(rot)[None])
        sim.state.init_statespect_from(rot_fft=rot_fft[0])

    def init_from_file(self, path):
        from ..output.phys_fields import load_snapshot, params_digest

        if not path:
            raise RecordsError("init_fields.from_file.path is empty")
        header, fields = load_snapshot(path)
        sim = self.sim
        if header["params_digest"] != params_digest(sim.params):
            raise DigestMismatchError(
                f"snapshot {path} was written with different solver/grid parameters"
            )
        keys = sim.state.keys_state_phys
        if list(header["names"]) != keys:
            raise RecordsError(f"snapshot holds {header['names']}, expected {keys}")
        phys = np.stack([fields[k] for k in keys])
        sim.state.set_both(phys, sim.oper.fft(phys))
        sim.time_stepping.t = float(header["time"])
        sim.time_stepping.it = int(header["it"])
        sim.output.mark_saved_at(sim.time_stepping.t)
