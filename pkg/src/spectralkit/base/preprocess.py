"""Adjustments applied after every other sub-object is built."""

from __future__ import annotations

import numpy as np


class Preprocess:
    """The ``sim.preprocess`` object.

    Optionally rescales the initial state to a target energy and sets the
    viscosity from the resolution with a Kolmogorov-type scaling
    ``nu = C * dx**(4/3) * P**(1/3)``, where ``P`` is the forcing injection
    rate and ``dx`` the coarsest grid spacing.
    """

    def __init__(self, sim):
        self.sim = sim
        self.changes = []

    @classmethod
    def _complete_params(cls, params, info):
        params._set_child(
            "preprocess",
            dict(
                enable=False,
                init_energy=0.0,
                viscosity_from_resolution=False,
                viscosity_const=1.0,
            ),
        )

    def __call__(self):
        p = self.sim.params.preprocess
        if not p.enable:
            return
        if p.init_energy > 0:
            self.rescale_energy(p.init_energy)
        if p.viscosity_from_resolution:
            self.set_viscosity(p.viscosity_const)
        for change in self.changes:
            self.sim.output.log(f"preprocess: {change}")

    def rescale_energy(self, target):
        sim = self.sim
        energy = sim.energy()
        if energy <= 0:
            self.changes.append("initial energy is zero, not rescaled")
            return
        factor = np.sqrt(target / energy)
        sim.state.prognostic[...] *= factor
        sim.state.mark_prognostic_modified()
        self.changes.append(f"state scaled by {factor!r} (energy {energy!r} -> {target!r})")

    def set_viscosity(self, const):
        sim = self.sim
        dx = max(sim.oper.dx)
        rate = sim.params.forcing.injection_rate
        nu = viscosity_from_resolution(const, dx, rate)
        old = sim.params.nu_2
        sim.params.nu_2 = nu
        self.changes.append(f"nu_2 set from resolution: {old!r} -> {nu!r}")


def viscosity_from_resolution(const, dx, injection_rate):
    return const * dx ** (4.0 / 3.0) * injection_rate ** (1.0 / 3.0)
