"""Solver for the trivial equation d(u_hat)/dt = 0 (2D, spectral)."""

import numpy as np

from ..base import SimulBase, SolverInfo, register_solver


class SimulTrivial(SimulBase):
    info = SolverInfo(
        short_name="trivial",
        dims=2,
        simul_class="spectralkit.solvers.trivial:SimulTrivial",
        keys_state_spect=("u_fft",),
        keys_state_phys=("u",),
    )

    def tendencies_nonlin(self, state):
        # -0.0 is the additive identity for every float, +0.0 is not (it
        # turns -0.0 into +0.0), so the state stays bit-identical.
        return np.full_like(state, complex(-0.0, -0.0))


register_solver(SimulTrivial.info)
