"""1D linear advection ``du/dt + U du/dx = 0`` with centered differences.

The prognostic variable is the physical field; the spatial derivative is the
second-order centered difference on the periodic grid.
"""

import numpy as np

from ..base import SimulBase, SolverInfo, register_solver


def ad1d_tendency(u, speed, dx):
    """``-speed * (u[j+1] - u[j-1]) / (2 dx)`` along the last axis."""
    return -speed * (np.roll(u, -1, axis=-1) - np.roll(u, 1, axis=-1)) / (2 * dx)


class SimulAD1D(SimulBase):
    info = SolverInfo(
        short_name="ad1d",
        dims=1,
        simul_class="spectralkit.solvers.ad1d:SimulAD1D",
        keys_state_spect=("u_fft",),
        keys_state_phys=("u",),
        prognostic="phys",
    )

    @classmethod
    def _complete_params(cls, params):
        params._set_leaf("U", 1.0)

    @property
    def viscosity(self):
        return 0.0

    def tendencies_nonlin(self, state):
        with self.timers("nonlin"):
            return ad1d_tendency(state, self.params.U, self.oper.dx[0])

    def max_velocity(self):
        return np.array([abs(self.params.U)])


register_solver(SimulAD1D.info)
