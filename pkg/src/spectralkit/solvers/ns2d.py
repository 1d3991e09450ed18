"""2D incompressible Navier-Stokes in vorticity form.

    d(omega)/dt + u . grad(omega) = nu lap(omega)

The only prognostic variable is ``rot_fft``; the velocity follows from the
stream function. One tendency evaluation costs 4 inverse transforms (ux, uy,
d_x omega, d_y omega, batched in one call) and 1 forward transform.
"""

import numpy as np

from ..base import SimulBase, SolverInfo, register_solver
from ..operators import gradient, velocity_from_vorticity2d
from ..timing import NULL_TIMERS


def ns2d_tendency(grid, rot_hat, timers=NULL_TIMERS):
    """Dealiased ``-FFT(u . grad(omega))`` for a scalar spectral vorticity."""
    mask = grid.dealias_mask
    with timers("curl"):
        rot_hat = rot_hat * mask
        fields_hat = np.empty((4,) + grid.shape_spect, dtype=np.complex128)
        fields_hat[:2] = velocity_from_vorticity2d(grid, rot_hat)
        fields_hat[2:] = gradient(grid, rot_hat)
    with timers("fft"):
        ux, uy, px, py = grid.ifft(fields_hat)
    with timers("vector_product"):
        adv = ux * px
        adv += uy * py
    with timers("fft"):
        n_hat = grid.fft(adv)
    with timers("dealias"):
        n_hat *= mask
        np.negative(n_hat, out=n_hat)
    return n_hat


class SimulNS2D(SimulBase):
    info = SolverInfo(
        short_name="ns2d",
        dims=2,
        simul_class="spectralkit.solvers.ns2d:SimulNS2D",
        keys_state_spect=("rot_fft",),
        keys_state_phys=("rot",),
        keys_computable=("ux", "uy", "ux_fft", "uy_fft"),
    )
    default_nu_2 = 1e-3

    def tendencies_nonlin(self, state):
        return ns2d_tendency(self.oper, state[0], self.timers)[None]

    def linear_coef(self):
        return -self.params.nu_2 * self.oper.k_sq

    def to_velocity_fft(self, arr_spect):
        return velocity_from_vorticity2d(self.oper, arr_spect[0])

    def compute_rot_fft(self, arr_spect=None):
        arr = self.state.state_spect if arr_spect is None else arr_spect
        return arr[0]

    def max_velocity(self):
        return np.array([np.abs(self.state.get_var(k)).max() for k in ("ux", "uy")])

    def make_admissible(self, arr_spect):
        arr_spect = arr_spect * self.oper.dealias_mask
        arr_spect[(Ellipsis,) + (0,) * self.oper.dims] = 0
        return arr_spect

    def compute_var(self, key):
        vel = self.to_velocity_fft(self.state.state_spect)
        i = ("ux", "uy").index(key.removesuffix("_fft"))
        if key.endswith("_fft"):
            return vel[i]
        return self.oper.ifft(vel[i])


register_solver(SimulNS2D.info)
