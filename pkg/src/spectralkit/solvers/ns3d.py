"""3D incompressible Navier-Stokes in rotational form.

    du/dt = P[u x omega] + nu lap(u)

where ``P`` is the divergence-free projection, which also removes the
pressure and kinetic-energy gradients. One tendency evaluation costs 6 inverse
transforms (velocity and vorticity) and 3 forward transforms.
"""

import numpy as np

from ..base import SimulBase, SolverInfo, register_solver
from ..operators import curl3d, project_divfree
from ..timing import NULL_TIMERS


def ns3d_tendency(grid, vel_hat, timers=NULL_TIMERS):
    """Dealiased, projected ``FFT(u x omega)`` for a spectral velocity."""
    mask = grid.dealias_mask
    fields_hat = np.empty((6,) + grid.shape_spect, dtype=np.complex128)
    with timers("curl"):
        np.multiply(vel_hat, mask, out=fields_hat[:3])
        fields_hat[3:] = curl3d(grid, fields_hat[:3])
    with timers("fft"):
        fields = grid.ifft(fields_hat)
    u, w = fields[:3], fields[3:]
    with timers("vector_product"):
        cross = np.empty_like(u)
        np.multiply(u[1], w[2], out=cross[0])
        cross[0] -= u[2] * w[1]
        np.multiply(u[2], w[0], out=cross[1])
        cross[1] -= u[0] * w[2]
        np.multiply(u[0], w[1], out=cross[2])
        cross[2] -= u[1] * w[0]
    with timers("fft"):
        n_hat = grid.fft(cross)
    with timers("projection"):
        project_divfree(grid, n_hat)
    with timers("dealias"):
        n_hat *= mask
    return n_hat


class SimulNS3D(SimulBase):
    info = SolverInfo(
        short_name="ns3d",
        dims=3,
        simul_class="spectralkit.solvers.ns3d:SimulNS3D",
        keys_state_spect=("vx_fft", "vy_fft", "vz_fft"),
        keys_state_phys=("vx", "vy", "vz"),
        keys_computable=("rotx", "roty", "rotz", "rotx_fft", "roty_fft", "rotz_fft"),
    )
    default_nu_2 = 1e-3

    def tendencies_nonlin(self, state):
        return ns3d_tendency(self.oper, state, self.timers)

    def linear_coef(self):
        return -self.params.nu_2 * self.oper.k_sq

    def compute_rot_fft(self, arr_spect=None):
        arr = self.state.state_spect if arr_spect is None else arr_spect
        return curl3d(self.oper, arr)

    def max_velocity(self):
        return np.abs(self.state.state_phys).reshape(3, -1).max(axis=1)

    def make_admissible(self, arr_spect):
        arr_spect = arr_spect * self.oper.dealias_mask
        project_divfree(self.oper, arr_spect)
        return arr_spect

    def compute_var(self, key):
        rot = self.compute_rot_fft()
        i = ("rotx", "roty", "rotz").index(key.removesuffix("_fft"))
        if key.endswith("_fft"):
            return rot[i]
        return self.oper.ifft(rot[i])


register_solver(SimulNS3D.info)
