"""Grid, wavenumbers and spectral operators for periodic boxes.

Axis ``d`` of a physical array is the ``d``-th coordinate (x, y, z) and vector
fields are stacked on a leading component axis in the same order. The
Hermitian-halved axis of spectral arrays is the last one.

Sign conventions used throughout::

    vorticity (2D)   omega = d_x u_y - d_y u_x
    stream function  u = (d_y psi, -d_x psi)   =>   omega_hat = |k|^2 psi_hat
"""

from __future__ import annotations

import numpy as np

from . import fft_backend
from .errors import ConfigurationError, ShapeError

__all__ = [
    "SpectralGrid",
    "make_grid",
    "dealias",
    "gradient",
    "divergence",
    "curl2d",
    "curl3d",
    "project_divfree",
    "velocity_from_vorticity2d",
    "random_field",
    "inner",
]


class SpectralGrid:
    """Physical and spectral description of a periodic box.

    Parameters
    ----------
    n : sequence of int
        Number of grid points per axis (even, >= 4).
    L : sequence of float
        Domain length per axis.
    dealias_coef : float
        Fraction of the largest wavenumber kept on each axis (2/3 rule by
        default, 1 disables truncation).
    """

    def __init__(self, n, L, dealias_coef=2.0 / 3.0):
        n = tuple(int(v) for v in np.atleast_1d(n))
        L = tuple(float(v) for v in np.atleast_1d(L))
        if len(n) != len(L):
            raise ConfigurationError(f"got {len(n)} extents but {len(L)} lengths")
        if not 1 <= len(n) <= 3:
            raise ConfigurationError(f"1D, 2D or 3D grids only, got n={n}")
        if any(v < 4 or v % 2 for v in n):
            raise ConfigurationError(f"extents must be even and >= 4, got n={n}")
        if any(not np.isfinite(v) or v <= 0 for v in L):
            raise ConfigurationError(f"lengths must be positive, got L={L}")
        if not 0 < dealias_coef <= 1:
            raise ConfigurationError(
                f"dealias_coef must be in (0, 1], got {dealias_coef}"
            )

        self.dims = len(n)
        self.n = n
        self.L = L
        self.dealias_coef = float(dealias_coef)
        self.plan = fft_backend.plan(n)
        self.shape_phys = self.plan.phys_shape
        self.shape_spect = self.plan.spect_shape
        self.dx = tuple(Ld / nd for Ld, nd in zip(L, n))
        self.deltak = tuple(2 * np.pi / Ld for Ld in L)

        last = self.dims - 1
        self.index_axis = []
        for d, nd in enumerate(n):
            if d == last:
                m = np.arange(nd // 2 + 1)
            else:
                m = np.fft.fftfreq(nd, 1.0 / nd).astype(int)
            self.index_axis.append(m)
        self.k_axis = [m * dk for m, dk in zip(self.index_axis, self.deltak)]

        # broadcastable wavenumber components, one per axis
        self.k = tuple(
            _along(self.k_axis[d], d, self.dims) for d in range(self.dims)
        )
        self.k_sq = np.zeros(self.shape_spect)
        for kd in self.k:
            self.k_sq = self.k_sq + kd**2
        self.k_norm = np.sqrt(self.k_sq)
        with np.errstate(divide="ignore"):
            self.inv_k_sq = np.where(self.k_sq > 0, 1.0 / self.k_sq, 0.0)

        keep = np.ones(self.shape_spect, dtype=bool)
        for d in range(self.dims):
            limit = self.dealias_coef * (n[d] / 2)
            keep_d = np.abs(self.index_axis[d]) <= limit
            keep = keep & _along(keep_d, d, self.dims)
        self.dealias_mask = keep

        self.weights = np.ascontiguousarray(fft_backend.hermitian_weights(self.plan))
        self.x_axis = [np.arange(nd) * dxd for nd, dxd in zip(n, self.dx)]

    @classmethod
    def _complete_params(cls, params, info):
        leaves = {}
        for c in "xyz"[: info.dims]:
            leaves[f"n{c}"] = 32
        for c in "xyz"[: info.dims]:
            leaves[f"L{c}"] = 2 * np.pi
        leaves["coef_dealiasing"] = 2.0 / 3.0
        params._set_child("oper", leaves)

    @classmethod
    def from_params(cls, params):
        p = params.oper
        names = [c for c in "xyz" if f"n{c}" in p]
        return cls(
            [p[f"n{c}"] for c in names],
            [p[f"L{c}"] for c in names],
            p.coef_dealiasing,
        )

    @property
    def k_max(self):
        return tuple(nd / 2 * dk for nd, dk in zip(self.n, self.deltak))

    @property
    def deltak_shells(self):
        """Width of the shells used for isotropic spectra."""
        return 2 * np.pi / max(self.L)

    def coords(self):
        """Full physical coordinate arrays, one per axis."""
        return np.meshgrid(*self.x_axis, indexing="ij")

    def fft(self, u):
        return fft_backend.forward(self.plan, u)

    def ifft(self, u_hat):
        return fft_backend.inverse(self.plan, u_hat)

    def zeros_spect(self, ncomp=None):
        shape = self.shape_spect if ncomp is None else (ncomp,) + self.shape_spect
        return np.zeros(shape, dtype=np.complex128)

    def zeros_phys(self, ncomp=None):
        shape = self.shape_phys if ncomp is None else (ncomp,) + self.shape_phys
        return np.zeros(shape)

    def __repr__(self):
        return (
            f"SpectralGrid(n={self.n}, L={self.L}, "
            f"dealias_coef={self.dealias_coef!r})"
        )


def _along(values, axis, ndim):
    shape = [1] * ndim
    shape[axis] = len(values)
    return np.asarray(values).reshape(shape)


def make_grid(n, L, dealias_coef=2.0 / 3.0):
    return SpectralGrid(n, L, dealias_coef)


def _check_scalar(grid, a_hat):
    if a_hat.shape != grid.shape_spect:
        raise ShapeError(
            f"scalar spectral field of shape {a_hat.shape}, expected {grid.shape_spect}"
        )


def _check_vector(grid, u_hat, ncomp=None):
    ncomp = grid.dims if ncomp is None else ncomp
    if u_hat.shape != (ncomp,) + grid.shape_spect:
        raise ShapeError(
            f"vector spectral field of shape {u_hat.shape}, "
            f"expected {(ncomp,) + grid.shape_spect}"
        )


def dealias(grid, u_hat):
    """Zero the truncated modes of ``u_hat`` in place (any leading axes)."""
    if u_hat.shape[u_hat.ndim - grid.dims:] != grid.shape_spect:
        raise ShapeError(f"cannot dealias array of shape {u_hat.shape}")
    u_hat *= grid.dealias_mask
    return u_hat


def gradient(grid, a_hat):
    _check_scalar(grid, a_hat)
    out = np.empty((grid.dims,) + grid.shape_spect, dtype=np.complex128)
    for d, kd in enumerate(grid.k):
        np.multiply(1j * kd, a_hat, out=out[d])
    return out


def divergence(grid, u_hat):
    _check_vector(grid, u_hat)
    out = np.zeros(grid.shape_spect, dtype=np.complex128)
    for d, kd in enumerate(grid.k):
        out += 1j * kd * u_hat[d]
    return out


def curl2d(grid, u_hat):
    if grid.dims != 2:
        raise ShapeError("curl2d needs a 2D grid")
    _check_vector(grid, u_hat)
    kx, ky = grid.k
    return 1j * (kx * u_hat[1] - ky * u_hat[0])


def curl3d(grid, u_hat):
    if grid.dims != 3:
        raise ShapeError("curl3d needs a 3D grid")
    _check_vector(grid, u_hat)
    kx, ky, kz = grid.k
    out = np.empty_like(u_hat, dtype=np.complex128)
    out[0] = 1j * (ky * u_hat[2] - kz * u_hat[1])
    out[1] = 1j * (kz * u_hat[0] - kx * u_hat[2])
    out[2] = 1j * (kx * u_hat[1] - ky * u_hat[0])
    return out


def project_divfree(grid, u_hat):
    """Leray projection in place: remove the component of u_hat along k."""
    if grid.dims < 2:
        raise ShapeError("projection needs a 2D or 3D grid")
    _check_vector(grid, u_hat)
    k_dot_u = grid.k[0] * u_hat[0]
    for d in range(1, grid.dims):
        k_dot_u = k_dot_u + grid.k[d] * u_hat[d]
    k_dot_u *= grid.inv_k_sq
    for d, kd in enumerate(grid.k):
        u_hat[d] -= kd * k_dot_u
    return u_hat


def velocity_from_vorticity2d(grid, rot_hat):
    """Velocity components from the 2D vorticity; the mean flow is set to 0."""
    if grid.dims != 2:
        raise ShapeError("velocity_from_vorticity2d needs a 2D grid")
    _check_scalar(grid, rot_hat)
    kx, ky = grid.k
    psi_hat = rot_hat * grid.inv_k_sq
    out = np.empty((2,) + grid.shape_spect, dtype=np.complex128)
    np.multiply(1j * ky, psi_hat, out=out[0])
    np.multiply(-1j * kx, psi_hat, out=out[1])
    return out


def inner(grid, a_hat, b_hat):
    """``sum_k w_k Re(conj(a_k) b_k)``, i.e. the physical mean of ``a * b``.

    Leading component axes are summed as well.
    """
    prod = a_hat.real * b_hat.real + a_hat.imag * b_hat.imag
    return float(np.sum(grid.weights * prod))


def random_field(grid, seed, band, ncomp=None):
    """Band-limited random spectral field.

    Coefficients have unit magnitude and uniform random phases on the modes
    with ``k_lo <= |k| <= k_hi`` and vanish elsewhere. They are then made
    Hermitian-consistent (so the physical field is real) and scaled so that
    the mean square of the physical field is 1.
    """
    k_lo, k_hi = (float(v) for v in band)
    if not 0 <= k_lo < k_hi:
        raise ConfigurationError(f"invalid wavenumber band [{k_lo}, {k_hi}]")
    tol = 1e-12 * k_hi
    support = (grid.k_norm >= k_lo - tol) & (grid.k_norm <= k_hi + tol)
    if not support.any():
        raise ConfigurationError(f"no mode of the grid lies in band [{k_lo}, {k_hi}]")
    rng = np.random.default_rng(seed)
    shape = grid.shape_spect if ncomp is None else (ncomp,) + grid.shape_spect
    phases = rng.uniform(0.0, 2 * np.pi, size=shape)
    coefs = np.where(support, np.exp(1j * phases), 0.0)
    coefs = grid.fft(grid.ifft(coefs))
    coefs *= support
    norm = np.sqrt(inner(grid, coefs, coefs))
    if norm == 0:
        raise ConfigurationError(f"band [{k_lo}, {k_hi}] only holds cancelled modes")
    coefs /= norm
    return coefs
