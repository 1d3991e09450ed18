"""Real-to-complex transforms with amplitude normalization.

Convention: the forward transform carries the ``1/N`` factor, so a cosine of
unit amplitude has coefficient 0.5 and the mean of the field is the ``k = 0``
coefficient::

    u_hat[k] = (1 / N) * sum_j u[j] * exp(-i k . x_j)

Spectral arrays use Hermitian storage: the last axis holds ``n // 2 + 1``
modes. Transforms are out-of-place; inputs are never modified.

The transforms themselves are delegated to :mod:`scipy.fft`. A plan records
the shapes and normalization; plans are cached per physical shape.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import ShapeError

__all__ = [
    "FftPlan",
    "plan",
    "forward",
    "inverse",
    "hermitian_weights",
    "get_num_workers",
    "set_num_workers",
]

_ENV_THREADS = "SPECTRALKIT_NUM_THREADS"
_num_workers = 1
_plans: dict[tuple[int, ...], "FftPlan"] = {}


def _thread_cap():
    value = os.environ.get(_ENV_THREADS)
    if not value:
        return None
    try:
        cap = int(value)
    except ValueError:
        return None
    return max(cap, 1)


def set_num_workers(n):
    """Set the number of threads used by the transforms.

    The value is capped by the ``SPECTRALKIT_NUM_THREADS`` environment
    variable when it is set. Returns the effective count.
    """
    global _num_workers
    n = max(int(n), 1)
    cap = _thread_cap()
    if cap is not None:
        n = min(n, cap)
    _num_workers = n
    return n


def get_num_workers():
    return _num_workers


@dataclass(frozen=True)
class FftPlan:
    phys_shape: tuple[int, ...]
    spect_shape: tuple[int, ...]
    normalization: str = "amplitude"
    axes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(range(-len(self.phys_shape), 0)))

    @property
    def ndim(self):
        return len(self.phys_shape)

    @property
    def size(self):
        return int(np.prod(self.phys_shape))

    def forward(self, u):
        return forward(self, u)

    def inverse(self, u_hat):
        return inverse(self, u_hat)


def _check_extents(phys_shape):
    shape = tuple(int(n) for n in phys_shape)
    if not 1 <= len(shape) <= 3:
        raise ShapeError(f"only 1D, 2D and 3D transforms are supported, got {shape}")
    for n in shape:
        if n < 4 or n % 2:
            raise ShapeError(f"extents must be even and >= 4, got {shape}")
    return shape


def plan(phys_shape):
    """Return the (cached) plan for a physical shape."""
    shape = _check_extents(phys_shape)
    try:
        return _plans[shape]
    except KeyError:
        pass
    spect = shape[:-1] + (shape[-1] // 2 + 1,)
    p = FftPlan(shape, spect)
    _plans[shape] = p
    return p


def _check_trailing(arr, shape, what):
    if arr.ndim < len(shape) or arr.shape[arr.ndim - len(shape):] != shape:
        raise ShapeError(f"{what} array of shape {arr.shape} does not end with {shape}")


def forward(p, u):
    """Physical to spectral. Leading axes (e.g. vector components) are batched."""
    u = np.asarray(u)
    _check_trailing(u, p.phys_shape, "physical")
    return scipy.fft.rfftn(u, axes=p.axes, norm="forward", workers=_num_workers)


def inverse(p, u_hat):
    """Spectral to physical; exact inverse of :func:`forward`."""
    u_hat = np.asarray(u_hat)
    _check_trailing(u_hat, p.spect_shape, "spectral")
    return scipy.fft.irfftn(
        u_hat, s=p.phys_shape, axes=p.axes, norm="forward", workers=_num_workers
    )


def hermitian_weights(p):
    """Multiplicity of each stored mode in the full spectrum.

    Modes on the last-axis planes 0 and n/2 are their own conjugate partners
    in storage and count once; every other stored mode stands for itself and
    its conjugate and counts twice. With these weights,
    ``mean(u**2) == sum(w * abs(u_hat)**2)``.
    """
    n_last = p.phys_shape[-1]
    w = np.full(p.spect_shape[-1], 2.0)
    w[0] = 1.0
    if n_last % 2 == 0:
        w[-1] = 1.0
    return np.broadcast_to(w, p.spect_shape)


if (_cap := _thread_cap()) is not None:
    set_num_workers(_cap)
