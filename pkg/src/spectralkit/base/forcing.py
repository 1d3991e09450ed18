"""Random band-limited forcing with a prescribed energy injection rate."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import ConfigurationError
from ..operators import random_field

logger = logging.getLogger(__name__)

NORMALIZATIONS = ("rate", "step")


class Forcing:
    """The ``sim.forcing`` object.

    Each iteration draws a new random field on the shells
    ``k_lo <= |k| <= k_hi`` (deterministic per ``(seed, iteration)``) and
    rescales it to inject energy at ``injection_rate``:

    ``"rate"``
        the instantaneous rate ``<u . f>`` equals the target. When that inner
        product is degenerate the unscaled unit-norm field is used instead.
    ``"step"``
        the energy injected during one step with the forcing held constant,
        ``dt <u . f> + dt**2 <f . f> / 2``, equals ``injection_rate * dt``.

    In both cases ``last_rate`` (recorded as ``P_forcing``) is the mean power
    injected over the step, ``<u . f> + dt <f . f> / 2``.
    """

    degenerate_tol = 1e-10

    def __init__(self, sim):
        self.sim = sim
        p = sim.params.forcing
        if p.normalization not in NORMALIZATIONS:
            raise ConfigurationError(
                f"forcing.normalization must be one of {NORMALIZATIONS}, got {p.normalization!r}"
            )
        if not 0 <= p.k_lo < p.k_hi:
            raise ConfigurationError(f"invalid forcing band [{p.k_lo}, {p.k_hi}]")
        self.band = (p.k_lo, p.k_hi)
        self.rate_target = p.injection_rate
        self.seed = p.seed
        self.normalization = p.normalization
        self.nvar = len(sim.state.keys_state_spect)
        self.last_it = None
        self.last_hat = None
        self.last_rate = 0.0
        self.fallback = False

    @classmethod
    def _complete_params(cls, params, info):
        params._set_child(
            "forcing",
            dict(
                enable=False,
                k_lo=3.0,
                k_hi=5.0,
                injection_rate=1.0,
                seed=1,
                normalization="rate",
            ),
        )

    def random_unit(self, it):
        sim = self.sim
        arr = random_field(sim.oper, [self.seed, it], self.band, ncomp=self.nvar)
        arr = sim.make_admissible(arr)
        norm2 = sim.energy_inner(arr, arr)
        if norm2 <= 0:
            raise ConfigurationError(
                f"forcing band {self.band} holds no admissible mode on this grid"
            )
        return arr / np.sqrt(norm2)

    def compute_spect(self, it):
        """Forcing for iteration ``it`` in spectral space."""
        sim = self.sim
        f_hat = self.random_unit(it)
        state = sim.state.state_spect
        b = sim.energy_inner(state, f_hat)
        P = self.rate_target
        self.fallback = False
        dt = sim.time_stepping.dt
        if self.normalization == "rate":
            scale = np.sqrt(max(sim.energy_inner(state, state), 0.0))
            if abs(b) <= self.degenerate_tol * max(scale, np.finfo(float).tiny):
                logger.info("degenerate forcing inner product at it=%d, unscaled forcing", it)
                self.fallback = True
                amp = 1.0
            else:
                amp = P / b
        else:
            # smaller root of dt**2/2 a**2 + dt b a - P dt = 0 (|f_hat| = 1)
            disc = np.sqrt(max(b * b + 2 * dt * P, 0.0))
            denom = b + np.copysign(disc, b if b != 0 else 1.0)
            amp = 2 * P / denom if denom != 0 else 0.0
        f_hat *= amp
        # mean power injected over a step with the forcing held constant
        rate = amp * b + 0.5 * dt * amp**2
        self.last_it = it
        self.last_hat = f_hat
        self.last_rate = float(rate)
        return f_hat

    def compute(self, it):
        """Forcing for iteration ``it`` in the space of the prognostic state."""
        return self.sim.state.spect_to_prognostic(self.compute_spect(it))
