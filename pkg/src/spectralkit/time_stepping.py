r"""Explicit Runge-Kutta time stepping with an exact diagonal linear term.

The equations are written as

.. math::

    \partial_t \hat u = N(\hat u) + \sigma \hat u

where :math:`\sigma` is real and diagonal in spectral space (e.g.
:math:`-\nu |k|^2`). With :math:`\hat v = e^{-\sigma t} \hat u` the linear term
disappears and a classical Runge-Kutta scheme is applied to :math:`\hat v`
(integrating factor / Lawson form). Pure linear problems are therefore
integrated exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from .errors import ConfigurationError, DivergenceError, ShapeError
from .timing import NULL_TIMERS, KernelTimers

__all__ = [
    "StepperConfig",
    "RunSummary",
    "compute_cfl_dt",
    "step_rk2_exactlin",
    "step_rk4_exactlin",
    "TimeStepper",
    "run",
]

logger = logging.getLogger(__name__)

_VELOCITY_FLOOR = 1e-12


def compute_cfl_dt(max_velocity, dx, cfl_coef, dt_max):
    """Largest stable advective time step, capped by ``dt_max``.

    ``dt = min(dt_max, cfl_coef * min_d dx_d / max(|u_d|, eps))``
    """
    max_velocity = np.abs(np.atleast_1d(np.asarray(max_velocity, dtype=float)))
    dx = np.atleast_1d(np.asarray(dx, dtype=float))
    if max_velocity.shape != dx.shape:
        raise ShapeError(f"{max_velocity.size} velocities for {dx.size} grid spacings")
    limits = dx / np.maximum(max_velocity, _VELOCITY_FLOOR)
    return float(min(dt_max, cfl_coef * limits.min()))


def _exp_factors(sigma, dt):
    sigma = np.asarray(sigma, dtype=float)
    return np.exp(0.5 * dt * sigma), np.exp(dt * sigma)


def _checked(tendency, state):
    if tendency.shape != state.shape:
        raise ShapeError(
            f"tendency of shape {tendency.shape} for a state of shape {state.shape}"
        )
    return tendency


def step_rk4_exactlin(state, nonlin, sigma, dt, factors=None, timers=NULL_TIMERS):
    """Advance ``state`` in place by one RK4 step (four ``nonlin`` calls).

    Parameters
    ----------
    state : ndarray
        Modified in place.
    nonlin : callable
        ``nonlin(u) -> du/dt`` without the linear term, same shape as ``u``.
    sigma : float or ndarray
        Real linear coefficient, broadcastable against ``state``.
    dt : float
    factors : tuple, optional
        Precomputed ``(exp(sigma dt / 2), exp(sigma dt))``.
    """
    e_half, e_full = _exp_factors(sigma, dt) if factors is None else factors
    with timers("rk"):
        k1 = _checked(nonlin(state), state)
        tmp = e_half * (state + 0.5 * dt * k1)
        k2 = _checked(nonlin(tmp), state)
        tmp = e_half * state + 0.5 * dt * k2
        k3 = _checked(nonlin(tmp), state)
        tmp = e_full * state + dt * e_half * k3
        k4 = _checked(nonlin(tmp), state)
        incr = e_full * k1
        incr += 2 * e_half * (k2 + k3)
        incr += k4
        incr *= dt / 6
        state *= e_full
        state += incr


def step_rk2_exactlin(state, nonlin, sigma, dt, factors=None, timers=NULL_TIMERS):
    """Midpoint RK2 counterpart of :func:`step_rk4_exactlin`."""
    e_half, e_full = _exp_factors(sigma, dt) if factors is None else factors
    with timers("rk"):
        k1 = _checked(nonlin(state), state)
        tmp = e_half * (state + 0.5 * dt * k1)
        k2 = _checked(nonlin(tmp), state)
        incr = dt * e_half * k2
        state *= e_full
        state += incr


_SCHEMES = {"RK4": step_rk4_exactlin, "RK2": step_rk2_exactlin}


@dataclass
class StepperConfig:
    scheme: str = "RK4"
    cfl_coef: float = 0.5
    dt_max: float = 0.2
    fixed_dt: float | None = None
    t_end: float | None = 1.0
    n_iters: int | None = None

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ConfigurationError(
                f"unknown time scheme {self.scheme!r}, choose among {sorted(_SCHEMES)}"
            )
        if not 0 < self.cfl_coef <= 1:
            raise ConfigurationError(f"cfl_coef must be in (0, 1], got {self.cfl_coef}")
        if self.dt_max <= 0:
            raise ConfigurationError(f"dt_max must be positive, got {self.dt_max}")
        if self.fixed_dt is not None and self.fixed_dt <= 0:
            raise ConfigurationError(f"fixed_dt must be positive, got {self.fixed_dt}")
        if (self.t_end is None) == (self.n_iters is None):
            raise ConfigurationError("exactly one of t_end and n_iters must be set")
        if self.n_iters is not None and self.n_iters < 0:
            raise ConfigurationError(f"n_iters must be >= 0, got {self.n_iters}")

    @classmethod
    def from_params(cls, params):
        p = params.time_stepping
        if p.stop not in ("t_end", "n_iters"):
            raise ConfigurationError(
                f"time_stepping.stop must be 't_end' or 'n_iters', got {p.stop!r}"
            )
        return cls(
            scheme=p.type_time_scheme,
            cfl_coef=p.cfl_coef,
            dt_max=p.dt_max,
            fixed_dt=p.fixed_dt if p.fixed_dt > 0 else None,
            t_end=p.t_end if p.stop == "t_end" else None,
            n_iters=p.n_iters if p.stop == "n_iters" else None,
        )


@dataclass
class RunSummary:
    iterations: int
    t: float
    walltime: float
    timers: dict = field(default_factory=dict)


class TimeStepper:
    """The ``sim.time_stepping`` object."""

    def __init__(self, sim):
        self.sim = sim
        self.config = StepperConfig.from_params(sim.params)
        self.t = 0.0
        self.it = 0
        self.dt = self.config.fixed_dt or self.config.dt_max
        self.timers = KernelTimers()
        self._factors_key = None
        self._factors = None
        self._sigma = None

    @classmethod
    def _complete_params(cls, params, info):
        params._set_child(
            "time_stepping",
            dict(
                type_time_scheme="RK4",
                cfl_coef=0.5,
                dt_max=0.2,
                fixed_dt=0.0,
                stop="t_end",
                t_end=1.0,
                n_iters=10,
            ),
        )

    def compute_dt(self):
        if self.config.fixed_dt is not None:
            dt = self.config.fixed_dt
        else:
            with self.timers("cfl"):
                dt = compute_cfl_dt(
                    self.sim.max_velocity(),
                    self.sim.oper.dx,
                    self.config.cfl_coef,
                    self.config.dt_max,
                )
        if self.config.t_end is not None:
            dt = min(dt, self.config.t_end - self.t)
        return dt

    def _is_done(self, n_done):
        if self.config.n_iters is not None:
            return n_done >= self.config.n_iters
        t_end = self.config.t_end
        return t_end - self.t <= 1e-12 * max(1.0, abs(t_end))

    def _factors_for(self, dt):
        if self._factors_key != dt:
            self._factors = _exp_factors(self._sigma, dt)
            self._factors_key = dt
        return self._factors

    def one_time_step(self, dt, forcing_hat=None):
        sim = self.sim
        state = sim.state.prognostic
        if forcing_hat is None:
            nonlin = sim.tendencies_nonlin
        else:

            def nonlin(u):
                tend = sim.tendencies_nonlin(u)
                tend += forcing_hat
                return tend

        _SCHEMES[self.config.scheme](
            state, nonlin, self._sigma, dt, self._factors_for(dt), self.timers
        )
        sim.state.mark_prognostic_modified()
        self.t += dt
        self.it += 1
        if not np.isfinite(state).all():
            raise DivergenceError(self.it, sim.state.first_nonfinite_key())

    def start(self, n_iters=None):
        """Run until the stopping rule; return a :class:`RunSummary`.

        ``n_iters`` overrides the configured stopping rule for this call.
        """
        sim = self.sim
        if getattr(sim, "read_only", False):
            raise RuntimeError("simulation loaded for plotting cannot be time-stepped")
        if n_iters is not None:
            self.config = StepperConfig(
                scheme=self.config.scheme,
                cfl_coef=self.config.cfl_coef,
                dt_max=self.config.dt_max,
                fixed_dt=self.config.fixed_dt,
                t_end=None,
                n_iters=n_iters,
            )
        self._sigma = sim.linear_coef()
        if np.any(np.asarray(self._sigma) > 0):
            logger.warning("positive linear coefficient: the linear term amplifies modes")
        self._factors_key = None
        self.timers.reset()
        forcing = sim.forcing
        n_done = 0
        t0 = perf_counter()
        while not self._is_done(n_done):
            dt = self.compute_dt()
            self.dt = dt
            forcing_hat = None
            if forcing is not None:
                with self.timers("forcing"):
                    forcing_hat = forcing.compute(self.it)
            with self.timers("output"):
                sim.output.one_time_step()
            self.one_time_step(dt, forcing_hat)
            n_done += 1
        with self.timers("output"):
            sim.output.end_of_simul()
        walltime = perf_counter() - t0
        logger.debug("%d iterations in %.3f s", n_done, walltime)
        return RunSummary(n_done, self.t, walltime, self.timers.as_dict())


def run(sim):
    return sim.time_stepping.start()
