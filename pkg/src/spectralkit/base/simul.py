"""Base class of all simulations."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..operators import inner
from ..params import ParamTree
from ..time_stepping import StepperConfig
from .info_solver import ROLES


class SimulBase:
    """Assemble a simulation from a parameter tree.

    Sub-objects are created in this order: params (copy), info_solver, oper,
    output, state, time_stepping, init_fields, forcing (only when
    ``params.forcing.enable``), preprocess. The params copy is locked once
    preprocessing is done.

    Subclasses set ``info`` (a :class:`SolverInfo`) and implement the
    equations: :meth:`tendencies_nonlin`, :meth:`linear_coef`,
    :meth:`to_velocity_fft` and :meth:`max_velocity`.
    """

    info = None
    default_nu_2 = 0.0

    @classmethod
    def create_default_params(cls):
        params = ParamTree("params")
        params._set_leaf("solver", cls.info.short_name)
        params._set_leaf("nu_2", cls.default_nu_2)
        cls._complete_params(params)
        for role in ROLES[1:]:
            cls.info.component(role)._complete_params(params, cls.info)
        return params._freeze()

    @classmethod
    def _complete_params(cls, params):
        """Hook for solver-specific leaves."""

    def __init__(self, params, *, output_dir=None, read_only=False):
        if not isinstance(params, ParamTree):
            raise TypeError("a simulation is built from a ParamTree")
        if params.solver != self.info.short_name:
            raise ConfigurationError(
                f"params are for solver {params.solver!r}, not {self.info.short_name!r}"
            )
        self.params = params.copy()
        self.read_only = read_only
        self.info_solver = self.info
        self._validate_params()

        info = self.info
        self.oper = info.component("Operators").from_params(self.params)
        self.output = info.component("Output")(self, path=output_dir, read_only=read_only)
        self.state = info.component("State")(self)
        self.time_stepping = info.component("TimeStepping")(self)
        self.init_fields = info.component("InitFields")(self)
        self.init_fields()
        if self.params.forcing.enable:
            self.forcing = info.component("Forcing")(self)
        else:
            self.forcing = None
        self.preprocess = info.component("Preprocess")(self)
        self.preprocess()
        self.params._lock()
        self.output.init_files()

    def _validate_params(self):
        p = self.params
        names = "xyz"[: self.info.dims]
        for c in names:
            if p.oper[f"n{c}"] < 4 or p.oper[f"n{c}"] % 2:
                raise ConfigurationError(
                    f"oper.n{c} must be even and >= 4, got {p.oper[f'n{c}']}"
                )
            if not p.oper[f"L{c}"] > 0:
                raise ConfigurationError(f"oper.L{c} must be positive")
        if not 0 < p.oper.coef_dealiasing <= 1:
            raise ConfigurationError(
                f"oper.coef_dealiasing must be in (0, 1], got {p.oper.coef_dealiasing}"
            )
        if p.nu_2 < 0:
            raise ConfigurationError(f"nu_2 must be >= 0, got {p.nu_2}")
        StepperConfig.from_params(p)

    # equations --------------------------------------------------------------
    @property
    def timers(self):
        return self.time_stepping.timers

    @property
    def viscosity(self):
        return self.params.nu_2

    def tendencies_nonlin(self, state):
        raise NotImplementedError

    def linear_coef(self):
        return 0.0

    def to_velocity_fft(self, arr_spect):
        """Map a spectral state-shaped array to velocity components."""
        return arr_spect

    def compute_rot_fft(self, arr_spect=None):
        """Spectral vorticity (scalar in 2D, vector in 3D), None in 1D."""
        return None

    def max_velocity(self):
        return np.zeros(self.info.dims)

    def make_admissible(self, arr_spect):
        """Project a spectral state-shaped array onto admissible states."""
        return arr_spect

    def compute_var(self, key):
        raise ConfigurationError(f"{type(self).__name__} cannot compute {key!r}")

    # diagnostics shared by forcing, preprocess and output ---------------------
    def energy_inner(self, a_spect, b_spect):
        """Physical mean of ``u_a . u_b`` for two state-shaped spectral arrays."""
        return inner(self.oper, self.to_velocity_fft(a_spect), self.to_velocity_fft(b_spect))

    def energy(self):
        s = self.state.state_spect
        return 0.5 * self.energy_inner(s, s)

    def nonlin_tendency_spect(self):
        """Nonlinear tendency of the current state, in spectral space."""
        tend = self.tendencies_nonlin(self.state.prognostic.copy())
        if self.state.prognostic_space == "phys":
            tend = self.oper.fft(tend)
        return tend

    def velocity_phys(self):
        return self.oper.ifft(self.to_velocity_fft(self.state.state_spect))

    def __repr__(self):
        return f"<{type(self).__name__} {self.info.short_name} n={self.oper.n}>"
