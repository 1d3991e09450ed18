"""Physical and spectral state arrays kept lazily consistent."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, ShapeError


class StateSet:
    """The ``sim.state`` object.

    Holds ``state_spect`` with shape ``(nvar, *grid.shape_spect)`` and
    ``state_phys`` with shape ``(nvar, *grid.shape_phys)``. The time stepper
    advances one of them in place (``prognostic``) and then calls
    :meth:`mark_prognostic_modified`; the other representation and all
    computable variables are recomputed on the next access.
    """

    def __init__(self, sim):
        info = sim.info_solver
        self.sim = sim
        self.oper = sim.oper
        self.keys_state_spect = list(info.keys_state_spect)
        self.keys_state_phys = list(info.keys_state_phys)
        self.keys_computable = list(info.keys_computable)
        self.prognostic_space = info.prognostic
        nvar = len(self.keys_state_phys)
        self._spect = self.oper.zeros_spect(nvar)
        self._phys = self.oper.zeros_phys(nvar)
        self._spect_ok = True
        self._phys_ok = True
        self._cache = {}

    @classmethod
    def _complete_params(cls, params, info):
        pass

    @property
    def state_spect(self):
        if not self._spect_ok:
            self._spect[...] = self.oper.fft(self._phys)
            self._spect_ok = True
        return self._spect

    @property
    def state_phys(self):
        if not self._phys_ok:
            self._phys[...] = self.oper.ifft(self._spect)
            self._phys_ok = True
        return self._phys

    @property
    def prognostic(self):
        if self.prognostic_space == "spect":
            return self.state_spect
        return self.state_phys

    def mark_prognostic_modified(self):
        if self.prognostic_space == "spect":
            self._phys_ok = False
        else:
            self._spect_ok = False
        self._cache.clear()

    def spect_to_prognostic(self, arr_spect):
        if self.prognostic_space == "spect":
            return arr_spect
        return self.oper.ifft(arr_spect)

    def get_var(self, key):
        if key in self.keys_state_spect:
            return self.state_spect[self.keys_state_spect.index(key)]
        if key in self.keys_state_phys:
            return self.state_phys[self.keys_state_phys.index(key)]
        if key in self.keys_computable:
            if key not in self._cache:
                self._cache[key] = self.sim.compute_var(key)
            return self._cache[key]
        raise ConfigurationError(
            f"unknown variable {key!r}; available: "
            + ", ".join(self.keys_state_spect + self.keys_state_phys + self.keys_computable)
        )

    def _fill(self, target, keys, arrays, shape):
        unknown = set(arrays) - set(keys)
        if unknown:
            raise ConfigurationError(f"unknown state variables {sorted(unknown)}")
        target[...] = 0
        for key, arr in arrays.items():
            arr = np.asarray(arr)
            if arr.shape != shape:
                raise ShapeError(f"{key!r} has shape {arr.shape}, expected {shape}")
            target[keys.index(key)] = arr

    def init_statespect_from(self, **arrays):
        """Set the spectral state; variables not given are zero."""
        self._fill(self._spect, self.keys_state_spect, arrays, self.oper.shape_spect)
        self._spect_ok, self._phys_ok = True, False
        self._cache.clear()

    def init_statephys_from(self, **arrays):
        """Set the physical state; variables not given are zero."""
        self._fill(self._phys, self.keys_state_phys, arrays, self.oper.shape_phys)
        self._phys_ok, self._spect_ok = True, False
        self._cache.clear()

    def set_both(self, phys, spect):
        """Install matching physical and spectral arrays (e.g. from a file)."""
        self._phys[...] = phys
        self._spect[...] = spect
        self._phys_ok = self._spect_ok = True
        self._cache.clear()

    def first_nonfinite_key(self):
        arr = self._spect if self.prognostic_space == "spect" else self._phys
        keys = self.keys_state_spect if self.prognostic_space == "spect" else self.keys_state_phys
        for key, field in zip(keys, arr):
            if not np.isfinite(field).all():
                return key
        return None
