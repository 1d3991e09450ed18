"""Solver descriptors and the solver registry."""

from __future__ import annotations

import importlib
from dataclasses import dataclass, field

from ..errors import ConfigurationError, UnknownSolverError
from ..params import ParamTree, deserialize, serialize

__all__ = [
    "ROLES",
    "SolverInfo",
    "register_solver",
    "resolve",
    "list_solvers",
    "import_component",
]

ROLES = (
    "Simul",
    "Operators",
    "State",
    "TimeStepping",
    "InitFields",
    "Forcing",
    "Output",
    "Preprocess",
)

_DEFAULT_CLASSES = {
    "Operators": "spectralkit.operators:SpectralGrid",
    "State": "spectralkit.base.state:StateSet",
    "TimeStepping": "spectralkit.time_stepping:TimeStepper",
    "InitFields": "spectralkit.base.init_fields:InitFields",
    "Forcing": "spectralkit.base.forcing:Forcing",
    "Output": "spectralkit.output:Output",
    "Preprocess": "spectralkit.base.preprocess:Preprocess",
}


def import_component(component_id):
    """Import ``"package.module:QualName"`` and return the object."""
    module_name, _, qualname = component_id.partition(":")
    if not qualname:
        raise ConfigurationError(f"component id {component_id!r} lacks ':QualName'")
    try:
        obj = importlib.import_module(module_name)
        for part in qualname.split("."):
            obj = getattr(obj, part)
    except (ImportError, AttributeError) as exc:
        raise ConfigurationError(f"cannot resolve component {component_id!r}: {exc}")
    return obj


@dataclass(frozen=True)
class SolverInfo:
    """Which classes make up a solver, and the names of its variables.

    ``prognostic`` tells whether the time stepper advances the spectral
    (``"spect"``) or the physical (``"phys"``) state.
    """

    short_name: str
    dims: int
    simul_class: str
    keys_state_spect: tuple[str, ...]
    keys_state_phys: tuple[str, ...]
    keys_computable: tuple[str, ...] = ()
    prognostic: str = "spect"
    classes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise ConfigurationError(f"dims must be 1, 2 or 3, got {self.dims}")
        if self.prognostic not in ("spect", "phys"):
            raise ConfigurationError(f"prognostic must be 'spect' or 'phys'")
        if len(self.keys_state_spect) != len(self.keys_state_phys):
            raise ConfigurationError("each spectral key needs exactly one physical key")
        merged = dict(_DEFAULT_CLASSES)
        merged["Simul"] = self.simul_class
        merged.update(self.classes)
        unknown = set(merged) - set(ROLES)
        if unknown:
            raise ConfigurationError(f"unknown roles {sorted(unknown)}")
        object.__setattr__(self, "classes", {role: merged[role] for role in ROLES})
        for name in ("keys_state_spect", "keys_state_phys", "keys_computable"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    __hash__ = None

    def component(self, role):
        return import_component(self.classes[role])

    def check_resolvable(self):
        for role in ROLES:
            self.component(role)

    def as_tree(self):
        tree = ParamTree("solver")
        tree._set_leaf("short_name", self.short_name)
        tree._set_leaf("dims", self.dims)
        tree._set_leaf("prognostic", self.prognostic)
        tree._set_leaf("keys_state_spect", list(self.keys_state_spect))
        tree._set_leaf("keys_state_phys", list(self.keys_state_phys))
        tree._set_leaf("keys_computable", list(self.keys_computable))
        tree._set_child("classes", dict(self.classes))
        return tree._freeze()

    def to_text(self):
        return serialize(self.as_tree())

    def __str__(self):
        return self.to_text()

    @classmethod
    def from_text(cls, text):
        tree = deserialize(text)
        classes = tree.classes.leaves()
        return cls(
            short_name=tree.short_name,
            dims=tree.dims,
            simul_class=classes["Simul"],
            keys_state_spect=tree.keys_state_spect,
            keys_state_phys=tree.keys_state_phys,
            keys_computable=tree.keys_computable,
            prognostic=tree.prognostic,
            classes=classes,
        )


_registry: dict[str, SolverInfo] = {}
_builtins_loaded = False


def _load_builtins():
    global _builtins_loaded
    if not _builtins_loaded:
        _builtins_loaded = True
        importlib.import_module("spectralkit.solvers")


def register_solver(info):
    if info.short_name in _registry:
        raise ConfigurationError(f"solver {info.short_name!r} is already registered")
    info.check_resolvable()
    _registry[info.short_name] = info


def resolve(short_name):
    _load_builtins()
    try:
        return _registry[short_name]
    except KeyError:
        raise UnknownSolverError(
            f"unknown solver {short_name!r}; registered: {', '.join(sorted(_registry))}"
        ) from None


def list_solvers():
    _load_builtins()
    return sorted(_registry)
