"""Framework classes: solver descriptors, state, simulation assembly."""

from .info_solver import ROLES, SolverInfo, list_solvers, register_solver, resolve
from .loading import load_sim_for_plot, load_state_phys_file
from .simul import SimulBase


def create_default_params(solver_id):
    """Frozen parameter tree holding every default of solver ``solver_id``."""
    return resolve(solver_id).component("Simul").create_default_params()


def build_simulation(params):
    """Instantiate the simulation described by ``params``."""
    return resolve(params.solver).component("Simul")(params)


__all__ = [
    "ROLES",
    "SimulBase",
    "SolverInfo",
    "build_simulation",
    "create_default_params",
    "list_solvers",
    "load_sim_for_plot",
    "load_state_phys_file",
    "register_solver",
    "resolve",
]
