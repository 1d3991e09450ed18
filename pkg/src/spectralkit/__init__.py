"""Modular pseudo-spectral solvers for periodic flows.

Typical use::

    from spectralkit import create_default_params, build_simulation

    params = create_default_params("ns2d")
    params.oper.nx = params.oper.ny = 64
    sim = build_simulation(params)
    sim.time_stepping.start()
"""

from .base import (
    SimulBase,
    SolverInfo,
    build_simulation,
    create_default_params,
    list_solvers,
    load_sim_for_plot,
    load_state_phys_file,
    register_solver,
    resolve,
)
from .params import ParamTree, deserialize, serialize, set_value

__version__ = "0.1.0"

__all__ = [
    "ParamTree",
    "SimulBase",
    "SolverInfo",
    "build_simulation",
    "create_default_params",
    "deserialize",
    "list_solvers",
    "load_sim_for_plot",
    "load_state_phys_file",
    "register_solver",
    "resolve",
    "serialize",
    "set_value",
]
