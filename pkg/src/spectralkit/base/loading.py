"""Reload simulations from their directories."""

from __future__ import annotations

from pathlib import Path

from ..errors import RecordsError
from ..params import load as load_params
from ..output.phys_fields import list_snapshots
from .info_solver import resolve


def _load_dir_params(path):
    path = Path(path)
    if not path.is_dir():
        raise RecordsError(f"no simulation directory at {path}")
    params_path = path / "params.txt"
    if not params_path.exists():
        raise RecordsError(f"missing records: {path} holds no params.txt")
    return load_params(params_path).copy()


def _simul_class(params):
    return resolve(params.solver).component("Simul")


def load_sim_for_plot(path=None):
    """Read-only simulation attached to an existing directory.

    Its outputs can be loaded (``sim.output.spatial_means.load()``) and the
    state holds the last snapshot when there is one; time stepping is refused.
    """
    path = Path.cwd() if path is None else Path(path)
    params = _load_dir_params(path)
    snaps = list_snapshots(path)
    if snaps:
        params.init_fields.type = "from_file"
        params.init_fields.from_file.path = str(snaps[-1][1])
    else:
        params.init_fields.type = "constant"
        params.init_fields.constant.value = 0.0
    params.preprocess.enable = False
    return _simul_class(params)(params, output_dir=path, read_only=True)


def find_snapshot(path, time=None):
    """Snapshot closest to ``time`` (last one when ``time`` is None).

    The match must lie within ``1e-9 * |time|`` of the request.
    """
    snaps = list_snapshots(path)
    if not snaps:
        raise RecordsError(f"missing records: no snapshot in {path}")
    if time is None:
        return snaps[-1][1]
    t_snap, snap = min(snaps, key=lambda s: abs(s[0] - time))
    if abs(t_snap - time) > 1e-9 * abs(time) + 1e-15:
        raise RecordsError(
            f"no snapshot near t={time!r} in {path}; closest is t={t_snap!r}"
        )
    return snap


def load_state_phys_file(path, time=None, **modifications):
    """Restartable simulation continuing from a snapshot of ``path``.

    Outputs are appended to the same directory. Keyword arguments are dot
    paths of parameters to modify before building, e.g.
    ``load_state_phys_file(path, **{"time_stepping.n_iters": 5})``.
    """
    path = Path(path)
    params = _load_dir_params(path)
    snap = find_snapshot(path, time)
    params.init_fields.type = "from_file"
    params.init_fields.from_file.path = str(snap)
    params.preprocess.enable = False
    for key, value in modifications.items():
        params.set(key, value)
    return _simul_class(params)(params, output_dir=path)
