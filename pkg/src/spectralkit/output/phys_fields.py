"""Binary snapshots of the physical state (``.fld`` files).

Layout: a UTF-8 header of ``key = <JSON value>`` lines terminated by an empty
line, then the payload: every variable in ``names`` order, each a C-ordered
little-endian float64 array of ``shape``. Header keys::

    magic          "spectralkit-fld"
    version        1
    time, it       simulated time and iteration
    solver         solver short name
    shape          physical grid extents
    names          variable names
    dtype          "<f8"
    params_digest  SHA-256 of the solver and grid parameters
    payload_bytes  byte length of the payload
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ..errors import SnapshotFormatError
from ..params import ParamTree, serialize

MAGIC = "spectralkit-fld"
VERSION = 1
_DTYPE = np.dtype("<f8")


def params_digest(params):
    """Digest of the parameters a snapshot must agree with to be reloaded."""
    subset = ParamTree("digest")
    subset._set_leaf("solver", params.solver)
    oper = subset._set_child("oper")
    for key, value in params.oper.leaves().items():
        oper._set_leaf(key, value)
    return hashlib.sha256(serialize(subset).encode()).hexdigest()


def snapshot_name(t):
    return f"state_phys_t{t:011.6f}.fld"


def write_snapshot(path, fields, time, it, solver, digest):
    """Write ``fields`` (dict name -> array, all the same shape)."""
    names = list(fields)
    arrays = [np.ascontiguousarray(fields[n], dtype=_DTYPE) for n in names]
    shape = list(arrays[0].shape)
    payload = b"".join(a.tobytes() for a in arrays)
    header = {
        "magic": MAGIC,
        "version": VERSION,
        "time": float(time),
        "it": int(it),
        "solver": solver,
        "shape": shape,
        "names": names,
        "dtype": _DTYPE.str,
        "params_digest": digest,
        "payload_bytes": len(payload),
    }
    text = "".join(f"{k} = {json.dumps(v)}\n" for k, v in header.items()) + "\n"
    path = Path(path)
    tmp = path.with_name(path.name + ".part")
    with open(tmp, "wb") as f:
        f.write(text.encode())
        f.write(payload)
    tmp.replace(path)
    return path


def read_header(data, path="snapshot"):
    end = data.find(b"\n\n")
    if end < 0:
        raise SnapshotFormatError(f"{path}: header is not terminated by an empty line")
    header = {}
    for lineno, line in enumerate(data[:end].decode("utf-8", "replace").split("\n"), 1):
        key, sep, value = line.partition(" = ")
        if not sep:
            raise SnapshotFormatError(f"{path}: malformed header line {lineno}: {line!r}")
        try:
            header[key] = json.loads(value)
        except json.JSONDecodeError:
            raise SnapshotFormatError(
                f"{path}: bad value on header line {lineno}: {value!r}"
            ) from None
    if header.get("magic") != MAGIC:
        raise SnapshotFormatError(f"{path}: not a spectralkit snapshot")
    if header.get("version") != VERSION:
        raise SnapshotFormatError(f"{path}: unsupported version {header.get('version')}")
    missing = {"time", "it", "shape", "names", "dtype", "params_digest", "payload_bytes"}
    missing -= set(header)
    if missing:
        raise SnapshotFormatError(f"{path}: header lacks {sorted(missing)}")
    return header, end + 2


def load_snapshot(path):
    """Return ``(header, fields)`` with ``fields`` a dict name -> array."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise SnapshotFormatError(f"no snapshot at {path}") from None
    header, start = read_header(data, path)
    if header["dtype"] != _DTYPE.str:
        raise SnapshotFormatError(f"{path}: unsupported dtype {header['dtype']}")
    shape = tuple(header["shape"])
    names = header["names"]
    expected = int(np.prod(shape)) * len(names) * _DTYPE.itemsize
    payload = data[start:]
    if header["payload_bytes"] != expected or len(payload) != expected:
        raise SnapshotFormatError(
            f"{path}: payload length {len(payload)} bytes, expected {expected}"
        )
    arrays = np.frombuffer(payload, dtype=_DTYPE).reshape((len(names),) + shape)
    fields = {name: arrays[i].copy() for i, name in enumerate(names)}
    return header, fields


def list_snapshots(directory):
    """``[(time, path), ...]`` sorted by time, read from the headers."""
    out = []
    for path in sorted(Path(directory, "snapshots").glob("state_phys_t*.fld")):
        with open(path, "rb") as f:
            head = f.read(4096)
        header, _ = read_header(head, path)
        out.append((float(header["time"]), path))
    out.sort(key=lambda item: item[0])
    return out


def save_snapshot(sim):
    directory = sim.output.path / "snapshots"
    directory.mkdir(exist_ok=True)
    state = sim.state
    fields = dict(zip(state.keys_state_phys, state.state_phys))
    t = sim.time_stepping.t
    return write_snapshot(
        directory / snapshot_name(t),
        fields,
        t,
        sim.time_stepping.it,
        sim.info_solver.short_name,
        params_digest(sim.params),
    )


class PhysFields:
    def __init__(self, output):
        self.output = output

    def save(self):
        return save_snapshot(self.output.sim)

    def load(self, time=None):
        snaps = list_snapshots(self.output.path)
        if not snaps:
            raise SnapshotFormatError(f"no snapshot in {self.output.path}")
        if time is None:
            path = snaps[-1][1]
        else:
            path = min(snaps, key=lambda s: abs(s[0] - time))[1]
        return load_snapshot(path)
