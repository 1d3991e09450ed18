"""One-line progress reports.

Line format (floats with the shortest round-trip decimal)::

    it=<int> t=<float> dt=<float> E=<float>[ Z=<float>] walltime=<float>

and :data:`STDOUT_LINE_RE` parses it back.
"""

from __future__ import annotations

import re

_FLOAT = r"[-+]?(?:inf|nan|\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)"
STDOUT_LINE_RE = re.compile(
    rf"^it=(?P<it>\d+) t=(?P<t>{_FLOAT}) dt=(?P<dt>{_FLOAT}) "
    rf"E=(?P<E>{_FLOAT})(?: Z=(?P<Z>{_FLOAT}))? walltime=(?P<walltime>{_FLOAT})$"
)


def format_stdout_line(it, t, dt, E, Z, walltime):
    z_part = "" if Z is None else f" Z={float(Z)!r}"
    return (
        f"it={int(it)} t={float(t)!r} dt={float(dt)!r} E={float(E)!r}"
        f"{z_part} walltime={float(walltime)!r}"
    )


def parse_stdout_line(line):
    m = STDOUT_LINE_RE.match(line.strip())
    if m is None:
        raise ValueError(f"not a progress line: {line!r}")
    out = {"it": int(m["it"])}
    for key in ("t", "dt", "E", "walltime"):
        out[key] = float(m[key])
    out["Z"] = None if m["Z"] is None else float(m["Z"])
    return out
