import numpy as np
import pytest

import spectralkit as sk
from spectralkit import fft_backend


def small_params(solver, n=16, **leaves):
    """Default params of ``solver`` on a small grid, with no file output.

    ``leaves`` are dot paths given with ``__`` separators, e.g.
    ``time_stepping__n_iters=3``.
    """
    params = sk.create_default_params(solver).copy()
    info = sk.resolve(solver)
    for name in "xyz"[: info.dims]:
        params.oper[f"n{name}"] = n
    params.output.save = False
    params.output.period_print = 0
    for key, value in leaves.items():
        params.set(key.replace("__", "."), value)
    return params


@pytest.fixture
def make_params():
    return small_params


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _single_worker():
    fft_backend.set_num_workers(1)
    yield
    fft_backend.set_num_workers(1)


_criteria = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    entry["seen"] = True
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {entry['title']}")
