import os
import sys
from collections import defaultdict

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}
_OUTCOMES = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = m.args[0]


def pytest_runtest_logreport(report):
    k = _CRITERIA.get(report.nodeid)
    if k is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _OUTCOMES[k].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_OUTCOMES):
        res = _OUTCOMES[k]
        status = "PASS" if all(res) else "FAIL"
        terminalreporter.write_line(f"CRITERION {k}: {status} ({sum(res)}/{len(res)} checks)")


class FieldCache:
    """Pseudospectrum fields shared between tests (they dominate the runtime)."""

    def __init__(self):
        self._store = {}

    def get(self, p, N, kappa=0.0, include_K=True, window=(-0.8, 0.8, -2.0, 2.0), res=(33, 9)):
        from ostrovsky import assemble_operator, pseudospectrum_field

        key = (p, N, kappa, include_K, tuple(window), tuple(res))
        if key not in self._store:
            M = assemble_operator(f"peaked:{p}", N, kappa, include_K=include_K)
            self._store[key] = pseudospectrum_field(M, window[:2], window[2:], res)
        return self._store[key]


@pytest.fixture(scope="session")
def fields():
    return FieldCache()
