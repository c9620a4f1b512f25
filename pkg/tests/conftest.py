import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

SMALL_PRIMES = [p for p in range(5, 258) if all(p % q for q in range(2, int(p**0.5) + 1))]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_instance(rng, primes=SMALL_PRIMES):
    from ap3lab.zpz import make_residue_set

    p = int(rng.choice(primes))
    density = rng.random()
    members = np.flatnonzero(rng.random(p) < density)
    return make_residue_set(p, members)


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(number, (title, "PASS"))[1]
    _CRITERIA[number] = (title, "PASS" if ok and prev == "PASS" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}")
