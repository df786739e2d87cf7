import numpy as np
import pytest

from projpaths import generate
from projpaths.linalg import FieldTag

FIELDS = [FieldTag.REAL, FieldTag.COMPLEX]


@pytest.fixture
def rng():
    return generate.make_rng(20240611)


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_pairs(rng, count, max_n=12):
    """Yield (P, Q) raw arrays of equal rank, alternating fields."""
    for i in range(count):
        field = FIELDS[i % 2]
        n = int(rng.integers(1, max_n + 1))
        r = int(rng.integers(0, n + 1))
        yield (generate.random_projector(rng, n, r, field),
               generate.random_projector(rng, n, r, field))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
