import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qcorr import DensityMatrix, make_rng

settings.register_profile("qcorr", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qcorr")

LN2 = float(np.log(2.0))


def ket(*bits, d=2):
    v = np.zeros(d ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), d)] = 1.0
    return v


def proj(v, dims=None, labels=None):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), dims, labels)


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def bell():
    return proj(ket(0, 0) + ket(1, 1), (2, 2), ("A", "B"))


@pytest.fixture
def ghz():
    return proj(ket(0, 0, 0) + ket(1, 1, 1), (2, 2, 2), ("A", "B", "C"))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
