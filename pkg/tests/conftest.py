import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dss_distill import make_density  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
STATES = ROOT / "states"

BELL = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def ref_matrix():
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[0, 3] = m[3, 0] = m[3, 3] = 0.25
    m[1, 1] = 0.5
    return m


def even_form(theta, lam1, phi_index=1):
    """``lam1 |Psi><Psi| + (1 - lam1) |phi><phi|`` with Psi = sin|00> + cos|11>."""
    psi = np.array([np.sin(theta), 0, 0, np.cos(theta)], dtype=np.complex128)
    m = lam1 * np.outer(psi, psi.conj())
    m[phi_index, phi_index] += 1 - lam1
    return m


def odd_form(theta, lam1, phi_index=0):
    """Same as :func:`even_form` with Bob's basis flipped: Psi on |01>, |10>."""
    psi = np.array([0, np.sin(theta), np.cos(theta), 0], dtype=np.complex128)
    m = lam1 * np.outer(psi, psi.conj())
    m[phi_index, phi_index] += 1 - lam1
    return m


@pytest.fixture
def ref():
    return make_density(ref_matrix(), 2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance criterion number -> PASS/FAIL line, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
