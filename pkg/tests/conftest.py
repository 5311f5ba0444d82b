import functools

import numpy as np
import pytest

MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_label(label, coef=1.0):
    """Reference Kronecker product built straight from a label string."""
    return coef * functools.reduce(np.kron, [MATS[c] for c in label])


def jw_majoranas(n):
    """Reference Majorana matrices: Z..Z X I..I and Z..Z Y I..I."""
    out = []
    for i in range(n):
        for op in "XY":
            out.append(dense_label("Z" * i + op + "I" * (n - i - 1)))
    return out


def random_state(rng, d, rank=None):
    rank = rank or d
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    r = a @ a.conj().T
    return r / np.trace(r)


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def parity_dense(n):
    return dense_label("Z" * n)


def fermionic(rho, n):
    P = parity_dense(n)
    return (rho + P @ rho @ P) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Acceptance outcomes, filled in by test_acceptance.py and printed at the end of the run.
ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        for ok, detail in ACCEPTANCE[criterion]:
            terminalreporter.write_line(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
