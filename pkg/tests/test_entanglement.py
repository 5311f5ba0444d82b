import math

import numpy as np
import pytest

from conftest import fermionic, jw_majoranas, random_state
from matchgate_bp.circuit import CircuitSpec, apply_circuit
from matchgate_bp.entanglement import (
    contraction_matrices,
    dirac_matrix_direct,
    entanglement_report,
    g_purity_via_entropy,
    interleave_permutation,
    linear_entropy,
    omega,
)
from matchgate_bp.errors import PreconditionError
from matchgate_bp.modules import kappa_purity
from matchgate_bp.operators import PauliSumOperator
from matchgate_bp.states import computational_zero, magic, maximally_mixed


def test_zero_state():
    for n in (1, 2, 3, 4):
        mats = contraction_matrices(computational_zero(n))
        assert np.allclose(mats.D, np.diag([0.0] * n + [1.0] * n))
        assert linear_entropy(mats.D) == pytest.approx(0, abs=1e-12)
        assert g_purity_via_entropy(computational_zero(n)) == pytest.approx(n / 2**n)


def test_maximally_mixed():
    mats = contraction_matrices(maximally_mixed(3))
    assert np.allclose(mats.D, np.eye(6) / 2)
    assert linear_entropy(mats.D) == pytest.approx(3)
    assert g_purity_via_entropy(maximally_mixed(3)) == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("tau", [0.0, 0.4, math.pi / 2, 2.0, math.pi])
def test_magic_state(tau):
    psi = magic(4, tau)
    mats = contraction_matrices(psi)
    eig = np.sort(np.linalg.eigvalsh(mats.D))
    f_minus, f_plus = (1 - math.cos(tau / 2)) / 2, (1 + math.cos(tau / 2)) / 2
    assert np.allclose(eig, [f_minus] * 4 + [f_plus] * 4, atol=1e-10)
    assert linear_entropy(mats.D) == pytest.approx(4 * math.sin(tau / 2) ** 2, abs=1e-10)
    assert g_purity_via_entropy(psi) == pytest.approx(4 * math.cos(tau / 2) ** 2 / 16, abs=1e-10)


def test_magic_state_eight_qubits():
    tau = 1.3
    assert linear_entropy(contraction_matrices(magic(8, tau)).D) == pytest.approx(8 * math.sin(tau / 2) ** 2, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matrix_invariants(rng, n):
    rho = random_state(rng, 1 << n)
    mats = contraction_matrices(rho)
    assert np.allclose(mats.C.imag, 0, atol=1e-10)
    assert np.allclose(mats.C, -mats.C.T, atol=1e-10)
    assert np.allclose(mats.D, mats.D.conj().T, atol=1e-10)
    eig = np.linalg.eigvalsh(mats.D)
    assert eig.min() > -1e-10 and eig.max() < 1 + 1e-10
    assert np.trace(mats.D).real == pytest.approx(n)
    A = omega(n).conj().T @ interleave_permutation(n)
    assert np.allclose(mats.C, 1j * A @ (np.eye(2 * n) - 2 * mats.D) @ A.conj().T, atol=1e-10)
    assert np.allclose(mats.D, dirac_matrix_direct(rho), atol=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_majorana_matrix_reference(rng, n):
    rho = random_state(rng, 1 << n)
    cs = jw_majoranas(n)
    ref = np.array([[1j * (np.trace(rho @ a @ b) - (i == j)) for j, b in enumerate(cs)] for i, a in enumerate(cs)])
    assert np.allclose(contraction_matrices(rho).C, ref)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bridge(rng, n):
    for _ in range(5):
        rho = fermionic(random_state(rng, 1 << n), n)
        assert g_purity_via_entropy(rho) == pytest.approx(kappa_purity(PauliSumOperator.from_dense(rho), 2), abs=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_free_fermion_invariance(rng, n):
    rho = fermionic(random_state(rng, 1 << n), n)
    spec = CircuitSpec(n, seed=4)
    angles = rng.uniform(0, 2 * np.pi, spec.parameter_count)
    U = np.stack([apply_circuit(col, spec, angles) for col in np.eye(1 << n, dtype=complex)], axis=1)
    before = linear_entropy(contraction_matrices(rho).D)
    after = linear_entropy(contraction_matrices(U @ rho @ U.conj().T).D)
    assert after == pytest.approx(before, abs=1e-9)


def test_invalid_inputs():
    with pytest.raises(PreconditionError):
        contraction_matrices(np.diag([1.5, -0.5]))
    with pytest.raises(PreconditionError):
        linear_entropy(np.diag([2.0, -1.0]))


def test_report():
    rep = entanglement_report(computational_zero(2))
    assert set(rep) == {"S2", "g_purity", "D_eigenvalues", "fermionic"}
    assert rep["fermionic"] is True
    assert len(rep["D_eigenvalues"]) == 4
