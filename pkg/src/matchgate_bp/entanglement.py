"""One-body contraction matrices and the linear entropy of fermionic states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import dense_limit
from .errors import DimensionError, PreconditionError
from .majorana import majorana, parity_operator
from .operators import PauliSumOperator
from .pauli import multiply, to_dense

POSITIVITY_TOL = 1e-10


def _as_state_operator(rho):
    """Accept a ket, a density matrix or a PauliSumOperator; check positivity when dense."""
    if isinstance(rho, PauliSumOperator):
        if rho.n <= dense_limit():
            _check_positive(rho.to_dense())
        return rho
    arr = np.asarray(rho, dtype=complex)
    if arr.ndim == 1:
        return PauliSumOperator.from_state(arr / np.linalg.norm(arr))
    _check_positive(arr)
    return PauliSumOperator.from_dense(arr)


def _check_positive(matrix):
    lowest = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)[0]
    if lowest < -POSITIVITY_TOL:
        raise PreconditionError(f"density operator has eigenvalue {lowest:.3e} < 0")


def omega(n):
    """Block-diagonal unitary sending (c_{2i-1}, c_{2i}) pairs to (d_i, d_i^dagger) up to sqrt 2."""
    block = np.array([[1, 1j], [1, -1j]]) / np.sqrt(2)
    return np.kron(np.eye(n), block)


def interleave_permutation(n):
    """``Pi`` with ``Pi @ (d_1, ..., d_n, d_1^dag, ...) = (d_1, d_1^dag, d_2, ...)``."""
    perm = np.zeros((2 * n, 2 * n))
    for i in range(n):
        perm[2 * i, i] = 1
        perm[2 * i + 1, n + i] = 1
    return perm


@dataclass
class ContractionMatrices:
    C: np.ndarray
    D: np.ndarray

    @property
    def n(self):
        return self.C.shape[0] // 2


def majorana_matrix(rho) -> np.ndarray:
    """``C = i(<c c^T> - 1)`` from Pauli expectation values."""
    op = _as_state_operator(rho)
    n = op.n
    cs = [majorana(n, mu) for mu in range(1, 2 * n + 1)]
    C = np.zeros((2 * n, 2 * n), dtype=complex)
    for a in range(2 * n):
        for b in range(2 * n):
            if a != b:
                C[a, b] = 1j * op.expectation(multiply(cs[a], cs[b]))
    # diagonal: <c_mu^2> - 1 = Tr[rho] - 1
    np.fill_diagonal(C, 1j * (op.trace() - 1))
    return C


def dirac_from_majorana(C):
    n = C.shape[0] // 2
    A = interleave_permutation(n).T @ omega(n)
    return (np.eye(2 * n) + 1j * A @ C @ A.conj().T) / 2


def contraction_matrices(rho) -> ContractionMatrices:
    C = majorana_matrix(rho)
    return ContractionMatrices(C, dirac_from_majorana(C))


def dirac_matrix_direct(rho) -> np.ndarray:
    """``D = 1 - <gamma gamma^dagger>`` from dense Dirac operators (cross-check path)."""
    op = _as_state_operator(rho)
    n = op.n
    dense = op.to_dense()
    ds = [(to_dense(majorana(n, 2 * i - 1)) + 1j * to_dense(majorana(n, 2 * i))) / 2 for i in range(1, n + 1)]
    gamma = ds + [m.conj().T for m in ds]
    G = np.array([[np.trace(dense @ a @ b.conj().T) for b in gamma] for a in gamma])
    return np.eye(2 * n) - G


def linear_entropy(D) -> float:
    """``S_2 = 2 Tr[D (1 - D)]``."""
    D = np.asarray(D)
    n = D.shape[0] // 2
    if D.shape != (2 * n, 2 * n):
        raise DimensionError(f"expected a 2n x 2n matrix, got {D.shape}")
    value = 2 * np.trace(D @ (np.eye(2 * n) - D))
    s2 = float(value.real)
    if s2 < -1e-10 or s2 > n + 1e-10:
        raise PreconditionError(f"linear entropy {s2:.6g} outside [0, {n}]; input is not a valid state")
    return s2


def is_fermionic(rho, tol=1e-10):
    op = _as_state_operator(rho)
    return op.commutator_norm(parity_operator(op.n)) < tol


def g_purity_via_entropy(rho) -> float:
    """``(n - S_2) / 2^n``; equals the degree-2 purity for parity-commuting states."""
    op = _as_state_operator(rho)
    s2 = linear_entropy(contraction_matrices(op).D)
    return (op.n - s2) / op.dim


def entanglement_report(rho) -> dict:
    op = _as_state_operator(rho)
    mats = contraction_matrices(op)
    s2 = linear_entropy(mats.D)
    eig = np.linalg.eigvalsh((mats.D + mats.D.conj().T) / 2)
    return {
        "S2": s2,
        "g_purity": (op.n - s2) / op.dim,
        "D_eigenvalues": [float(v) for v in eig],
        "fermionic": bool(is_fermionic(op)),
    }
