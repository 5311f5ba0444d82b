"""Haar-moment ground truth from an explicit commutant basis.

The second moment is ``sum_eta Tr[B_eta^dagger (rho x rho)] Tr[(O x O) B_eta]``
over an orthonormal basis of the two-copy commutant.  Every basis element is
a sum of Pauli products ``A x B``, so each trace factorises into single-copy
traces that are evaluated on dense 2^n x 2^n matrices.
"""
from __future__ import annotations

import numpy as np

from .dla import GeneratorSet, linear_symmetries, matchgate_generators, matchgate_Q_basis, quadratic_symmetry_basis
from .errors import DenseLimitError, DimensionError
from .operators import PauliSumOperator
from .pauli import to_dense
from .variance import VarianceReport, clamp_variance

ORACLE_LIMIT = 5


def _dense(M):
    if isinstance(M, PauliSumOperator):
        if M.n > ORACLE_LIMIT:
            raise DenseLimitError(f"oracle limited to n <= {ORACLE_LIMIT}")
        return M.to_dense()
    return np.asarray(M, dtype=complex)


class _TraceTable:
    """Memoised ``Tr[M sigma]`` for unsigned Pauli strings."""

    def __init__(self, matrix):
        self.matrix = matrix
        self.cache = {}

    def __call__(self, sigma):
        value = self.cache.get(sigma.key)
        if value is None:
            # Tr[M sigma] = sum_ij M_ij sigma_ji
            value = complex(np.sum(self.matrix * to_dense(sigma).T))
            self.cache[sigma.key] = value
        return value


def _basis(n, flavor, generators):
    if flavor in ("standard", "parity"):
        return matchgate_Q_basis(n, flavor), [s for s in linear_symmetries(matchgate_generators(n))]
    if flavor == "general":
        g = generators or matchgate_generators(n)
        if not isinstance(g, GeneratorSet):
            g = GeneratorSet(n, list(g))
        return quadratic_symmetry_basis(g, normalize=True), linear_symmetries(g)
    raise ValueError(f"unknown basis flavor {flavor!r}")


def weingarten_oracle(rho, O, flavor="standard", generators=None) -> VarianceReport:
    r, o = _dense(rho), _dense(O)
    if r.shape != o.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionError(f"incompatible shapes {r.shape} and {o.shape}")
    n = r.shape[0].bit_length() - 1
    if n > ORACLE_LIMIT:
        raise DenseLimitError(f"oracle limited to n <= {ORACLE_LIMIT}")
    d = 1 << n
    basis, linear = _basis(n, flavor, generators)
    t_rho, t_obs = _TraceTable(r), _TraceTable(o)
    # orthonormal linear symmetries are Pauli strings / sqrt(d)
    mean = sum(t_rho(L) * t_obs(L) for L in linear) / d
    second = 0j
    for q in basis:
        second += q.adjoint_pair_trace(t_rho, t_rho) * q.pair_trace(t_obs, t_obs)
    variance = second.real - mean.real**2
    return VarianceReport(float(mean.real), clamp_variance(variance), f"oracle:{flavor}")
