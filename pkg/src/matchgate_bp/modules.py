"""Projections onto the Majorana-degree modules and their parity sectors.

Every Pauli string is, up to phase, exactly one Majorana monomial, so the
projection of a Pauli-sum operator onto a module is a filter on its terms.
Purities and coherences therefore cost one pass over the input terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .majorana import (
    MajoranaMonomial,
    ScaledMonomial,
    module_dim,
    monomial_to_pauli,
    monomials,
    parity_operator,
    pauli_degree,
    pauli_to_monomial,
)
from .operators import PauliSumOperator
from .pauli import PauliTerm


def as_operator(M):
    if isinstance(M, PauliSumOperator):
        return M
    return PauliSumOperator.from_dense(np.asarray(M))


def _check_kappa(n, kappa, upper=None):
    upper = 2 * n if upper is None else upper
    if not 0 <= kappa <= upper:
        raise DimensionError(f"kappa={kappa} outside 0..{upper} for n={n}")


@dataclass
class ModuleDecomposition:
    """Coefficients ``Tr[B_m M]`` over the Hermitian orthonormal monomial basis.

    ``coefficients[k]`` maps each degree-k monomial with nonzero overlap to its
    coefficient; absent monomials have coefficient zero.
    """

    n: int
    coefficients: list = field(default_factory=list)

    def vector(self, kappa):
        """Dense coefficient vector of length C(2n, kappa), lexicographic monomial order."""
        table = self.coefficients[kappa]
        return np.array([table.get(m, 0j) for m in monomials(self.n, kappa)], dtype=complex)

    def component(self, kappa):
        d_half = 2.0 ** (self.n / 2)
        terms = {}
        for m, coef in self.coefficients[kappa].items():
            image = monomial_to_pauli(m)
            phase = (image.phase + m.degree // 2) % 4
            basis = PauliTerm(self.n, image.x, image.z, phase)
            terms[basis.key] = terms.get(basis.key, 0) + coef * basis.coefficient / d_half
        return PauliSumOperator(self.n, terms)

    def reconstruct(self):
        out = PauliSumOperator.zero(self.n)
        for kappa in range(2 * self.n + 1):
            out = out + self.component(kappa)
        return out


@dataclass
class PuritySpectrum:
    purities: np.ndarray
    coherences: np.ndarray
    residual_imag: float = 0.0

    def to_dict(self):
        return {
            "purities": self.purities.tolist(),
            "coherences": self.coherences.tolist(),
            "residual_imag": self.residual_imag,
        }


def decompose(M) -> ModuleDecomposition:
    M = as_operator(M)
    n = M.n
    sqrt_d = 2.0 ** (n / 2)
    coefficients = [dict() for _ in range(2 * n + 1)]
    for (x, z), a in M.terms.items():
        scaled = pauli_to_monomial(PauliTerm(n, x, z))
        # sigma = i^phase c^s and B_m = i^{floor(k/2)} c^s / sqrt(d)
        m = scaled.monomial
        rel = (m.degree // 2 - scaled.phase) % 4
        coefficients[m.degree][m] = a * sqrt_d * (1j**rel)
    return ModuleDecomposition(n, coefficients)


def project(M, kappa) -> PauliSumOperator:
    """``M_kappa``, the orthogonal projection onto the degree-kappa module."""
    M = as_operator(M)
    _check_kappa(M.n, kappa)
    n = M.n
    return PauliSumOperator(n, {k: v for k, v in M.terms.items() if pauli_degree(n, *k) == kappa}, prune=False)


def _degree_weights(M):
    n = M.n
    weights = np.zeros(2 * n + 1)
    for (x, z), a in M.terms.items():
        weights[pauli_degree(n, x, z)] += abs(a) ** 2
    return weights * M.dim


def kappa_purity(M, kappa) -> float:
    """``Tr[M_k^dagger M_k]``."""
    M = as_operator(M)
    _check_kappa(M.n, kappa)
    return float(_degree_weights(M)[kappa])


def _raw_coherence(M, kappa):
    n = M.n
    parity = parity_operator(n)
    total = 0j
    for (x, z), a in M.terms.items():
        if pauli_degree(n, x, z) != kappa:
            continue
        t = parity * PauliTerm(n, x, z)
        b = M.terms.get(t.key)
        if b is not None:
            # Tr[P sigma tau] = d * phase(P sigma) when tau is the unsigned P sigma
            total += np.conj(a) * b * t.coefficient
    return (1j ** (kappa % 2)) * M.dim * total


def kappa_coherence(M, kappa, return_residual=False):
    """``i^{k mod 2} Tr[P M_k^dagger M_{2n-k}]``, real part.

    With ``return_residual`` the discarded imaginary part is returned too.
    """
    M = as_operator(M)
    _check_kappa(M.n, kappa)
    value = _raw_coherence(M, kappa)
    if return_residual:
        return float(value.real), float(value.imag)
    return float(value.real)


def purity_spectrum(M) -> PuritySpectrum:
    M = as_operator(M)
    n = M.n
    purities = _degree_weights(M)
    coherences = np.zeros(2 * n + 1)
    residual = 0.0
    for kappa in range(2 * n + 1):
        value = _raw_coherence(M, kappa)
        coherences[kappa] = value.real
        residual = max(residual, abs(value.imag))
    return PuritySpectrum(purities, coherences, residual)


# -- parity sectors ------------------------------------------------------


def sector_dim(n, kappa):
    """Dimension of B_k^e (equal to that of B_k^o) for even k <= n."""
    return module_dim(n, kappa) // (2 if kappa == n else 1)


def _check_sector_kappa(n, kappa):
    if kappa % 2:
        raise DimensionError(f"parity sectors are defined for even kappa only, got {kappa}")
    _check_kappa(n, kappa, upper=n)


def _paired_component(M, kappa):
    n = M.n
    if kappa == n:
        return project(M, kappa)
    return project(M, kappa) + project(M, 2 * n - kappa)


def parity_sector_decompose(M, kappa):
    """``(M_{k,e}, M_{k,o})``: even/odd parts of ``M_k + M_{2n-k}`` under left multiplication by P."""
    M = as_operator(M)
    _check_sector_kappa(M.n, kappa)
    paired = _paired_component(M, kappa)
    flipped = paired.left_multiply(parity_operator(M.n))
    return (paired + flipped) * 0.5, (paired - flipped) * 0.5


def _sector(M, kappa, parity):
    even, odd = parity_sector_decompose(M, kappa)
    if parity in ("e", "+", 0):
        return even, odd
    if parity in ("o", "-", 1):
        return odd, even
    raise ValueError(f"parity must be 'e' or 'o', got {parity!r}")


def sector_purity(M, kappa, parity) -> float:
    own, _ = _sector(as_operator(M), kappa, parity)
    return own.norm2()


def apply_T(M, kappa) -> PauliSumOperator:
    """``M_k - M_{2n-k}``; identically zero at k = n."""
    M = as_operator(M)
    _check_kappa(M.n, kappa, upper=M.n)
    if kappa == M.n:
        return PauliSumOperator.zero(M.n)
    return project(M, kappa) - project(M, 2 * M.n - kappa)


def sector_coherence(M, kappa, parity) -> float:
    """``Tr[T_k(M_{k,p})^dagger M_{k,pbar}]``, real part."""
    M = as_operator(M)
    own, other = _sector(M, kappa, parity)
    return float(apply_T(own, kappa).inner(other).real)


def parity_basis_element(m: MajoranaMonomial, parity):
    """``i^{floor(k/2)} (c^s +/- P c^s) / sqrt(2d)`` for an even-degree monomial."""
    if m.degree % 2:
        raise DimensionError("parity basis elements need an even-degree monomial")
    n = m.n
    image = monomial_to_pauli(m)
    base = PauliTerm(n, image.x, image.z, image.phase + m.degree // 2)
    flipped = parity_operator(n) * base
    sign = 1.0 if parity in ("e", "+", 0) else -1.0
    scale = 1.0 / np.sqrt(2.0 * (1 << n))
    return PauliSumOperator.from_pauli(base, scale) + PauliSumOperator.from_pauli(flipped, sign * scale)


def scaled_monomial_of(term: PauliTerm) -> ScaledMonomial:
    return pauli_to_monomial(term)
