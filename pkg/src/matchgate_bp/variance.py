"""Exact loss mean and variance for matchgate circuits at their 2-design limit."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ModuleMembershipError, PreconditionError
from .majorana import parity_operator, pauli_degree
from .modules import (
    as_operator,
    parity_sector_decompose,
    purity_spectrum,
    sector_coherence,
    sector_dim,
)

NEGATIVE_TOL = 1e-12
HERMITIAN_TOL = 1e-10


@dataclass
class VarianceReport:
    mean: float
    variance: float
    method: str
    per_kappa: list = field(default_factory=list)
    stderr: float | None = None

    def to_dict(self):
        return {
            "mean": self.mean,
            "variance": self.variance,
            "method": self.method,
            "per_kappa": list(self.per_kappa),
            "stderr": self.stderr,
        }


def clamp_variance(value):
    if value >= 0:
        return float(value)
    if value >= -NEGATIVE_TOL:
        warnings.warn(f"clamping variance {value:.3e} to zero", RuntimeWarning, stacklevel=2)
        return 0.0
    raise ArithmeticError(f"variance {value:.3e} is negative beyond tolerance")


def _validate(rho, O):
    rho, O = as_operator(rho), as_operator(O)
    if rho.n != O.n:
        raise PreconditionError(f"state acts on {rho.n} qubits but observable on {O.n}")
    for name, op in (("state", rho), ("observable", O)):
        if not op.is_hermitian(HERMITIAN_TOL):
            raise PreconditionError(f"{name} is not Hermitian")
    tr = rho.trace()
    if abs(tr - 1) > 1e-10:
        warnings.warn(f"state trace is {tr.real:.6g}, not 1", RuntimeWarning, stacklevel=3)
    return rho, O


def mean_exact(rho, O) -> float:
    """``(Tr[rho] Tr[O] + Tr[rho P] Tr[O P]) / d``."""
    rho, O = _validate(rho, O)
    parity = parity_operator(rho.n)
    value = rho.trace() * O.trace() + rho.expectation(parity) * O.expectation(parity)
    return float((value / rho.dim).real)


def variance_exact(rho, O) -> VarianceReport:
    """Sum over k = 1..2n-1 of ``(P_k(rho) P_k(O) + C_k(rho) C_k(O)) / C(2n, k)``."""
    rho, O = _validate(rho, O)
    n = rho.n
    srho, sobs = purity_spectrum(rho), purity_spectrum(O)
    per_kappa = []
    total = 0.0
    for kappa in range(1, 2 * n):
        dim = math.comb(2 * n, kappa)
        p_term = srho.purities[kappa] * sobs.purities[kappa] / dim
        c_term = srho.coherences[kappa] * sobs.coherences[kappa] / dim
        per_kappa.append({"kappa": kappa, "purity_term": float(p_term), "coherence_term": float(c_term)})
        total += p_term + c_term
    return VarianceReport(mean_exact(rho, O), clamp_variance(total), "exact", per_kappa)


def _module_leak(O, kappas):
    n = O.n
    leak = sum(abs(c) ** 2 for (x, z), c in O.terms.items() if pauli_degree(n, x, z) not in kappas)
    return math.sqrt(O.dim * leak)


def variance_corollary(rho, O, kappas) -> VarianceReport:
    """Shortcut for an observable confined to one module or to a pair of modules.

    Modules equal to n are rejected.  One module k: ``P_k(rho) P_k(O) / C(2n, k)``.  Two modules k, k':
    the two purity terms plus ``2 C_k(rho) C_k(O) / C(2n, k)`` when k + k' = 2n.
    """
    rho, O = _validate(rho, O)
    n = rho.n
    if isinstance(kappas, int):
        kappas = (kappas,)
    kappas = tuple(sorted(set(kappas)))
    if not 1 <= len(kappas) <= 2:
        raise ValueError("give one module or a pair of modules")
    for k in kappas:
        if not 1 <= k <= 2 * n - 1:
            raise PreconditionError(f"module {k} outside 1..{2 * n - 1}")
    if n in kappas:
        raise PreconditionError("module k = n carries an in-module coherence; use variance_exact")
    leak = _module_leak(O, kappas)
    if leak > 1e-12:
        raise ModuleMembershipError(f"observable has norm {leak:.3e} outside modules {list(kappas)}")
    srho, sobs = purity_spectrum(rho), purity_spectrum(O)
    per_kappa = []
    total = 0.0
    for k in kappas:
        dim = math.comb(2 * n, k)
        p_term = srho.purities[k] * sobs.purities[k] / dim
        per_kappa.append({"kappa": k, "purity_term": float(p_term), "coherence_term": 0.0})
        total += p_term
    if len(kappas) == 2 and sum(kappas) == 2 * n:
        k = kappas[0]
        c_term = 2 * srho.coherences[k] * sobs.coherences[k] / math.comb(2 * n, k)
        per_kappa[0]["coherence_term"] = float(c_term)
        total += c_term
    return VarianceReport(mean_exact(rho, O), clamp_variance(total), "corollary", per_kappa)


def variance_parity_basis(rho, O) -> VarianceReport:
    """Variance resolved over the even/odd parity sectors of the even-degree modules.

    Even k = 2q <= n contribute ``sum_p (P_{k,p}(rho) P_{k,p}(O) + C_{k,p}(rho) C_{k,p}(O)) / dim``
    (no coherence at k = n); odd modules keep their plain purity and coherence terms.
    """
    rho, O = _validate(rho, O)
    n = rho.n
    parity = parity_operator(n)
    norms = {"state": rho.commutator_norm(parity), "observable": O.commutator_norm(parity)}
    if min(norms.values()) > 1e-10:
        raise PreconditionError(
            "neither input commutes with the parity operator: "
            f"||[rho,P]|| = {norms['state']:.3e}, ||[O,P]|| = {norms['observable']:.3e}"
        )
    per_kappa = []
    total = 0.0
    for kappa in range(2, n + 1, 2):
        dim = sector_dim(n, kappa)
        rho_e, rho_o = parity_sector_decompose(rho, kappa)
        obs_e, obs_o = parity_sector_decompose(O, kappa)
        for sector, r_part, o_part in (("e", rho_e, obs_e), ("o", rho_o, obs_o)):
            p_term = r_part.norm2() * o_part.norm2() / dim
            c_term = 0.0
            if kappa != n:
                c_term = sector_coherence(rho, kappa, sector) * sector_coherence(O, kappa, sector) / dim
            per_kappa.append(
                {"kappa": kappa, "sector": sector, "purity_term": float(p_term), "coherence_term": float(c_term)}
            )
            total += p_term + c_term
    srho, sobs = purity_spectrum(rho), purity_spectrum(O)
    for kappa in range(1, 2 * n, 2):
        dim = math.comb(2 * n, kappa)
        p_term = srho.purities[kappa] * sobs.purities[kappa] / dim
        c_term = srho.coherences[kappa] * sobs.coherences[kappa] / dim
        per_kappa.append({"kappa": kappa, "purity_term": float(p_term), "coherence_term": float(c_term)})
        total += p_term + c_term
    return VarianceReport(mean_exact(rho, O), clamp_variance(total), "parity_exact", per_kappa)


# -- closed forms --------------------------------------------------------


def gaussian_variance(n, m):
    """Computational-basis state with observable ``Z_1 ... Z_m``: ``C(n, m) / C(2n, 2m)``."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return Fraction(math.comb(n, m), math.comb(2 * n, 2 * m))


def magic_variance(n, tau):
    if n % 4:
        raise ValueError(f"magic family needs n divisible by 4, got {n}")
    return math.cos(tau / 2) ** 2 / (2 * n - 1)


def nonfermionic_variance(n, j, alpha=2**-0.5, beta=2**-0.5):
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    if abs(alpha**2 + beta**2 - 1) > 1e-12:
        raise ValueError("amplitudes must satisfy alpha^2 + beta^2 = 1")
    ratio = Fraction(math.comb(n - 1, j - 1), math.comb(2 * n, 2 * j - 1))
    return 4 * alpha**2 * beta**2 * float(ratio)


def magic_extent(n, tau):
    if n % 4:
        raise ValueError(f"magic family needs n divisible by 4, got {n}")
    return (1 + math.sin(tau / 2)) ** (n / 4)


_FAMILIES = {
    "gaussian": gaussian_variance,
    "magic": magic_variance,
    "nonfermionic": nonfermionic_variance,
    "extent": magic_extent,
}


def closed_form(family, **params) -> float:
    try:
        fn = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(_FAMILIES)}") from None
    return float(fn(**params))
