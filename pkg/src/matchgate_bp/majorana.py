"""Jordan-Wigner dictionary between Pauli strings and ordered Majorana monomials.

Convention: ``c_{2i-1} = Z...Z X_i`` and ``c_{2i} = Z...Z Y_i`` (1-based),
so ``c_{2i-1} c_{2i} = i Z_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from functools import lru_cache
from math import comb

from .errors import DimensionError
from .pauli import PauliTerm, multiply


@dataclass(frozen=True, order=True)
class MajoranaMonomial:
    n: int
    subset: tuple = ()

    def __post_init__(self):
        subset = tuple(self.subset)
        object.__setattr__(self, "subset", subset)
        if any(b <= a for a, b in zip(subset, subset[1:])):
            raise ValueError(f"indices must be strictly increasing: {subset}")
        if subset and (subset[0] < 1 or subset[-1] > 2 * self.n):
            raise ValueError(f"indices must lie in 1..{2 * self.n}: {subset}")

    @property
    def degree(self):
        return len(self.subset)

    @property
    def index_sum(self):
        """Sum of the Majorana indices (the pi(s) of the sign factors)."""
        return sum(self.subset)

    def complement(self):
        present = set(self.subset)
        return MajoranaMonomial(self.n, tuple(m for m in range(1, 2 * self.n + 1) if m not in present))

    @classmethod
    def parse(cls, n, text):
        """Read ``"{1,4,5}"``."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"monomial must be written in braces: {text!r}")
        inner = body[1:-1].strip()
        subset = tuple(int(tok) for tok in inner.split(",")) if inner else ()
        return cls(n, subset)

    def __str__(self):
        return "{" + ",".join(str(m) for m in self.subset) + "}"


@dataclass(frozen=True)
class ScaledMonomial:
    monomial: MajoranaMonomial
    phase: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)


def monomials(n, kappa):
    """All degree-kappa monomials in lexicographic order (the vector index order)."""
    return [MajoranaMonomial(n, s) for s in combinations(range(1, 2 * n + 1), kappa)]


def module_dim(n, kappa):
    return comb(2 * n, kappa)


def majorana(n, mu) -> PauliTerm:
    if not 1 <= mu <= 2 * n:
        raise DimensionError(f"Majorana index {mu} outside 1..{2 * n}")
    site = (mu - 1) // 2
    z = (1 << site) - 1
    x = 1 << site
    if mu % 2 == 0:
        z |= 1 << site
    return PauliTerm(n, x, z)


def monomial_to_pauli(m: MajoranaMonomial) -> PauliTerm:
    out = PauliTerm.identity(m.n)
    for mu in m.subset:
        out = multiply(out, majorana(m.n, mu))
    return out


# (local Pauli as (x, z) bits, tail parity) -> (has c_{2i-1}, has c_{2i})
_LOCAL_DECODE = {
    ((0, 0), 0): (0, 0),
    ((1, 0), 0): (1, 0),
    ((1, 1), 0): (0, 1),
    ((0, 1), 0): (1, 1),
    ((0, 1), 1): (0, 0),
    ((1, 1), 1): (1, 0),
    ((1, 0), 1): (0, 1),
    ((0, 0), 1): (1, 1),
}


def pauli_to_monomial(p: PauliTerm) -> ScaledMonomial:
    """Unique ``(m, phase)`` with ``p == i**phase * monomial_to_pauli(m)``.

    Sites are decoded right to left: each chosen Majorana on a later site
    leaves a ``Z`` on every earlier site.
    """
    chosen = []
    tail = 0
    for site in reversed(range(p.n)):
        local = ((p.x >> site) & 1, (p.z >> site) & 1)
        a, b = _LOCAL_DECODE[(local, tail)]
        if b:
            chosen.append(2 * site + 2)
        if a:
            chosen.append(2 * site + 1)
        tail ^= a ^ b
    m = MajoranaMonomial(p.n, tuple(sorted(chosen)))
    image = monomial_to_pauli(m)
    assert image.key == p.key
    return ScaledMonomial(m, p.phase - image.phase)


def hermitian_basis_element(m: MajoranaMonomial):
    """``i^{floor(k/2)} c^s / sqrt(d)`` as a one-term operator sum."""
    from .operators import PauliSumOperator

    image = monomial_to_pauli(m)
    phase = (image.phase + m.degree // 2) % 4
    return PauliSumOperator.from_pauli(PauliTerm(m.n, image.x, image.z, phase), scale=2.0 ** (-m.n / 2))


def parity_operator(n) -> PauliTerm:
    full = (1 << n) - 1
    return PauliTerm(n, 0, full)


@lru_cache(maxsize=1 << 20)
def pauli_degree(n, x, z) -> int:
    """Majorana degree of the unsigned string with masks (x, z); no phase work."""
    degree = 0
    tail = 0
    for site in reversed(range(n)):
        a, b = _LOCAL_DECODE[(((x >> site) & 1, (z >> site) & 1), tail)]
        degree += a + b
        tail ^= a ^ b
    return degree
