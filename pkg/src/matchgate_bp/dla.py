"""Lie closures, symmetries and commutant bases for Pauli-string generator sets."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import SCAN_LIMIT
from .errors import BudgetError, DimensionError
from .majorana import monomial_to_pauli, monomials, parity_operator
from .pauli import PauliTerm, commutes, half_commutator, multiply, to_dense


@dataclass
class GeneratorSet:
    n: int
    generators: list = field(default_factory=list)

    def __post_init__(self):
        cleaned = []
        for g in self.generators:
            if isinstance(g, str):
                g = PauliTerm.from_label(g)
            if g.n != self.n:
                raise DimensionError(f"generator {g} acts on {g.n} qubits, expected {self.n}")
            cleaned.append(g.unsigned())
        self.generators = cleaned

    @classmethod
    def from_labels(cls, labels):
        labels = list(labels)
        if not labels:
            raise ValueError("need at least one label to infer n")
        return cls(len(PauliTerm.from_label(labels[0]).string()), labels)

    @classmethod
    def parse(cls, text):
        """One Pauli string per line; blank lines and ``#`` comments are skipped."""
        terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                term = PauliTerm.from_label(line)
            except Exception as exc:
                raise ValueError(f"line {lineno}: cannot parse {line!r}: {exc}") from exc
            if terms and term.n != terms[0].n:
                raise ValueError(f"line {lineno}: {line!r} has {term.n} qubits, expected {terms[0].n}")
            terms.append(term)
        if not terms:
            raise ValueError("generator file contains no Pauli strings")
        return cls(terms[0].n, terms)

    @classmethod
    def load(cls, path):
        return cls.parse(Path(path).read_text())


def matchgate_generators(n) -> GeneratorSet:
    """``{Z_i} + {X_i X_{i+1}}``."""
    gens = [PauliTerm.single(n, q, "Z") for q in range(1, n + 1)]
    gens += [PauliTerm(n, 0b11 << (q - 1), 0) for q in range(1, n)]
    return GeneratorSet(n, gens)


def _text_key(term):
    return term.string()


def lie_closure(g: GeneratorSet, max_dim=None):
    """Pauli-string basis of the Lie algebra generated by ``iG``, sorted by text."""
    if max_dim is not None and max_dim < len(g.generators):
        raise ValueError("max_dim is smaller than the number of generators")
    found = {}
    for gen in g.generators:
        found.setdefault(gen.key, gen)
    if max_dim is not None and len(found) > max_dim:
        raise BudgetError(f"closure exceeds max_dim={max_dim}", len(found))
    basis = list(found.values())
    queue = deque(basis)
    while queue:
        a = queue.popleft()
        for b in list(basis):
            p = half_commutator(a, b)
            if p is None or p.key in found:
                continue
            new = p.unsigned()
            found[new.key] = new
            basis.append(new)
            queue.append(new)
            if max_dim is not None and len(found) > max_dim:
                raise BudgetError(f"closure exceeds max_dim={max_dim}", len(found))
    return sorted(found.values(), key=_text_key)


def _check_scan(n):
    if n > SCAN_LIMIT:
        raise DimensionError(f"n={n} exceeds the exhaustive scan limit {SCAN_LIMIT}")


def _anticommute(x1, z1, x2, z2):
    return ((x1 & z2).bit_count() + (z1 & x2).bit_count()) & 1


def linear_symmetries(g: GeneratorSet):
    """Every unsigned Pauli string commuting with all generators, sorted by text."""
    _check_scan(g.n)
    size = 1 << g.n
    gens = [(h.x, h.z) for h in g.generators]
    out = []
    for x in range(size):
        for z in range(size):
            if not any(_anticommute(x, z, gx, gz) for gx, gz in gens):
                out.append(PauliTerm(g.n, x, z))
    return sorted(out, key=_text_key)


@dataclass
class CommutatorGraph:
    n: int
    component_of: dict
    components: list

    def sizes(self):
        return [len(c) for c in self.components]


def commutator_graph(g: GeneratorSet) -> CommutatorGraph:
    """Connected components of the graph linking S to every nonzero ``[H, S]``."""
    _check_scan(g.n)
    n = g.n
    size = 1 << n
    gens = [(h.x, h.z) for h in g.generators]
    label = {}
    groups = []
    for x0 in range(size):
        for z0 in range(size):
            if (x0, z0) in label:
                continue
            cid = len(groups)
            label[(x0, z0)] = cid
            members = [(x0, z0)]
            queue = deque(members)
            while queue:
                x, z = queue.popleft()
                for gx, gz in gens:
                    if _anticommute(x, z, gx, gz):
                        nb = (x ^ gx, z ^ gz)
                        if nb not in label:
                            label[nb] = cid
                            members.append(nb)
                            queue.append(nb)
            groups.append(sorted((PauliTerm(n, x, z) for x, z in members), key=_text_key))
    order = sorted(range(len(groups)), key=lambda i: groups[i][0].string())
    components = [groups[i] for i in order]
    remap = {old: new for new, old in enumerate(order)}
    component_of = {k: remap[v] for k, v in label.items()}
    return CommutatorGraph(n, component_of, components)


@dataclass
class QuadraticSymmetry:
    """``normalization * sum_k weight_k A_k (x) B_k`` on two copies of the register."""

    n: int
    label: str
    terms: list
    normalization: float = 1.0

    def scaled_terms(self):
        """``(A, B, w)`` with the Pauli phases and normalization folded into ``w``."""
        for a, b, w in self.terms:
            yield a.unsigned(), b.unsigned(), self.normalization * w * a.coefficient * b.coefficient

    def pair_trace(self, first, second):
        """``Tr[(X (x) Y) Q]`` given callables returning ``Tr[X sigma]`` and ``Tr[Y sigma]``."""
        return sum(w * first(a) * second(b) for a, b, w in self.scaled_terms())

    def adjoint_pair_trace(self, first, second):
        """``Tr[Q^dagger (X (x) Y)]`` with the same callables."""
        return sum(np.conj(w) * first(a) * second(b) for a, b, w in self.scaled_terms())

    def to_dense(self):
        d = 1 << self.n
        out = np.zeros((d * d, d * d), dtype=complex)
        for a, b, w in self.scaled_terms():
            out += w * np.kron(to_dense(a), to_dense(b))
        return out

    def is_zero(self, tol=1e-12):
        merged = {}
        for a, b, w in self.scaled_terms():
            merged[(a.key, b.key)] = merged.get((a.key, b.key), 0) + w
        return all(abs(v) <= tol for v in merged.values())


def _merge(n, label, pairs, normalization=1.0):
    """Combine duplicate ``A (x) B`` products; ``pairs`` holds signed PauliTerms and weights."""
    merged = {}
    for a, b, w in pairs:
        key = (a.key, b.key)
        merged[key] = merged.get(key, 0) + w * a.coefficient * b.coefficient
    terms = [
        (PauliTerm(n, *ka), PauliTerm(n, *kb), w)
        for (ka, kb), w in sorted(merged.items())
        if abs(w) > 1e-14
    ]
    return QuadraticSymmetry(n, label, terms, normalization)


def quadratic_symmetry_basis(g: GeneratorSet, normalize=False):
    """``Q_k^j = sum_{S in C_k} S (x) L_j S`` for every component and linear symmetry.

    Within one component every S has the same commutation with L_j, so the raw
    operator is either Hermitian or anti-Hermitian.  ``normalize`` multiplies
    the latter by ``-i`` and scales each operator to unit Hilbert-Schmidt norm.
    """
    graph = commutator_graph(g)
    syms = linear_symmetries(g)
    d = 1 << g.n
    out = []
    for k, comp in enumerate(graph.components):
        for j, L in enumerate(syms):
            pairs = [(S, multiply(L, S), 1.0) for S in comp]
            q = _merge(g.n, f"Q_{k}^{j}", pairs)
            if normalize:
                phase = 1.0 if commutes(L, comp[0]) else -1j
                q = QuadraticSymmetry(g.n, q.label, [(a, b, phase * w) for a, b, w in q.terms], 1.0 / (d * math.sqrt(len(comp))))
            out.append(q)
    return out


def _norm_factor(n, kappa):
    return 1.0 / ((1 << n) * math.sqrt(math.comb(2 * n, kappa)))


def _standard_basis(n):
    out = []
    for kappa in range(2 * n + 1):
        norm = _norm_factor(n, kappa)
        q0 = [(monomial_to_pauli(m), monomial_to_pauli(m), 1.0) for m in monomials(n, kappa)]
        out.append(_merge(n, f"Q_{kappa}^0", q0, norm))
        phase = (-1j) ** n * 1j ** (kappa % 2)
        q1 = [
            (monomial_to_pauli(m), monomial_to_pauli(m.complement()), phase * (-1) ** m.index_sum)
            for m in monomials(n, kappa)
        ]
        out.append(_merge(n, f"Q_{kappa}^1", q1, norm))
    return out


def _parity_basis(n):
    parity = parity_operator(n)
    out = []
    for kappa in range(n + 1):
        norm = _norm_factor(n, kappa) / 2 ** (1 + (0.5 if kappa == n else 0.0))
        for lam, lam_sign in (("+", 1), ("-", -1)):
            for gam, gam_sign in (("+", 1), ("-", -1)):
                pairs = []
                for m in monomials(n, kappa):
                    c = monomial_to_pauli(m)
                    pc = multiply(parity, c)
                    pairs += [
                        (c, c, 1.0),
                        (c, pc, gam_sign),
                        (pc, c, lam_sign),
                        (pc, pc, lam_sign * gam_sign),
                    ]
                q = _merge(n, f"Q_{kappa}^{lam}{gam}", pairs, norm)
                # at k = n two of the four sums cancel identically
                if kappa == n and q.is_zero():
                    continue
                out.append(q)
    return out


def matchgate_Q_basis(n, flavor="standard"):
    """Orthonormal commutant basis of the two-copy matchgate group.

    ``standard`` gives ``Q_k^0, Q_k^1`` for k = 0..2n; ``parity`` gives the
    sector-resolved ``Q_k^{+-}`` family for k = 0..n, without the two
    operators that vanish identically at k = n (the mixed-sign pair for
    even n, the equal-sign pair for odd n).
    """
    if n < 1:
        raise DimensionError("n must be positive")
    if flavor == "standard":
        return _standard_basis(n)
    if flavor == "parity":
        return _parity_basis(n)
    raise ValueError(f"unknown flavor {flavor!r}")


def dla_report(g: GeneratorSet, max_dim=None):
    closure = lie_closure(g, max_dim)
    graph = commutator_graph(g)
    syms = linear_symmetries(g)
    return {
        "dla_dim": len(closure),
        "linear_symmetries": [s.string() for s in syms],
        "components": [{"size": len(c), "min_pauli": c[0].string()} for c in graph.components],
        "quadratic_count": len(syms) * len(graph.components),
    }


def standard_from_parity(n):
    """Expansion of each standard ``Q_k^j`` in the parity basis.

    Returns ``{standard label: [(parity label, coefficient), ...]}``; parity
    labels that were dropped as identically zero are omitted.  The
    ``Q_{2n-k}^0`` row carries ``(-1)^n`` because ``(P c^s) (x) (P c^s)``
    equals ``(-1)^n c^sbar (x) c^sbar``.
    """
    present = {q.label for q in matchgate_Q_basis(n, "parity")}
    rows = {}
    patterns = {
        "0": (1, 1, 1, 1),
        "bar0": (1, -1, -1, 1),
        "1": (1, -1, 1, -1),
        "bar1": (1, 1, -1, -1),
    }
    for kappa in range(n + 1):
        scale = 2 ** (0.5 if kappa == n else 0.0) / 2
        odd = 1j ** (kappa % 2)
        prefactor = {"0": 1, "bar0": (-1) ** n, "1": odd, "bar1": (-1) ** n * odd}
        targets = {"0": f"Q_{kappa}^0", "bar0": f"Q_{2 * n - kappa}^0", "1": f"Q_{kappa}^1", "bar1": f"Q_{2 * n - kappa}^1"}
        for key, signs in patterns.items():
            combo = []
            for sector, sign in zip(("++", "+-", "-+", "--"), signs):
                label = f"Q_{kappa}^{sector}"
                if label in present:
                    combo.append((label, prefactor[key] * sign * scale))
            rows[targets[key]] = combo
    return rows
