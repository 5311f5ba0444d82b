"""Sparse operators as maps from unsigned Pauli strings to complex coefficients."""
from __future__ import annotations

import json
import string
from pathlib import Path

import numpy as np

from .config import dense_limit
from .errors import DenseLimitError, DimensionError
from .pauli import PauliTerm, multiply

PRUNE_TOL = 1e-14

# single-qubit Pauli index p -> (x bit, z bit) and 2x2 matrix; p = 0..3 is I, X, Y, Z
_P_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))
_P_MATS = np.array(
    [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]],
    dtype=complex,
)


def _reverse_bits(v, n):
    out = 0
    for _ in range(n):
        out = (out << 1) | (v & 1)
        v >>= 1
    return out


def basis_action(term: PauliTerm):
    """``(flip, amp)`` with ``term |k> = amp[k] |k ^ flip>`` in computational-basis indexing.

    Basis index bit ``n - q`` holds qubit ``q`` (qubit 1 is the most
    significant bit, matching Kronecker order).
    """
    n = term.n
    flip = _reverse_bits(term.x, n)
    zs = _reverse_bits(term.z, n)
    k = np.arange(1 << n)
    parity = np.zeros(1 << n, dtype=np.int64)
    bits = k & zs
    while np.any(bits):
        parity ^= bits & 1
        bits = bits >> 1
    base = term.coefficient * (1j ** (bin(term.x & term.z).count("1") % 4))
    amp = base * (1 - 2 * parity)
    return flip, amp.astype(complex)


def check_dense(n):
    limit = dense_limit()
    if n > limit:
        raise DenseLimitError(f"n={n} exceeds dense limit {limit}")


class PauliSumOperator:
    """Sum of Pauli strings with complex coefficients.

    ``terms`` maps the ``(x, z)`` key of an unsigned string to its coefficient.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None, prune=True):
        if n < 1:
            raise DimensionError(f"qubit count must be positive, got {n}")
        self.n = n
        self.terms = dict(terms or {})
        if prune:
            self.prune()

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def identity(cls, n, scale=1.0):
        return cls(n, {(0, 0): complex(scale)})

    @classmethod
    def from_pauli(cls, term: PauliTerm, scale=1.0):
        return cls(term.n, {term.key: scale * term.coefficient})

    @classmethod
    def from_terms(cls, n, items):
        """``items``: iterable of ``(PauliTerm or label, coefficient)``."""
        out = {}
        for term, coef in items:
            if isinstance(term, str):
                term = PauliTerm.from_label(term)
            if term.n != n:
                raise DimensionError(f"term {term} acts on {term.n} qubits, expected {n}")
            out[term.key] = out.get(term.key, 0) + coef * term.coefficient
        return cls(n, out)

    @classmethod
    def from_dense(cls, matrix):
        """Pauli coefficients ``Tr[sigma M] / d`` via the n-fold 2x2 transform."""
        matrix = np.asarray(matrix, dtype=complex)
        d = matrix.shape[0]
        n = d.bit_length() - 1
        if matrix.shape != (d, d) or (1 << n) != d:
            raise DimensionError(f"expected a 2^n x 2^n matrix, got shape {matrix.shape}")
        check_dense(n)
        tensor = matrix.reshape((2,) * (2 * n))
        letters = string.ascii_letters
        rows, cols, outs = letters[:n], letters[n : 2 * n], letters[2 * n : 3 * n]
        # Tr[sigma M] = sum_ab sigma_ab M_ba, per qubit sigma_p[a_q, b_q] with b = row, a = col
        operands = [tensor]
        spec = [rows + cols]
        for q in range(n):
            operands.append(_P_MATS)
            spec.append(outs[q] + cols[q] + rows[q])
        coeffs = np.einsum(",".join(spec) + "->" + outs, *operands, optimize="greedy") / d
        flat = coeffs.reshape(-1)
        terms = {}
        for idx in np.flatnonzero(np.abs(flat) > PRUNE_TOL):
            x = z = 0
            rem = int(idx)
            for q in reversed(range(n)):
                bx, bz = _P_BITS[rem & 3]
                x |= bx << q
                z |= bz << q
                rem >>= 2
            terms[(x, z)] = complex(flat[idx])
        return cls(n, terms)

    @classmethod
    def from_state(cls, vector):
        """``|psi><psi|`` for a (not necessarily normalized) state vector."""
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        return cls.from_dense(np.outer(vector, vector.conj()))

    # -- basic algebra ------------------------------------------------
    def prune(self, tol=PRUNE_TOL):
        self.terms = {k: complex(v) for k, v in self.terms.items() if abs(v) > tol}
        return self

    def copy(self):
        return PauliSumOperator(self.n, self.terms, prune=False)

    def _check(self, other):
        if other.n != self.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PauliSumOperator(self.n, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        return PauliSumOperator(self.n, {k: scalar * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        self._check(other)
        out = {}
        for (xa, za), ca in self.terms.items():
            a = PauliTerm(self.n, xa, za)
            for (xb, zb), cb in other.terms.items():
                p = multiply(a, PauliTerm(self.n, xb, zb))
                out[p.key] = out.get(p.key, 0) + ca * cb * p.coefficient
        return PauliSumOperator(self.n, out)

    def left_multiply(self, term: PauliTerm):
        """``term @ self`` for a single Pauli term (cheap, no pairwise loop)."""
        out = {}
        for (x, z), c in self.terms.items():
            p = multiply(term, PauliTerm(self.n, x, z))
            out[p.key] = out.get(p.key, 0) + c * p.coefficient
        return PauliSumOperator(self.n, out)

    def dagger(self):
        return PauliSumOperator(self.n, {k: np.conj(v) for k, v in self.terms.items()})

    def tensor(self, other):
        """``self (x) other`` with ``self`` on the leading qubits."""
        shift = self.n
        out = {}
        for (xa, za), ca in self.terms.items():
            for (xb, zb), cb in other.terms.items():
                out[(xa | (xb << shift), za | (zb << shift))] = ca * cb
        return PauliSumOperator(self.n + other.n, out)

    # -- scalars ------------------------------------------------------
    @property
    def dim(self):
        return 1 << self.n

    def coefficient(self, term):
        if isinstance(term, str):
            term = PauliTerm.from_label(term)
        key = term.key if isinstance(term, PauliTerm) else term
        return self.terms.get(key, 0j)

    def trace(self):
        return self.dim * self.terms.get((0, 0), 0j)

    def expectation(self, term: PauliTerm):
        """``Tr[self @ term]`` for a signed Pauli term."""
        return self.dim * self.terms.get(term.key, 0j) * term.coefficient

    def inner(self, other):
        """Hilbert-Schmidt ``Tr[self^dagger other]``."""
        self._check(other)
        small, large = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        total = sum(np.conj(v) * large.terms.get(k, 0) for k, v in small.terms.items())
        if small is other:
            total = np.conj(total)
        return self.dim * complex(total)

    def norm2(self):
        """``Tr[M^dagger M]``."""
        return self.dim * float(sum(abs(v) ** 2 for v in self.terms.values()))

    def is_hermitian(self, tol=1e-10):
        return all(abs(v.imag) <= tol for v in self.terms.values())

    def commutator_norm(self, term: PauliTerm):
        """Hilbert-Schmidt norm of ``[self, term]``; used to test parity symmetry."""
        from .pauli import commutes

        total = sum(abs(c) ** 2 for (x, z), c in self.terms.items() if not commutes(PauliTerm(self.n, x, z), term))
        return 2.0 * np.sqrt(self.dim * total)

    def items(self):
        for (x, z), c in sorted(self.terms.items()):
            yield PauliTerm(self.n, x, z), c

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        shown = ", ".join(f"{c:.4g}*{p.string()}" for p, c in list(self.items())[:6])
        more = "" if len(self.terms) <= 6 else f", ... ({len(self.terms)} terms)"
        return f"PauliSumOperator(n={self.n}, [{shown}{more}])"

    # -- dense bridge -------------------------------------------------
    def to_dense(self):
        check_dense(self.n)
        d = self.dim
        out = np.zeros((d, d), dtype=complex)
        cols = np.arange(d)
        for (x, z), c in self.terms.items():
            flip, amp = basis_action(PauliTerm(self.n, x, z))
            out[cols ^ flip, cols] += c * amp
        return out

    # -- serialization ------------------------------------------------
    def to_json_dict(self):
        return {
            "n": self.n,
            "terms": [{"pauli": p.string(), "re": c.real, "im": c.imag} for p, c in self.items()],
        }

    @classmethod
    def from_json_dict(cls, data):
        n = int(data["n"])
        if "terms" in data:
            items = []
            for entry in data["terms"]:
                term = PauliTerm.from_label(entry["pauli"])
                items.append((term, complex(entry.get("re", 0.0), entry.get("im", 0.0))))
            return cls.from_terms(n, items)
        if "dense_re" in data:
            re = np.asarray(data["dense_re"], dtype=float)
            im = np.asarray(data.get("dense_im", np.zeros_like(re)), dtype=float)
            op = cls.from_dense(re + 1j * im)
            if op.n != n:
                raise DimensionError(f"dense matrix is for n={op.n}, header says n={n}")
            return op
        raise ValueError("operator JSON needs either 'terms' or 'dense_re'")

    @classmethod
    def load(cls, path):
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    def dump(self, path):
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2))
