"""Scaled Pauli strings in the symplectic (x, z) bitmask representation.

Bit ``q`` of each mask refers to qubit ``q + 1``, i.e. bit 0 is the leftmost
tensor factor.  A term ``PauliTerm(n, x, z, phase)`` denotes
``i**phase * sigma`` where ``sigma`` is the Hermitian Pauli string with an
``X`` where only ``x`` is set, ``Z`` where only ``z`` is set and ``Y`` where
both are set.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import dense_limit
from .errors import DenseLimitError, DimensionError

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_SINGLE = {(0, 0): _I2, (1, 0): _X2, (1, 1): _Y2, (0, 1): _Z2}
_UNIT = (1, 1j, -1, -1j)


def _popcount(v):
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliTerm:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n < 1:
            raise DimensionError(f"qubit count must be positive, got {self.n}")
        if self.x & ~mask or self.z & ~mask:
            raise DimensionError(f"masks use bits beyond n={self.n}")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction -------------------------------------------------
    @classmethod
    def identity(cls, n):
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliTerm":
        """Parse ``"-iZXI"``-style text (optional phase prefix, then I/X/Y/Z)."""
        text = label.strip()
        body_start = 0
        while body_start < len(text) and text[body_start] in "+-i":
            body_start += 1
        prefix, body = text[:body_start], text[body_start:]
        if prefix not in _PREFIX_PHASE:
            raise ValueError(f"bad phase prefix {prefix!r} in {label!r}")
        if not body:
            raise ValueError(f"empty Pauli string in {label!r}")
        x = z = 0
        for q, ch in enumerate(body.upper()):
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli character {ch!r} in {label!r}")
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
        return cls(len(body), x, z, _PREFIX_PHASE[prefix])

    @classmethod
    def single(cls, n, qubit, op):
        """``op`` in {'X','Y','Z'} acting on 1-based ``qubit``."""
        if not 1 <= qubit <= n:
            raise DimensionError(f"qubit {qubit} out of range for n={n}")
        bit = 1 << (qubit - 1)
        return cls(n, bit if op in "XY" else 0, bit if op in "ZY" else 0)

    # -- views --------------------------------------------------------
    @property
    def key(self):
        """Unsigned string as an (x, z) pair; the hashing key used by operator sums."""
        return (self.x, self.z)

    @property
    def coefficient(self):
        return _UNIT[self.phase]

    def unsigned(self):
        return PauliTerm(self.n, self.x, self.z, 0)

    def weight(self):
        return _popcount(self.x | self.z)

    def string(self):
        chars = []
        for q in range(self.n):
            bx, bz = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IXZY"[bx | (bz << 1)])
        return "".join(chars)

    def label(self):
        return _PHASE_PREFIX[self.phase] + self.string()

    def __str__(self):
        return self.label()

    def __mul__(self, other):
        return multiply(self, other)


def _check_same_n(a, b):
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact product ``a @ b``.

    Each Hermitian factor is written as ``i^{x.z} X^x Z^z``; moving ``Z^{z_a}``
    past ``X^{x_b}`` costs ``(-1)^{|z_a & x_b|}``.
    """
    _check_same_n(a, b)
    x, z = a.x ^ b.x, a.z ^ b.z
    phase = (
        a.phase
        + b.phase
        + _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return PauliTerm(a.n, x, z, phase)


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    _check_same_n(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def half_commutator(a: PauliTerm, b: PauliTerm):
    """``[a, b] / 2`` as a PauliTerm, or ``None`` when the two commute.

    For anticommuting strings ``ba = -ab`` so the half commutator is ``ab``.
    """
    if commutes(a, b):
        return None
    return multiply(a, b)


def dagger(a: PauliTerm) -> PauliTerm:
    return PauliTerm(a.n, a.x, a.z, -a.phase)


def to_dense(a: PauliTerm, limit=None) -> np.ndarray:
    limit = dense_limit() if limit is None else limit
    if a.n > limit:
        raise DenseLimitError(f"n={a.n} exceeds dense limit {limit}")
    factors = [_SINGLE[((a.x >> q) & 1, (a.z >> q) & 1)] for q in range(a.n)]
    return a.coefficient * reduce(np.kron, factors)


def all_paulis(n):
    """Every unsigned n-qubit Pauli string, ordered by (x, z)."""
    size = 1 << n
    return [PauliTerm(n, x, z) for x in range(size) for z in range(size)]
