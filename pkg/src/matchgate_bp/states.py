"""Named input states and observables."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .operators import PauliSumOperator
from .pauli import PauliTerm


def computational_zero(n):
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    return psi


def magic_block(tau):
    """``(|0000> + |0011> + |1100> + e^{i tau} |1111>) / 2``."""
    psi = np.zeros(16, dtype=complex)
    psi[0b0000] = psi[0b0011] = psi[0b1100] = 0.5
    psi[0b1111] = 0.5 * np.exp(1j * tau)
    return psi


def magic(n, tau):
    if n % 4 or n < 4:
        raise DimensionError(f"magic state needs n divisible by 4, got {n}")
    psi = np.ones(1, dtype=complex)
    block = magic_block(tau)
    for _ in range(n // 4):
        psi = np.kron(psi, block)
    return psi


def superposition(n, alpha=2**-0.5, beta=2**-0.5):
    """``alpha |0...0> + beta |10...0>`` with qubit 1 flipped in the second branch."""
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = alpha
    psi[1 << (n - 1)] = beta
    return psi


def maximally_mixed(n):
    return PauliSumOperator.identity(n, 1.0 / (1 << n))


def load_amplitudes(path):
    """JSON ``{"n": int, "re": [...], "im": [...]}`` with 2^n amplitudes."""
    data = json.loads(Path(path).read_text())
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    psi = re + 1j * im
    if "n" in data and psi.size != 1 << int(data["n"]):
        raise DimensionError(f"expected {1 << int(data['n'])} amplitudes, got {psi.size}")
    return psi / np.linalg.norm(psi)


def named_state(spec, n):
    """Parse ``zero``, ``magic:<tau>``, ``superposition[:alpha,beta]``, ``mixed`` or a file path.

    Returns a state vector or, for ``mixed`` and operator files, a PauliSumOperator.
    """
    name, _, arg = spec.partition(":")
    if name in ("zero", "computational_zero"):
        return computational_zero(n)
    if name == "magic":
        return magic(n, float(arg or 0.0))
    if name == "superposition":
        if arg:
            alpha, beta = (float(v) for v in arg.split(","))
        else:
            alpha = beta = 2**-0.5
        return superposition(n, alpha, beta)
    if name in ("mixed", "maximally_mixed"):
        return maximally_mixed(n)
    path = Path(spec)
    if path.exists():
        data = json.loads(path.read_text())
        if "terms" in data or "dense_re" in data:
            return PauliSumOperator.from_json_dict(data)
        return load_amplitudes(path)
    raise ValueError(f"unknown state {spec!r}")


def z_string(n, m):
    """``Z_1 Z_2 ... Z_m``."""
    return PauliSumOperator.from_pauli(PauliTerm(n, 0, (1 << m) - 1))


def named_observable(spec, n):
    """``Z:k``, ``X:k``, ``Zm:m``, a Pauli label such as ``ZIXI``, or an operator file."""
    name, _, arg = spec.partition(":")
    if name in ("Z", "X", "Y") and arg:
        return PauliSumOperator.from_pauli(PauliTerm.single(n, int(arg), name))
    if name == "Zm":
        return z_string(n, int(arg))
    path = Path(spec)
    if path.exists():
        return PauliSumOperator.load(path)
    term = PauliTerm.from_label(spec)
    if term.n != n:
        raise DimensionError(f"observable {spec!r} acts on {term.n} qubits, expected {n}")
    return PauliSumOperator.from_pauli(term)


def as_density(state):
    if isinstance(state, PauliSumOperator):
        return state
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return PauliSumOperator.from_state(arr)
    return PauliSumOperator.from_dense(arr)


