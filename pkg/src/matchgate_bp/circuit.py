"""Statevector simulation of layered matchgate circuits and Monte-Carlo loss statistics.

Basis index bit ``n - q`` holds qubit ``q``, so qubit 1 is the most
significant bit, as in the Kronecker ordering used everywhere else.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError
from .operators import PauliSumOperator, basis_action

BLOCK = 250
TWO_PI = 2 * math.pi
DENSE_OBSERVABLE_TERMS = 64


@dataclass(frozen=True)
class CircuitSpec:
    """Each layer applies ``exp(-i t Z_q)`` for q = 1..n, then ``exp(-i t X_q X_{q+1})`` for q = 1..n-1."""

    n: int
    layers: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("n must be positive")
        if self.layers is None:
            object.__setattr__(self, "layers", self.n * self.n)
        if self.layers < 0:
            raise ValueError("layers must be non-negative")

    @property
    def parameter_count(self):
        return self.layers * (2 * self.n - 1)

    def gates(self):
        """Sequence of ``("Z", q)`` / ``("XX", q)`` in application order."""
        layer = [("Z", q) for q in range(1, self.n + 1)] + [("XX", q) for q in range(1, self.n)]
        return layer * self.layers


def _bit(n, q):
    return 1 << (n - q)


class _Kernels:
    """Per-(n, layer) lookup tables shared by all samples."""

    def __init__(self, spec: CircuitSpec):
        n = spec.n
        k = np.arange(1 << n)
        self.gates = spec.gates()
        self.z_sign = {q: np.where(k & _bit(n, q), -1.0, 1.0) for q in range(1, n + 1)}
        self.xx_perm = {q: k ^ (_bit(n, q) | _bit(n, q + 1)) for q in range(1, n)}

    def run(self, states, angles):
        """Evolve a ``(batch, d)`` array; ``angles`` has shape ``(batch, parameters)``."""
        cos, sin = np.cos(angles), np.sin(angles)
        for g, (kind, q) in enumerate(self.gates):
            c = cos[:, g : g + 1]
            s = sin[:, g : g + 1]
            if kind == "Z":
                # exp(-i t Z) = cos t - i sin t Z, with Z diagonal
                states = states * (c - 1j * s * self.z_sign[q])
            else:
                states = c * states - 1j * s * states[:, self.xx_perm[q]]
        return states


def apply_circuit(state, spec: CircuitSpec, angles):
    state = np.asarray(state, dtype=complex)
    angles = np.asarray(angles, dtype=float)
    if state.shape != (1 << spec.n,):
        raise DimensionError(f"state has shape {state.shape}, expected ({1 << spec.n},)")
    if angles.shape != (spec.parameter_count,):
        raise DimensionError(f"expected {spec.parameter_count} angles, got {angles.size}")
    if abs(np.vdot(state, state).real - 1) > 1e-8:
        raise PreconditionError("input state is not normalized")
    return _Kernels(spec).run(state[None, :], angles[None, :])[0]


def sample_rng(seed, index):
    """Independent counter-based stream for sample ``index``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def draw_angles(spec: CircuitSpec, rng):
    return rng.uniform(0.0, TWO_PI, size=spec.parameter_count)


def state_branches(state, n):
    """``[(weight, ket)]`` for a ket, a density matrix or a PauliSumOperator."""
    if isinstance(state, PauliSumOperator):
        state = state.to_dense()
    arr = np.asarray(state, dtype=complex)
    d = 1 << n
    if arr.shape == (d,):
        return [(1.0, arr / np.linalg.norm(arr))]
    if arr.shape != (d, d):
        raise DimensionError(f"state has shape {arr.shape}, expected ({d},) or ({d}, {d})")
    vals, vecs = np.linalg.eigh((arr + arr.conj().T) / 2)
    if vals[0] < -1e-10:
        raise PreconditionError(f"density operator has eigenvalue {vals[0]:.3e} < 0")
    return [(float(v), vecs[:, i]) for i, v in enumerate(vals) if v > 1e-14]


class _Observable:
    def __init__(self, O: PauliSumOperator):
        if not O.is_hermitian():
            raise PreconditionError("observable is not Hermitian")
        self.dense = O.to_dense() if len(O) > DENSE_OBSERVABLE_TERMS else None
        self.actions = [] if self.dense is not None else [(c, *basis_action(p)) for p, c in O.items()]

    def expectation(self, states):
        """Row-wise ``<psi|O|psi>`` for a ``(batch, d)`` array."""
        if self.dense is not None:
            values = np.einsum("bi,ij,bj->b", states.conj(), self.dense, states)
        else:
            values = np.zeros(states.shape[0], dtype=complex)
            for coef, flip, amp in self.actions:
                k = np.arange(states.shape[1])
                values += coef * np.einsum("bk,bk->b", states[:, k ^ flip].conj(), amp * states)
        return values


def _losses(kernels, branches, obs, angles):
    total = np.zeros(angles.shape[0], dtype=complex)
    for weight, ket in branches:
        states = np.broadcast_to(ket, (angles.shape[0], ket.size))
        total += weight * obs.expectation(kernels.run(states, angles))
    if np.max(np.abs(total.imag), initial=0.0) > 1e-10:
        raise ArithmeticError("loss has a non-negligible imaginary part")
    return total.real


def sample_loss(state, O: PauliSumOperator, spec: CircuitSpec, rng) -> float:
    """One draw of ``Tr[U rho U^dagger O]`` with angles uniform on [0, 2 pi)."""
    angles = draw_angles(spec, rng)[None, :]
    return float(_losses(_Kernels(spec), state_branches(state, spec.n), _Observable(O), angles)[0])


@dataclass
class McEstimate:
    samples: int
    mean_hat: float
    var_hat: float
    stderr_var: float
    seed: int

    def to_dict(self):
        return dict(self.__dict__)


def sample_losses(state, O, spec: CircuitSpec, samples, workers=1):
    """All ``samples`` losses in sample order; independent of ``workers``."""
    kernels = _Kernels(spec)
    branches = state_branches(state, spec.n)
    obs = _Observable(O)

    def block(start):
        stop = min(start + BLOCK, samples)
        angles = np.stack([draw_angles(spec, sample_rng(spec.seed, i)) for i in range(start, stop)])
        if angles.shape[1] == 0:
            angles = np.zeros((stop - start, 0))
        return _losses(kernels, branches, obs, angles)

    starts = range(0, samples, BLOCK)
    if workers <= 1:
        parts = [block(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, starts))
    return np.concatenate(parts)


def estimate_variance(state, O, spec: CircuitSpec, samples=10_000, workers=1) -> McEstimate:
    if samples < 100:
        raise ValueError("need at least 100 samples")
    x = sample_losses(state, O, spec, samples, workers)
    mean = float(np.mean(x))
    dev = x - mean
    m2 = float(np.mean(dev**2))
    m4 = float(np.mean(dev**4))
    var_hat = float(np.sum(dev**2) / (samples - 1))
    stderr = math.sqrt(max(m4 - m2 * m2, 0.0) / samples)
    return McEstimate(samples, mean, var_hat, stderr, spec.seed)
