"""Quick numerical self-test at small n, used by ``bp selfcheck``."""
from __future__ import annotations

import math

import numpy as np

from .circuit import CircuitSpec, estimate_variance
from .dla import commutator_graph, lie_closure, matchgate_generators, matchgate_Q_basis
from .entanglement import g_purity_via_entropy
from .majorana import parity_operator
from .modules import kappa_purity, purity_spectrum
from .operators import PauliSumOperator
from .oracle import weingarten_oracle
from .pauli import to_dense
from .states import as_density, computational_zero, magic, named_observable, z_string
from .variance import closed_form, variance_exact, variance_parity_basis


def _random_state(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    r = a @ a.conj().T
    return r / np.trace(r)


def _random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def check_oracle(rng):
    worst = 0.0
    for n in (2, 3):
        d = 1 << n
        for _ in range(3):
            r, o = _random_state(rng, d), _random_hermitian(rng, d)
            worst = max(worst, abs(variance_exact(r, o).variance - weingarten_oracle(r, o).variance))
    return worst <= 1e-9, f"max |exact - oracle| = {worst:.2e}"


def check_closed_forms(rng):
    worst = 0.0
    for m in range(1, 4):
        exact = variance_exact(as_density(computational_zero(4)), z_string(4, m)).variance
        worst = max(worst, abs(exact - closed_form("gaussian", n=4, m=m)))
    for tau in (0.0, math.pi / 3, math.pi):
        exact = variance_exact(as_density(magic(4, tau)), named_observable("Z:1", 4)).variance
        worst = max(worst, abs(exact - closed_form("magic", n=4, tau=tau)))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_graph(rng):
    ok = True
    for n in (2, 3, 4):
        g = matchgate_generators(n)
        sizes = sorted(commutator_graph(g).sizes())
        ok &= sizes == sorted(math.comb(2 * n, k) for k in range(2 * n + 1))
        ok &= len(lie_closure(g)) == n * (2 * n - 1)
    return ok, "component sizes C(2n,k) and dla dim n(2n-1) for n = 2..4"


def check_bases(rng):
    worst = 0.0
    for n in (1, 2):
        for flavor in ("standard", "parity"):
            mats = [q.to_dense() for q in matchgate_Q_basis(n, flavor)]
            gram = np.array([[np.vdot(a, b) for b in mats] for a in mats])
            worst = max(worst, np.abs(gram - np.eye(len(mats))).max())
    return worst <= 1e-10, f"max Gram deviation {worst:.2e}"


def check_bridge(rng):
    worst = 0.0
    for n in (2, 3):
        P = to_dense(parity_operator(n))
        for _ in range(3):
            r = _random_state(rng, 1 << n)
            r = (r + P @ r @ P) / 2
            worst = max(worst, abs(g_purity_via_entropy(r) - kappa_purity(PauliSumOperator.from_dense(r), 2)))
    return worst <= 1e-10, f"max |P_2 - (n - S_2)/d| = {worst:.2e}"


def check_parity_variance(rng):
    worst = 0.0
    for n in (2, 3, 4):
        P = to_dense(parity_operator(n))
        r = _random_state(rng, 1 << n)
        r = (r + P @ r @ P) / 2
        o = _random_hermitian(rng, 1 << n)
        worst = max(worst, abs(variance_parity_basis(r, o).variance - variance_exact(r, o).variance))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_completeness(rng):
    worst = 0.0
    for n in (2, 3):
        m = PauliSumOperator.from_dense(_random_hermitian(rng, 1 << n))
        worst = max(worst, abs(purity_spectrum(m).purities.sum() - m.norm2()))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_reproducibility(rng):
    spec = CircuitSpec(3, seed=11)
    runs = [estimate_variance(computational_zero(3), named_observable("Z:1", 3), spec, 500, workers=w) for w in (1, 2)]
    return runs[0] == runs[1], "identical estimates with 1 and 2 workers"


CHECKS = [
    ("oracle-equivalence", check_oracle),
    ("closed-forms", check_closed_forms),
    ("commutator-graph", check_graph),
    ("commutant-bases", check_bases),
    ("fermionic-bridge", check_bridge),
    ("parity-variance", check_parity_variance),
    ("completeness", check_completeness),
    ("reproducibility", check_reproducibility),
]


def run_selfcheck(seed=0, out=print):
    rng = np.random.default_rng(seed)
    failures = 0
    for name, fn in CHECKS:
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # report and keep going
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        failures += not ok
        out(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return failures
