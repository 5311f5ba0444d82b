import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_label
from matchgate_bp.errors import DenseLimitError, DimensionError
from matchgate_bp.pauli import PauliTerm, all_paulis, commutes, half_commutator, multiply, to_dense


def P(label):
    return PauliTerm.from_label(label)


def test_single_qubit_products():
    assert multiply(P("X"), P("Y")) == P("+iZ")
    assert multiply(P("Z"), P("Z")) == P("I")
    assert multiply(P("ZX"), P("ZI")) == P("+IX")


def test_multiply_rejects_mismatched_n():
    with pytest.raises(DimensionError):
        multiply(P("X"), P("XI"))


def test_commutation_examples():
    assert not commutes(P("Z"), P("X"))
    assert commutes(P("ZZ"), P("XX"))
    assert commutes(P("XI"), P("IX"))


def test_half_commutator_examples():
    assert half_commutator(P("Z"), P("X")) == P("+iY")
    assert half_commutator(P("ZI"), P("IZ")) is None
    a, b = P("XX"), P("ZI")
    got = half_commutator(a, b)
    ref = (dense_label("XX") @ dense_label("ZI") - dense_label("ZI") @ dense_label("XX")) / 2
    assert np.array_equal(to_dense(got), ref)
    assert got.string() == "YX"


def test_to_dense_examples():
    assert np.array_equal(to_dense(P("I")), np.eye(2))
    assert np.array_equal(to_dense(P("iZ")), np.diag([1j, -1j]))
    zx = to_dense(P("ZX"))
    assert np.array_equal(zx, np.kron(np.diag([1, -1]), [[0, 1], [1, 0]]))


def test_dense_limit(monkeypatch):
    monkeypatch.setenv("BP_DENSE_LIMIT", "2")
    with pytest.raises(DenseLimitError):
        to_dense(P("XXX"))


def test_label_round_trip():
    for label in ["-iZXI", "+XY", "-Z", "+iI"]:
        assert P(label).label() == (label if label[0] in "+-" else "+" + label)
    assert P("ZXI").string() == "ZXI"
    # bit 0 is the leftmost factor
    assert P("XII").x == 1


def test_masks_validated():
    with pytest.raises(DimensionError):
        PauliTerm(2, 4, 0)


def terms(n):
    return st.builds(
        PauliTerm,
        st.just(n),
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
        st.integers(0, 3),
    )


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(terms(n), terms(n), terms(n))))
def test_associative(triple):
    a, b, c = triple
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(terms(n), terms(n))))
def test_dense_consistency(pair):
    a, b = pair
    assert np.array_equal(to_dense(multiply(a, b)), to_dense(a) @ to_dense(b))
    unit = to_dense(a)
    ref = dense_label(a.string(), a.coefficient)
    assert np.array_equal(unit, ref)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_commutes_matches_dense(n):
    ps = all_paulis(n)
    mats = {p.key: dense_label(p.string()) for p in ps}
    for a, b in itertools.product(ps, repeat=2):
        A, B = mats[a.key], mats[b.key]
        assert commutes(a, b) == np.allclose(A @ B, B @ A)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(terms(n), terms(n))))
def test_half_commutator_round_trip(pair):
    a, b = pair
    p = half_commutator(a, b)
    if p is None:
        assert commutes(a, b)
        return
    A, B = to_dense(a), to_dense(b)
    assert np.allclose(to_dense(p), (A @ B - B @ A) / 2)
    # applying the same generator again brings back the original string
    back = half_commutator(p, b)
    assert back is not None
    assert back.key == a.key and (back.phase - a.phase) % 2 == 0
    assert back == multiply(a, multiply(b, b))
    Pm = to_dense(p)
    assert np.allclose((Pm @ B - B @ Pm) / 2, A @ B @ B)
