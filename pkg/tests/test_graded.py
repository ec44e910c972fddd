from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ainfinity.graded import (
    Q, Z, Z2, GradedBasis, Grading, Identity, Ring, TensorWord, Vector, apply_tensor_of_maps,
    koszul_sign, suspension_sign, word_degree,
)
from ainfinity.tensor import MultiMap

B = GradedBasis.of([("a", 1), ("b", 2), ("c", 0)])


def test_ring_parsing_is_exact():
    assert Q.parse("3/6") == Fraction(1, 2)
    assert Z.parse("-4") == -4
    assert Ring.from_spec({"Zmod": 5}).parse("-1") == 4
    assert Ring.from_spec({"Zmod": 5}).parse("2/3") == 4  # 3 * 4 = 12 = 2
    with pytest.raises(ValueError):
        Z.parse("1/2")
    with pytest.raises(ValueError):
        Z.parse("1.5")
    with pytest.raises(ValueError):
        Ring.from_spec({"Zmod": 6})


@given(st.integers(-50, 50), st.sampled_from([2, 3, 7]))
def test_mod_p_representatives(n, p):
    r = Ring.from_spec({"Zmod": p})
    assert 0 <= r.normalize(n) < p


def test_basis_invariants():
    with pytest.raises(ValueError):
        GradedBasis.of([("a", 0), ("a", 1)])
    with pytest.raises(ValueError):
        GradedBasis.of([("u", 1)], unit="u")
    d = B.dual()
    assert d.names == ("a*", "b*", "c*") and d.degrees == (-1, -2, 0)


def test_koszul_sign_examples():
    assert koszul_sign(0, 5) == 1
    assert koszul_sign(1, 1) == -1
    assert koszul_sign(3, 2) == 1


def test_suspension_sign_examples():
    assert suspension_sign([7]) == 1
    assert suspension_sign([0, 0]) == -1
    assert suspension_sign([1, 1, 1]) == 1


@given(st.lists(st.integers(-3, 3), max_size=6))
def test_suspension_sign_closed_form(degs):
    k = len(degs)
    e = sum((k - j) * (d + 1) for j, d in enumerate(degs, start=1))
    assert suspension_sign(degs) == (-1) ** e


def test_word_degree():
    assert word_degree(TensorWord((0, 1)), B) == 3
    assert word_degree(TensorWord(()), B) == 0
    assert word_degree(TensorWord((0, 1), None, True), B) == 5


def test_vector_drops_zeros_and_reduces():
    v = Vector(Z2, {TensorWord((0,)): 2, TensorWord((1,)): 3})
    assert dict(v.items()) == {TensorWord((1,)): 1}
    w = Vector(Z, {TensorWord((0,)): 1})
    assert not (w - w)


def test_tensor_of_maps_signs():
    g = Grading(B)
    delta = MultiMap.plain(1, -1, {(0,): {2: 1}, (1,): {0: 1}})
    # (id (x) d)(a, b) = (-1)^{|a|} (a, d b) with |a| = 1
    out = apply_tensor_of_maps([Identity(1), delta], TensorWord((0, 1)), g, Z)
    assert out == Vector(Z, {TensorWord((0, 0)): -1})
    out = apply_tensor_of_maps([Identity(1), Identity(1)], TensorWord((0, 1)), g, Z)
    assert out == Vector(Z, {TensorWord((0, 1)): 1})
    # second d passes the even element b: no sign
    out = apply_tensor_of_maps([delta, delta], TensorWord((1, 0)), g, Z)
    assert out == Vector(Z, {TensorWord((0, 2)): 1})


def test_tensor_of_maps_arity_mismatch():
    with pytest.raises(ValueError):
        apply_tensor_of_maps([Identity(1)], TensorWord((0, 1)), Grading(B), Z)
