import itertools
import random
from collections import Counter

import pytest

from ainfinity.ainf import zero_algebra
from ainfinity.bimod import dual_self_bimodule, self_bimodule
from ainfinity.diagrams import bare, insertions
from ainfinity.graded import GradedBasis
from ainfinity.iprod import (
    InnerProduct, RelationTerm, check_inner_product, differential_signs, from_morphism, relation_terms,
    to_morphism, validate_term,
)
from ainfinity.morph import BimoduleMorphism, check_morphism
from ainfinity.tensor import SCALAR, MultiMap

import helpers as h


def test_invariant_pairing_passes():
    for bound in (2, 3, 4):
        assert check_inner_product(h.invariant_pairing(), bound).passed


def test_broken_pairing_fails_at_three_inputs():
    res = check_inner_product(h.invariant_pairing(invariant=False), 3)
    assert not res.passed
    assert {len(d.word) for d in res.defects} == {3}
    assert {d.location for d in res.defects} <= {"<>_1,0", "<>_0,1"}


def test_zero_family_passes():
    for make in (h.dga3, h.twisted_exterior):
        ip = InnerProduct(make(), {}, 3)
        assert check_inner_product(ip, 3).passed
        assert to_morphism(ip).ops == {}


def test_delegates_to_morphism_check():
    rng = random.Random(5)
    alg = h.dual_numbers()
    for _ in range(20):
        table = {k: rng.choice((-1, 1)) for k in itertools.product(range(2), repeat=2) if rng.random() < 0.5}
        ip = InnerProduct(alg, {(0, 0): MultiMap(2, 0, table, None, SCALAR)}, 2)
        assert check_inner_product(ip, 3).passed == check_morphism(to_morphism(ip), 3).passed


def test_currying_sign():
    alg = zero_algebra(GradedBasis.of([("u", -1), ("v", 1), ("w", 0)]))
    beta = {(0, 1): 3, (1, 0): 5, (2, 2): 7}
    f = MultiMap.bimodule(0, 0, 0, {(a,): {b: c} for (a, b), c in beta.items()})
    mor = BimoduleMorphism(self_bimodule(alg), dual_self_bimodule(alg), {(0, 0): f}, 2)
    ip = from_morphism(mor)
    degs = alg.basis.degrees
    assert ip.ops[(0, 0)].table == {k: (-1) ** degs[k[1]] * c for k, c in beta.items()}
    assert ip.ops[(0, 0)].table[(0, 1)] == -3
    assert to_morphism(ip).ops == mor.ops


def _random_family(alg, rng, max_arity=3):
    degs = alg.basis.degrees
    ops = {}
    for k, l in itertools.product(range(max_arity), repeat=2):
        if k + l + 1 > max_arity:
            continue
        table = {}
        for key in itertools.product(range(len(degs)), repeat=k + l + 2):
            if sum(degs[i] for i in key) + k + l == 0 and rng.random() < 0.3:
                table[key] = rng.choice((1, -1, 2))
        ops[(k, l)] = MultiMap(k + l + 2, k + l, table, None, SCALAR)
    return InnerProduct(alg, ops, max_arity)


def test_round_trip_on_random_families():
    rng = random.Random(2)
    alg = zero_algebra(GradedBasis.of([("u", -1), ("v", 1), ("w", 0)]))
    for _ in range(20):
        ip = _random_family(alg, rng)
        assert any(p.table for p in ip.ops.values())
        mor = to_morphism(ip)
        assert from_morphism(mor) == ip
        assert to_morphism(from_morphism(mor)).ops == mor.ops


def test_from_morphism_needs_canonical_bimodules():
    alg = h.exterior()
    mor = BimoduleMorphism(self_bimodule(alg), self_bimodule(alg), {}, 2)
    with pytest.raises(ValueError):
        from_morphism(mor)


def test_validation():
    alg = h.exterior()
    with pytest.raises(ValueError):
        InnerProduct(alg, {(0, 0): MultiMap(2, 1, {}, None, SCALAR)}, 2)
    with pytest.raises(ValueError):
        InnerProduct(alg, {(1, 0): MultiMap(2, 1, {}, None, SCALAR)}, 2)
    with pytest.raises(ValueError):
        InnerProduct(alg, {(2, 0): MultiMap(4, 2, {}, None, SCALAR)}, 2)


# ---------------------------------------------------------------------------
# relation terms


def test_relation_terms_examples():
    assert [t.text("abc") for t in relation_terms(1, 0)] == ["<m2(a,b),c>_{0,0}", "<b,m2(c,a)>_{0,0}"]
    assert sorted(t.text("abc") for t in relation_terms(0, 1)) == ["<a,m2(b,c)>_{0,0}", "<m2(a,b),c>_{0,0}"]
    assert relation_terms(0, 0) == []
    with pytest.raises(ValueError):
        relation_terms(1, 0, "ab")


@pytest.mark.parametrize("n", range(2, 8))
def test_relation_terms_match_diagram_insertions(n):
    for k in range(n - 1):
        l = n - 2 - k
        terms = relation_terms(k, l)
        assert Counter(t.diagram() for t in terms) == Counter(insertions(bare(k, l)))
        for t in terms:
            assert validate_term(t, k, l) == []


def test_validator_catches_bad_terms():
    assert "special inputs multiplied together" in validate_term(RelationTerm(0, 0, ((1,), (2, 3))), 1, 0)
    assert validate_term(RelationTerm(0, 0, ((1,), (2,))), 0, 0) == ["exactly one multiplication expected"]
    assert "cyclic order not preserved" in validate_term(RelationTerm(0, 0, ((2, 1), (3,))), 0, 1)
    assert "wrong (r, s)" in validate_term(RelationTerm(1, 0, ((1, 2), (3,))), 0, 1)


def _evaluate(terms, pairing, mu, labels):
    """Sum of signed terms on degree-0 inputs of an ordinary algebra with pairing on (0,0)."""
    total = 0
    for t in terms:
        vecs = []
        for slot in t.slots:
            if len(slot) == 1:
                vecs.append({labels[slot[0] - 1]: 1})
            elif len(slot) == 2:
                vecs.append(mu.get((labels[slot[0] - 1], labels[slot[1] - 1]), {}))
            else:
                return None
        if (t.r, t.s) != (0, 0):
            return None
        for (x, cx), (y, cy) in itertools.product(vecs[0].items(), vecs[1].items()):
            total += t.sign * cx * cy * pairing.get((x, y), 0)
    return total


@pytest.mark.parametrize("kl", [(1, 0), (0, 1)])
def test_signed_terms_reduce_to_invariance(kl):
    # on a degree-0 algebra with only <,>_{0,0} and no differential, the
    # relation for <...>_{k,l} reads: the signed m_2 terms sum to zero
    terms = relation_terms(*kl, signed=True)
    assert all(t.sign in (1, -1) for t in terms)
    for invariant in (True, False):
        ip = h.invariant_pairing(invariant=invariant)
        pairing = ip.ops[(0, 0)].table
        mu = ip.algebra.m(2).table
        vals = [_evaluate(terms, pairing, mu, w) for w in itertools.product(range(2), repeat=3)]
        assert all(v == 0 for v in vals) == invariant


def test_differential_signs_koszul():
    for degs in itertools.product(range(-1, 2), repeat=3):
        if sum(degs) != 0:
            continue
        signs = differential_signs(1, 0, list(degs))
        assert signs[0] == 1
        assert signs[1] == (-1) ** degs[0]
        assert signs[2] == (-1) ** (degs[0] + degs[1])
    with pytest.raises(ValueError):
        differential_signs(1, 0, [1, 0, 0])
