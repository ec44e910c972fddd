import itertools

import pytest

from ainfinity.ainf import (
    AInfAlgebra, check_relations, epsilon, from_dga, relation_instances, relation_sum, sign_oracle_agreement,
    square_projection, suspended_component, term_algebra, zero_algebra,
)
from ainfinity.graded import Z, Z2, GradedBasis, TensorWord, Vector, suspension_sign
from ainfinity.tensor import MultiMap

import helpers as h


def test_suspended_component_signs():
    basis = GradedBasis.of([("p", 0), ("q", 1), ("r", 4)])
    alg = AInfAlgebra(basis, Z, {
        1: MultiMap.plain(1, -1, {(1,): {0: 1}}),
        2: MultiMap.plain(2, 0, {(0, 0): {0: 1}}),
        3: MultiMap.plain(3, 1, {(1, 1, 1): {2: 1}}),
    }, 3)
    assert suspended_component(alg, 1).table == {(1,): {0: 1}}
    assert suspended_component(alg, 2).table == {(0, 0): {0: -1}}
    assert suspended_component(alg, 3).table == {(1, 1, 1): {2: 1}}
    assert suspended_component(alg, 3).degree == -1


def test_epsilon_examples():
    for degs in itertools.product(range(3), repeat=2):
        assert epsilon(2, 1, 2, degs) == 1
        assert epsilon(1, 1, 2, degs) == -1
        assert epsilon(1, 2, 2, degs) == -(-1) ** degs[0]
    with pytest.raises(ValueError):
        epsilon(2, 2, 2, (0, 0))


DISPLAYED = {
    2: lambda d: {(2, 1): 1, (1, 1): -1, (1, 2): -(-1) ** d[0]},
    3: lambda d: {(3, 1): 1, (2, 1): -1, (2, 2): 1, (1, 1): 1, (1, 2): (-1) ** d[0],
                  (1, 3): (-1) ** (d[0] + d[1])},
}


@pytest.mark.parametrize("k", [2, 3])
def test_mechanical_signs_match_displayed_equations(k):
    for degs in itertools.product(range(4), repeat=k):
        alg, outer = term_algebra(degs)
        v = square_projection(alg.coderivation, TensorWord(tuple(range(k)), None, True))
        s = suspension_sign(degs)
        got = {ij: s * v[TensorWord((o,), None, True)] for ij, o in outer.items()}
        assert got == DISPLAYED[k](degs)


def test_sign_oracle_small():
    res = sign_oracle_agreement(None, 4)
    assert res.passed and not res.defects
    assert sign_oracle_agreement(None, 6, values=(0,)).passed
    assert sign_oracle_agreement(h.exterior2(), 3).passed


def test_zero_structure_passes():
    basis = GradedBasis.of([("p", 0), ("q", 1)])
    assert check_relations(zero_algebra(basis), 5).passed


@pytest.mark.parametrize("make", [h.dga3, h.exterior, h.exterior2, h.truncated])
def test_dga_fixtures_pass(make):
    alg = make()
    for bound in range(1, alg.max_arity + 3):
        assert check_relations(alg, bound).passed


def test_dga_fixture_is_classical_and_nontrivial():
    degs, d, mu = h.search_dga3()
    assert h.classical_dga_ok(degs, d, mu)
    assert any(d.values())


def test_exterior_over_z2():
    assert check_relations(h.exterior(Z2), 6).passed


def test_leibniz_violation_fails_at_2():
    res = check_relations(h.leibniz_violating(), 4)
    assert not res.passed
    assert {d.location for d in res.defects} == {"k=2"}


def test_nonassociative_fails_at_3_with_associator():
    alg = h.nonassociative()
    res = check_relations(alg, 4)
    assert {d.location for d in res.defects} == {"k=3"}
    mu = alg.m(2)
    for d in res.defects:
        a, b, c = d.entries.entries
        left = Vector(Z)
        for x, cx in mu.table.get((a, b), {}).items():
            for y, cy in mu.table.get((x, c), {}).items():
                left = left + Vector(Z, {TensorWord((y,)): cx * cy})
        right = Vector(Z)
        for x, cx in mu.table.get((b, c), {}).items():
            for y, cy in mu.table.get((a, x), {}).items():
                right = right + Vector(Z, {TensorWord((y,)): cx * cy})
        # the relation reads -(ab)c + a(bc)
        assert d.value == right - left


@pytest.mark.parametrize("make", [h.twisted_dga3, h.twisted_exterior])
def test_twisted_fixtures(make):
    alg = make()
    assert 3 in alg.ops
    assert check_relations(alg, 5).passed


@pytest.mark.parametrize("make", [h.nonassociative, h.leibniz_violating, h.twisted_exterior])
def test_direct_relation_sum_matches_lift(make):
    alg = make()
    for k in range(1, 4):
        for w in alg.grading.words(k, True):
            v = square_projection(alg.coderivation, w)
            s = suspension_sign([alg.basis.degrees[e] for e in w.entries])
            lifted = Vector(alg.ring, {TensorWord(u.entries): s * c for u, c in v.items()})
            assert lifted == relation_sum(alg, w.entries)


def test_relations_with_higher_m_vanish_for_dgas():
    alg = h.dga3()
    for k in range(3, 7):
        for w in alg.grading.words(k, False):
            for (i, j), v in relation_instances(alg, w.entries).items():
                if max(i, k - i + 1) >= 3:
                    assert not v


def test_validation():
    basis = GradedBasis.of([("p", 0)])
    with pytest.raises(ValueError):
        from_dga(basis, None, MultiMap.plain(2, 1, {}))
    with pytest.raises(ValueError):
        AInfAlgebra(basis, Z, {2: MultiMap.plain(2, 0, {(0, 0): {0: 1}})}, 1)
    bad = GradedBasis.of([("p", 0), ("q", 1)])
    with pytest.raises(ValueError):
        from_dga(bad, None, MultiMap.plain(2, 0, {(0, 0): {1: 1}}))
