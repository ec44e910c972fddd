"""A-infinity algebras given by structure constants."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property, partial

from .graded import GradedBasis, Grading, Ring, TensorWord, Vector, Z, suspension_sign
from .report import CheckResult, Defect, chunked, parallel_map
from .tensor import ALGEBRA, Coderivation, MultiMap, zero_map


@dataclass(frozen=True)
class AInfAlgebra:
    """Operations ``m_i`` (unsuspended, ``|m_i| = i - 2``) for ``1 <= i <= max_arity``."""

    basis: GradedBasis
    ring: Ring
    ops: dict
    max_arity: int

    def __post_init__(self):
        ops = {}
        for i, m in self.ops.items():
            if not 1 <= i <= self.max_arity:
                raise ValueError(f"m_{i} outside arity range 1..{self.max_arity}")
            if m.arity != i or m.marked_input is not None or m.target != ALGEBRA:
                raise ValueError(f"m_{i} has the wrong shape")
            if m.degree != i - 2:
                raise ValueError(f"m_{i} must have degree {i - 2}, got {m.degree}")
            m = m.cleaned(self.ring)
            m.check_degrees(self.grading, self.basis.degrees)
            ops[i] = m
        object.__setattr__(self, "ops", ops)

    @property
    def grading(self) -> Grading:
        return Grading(self.basis)

    @property
    def unit(self):
        return self.basis.unit

    def m(self, i: int) -> MultiMap:
        return self.ops.get(i) or zero_map(i, i - 2)

    def suspended(self, i: int) -> MultiMap:
        return suspended_component(self, i)

    @cached_property
    def coderivation(self) -> Coderivation:
        comps = {i: suspended_component(self, i) for i in self.ops}
        return Coderivation(comps, self.grading, self.ring)


def _rescale_by_suspension(m: MultiMap, degrees_of, degree: int) -> MultiMap:
    return m.rescaled(lambda key: suspension_sign(degrees_of(key))).with_degree(degree)


def suspended_component(alg: AInfAlgebra, i: int) -> MultiMap:
    """``D_i`` as structure constants on suspended words."""
    if not 1 <= i <= alg.max_arity:
        raise ValueError(f"arity {i} outside 1..{alg.max_arity}")
    degs = alg.basis.degrees
    return _rescale_by_suspension(alg.m(i), lambda key: [degs[e] for e in key], -1)


def zero_algebra(basis: GradedBasis, ring: Ring = Z, max_arity: int = 2) -> AInfAlgebra:
    return AInfAlgebra(basis, ring, {}, max_arity)


def from_dga(basis: GradedBasis, d: MultiMap | None, mu: MultiMap | None, ring: Ring = Z) -> AInfAlgebra:
    """``m_1 = d``, ``m_2 = mu``, everything higher zero."""
    ops = {}
    if d is not None:
        if d.degree != -1 or d.arity != 1:
            raise ValueError("the differential must be unary of degree -1")
        ops[1] = d
    if mu is not None:
        if mu.degree != 0 or mu.arity != 2:
            raise ValueError("the product must be binary of degree 0")
        ops[2] = mu
    return AInfAlgebra(basis, ring, ops, 2)


def epsilon(i: int, j: int, k: int, degrees) -> int:
    """``(-1)^eps`` for the term ``m_{k-i+1}(a_1,...,m_i(a_j,...),...,a_k)``."""
    if not (1 <= i <= k and 1 <= j <= k - i + 1):
        raise ValueError(f"indices out of range: i={i}, j={j}, k={k}")
    e = i * sum(degrees[:j - 1]) + (j - 1) * (i + 1) + k - i
    return -1 if e % 2 else 1


def relation_instances(alg: AInfAlgebra, entries: tuple) -> dict:
    """Each signed term ``(i, j) -> (-1)^eps m_{k-i+1}(..., m_i(a_j, ...), ...)``.

    Computed directly on unsuspended elements, independent of the lifts.
    """
    k = len(entries)
    degs = [alg.basis.degrees[e] for e in entries]
    out = {}
    for i in range(1, k + 1):
        inner = alg.ops.get(i)
        outer = alg.ops.get(k - i + 1)
        for j in range(1, k - i + 2):
            acc: dict = {}
            if inner is not None and outer is not None:
                sign = epsilon(i, j, k, degs)
                for b, c in inner.table.get(entries[j - 1:j - 1 + i], {}).items():
                    key = entries[:j - 1] + (b,) + entries[j - 1 + i:]
                    for b2, c2 in outer.table.get(key, {}).items():
                        w = TensorWord((b2,))
                        acc[w] = acc.get(w, 0) + sign * c * c2
            out[(i, j)] = Vector._trusted(alg.ring, acc)
    return out


def relation_sum(alg: AInfAlgebra, entries: tuple) -> Vector:
    total = Vector(alg.ring)
    for v in relation_instances(alg, entries).values():
        total = total + v
    return total


def square_projection(D, word: TensorWord) -> Vector:
    """``pr o D o D`` on a single word."""
    return D.project_vector(D(word))


def _relation_defects(alg: AInfAlgebra, words: list) -> list:
    D = alg.coderivation
    out = []
    for w in words:
        v = square_projection(D, w)
        if v:
            sign = suspension_sign([alg.basis.degrees[e] for e in w.entries])
            value = Vector._trusted(alg.ring, {TensorWord(u.entries): sign * c for u, c in v.items()})
            out.append(Defect(f"k={len(w.entries)}", tuple(alg.grading.names(w)), value, w))
    return out


def check_relations(alg: AInfAlgebra, bound: int, exhaustive: bool = True) -> CheckResult:
    """``pr o D^2 = 0`` on every suspended word of length ``<= bound``.

    Defect values are reported unsuspended, i.e. as the signed relation sum.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    defects = []
    for k in range(1, bound + 1):
        words = list(alg.grading.words(k, True))
        for part in parallel_map(partial(_relation_defects, alg), chunked(words, 256)):
            defects.extend(part)
        if defects and not exhaustive:
            break
    return CheckResult(not defects, bound, defects, "algebra")


# ---------------------------------------------------------------------------
# sign oracle


def term_algebra(degrees) -> tuple[AInfAlgebra, dict]:
    """Free algebra on atoms of the given degrees holding exactly the
    two-step composites of the length-k relation, each as its own generator.

    Returns the algebra and a map ``(i, j) -> index`` of the composite
    ``m_{k-i+1}(..., m_i(a_j, ...), ...)``.
    """
    k = len(degrees)
    names = [f"a{l}" for l in range(1, k + 1)]
    degs = list(degrees)
    inner, outer = {}, {}
    for i in range(1, k + 1):
        for j in range(1, k - i + 2):
            names.append(f"T{i}_{j}")
            degs.append(sum(degrees[j - 1:j - 1 + i]) + i - 2)
            inner[(i, j)] = len(names) - 1
    for (i, j), t in list(inner.items()):
        names.append(f"O{i}_{j}")
        degs.append(sum(degrees) + k - 3)
        outer[(i, j)] = len(names) - 1
    tables: dict = {}
    atoms = tuple(range(k))
    for (i, j), t in inner.items():
        tables.setdefault(i, {})[atoms[j - 1:j - 1 + i]] = {t: 1}
        key = atoms[:j - 1] + (t,) + atoms[j - 1 + i:]
        tables.setdefault(k - i + 1, {})[key] = {outer[(i, j)]: 1}
    basis = GradedBasis(tuple(names), tuple(degs))
    ops = {n: MultiMap.plain(n, n - 2, t) for n, t in tables.items()}
    return AInfAlgebra(basis, Z, ops, k), outer


def _term_coefficients(degrees) -> dict:
    alg, outer = term_algebra(degrees)
    v = square_projection(alg.coderivation, TensorWord(tuple(range(len(degrees))), None, True))
    return {ij: v[TensorWord((o,), None, True)] for ij, o in outer.items()}


def degree_tuples(k: int, values, samples: int | None, rng: random.Random):
    if samples is None:
        return list(itertools.product(values, repeat=k))
    return [tuple(rng.choice(values) for _ in range(k)) for _ in range(samples)]


def sign_oracle_agreement(alg: AInfAlgebra | None, k_bound: int, values=(0, 1, 2, 3),
                          samples: dict | None = None, seed: int = 0) -> CheckResult:
    """Compare mechanically derived coefficients against the closed-form sign.

    For every degree tuple (drawn from ``alg``'s basis degrees when given),
    the coefficient of each composite in ``pr D^2`` must equal
    ``(-1)^eps`` times the suspension sign.  ``samples`` maps ``k`` to a
    number of random tuples; other ``k`` are exhaustive.
    """
    if alg is not None:
        values = tuple(sorted(set(alg.basis.degrees)))
    values = tuple(values)
    rng = random.Random(seed)
    defects = []
    for k in range(1, k_bound + 1):
        for degs in degree_tuples(k, values, (samples or {}).get(k), rng):
            coeffs = _term_coefficients(degs)
            s = suspension_sign(degs)
            for (i, j), c in coeffs.items():
                want = s * epsilon(i, j, k, degs)
                if c != want:
                    defects.append(Defect(f"k={k} i={i} j={j}", tuple(map(str, degs)),
                                          Vector(Z, {TensorWord(()): c - want})))
    return CheckResult(not defects, k_bound, defects, "epsilon")
