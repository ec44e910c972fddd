"""Morphisms of A-infinity bimodules ``{f_{k,l}}`` and the induced map on cochains."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, partial

from .ainf import AInfAlgebra, _rescale_by_suspension, degree_tuples
from .bimod import AInfBimodule, marked_degrees
from .graded import GradedBasis, TensorWord, Vector, Z, suspension_sign
from .hoch import HochschildCochain, cochain_from_suspended
from .report import CheckResult, Defect, chunked, parallel_map
from .tensor import MODULE, BicomoduleMap, Coderivation, MultiMap, marked_components


@dataclass(frozen=True)
class BimoduleMorphism:
    """Unsuspended ``f_{k,l}: A^k (x) M (x) A^l -> N`` of degree ``k + l``."""

    source: AInfBimodule
    target: AInfBimodule
    ops: dict
    max_arity: int

    def __post_init__(self):
        if self.source.algebra is not self.target.algebra and self.source.algebra != self.target.algebra:
            raise ValueError("source and target must be bimodules over the same algebra")
        ops = {}
        for (k, l), f in self.ops.items():
            if k < 0 or l < 0 or k + l + 1 > self.max_arity:
                raise ValueError(f"f_{k},{l} outside arity bound {self.max_arity}")
            if f.shape != (k, l) or f.target != MODULE:
                raise ValueError(f"f_{k},{l} has the wrong shape")
            if f.degree != k + l:
                raise ValueError(f"f_{k},{l} must have degree {k + l}, got {f.degree}")
            f = f.cleaned(self.ring)
            f.check_degrees(self.source.grading, self.target.module.degrees)
            ops[(k, l)] = f
        object.__setattr__(self, "ops", ops)

    @property
    def algebra(self) -> AInfAlgebra:
        return self.source.algebra

    @property
    def ring(self):
        return self.source.ring

    def f(self, k: int, l: int) -> MultiMap:
        return self.ops.get((k, l)) or MultiMap.bimodule(k, l, k + l)

    def suspended(self, k: int, l: int) -> MultiMap:
        g = self.source.grading
        return _rescale_by_suspension(self.f(k, l), lambda key: marked_degrees(g, key, k), 0)

    @cached_property
    def lifted(self) -> BicomoduleMap:
        comps = {kl: self.suspended(*kl) for kl in self.ops}
        return BicomoduleMap(comps, self.source.grading, self.ring)


def from_dg_map(source: AInfBimodule, target: AInfBimodule, f: MultiMap) -> BimoduleMorphism:
    if f.shape != (0, 0) or f.degree != 0:
        raise ValueError("a DG map must be a degree-0 map M -> N")
    return BimoduleMorphism(source, target, {(0, 0): f}, max(source.max_arity, target.max_arity))


def identity_morphism(bm: AInfBimodule) -> BimoduleMorphism:
    table = {(i,): {i: 1} for i in range(len(bm.module))}
    return BimoduleMorphism(bm, bm, {(0, 0): MultiMap.bimodule(0, 0, 0, table)}, bm.max_arity)


def desuspend_marked(comps: dict, grading, degree_shift: int) -> dict:
    """Unsuspended ``(k, l)`` components from suspended ones."""
    out = {}
    for (k, l), c in comps.items():
        m = _rescale_by_suspension(c, lambda key, k=k: marked_degrees(grading, key, k), k + l + degree_shift)
        out[(k, l)] = m
    return out


def compose(g: BimoduleMorphism, f: BimoduleMorphism) -> BimoduleMorphism:
    """``g o f`` through the lifts; components re-extracted from the composite."""
    if f.target != g.source:
        raise ValueError("morphisms are not composable")
    bound = f.max_arity + g.max_arity - 2
    G, F = g.lifted, f.lifted
    comps = marked_components(lambda w: G.apply(F(w)), f.source.grading, bound, 0)
    ops = desuspend_marked(comps, f.source.grading, 0)
    return BimoduleMorphism(f.source, g.target, ops, bound + 1)


def _morphism_defects(mor: BimoduleMorphism, words: list) -> list:
    F, DM, DN = mor.lifted, mor.source.differential, mor.target.differential
    g = mor.source.grading
    out = []
    for w in words:
        v = F.project_vector(DM(w)) - DN.project_vector(F(w))
        if v:
            sign = suspension_sign(g.entry_degrees(TensorWord(w.entries, w.mark, False)))
            value = Vector._trusted(mor.ring, {TensorWord(u.entries, 0): sign * c for u, c in v.items()})
            loc = f"({w.mark},{len(w.entries) - w.mark - 1})"
            out.append(Defect(loc, tuple(g.names(w)), value, w))
    return out


def check_morphism(mor: BimoduleMorphism, bound: int, exhaustive: bool = True) -> CheckResult:
    """``F o D^M = D^N o F`` after projection, on marked words with at most
    ``bound`` algebra factors.  Defects are ``S * (lhs - rhs)`` unsuspended."""
    defects = []
    for n in range(bound + 1):
        words = list(mor.source.grading.marked_words(n, True))
        for part in parallel_map(partial(_morphism_defects, mor), chunked(words, 256)):
            defects.extend(part)
        if defects and not exhaustive:
            break
    return CheckResult(not defects, bound, defects, "morphism")


# ---------------------------------------------------------------------------
# signs


def epsilon_lhs(i: int, j: int, n: int, degrees) -> int:
    """``(-1)^eps`` for an inner operation on ``i`` inputs starting at ``a_j``,
    inside an outer ``f`` on ``n = k + l + 1`` slots."""
    if not (1 <= i <= n and 1 <= j <= n - i + 1):
        raise ValueError(f"indices out of range: i={i}, j={j}, n={n}")
    e = i * sum(degrees[:j - 1]) + (j - 1) * (i + 1) + n - i
    return -1 if e % 2 else 1


def epsilon_prime(i: int, j: int, degrees) -> int:
    """``(-1)^eps'`` for ``c(..., f(a_j, ...), ...)`` with ``f`` on ``i`` inputs."""
    e = (i + 1) * (j + 1 + sum(degrees[:j - 1]))
    return -1 if e % 2 else 1


def term_morphism(degrees, k: int) -> tuple[BimoduleMorphism, dict, dict]:
    """Free bimodules and morphism whose generators are the composites of one
    relation instance; ``degrees[k]`` is the module element's degree."""
    n = len(degrees)
    l = n - k - 1
    a_names, a_degs = [], []
    a_index = {}
    for r in range(n):
        if r != k:
            a_index[r] = len(a_names)
            a_names.append(f"a{r + 1}")
            a_degs.append(degrees[r])
    m_names, m_degs = ["m"], [degrees[k]]
    n_names, n_degs = [], []
    m_tabs: dict = {}
    b_tabs: dict = {}
    f_tabs: dict = {}
    c_tabs: dict = {}
    lhs, rhs = {}, {}

    def atom(r):
        return 0 if r == k else a_index[r]

    total = sum(degrees) + n - 2
    for i in range(1, n + 1):
        for j in range(1, n - i + 2):
            lo, hi = j - 1, j - 1 + i
            block = tuple(atom(r) for r in range(lo, hi))
            before = tuple(atom(r) for r in range(lo))
            after = tuple(atom(r) for r in range(hi, n))
            inner_deg = sum(degrees[lo:hi]) + i - 2
            if lo <= k < hi:
                m_names.append(f"b{i}_{j}")
                m_degs.append(inner_deg)
                t = len(m_names) - 1
                b_tabs.setdefault((k - lo, hi - k - 1), {})[block] = {t: 1}
                outer_shape = (lo, n - hi)
                # right side: f on the block, then c outside
                n_names.append(f"f{i}_{j}")
                n_degs.append(inner_deg + 1)
                fi = len(n_names) - 1
                f_tabs.setdefault((k - lo, hi - k - 1), {})[block] = {fi: 1}
                n_names.append(f"C{i}_{j}")
                n_degs.append(total)
                rhs[(i, j)] = len(n_names) - 1
                c_tabs.setdefault(outer_shape, {})[before + (fi,) + after] = {rhs[(i, j)]: 1}
            else:
                a_names.append(f"T{i}_{j}")
                a_degs.append(inner_deg)
                t = len(a_names) - 1
                m_tabs.setdefault(i, {})[block] = {t: 1}
                outer_shape = (k if k < lo else k - i + 1, None)
                outer_shape = (outer_shape[0], n - i - outer_shape[0])
            n_names.append(f"F{i}_{j}")
            n_degs.append(total)
            lhs[(i, j)] = len(n_names) - 1
            f_tabs.setdefault(outer_shape, {})[before + (t,) + after] = {lhs[(i, j)]: 1}
    A = AInfAlgebra(GradedBasis(tuple(a_names), tuple(a_degs)), Z,
                    {i: MultiMap.plain(i, i - 2, t) for i, t in m_tabs.items()}, n)
    Mb = GradedBasis(tuple(m_names), tuple(m_degs))
    Nb = GradedBasis(tuple(n_names), tuple(n_degs))
    M = AInfBimodule(A, Mb, {kl: MultiMap.bimodule(*kl, sum(kl) - 1, t) for kl, t in b_tabs.items()}, n)
    N = AInfBimodule(A, Nb, {kl: MultiMap.bimodule(*kl, sum(kl) - 1, t) for kl, t in c_tabs.items()}, n)
    mor = BimoduleMorphism(M, N, {kl: MultiMap.bimodule(*kl, sum(kl), t) for kl, t in f_tabs.items()}, n)
    return mor, lhs, rhs


def _morphism_term_coefficients(degrees, k):
    mor, lhs, rhs = term_morphism(degrees, k)
    n = len(degrees)
    entries = tuple(0 if r == k else (r if r < k else r - 1) for r in range(n))
    w = TensorWord(entries, k, True)
    left = mor.lifted.project_vector(mor.source.differential(w))
    right = mor.target.differential.project_vector(mor.lifted(w))
    return ({ij: left[TensorWord((x,), 0, True)] for ij, x in lhs.items()},
            {ij: right[TensorWord((x,), 0, True)] for ij, x in rhs.items()})


def morphism_sign_oracle(n_bound: int, values=(0, 1, 2, 3), samples: dict | None = None,
                         seed: int = 0) -> CheckResult:
    """Mechanical coefficients of both sides against ``eps`` and ``eps'``,
    for every position of the module element and ``k + l + 1 <= n_bound``."""
    rng = random.Random(seed)
    defects = []
    for n in range(1, n_bound + 1):
        for degs in degree_tuples(n, tuple(values), (samples or {}).get(n), rng):
            s = suspension_sign(degs)
            for k in range(n):
                lhs, rhs = _morphism_term_coefficients(degs, k)
                for (i, j), c in lhs.items():
                    want = s * epsilon_lhs(i, j, n, degs)
                    if c != want:
                        defects.append(Defect(f"lhs n={n} k={k} i={i} j={j}", tuple(map(str, degs)),
                                              Vector(Z, {TensorWord(()): c - want})))
                for (i, j), c in rhs.items():
                    want = s * epsilon_prime(i, j, degs)
                    if c != want:
                        defects.append(Defect(f"rhs n={n} k={k} i={i} j={j}", tuple(map(str, degs)),
                                              Vector(Z, {TensorWord(()): c - want})))
    return CheckResult(not defects, n_bound, defects, "epsilon-prime")


# ---------------------------------------------------------------------------
# induced map on cochains


def pushforward(mor: BimoduleMorphism, f: HochschildCochain, bound: int | None = None) -> HochschildCochain:
    """``F#(f) = F o f`` for a cochain with values in the source bimodule,
    components up to ``bound`` (default: all of them)."""
    if f.bimodule != mor.source:
        raise ValueError("cochain does not take values in the morphism's source")
    F = mor.lifted
    ft = f.lifted
    if bound is None:
        bound = f.max_arity + mor.max_arity - 1
    grading = mor.source.grading

    def comp(word):
        return F.apply(ft(word))

    return cochain_from_suspended(comp, mor.target, f.degree, bound, values=f.values,
                                  source_grading=grading)


