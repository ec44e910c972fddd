"""Hochschild cochains as coderivations, their differential, and the
cup product, circle product, bracket and Connes operator.

Cochains store unsuspended components ``g_j: A^j -> M``; ``degree`` is the
degree of the lifted coderivation, so ``|g_j| = degree + j - 1``.  Only the
differential has signs fixed by the lifting formalism.  For the operations
the default mode works over Z/2; ``signed=True`` evaluates the same
compositions on suspended components with Koszul signs and is experimental.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .bimod import AInfBimodule
from .graded import Grading, Identity, TensorWord, Vector, apply_tensor_of_maps, koszul_sign, suspension_sign
from .tensor import MODULE, Coderivation, MultiMap


@dataclass(frozen=True)
class HochschildCochain:
    bimodule: AInfBimodule
    degree: int
    components: dict
    values: str = "M"

    def __post_init__(self):
        comps = {}
        g = Grading(self.bimodule.algebra.basis, self.bimodule.module)
        for j, c in self.components.items():
            if c.arity != j or c.marked_input is not None or c.target != MODULE:
                raise ValueError(f"component {j} has the wrong shape")
            if c.degree != self.degree + j - 1:
                raise ValueError(f"component {j} must have degree {self.degree + j - 1}, got {c.degree}")
            c = c.cleaned(self.ring)
            c.check_degrees(g, self.bimodule.module.degrees)
            if c.table:
                comps[j] = c
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    @property
    def ring(self):
        return self.bimodule.ring

    @property
    def algebra(self):
        return self.bimodule.algebra

    @property
    def max_arity(self) -> int:
        return max(self.components, default=0)

    @property
    def grading(self) -> Grading:
        return Grading(self.algebra.basis, self.bimodule.module)

    def is_zero(self) -> bool:
        return not self.components

    def suspended(self, j: int) -> MultiMap:
        degs = self.algebra.basis.degrees
        c = self.components.get(j) or MultiMap(j, self.degree + j - 1, {}, None, MODULE)
        return c.rescaled(lambda key: suspension_sign([degs[e] for e in key])).with_degree(self.degree)

    @cached_property
    def lifted(self) -> Coderivation:
        comps = {j: self.suspended(j) for j in self.components}
        return Coderivation(comps, self.grading, self.ring, MODULE)


def zero_cochain(bm: AInfBimodule, degree: int, values: str = "M") -> HochschildCochain:
    return HochschildCochain(bm, degree, {}, values)


def _unsuspend_table(table: dict, degs, sign_fn=suspension_sign) -> dict:
    out = {}
    for key, val in table.items():
        s = sign_fn([degs[e] for e in key])
        out[key] = {b: s * c for b, c in val.items()}
    return out


def cochain_from_suspended(fn, bm: AInfBimodule, degree: int, bound: int, values: str = "M",
                           source_grading: Grading | None = None) -> HochschildCochain:
    """Cochain whose suspended components are ``pr o fn`` on words up to ``bound``."""
    g = source_grading or Grading(bm.algebra.basis, bm.module)
    degs = bm.algebra.basis.degrees
    comps = {}
    for j in range(bound + 1):
        table = {}
        for w in g.words(j, True):
            out = {}
            for u, c in fn(w).items():
                if len(u.entries) == 1 and u.mark == 0:
                    out[u.entries[0]] = c
            if out:
                table[w.entries] = out
        if table:
            comps[j] = MultiMap(j, degree + j - 1, _unsuspend_table(table, degs), None, MODULE)
    return HochschildCochain(bm, degree, comps, values)


def delta(f: HochschildCochain, bound: int | None = None) -> HochschildCochain:
    """``D^M o f - (-1)^|f| f o D`` (components up to ``bound``)."""
    bm = f.bimodule
    if bound is None:
        bound = f.max_arity + max(bm.max_arity, bm.algebra.max_arity) - 1
    DM, D, ft = bm.differential, bm.algebra.coderivation, f.lifted
    s = -1 if f.degree % 2 else 1

    def fn(w):
        return DM.apply(ft(w)) - ft.apply(D(w)).scale(s)

    return cochain_from_suspended(fn, bm, f.degree - 1, bound, f.values)


def random_cochain(bm: AInfBimodule, degree: int, max_arity: int, rng: random.Random,
                   density: float = 0.5, values: str = "M") -> HochschildCochain:
    g = Grading(bm.algebra.basis, bm.module)
    mdeg = bm.module.degrees
    comps = {}
    for j in range(max_arity + 1):
        table = {}
        for w in g.words(j, False):
            target = g.degree(w) + degree + j - 1
            out = {b: bm.ring.random(rng) for b, d in enumerate(mdeg)
                   if d == target and rng.random() < density}
            if out:
                table[w.entries] = out
        comps[j] = MultiMap(j, degree + j - 1, table, None, MODULE)
    return HochschildCochain(bm, degree, comps, values)


# ---------------------------------------------------------------------------
# operations on cochains with values in A


def _require_mode(ring, signed: bool):
    if not signed and not (ring.kind == "Zmod" and ring.p == 2):
        raise ValueError("signs are only defined over Z/2; pass signed=True for the experimental mode")


def _require_values(f: HochschildCochain, tag: str):
    if f.values != tag:
        raise ValueError(f"cochain must take values in {tag}, not {f.values}")


class _Forget:
    """Block wrapper forgetting the marked output of a cochain component."""

    def __init__(self, m: MultiMap):
        self.arity, self.degree, self.marked_input, self.target = m.arity, m.degree, None, "algebra"
        self._m = m

    def evaluate(self, inputs):
        return self._m.evaluate(inputs)


def _components(f: HochschildCochain, signed: bool) -> dict:
    if signed:
        return {j: _Forget(f.suspended(j)) for j in f.components}
    return {j: _Forget(c) for j, c in f.components.items()}


def _finish(acc_tables: dict, f: HochschildCochain, degree: int, signed: bool) -> HochschildCochain:
    degs = f.algebra.basis.degrees
    comps = {}
    for j, table in acc_tables.items():
        if signed:
            table = _unsuspend_table(table, degs)
        comps[j] = MultiMap(j, degree + j - 1, table, None, MODULE)
    return HochschildCochain(f.bimodule, degree, comps, f.values)


def _accumulate(tables: dict, word: TensorWord, vec: Vector):
    for u, c in vec.items():
        slot = tables.setdefault(len(word.entries), {}).setdefault(word.entries, {})
        slot[u.entries[0]] = slot.get(u.entries[0], 0) + c


def cup(f: HochschildCochain, g: HochschildCochain, signed: bool = False) -> HochschildCochain:
    """``sum m_{k+m+q+2} o (id^k (x) f_l (x) id^m (x) g_p (x) id^q)``."""
    _require_values(f, "A")
    _require_values(g, "A")
    if f.bimodule != g.bimodule:
        raise ValueError("cochains live over different bimodules")
    alg = f.algebra
    _require_mode(alg.ring, signed)
    fc, gc = _components(f, signed), _components(g, signed)
    outer = {n: (alg.suspended(n) if signed else alg.m(n)) for n in alg.ops}
    grading = Grading(alg.basis)
    top = f.max_arity + g.max_arity + alg.max_arity - 2
    tables: dict = {}
    for j in range(top + 1):
        for w in grading.words(j, signed):
            acc = Vector(alg.ring)
            for l, F in fc.items():
                for p, G in gc.items():
                    rest = j - l - p
                    for k in range(rest + 1):
                        for m in range(rest - k + 1):
                            q = rest - k - m
                            op = outer.get(k + m + q + 2)
                            if op is None:
                                continue
                            blocks = [Identity(k), F, Identity(m), G, Identity(q)]
                            inner = apply_tensor_of_maps(blocks, w, grading, alg.ring)
                            for u, c in inner.items():
                                v = apply_tensor_of_maps([op], TensorWord(u.entries, None, signed), grading, alg.ring)
                                acc = acc + v.scale(c)
            if acc:
                _accumulate(tables, w, acc)
    return _finish(tables, f, f.degree + g.degree - 1, signed)


def circle(f: HochschildCochain, g: HochschildCochain, signed: bool = False) -> HochschildCochain:
    """``sum f_{k+1+m} o (id^k (x) g_l (x) id^m)``."""
    _require_values(f, "A")
    _require_values(g, "A")
    alg = f.algebra
    _require_mode(alg.ring, signed)
    fc, gc = _components(f, signed), _components(g, signed)
    grading = Grading(alg.basis)
    top = f.max_arity + g.max_arity - 1
    tables: dict = {}
    for j in range(top + 1):
        for w in grading.words(j, signed):
            acc = Vector(alg.ring)
            for l, G in gc.items():
                for k in range(j - l + 1):
                    m = j - l - k
                    F = fc.get(k + 1 + m)
                    if F is None:
                        continue
                    inner = apply_tensor_of_maps([Identity(k), G, Identity(m)], w, grading, alg.ring)
                    for u, c in inner.items():
                        v = apply_tensor_of_maps([F], TensorWord(u.entries, None, signed), grading, alg.ring)
                        acc = acc + v.scale(c)
            if acc:
                _accumulate(tables, w, acc)
    return _finish(tables, f, f.degree + g.degree, signed)


def add(f: HochschildCochain, g: HochschildCochain, scale=1) -> HochschildCochain:
    """``f + scale * g`` for cochains of equal degree."""
    if f.degree != g.degree or f.bimodule != g.bimodule:
        raise ValueError("cochains must share degree and bimodule")
    comps = {}
    for j in set(f.components) | set(g.components):
        table: dict = {}
        for src, s in ((f.components.get(j), 1), (g.components.get(j), scale)):
            if src is None:
                continue
            for key, out in src.table.items():
                slot = table.setdefault(key, {})
                for b, c in out.items():
                    slot[b] = slot.get(b, 0) + s * c
        comps[j] = MultiMap(j, f.degree + j - 1, table, None, MODULE)
    return HochschildCochain(f.bimodule, f.degree, comps, f.values)


def bracket(f: HochschildCochain, g: HochschildCochain, signed: bool = False) -> HochschildCochain:
    """``f o g - (-1)^{|f||g|} g o f``."""
    s = koszul_sign(f.degree, g.degree)
    return add(circle(f, g, signed), circle(g, f, signed), -s)


def connes_b(f: HochschildCochain, signed: bool = False) -> HochschildCochain:
    """Cyclic sum with the unit in the last evaluation slot.

    ``(B f)_{j-1}(a_1, ..., a_{j-1})(a_j) = sum_t f_j(a_{1+t}, ..., a_t)(1)``,
    rotations by ``t``; the signed mode uses the Koszul sign of the rotation.
    """
    _require_values(f, "A*")
    alg = f.algebra
    _require_mode(alg.ring, signed)
    if alg.basis.unit is None:
        raise ValueError("the Connes operator needs a designated unit")
    unit = alg.basis.index(alg.basis.unit)
    degs = alg.basis.degrees
    n = len(alg.basis)
    comps = {}
    for j, fj in f.components.items():
        if j == 0:
            continue
        table: dict = {}
        for head in product(range(n), repeat=j - 1):
            out = {}
            for e in range(n):
                x = head + (e,)
                total = 0
                for t in range(j):
                    rot = x[t:] + x[:t]
                    c = fj.table.get(rot, {}).get(unit, 0)
                    if c and signed:
                        c *= koszul_sign(sum(degs[i] for i in x[:t]), sum(degs[i] for i in x[t:]))
                    total += c
                if total:
                    out[e] = total
            if out:
                table[head] = out
        comps[j - 1] = MultiMap(j - 1, f.degree + j - 1, table, None, MODULE)
    return HochschildCochain(f.bimodule, f.degree + 1, comps, f.values)


def connes_b_squared(f: HochschildCochain, signed: bool = False) -> HochschildCochain:
    """``B(B(f))``, reported only; nothing is asserted about it."""
    return connes_b(connes_b(f, signed), signed)
