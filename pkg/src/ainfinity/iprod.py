"""Infinity inner products: bimodule morphisms ``A -> A*`` written as pairings
``<a_1, ..., a_{k+l+1}, a'>_{k,l}``."""

from __future__ import annotations

from dataclasses import dataclass

from .ainf import AInfAlgebra
from .bimod import dual_self_bimodule, self_bimodule
from .diagrams import LEAF, Diagram
from .graded import GradedBasis, TensorWord, Vector, Z, suspension_sign
from .morph import BimoduleMorphism, check_morphism
from .report import CheckResult, Defect
from .tensor import SCALAR, MultiMap


@dataclass(frozen=True)
class InnerProduct:
    """Scalar maps ``<...>_{k,l}`` on ``k + l + 2`` inputs, of degree ``k + l``."""

    algebra: AInfAlgebra
    ops: dict
    max_arity: int

    def __post_init__(self):
        ops = {}
        for (k, l), p in self.ops.items():
            if k < 0 or l < 0 or k + l + 1 > self.max_arity:
                raise ValueError(f"<>_{k},{l} outside arity bound {self.max_arity}")
            if p.arity != k + l + 2 or p.target != SCALAR:
                raise ValueError(f"<>_{k},{l} must be a scalar map on {k + l + 2} inputs")
            if p.degree != k + l:
                raise ValueError(f"<>_{k},{l} must have degree {k + l}, got {p.degree}")
            p = MultiMap(p.arity, p.degree, p.table, None, SCALAR).cleaned(self.algebra.ring)
            p.check_degrees(self.algebra.grading, None)
            ops[(k, l)] = p
        object.__setattr__(self, "ops", ops)

    @property
    def ring(self):
        return self.algebra.ring


def to_morphism(ip: InnerProduct) -> BimoduleMorphism:
    """``f_{k,l}(x)(a') = (-1)^{|a'|} <x, a'>_{k,l}``."""
    alg = ip.algebra
    degs = alg.basis.degrees
    ops = {}
    for (k, l), p in ip.ops.items():
        table: dict = {}
        for key, c in p.table.items():
            x, e = key[:-1], key[-1]
            table.setdefault(x, {})[e] = (-1) ** (degs[e] % 2) * c
        ops[(k, l)] = MultiMap.bimodule(k, l, k + l, table)
    return BimoduleMorphism(self_bimodule(alg), dual_self_bimodule(alg), ops, ip.max_arity)


def from_morphism(mor: BimoduleMorphism) -> InnerProduct:
    alg = mor.algebra
    if mor.source != self_bimodule(alg) or mor.target != dual_self_bimodule(alg):
        raise ValueError("an inner product is a morphism from A to A*")
    degs = alg.basis.degrees
    ops = {}
    for (k, l), f in mor.ops.items():
        table = {}
        for x, out in f.table.items():
            for e, c in out.items():
                table[x + (e,)] = (-1) ** (degs[e] % 2) * c
        ops[(k, l)] = MultiMap(k + l + 2, k + l, table, None, SCALAR)
    return InnerProduct(alg, ops, mor.max_arity)


def pairing_text(names, k: int) -> str:
    parts = list(names)
    parts[k] = f"[{parts[k]}]"
    return "<" + ",".join(parts) + ">"


def check_inner_product(ip: InnerProduct, bound: int, exhaustive: bool = True) -> CheckResult:
    """Delegates to the morphism check; defects are rewritten as pairings
    ``<a_1, ..., [a_{k+1}], ..., a'>`` with their value."""
    res = check_morphism(to_morphism(ip), bound, exhaustive)
    alg = ip.algebra
    degs = alg.basis.degrees
    defects = []
    for d in res.defects:
        k = d.entries.mark
        l = len(d.entries.entries) - k - 1
        for u, c in sorted(d.value.items(), key=lambda t: t[0].entries):
            e = u.entries[0]
            names = d.word + (alg.basis.names[e],)
            value = Vector._trusted(alg.ring, {TensorWord(()): (-1) ** (degs[e] % 2) * c})
            defects.append(Defect(f"<>_{k},{l}", tuple(names), value, d.entries))
    return CheckResult(res.passed, bound, defects, "iprod")


# ---------------------------------------------------------------------------
# the relation, term by term


@dataclass(frozen=True)
class RelationTerm:
    """``<...>_{r,s}`` with one multiplication; slots hold 1-based input positions."""

    r: int
    s: int
    slots: tuple
    sign: int | None = None

    def text(self, labels) -> str:
        parts = []
        for slot in self.slots:
            if len(slot) == 1:
                parts.append(labels[slot[0] - 1])
            else:
                parts.append(f"m{len(slot)}(" + ",".join(labels[p - 1] for p in slot) + ")")
        body = "<" + ",".join(parts) + f">_{{{self.r},{self.s}}}"
        if self.sign is None:
            return body
        return ("+" if self.sign > 0 else "-") + body

    def diagram(self) -> Diagram:
        return Diagram(self.r, self.s, tuple(LEAF if len(x) == 1 else (LEAF,) * len(x) for x in self.slots))


def _raw_terms(k: int, l: int) -> list[RelationTerm]:
    n = k + l + 2
    left, right = k + 1, n
    out = []
    for start in range(1, n + 1):
        for b in range(2, n):
            block = [(start - 1 + t) % n + 1 for t in range(b)]
            if left in block and right in block:
                continue
            if right in block:
                rest = [p for p in range(1, n + 1) if p not in block]
                rest = sorted(rest)
                slots = [(p,) for p in rest] + [tuple(block)]
            else:
                slots = []
                for p in range(1, n + 1):
                    if p == block[0]:
                        slots.append(tuple(block))
                    elif p not in block:
                        slots.append((p,))
            r = next(i for i, x in enumerate(slots) if left in x)
            out.append(RelationTerm(r, len(slots) - r - 2, tuple(slots)))
    return out


def validate_term(term: RelationTerm, k: int, l: int) -> list[str]:
    """Independent re-check of the structural conditions; returns violations."""
    n = k + l + 2
    problems = []
    flat = [p for slot in term.slots for p in slot]
    if sorted(flat) != list(range(1, n + 1)):
        problems.append("inputs are not used exactly once")
    elif not any(flat[i:] + flat[:i] == list(range(1, n + 1)) for i in range(n)):
        problems.append("cyclic order not preserved")
    multi = [x for x in term.slots if len(x) > 1]
    if len(multi) != 1 or not 2 <= len(multi[0]) <= n - 1:
        problems.append("exactly one multiplication expected")
    if n not in term.slots[-1]:
        problems.append("last input not in the last slot")
    if any(k + 1 in x and n in x for x in multi):
        problems.append("special inputs multiplied together")
    idx = next((i for i, x in enumerate(term.slots) if k + 1 in x), None)
    if idx != term.r or term.r + term.s + 2 != len(term.slots):
        problems.append("wrong (r, s)")
    return problems


def _indicator_coefficients(k: int, l: int, terms, degrees) -> tuple[dict, dict]:
    """Contribution of each term and each ``d a_i`` term to the morphism
    relation on ``(a_1, ..., [a_{k+1}], ..., a_{n-1})`` paired with ``a_n``."""
    n = k + l + 2
    names = [f"a{i}" for i in range(1, n + 1)]
    degs = list(degrees)
    m_tabs: dict = {}
    for i in range(1, n + 1):
        names.append(f"da{i}")
        degs.append(degrees[i - 1] - 1)
        m_tabs.setdefault(1, {})[(i - 1,)] = {len(names) - 1: 1}
    keys = {}
    for t in terms:
        block = next(x for x in t.slots if len(x) > 1)
        names.append("m(" + ",".join(map(str, block)) + ")")
        degs.append(sum(degrees[p - 1] for p in block) + len(block) - 2)
        m_tabs.setdefault(len(block), {})[tuple(p - 1 for p in block)] = {len(names) - 1: 1}
        keys[t] = (t.r, t.s), tuple(len(names) - 1 if len(x) > 1 else x[0] - 1 for x in t.slots)
    for i in range(1, n + 1):
        key = tuple(n + i - 1 if p == i else p - 1 for p in range(1, n + 1))
        keys[("d", i)] = (k, l), key
    basis = GradedBasis(tuple(names), tuple(degs))
    alg = AInfAlgebra(basis, Z, {j: MultiMap.plain(j, j - 2, t) for j, t in m_tabs.items()}, n)
    word = TensorWord(tuple(range(n - 1)), k, True)
    sign = suspension_sign(degrees[:n - 1])
    out = {}
    for t, (shape, key) in keys.items():
        ip = InnerProduct(alg, {shape: MultiMap(len(key), sum(shape), {key: 1}, None, SCALAR)}, n)
        mor = to_morphism(ip)
        v = mor.lifted.project_vector(mor.source.differential(word)) - \
            mor.target.differential.project_vector(mor.lifted(word))
        c = v[TensorWord((n - 1,), 0, True)] * sign
        out[t] = c
    return out


def relation_terms(k: int, l: int, labels=None, *, signed: bool = False, degrees=None) -> list[RelationTerm]:
    """Right-hand-side terms of the pairing relation for ``<...>_{k,l}``.

    Each term has one multiplication on a cyclically consecutive block of
    inputs, never containing both special inputs.  With ``signed=True`` the
    sign is read off the morphism relation with indicator pairings on a
    free algebra, normalised so that ``<d a_1, ...>_{k,l}`` has sign ``+1``.
    """
    terms = _raw_terms(k, l)
    if labels is not None and len(labels) != k + l + 2:
        raise ValueError(f"need {k + l + 2} labels")
    if not signed:
        return terms
    n = k + l + 2
    if degrees is None:
        degrees = [1 - k - l] + [0] * (n - 1)
    if len(degrees) != n or sum(degrees) != 1 - k - l:
        raise ValueError(f"degrees must have length {n} and sum {1 - k - l}")
    coeffs = _indicator_coefficients(k, l, terms, degrees)
    base = coeffs[("d", 1)]
    if base not in (1, -1):
        raise ArithmeticError(f"unexpected coefficient {base} for the first differential term")
    return [RelationTerm(t.r, t.s, t.slots, -coeffs[t] * base) for t in terms]


def differential_signs(k: int, l: int, degrees) -> list[int]:
    """Normalised signs of ``<..., d a_i, ...>_{k,l}`` read off the relation."""
    if len(degrees) != k + l + 2 or sum(degrees) != 1 - k - l:
        raise ValueError(f"degrees must have length {k + l + 2} and sum {1 - k - l}")
    coeffs = _indicator_coefficients(k, l, [], degrees)
    base = coeffs[("d", 1)]
    return [coeffs[("d", i)] * base for i in range(1, k + l + 3)]
