"""Tensor coalgebra, the bicomodule T^W V, and the four lifting constructions.

All lifts share one engine, :func:`_apply_blocks`: a lifted map is a sum over
consecutive blocks of the input word, each block replaced by one component
with the Koszul sign of the component jumping over everything to its left.
Which component (if any) a block gets is what distinguishes a coderivation,
a bicomodule coderivation, a module differential, and a comodule map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .graded import Grading, Ring, TensorWord, Vector, koszul_sign

ALGEBRA, MODULE, SCALAR = "algebra", "module", "scalar"


@dataclass(frozen=True)
class MultiMap:
    """A multilinear map given by structure constants.

    ``table`` maps input index tuples to ``{output index: coefficient}`` (or to
    a bare coefficient when ``target == "scalar"``).  ``marked_input`` is the
    position ``k`` of the bimodule argument for ``(k, l)``-shaped maps.
    """

    arity: int
    degree: int
    table: Mapping = field(default_factory=dict)
    marked_input: int | None = None
    target: str = ALGEBRA

    @classmethod
    def plain(cls, n, degree, table=None, target=ALGEBRA):
        return cls(n, degree, dict(table or {}), None, target)

    @classmethod
    def bimodule(cls, k, l, degree, table=None, target=MODULE):
        return cls(k + l + 1, degree, dict(table or {}), k, target)

    @property
    def shape(self):
        if self.marked_input is None:
            return self.arity
        return (self.marked_input, self.arity - self.marked_input - 1)

    def evaluate(self, inputs: tuple):
        if self.target == SCALAR:
            return self.table.get(inputs, 0)
        return self.table.get(inputs, {})

    def cleaned(self, ring: Ring) -> "MultiMap":
        """Copy with coefficients normalized and zeros dropped."""
        table = {}
        for key, val in self.table.items():
            if self.target == SCALAR:
                val = ring.normalize(val)
                if val != 0:
                    table[tuple(key)] = val
            else:
                out = {b: ring.normalize(c) for b, c in val.items()}
                out = {b: c for b, c in out.items() if c != 0}
                if out:
                    table[tuple(key)] = out
        return MultiMap(self.arity, self.degree, table, self.marked_input, self.target)

    def rescaled(self, factor: Callable[[tuple], int]) -> "MultiMap":
        table = {}
        for key, val in self.table.items():
            f = factor(key)
            if self.target == SCALAR:
                table[key] = f * val
            else:
                table[key] = {b: f * c for b, c in val.items()}
        return MultiMap(self.arity, self.degree, table, self.marked_input, self.target)

    def with_degree(self, degree: int) -> "MultiMap":
        return MultiMap(self.arity, degree, self.table, self.marked_input, self.target)

    def is_zero(self) -> bool:
        if self.target == SCALAR:
            return all(v == 0 for v in self.table.values())
        return all(c == 0 for v in self.table.values() for c in v.values())

    def check_degrees(self, in_grading: Grading, out_degrees) -> None:
        """Raise if some stored output has the wrong degree."""
        for key, val in self.table.items():
            word = TensorWord(tuple(key), self.marked_input, False)
            d = in_grading.degree(word) + self.degree
            if self.target == SCALAR:
                if val != 0 and d != 0:
                    raise ValueError(f"scalar output of {key} has degree {d}, expected 0")
                continue
            for b, c in val.items():
                if c != 0 and out_degrees[b] != d:
                    raise ValueError(
                        f"output {b} of input {key} has degree {out_degrees[b]}, expected {d}"
                    )


def zero_map(arity: int, degree: int, marked_input=None, target=ALGEBRA) -> MultiMap:
    return MultiMap(arity, degree, {}, marked_input, target)


# ---------------------------------------------------------------------------
# comultiplications

EMPTY = TensorWord(())


def comultiply(word: TensorWord) -> list[tuple[TensorWord, TensorWord]]:
    """All deconcatenations, the empty word standing for ``1``."""
    if word.mark is not None:
        raise ValueError("use comultiply_marked for marked words")
    e, s = word.entries, word.suspended
    return [(TensorWord(e[:i], None, s), TensorWord(e[i:], None, s)) for i in range(len(e) + 1)]


def comultiply_marked(word: TensorWord) -> list[tuple[TensorWord, TensorWord]]:
    """Coaction of T^W V: splits with w on the right, then with w on the left."""
    if word.mark is None:
        raise ValueError("word has no marked entry")
    e, k, s = word.entries, word.mark, word.suspended
    out = []
    for i in range(k + 1):
        out.append((TensorWord(e[:i], None, s), TensorWord(e[i:], k - i, s)))
    for i in range(k + 1, len(e) + 1):
        out.append((TensorWord(e[:i], k, s), TensorWord(e[i:], None, s)))
    return out


# ---------------------------------------------------------------------------
# lifting engine


def _apply_blocks(word: TensorWord, prefix: list[int], lookup, acc: dict, coeff=1) -> None:
    """Add ``sum over blocks`` of the lifted map applied to ``word`` into ``acc``.

    ``lookup(length, offset)`` returns the component to put on a block of
    the given length whose marked entry sits at ``offset`` (None if the block
    has no marked entry), or None when that block contributes nothing.
    """
    e, mark, susp = word.entries, word.mark, word.suspended
    n = len(e)
    for start in range(n + 1):
        for length in range(0, n - start + 1):
            has_mark = mark is not None and start <= mark < start + length
            comp = lookup(length, mark - start if has_mark else None)
            if comp is None:
                continue
            value = comp.table.get(e[start:start + length])
            if not value:
                continue
            sign = koszul_sign(comp.degree, prefix[start]) * coeff
            head, tail = e[:start], e[start + length:]
            if has_mark or comp.target == MODULE:
                new_mark = start
            elif mark is not None and mark >= start:
                new_mark = mark - length + 1
            else:
                new_mark = mark
            for out, c in value.items():
                w = TensorWord(head + (out,) + tail, new_mark, susp)
                acc[w] = acc.get(w, 0) + sign * c


class _Lifted:
    """Shared evaluation plumbing for lifted maps."""

    grading: Grading
    ring: Ring

    def _lookup(self, length, offset):
        raise NotImplementedError

    def _project_lookup(self, word):
        n = len(word.entries)
        return self._lookup(n, word.mark)

    def __call__(self, word: TensorWord) -> Vector:
        acc: dict = {}
        _apply_blocks(word, self.grading.prefix_degrees(word), self._lookup, acc)
        return Vector._trusted(self.ring, acc)

    def apply(self, vec: Vector) -> Vector:
        acc: dict = {}
        for w, c in vec.items():
            _apply_blocks(w, self.grading.prefix_degrees(w), self._lookup, acc, c)
        return Vector._trusted(self.ring, acc)

    def project(self, word: TensorWord) -> Vector:
        """Corestriction: only the block covering the whole word."""
        comp = self._project_lookup(word)
        if comp is None:
            return Vector(self.ring)
        value = comp.table.get(word.entries)
        if not value:
            return Vector(self.ring)
        mark = 0 if (word.mark is not None or comp.target == MODULE) else None
        return Vector._trusted(
            self.ring, {TensorWord((b,), mark, word.suspended): c for b, c in value.items()}
        )

    def project_vector(self, vec: Vector) -> Vector:
        acc: dict = {}
        for w, c in vec.items():
            for w2, c2 in self.project(w).items():
                acc[w2] = acc.get(w2, 0) + c * c2
        return Vector._trusted(self.ring, acc)


class Coderivation(_Lifted):
    """Coderivation on TV (``target="algebra"``) or from TV into T^W V
    (``target="module"``), determined by components indexed by arity."""

    def __init__(self, components: Mapping[int, MultiMap], grading: Grading, ring: Ring, target=ALGEBRA):
        self.components = {n: c for n, c in components.items()}
        for n, c in self.components.items():
            if c.arity != n or c.marked_input is not None or c.target != target:
                raise ValueError(f"component {n} has the wrong shape for a {target} coderivation")
        self.grading = grading
        self.ring = ring
        self.target = target

    def _lookup(self, length, offset):
        if offset is not None:
            return None
        return self.components.get(length)

    @property
    def degree(self) -> int:
        degs = {c.degree for c in self.components.values()}
        if len(degs) > 1:
            raise ValueError("coderivation is not homogeneous")
        return degs.pop() if degs else 0

    def homogeneous_parts(self) -> list["Coderivation"]:
        by_deg: dict = {}
        for n, c in self.components.items():
            by_deg.setdefault(c.degree, {})[n] = c
        return [Coderivation(p, self.grading, self.ring, self.target) for _, p in sorted(by_deg.items())]


def lift_coderivation(component: MultiMap, grading: Grading, ring: Ring) -> Coderivation:
    return Coderivation({component.arity: component}, grading, ring, ALGEBRA)


def lift_to_bicomodule(component: MultiMap, grading: Grading, ring: Ring) -> Coderivation:
    return Coderivation({component.arity: component}, grading, ring, MODULE)


class ModuleDifferential(_Lifted):
    """The unique lift of ``{rho_kl}`` compatible with a coderivation ``psi``.

    Blocks without the marked entry get ``psi_i`` (``i >= 1``); blocks
    containing it get ``rho_{i,j}``.  Such lifts do not form a vector space,
    so no addition is offered.
    """

    def __init__(self, psi: Coderivation, components: Mapping[tuple[int, int], MultiMap], grading: Grading, ring: Ring):
        self.psi = psi
        self.components = dict(components)
        for (k, l), c in self.components.items():
            if c.shape != (k, l) or c.target != MODULE:
                raise ValueError(f"component {(k, l)} has the wrong shape")
        self.grading = grading
        self.ring = ring

    def _lookup(self, length, offset):
        if offset is None:
            if length == 0:
                return None
            return self.psi.components.get(length)
        return self.components.get((offset, length - offset - 1))


def lift_module_differential(psi: Coderivation, components, grading: Grading, ring: Ring) -> ModuleDifferential:
    return ModuleDifferential(psi, components, grading, ring)


class BicomoduleMap(_Lifted):
    """Comodule map T^W V -> T^Z V: exactly one component around the mark."""

    def __init__(self, components: Mapping[tuple[int, int], MultiMap], grading: Grading, ring: Ring):
        self.components = dict(components)
        for (k, l), c in self.components.items():
            if c.shape != (k, l) or c.target != MODULE:
                raise ValueError(f"component {(k, l)} has the wrong shape")
        self.grading = grading
        self.ring = ring

    def _lookup(self, length, offset):
        if offset is None:
            return None
        return self.components.get((offset, length - offset - 1))

    @property
    def degree(self) -> int:
        degs = {c.degree for c in self.components.values()}
        if len(degs) > 1:
            raise ValueError("map is not homogeneous")
        return degs.pop() if degs else 0


def lift_morphism(components, grading: Grading, ring: Ring) -> BicomoduleMap:
    return BicomoduleMap(components, grading, ring)


# ---------------------------------------------------------------------------
# components back from lifted maps


def _collect(fn, words: Iterable[TensorWord], marked_out: bool):
    table: dict = {}
    for w in words:
        val = fn(w)
        out = {}
        for w2, c in val.items():
            if len(w2.entries) == 1 and (w2.mark is not None) == marked_out:
                out[w2.entries[0]] = c
        if out:
            table[w.entries] = out
    return table


def coderivation_components(fn, grading: Grading, bound: int, degree: int, target=ALGEBRA,
                            suspended=True) -> dict[int, MultiMap]:
    """Corestrictions ``pr o fn`` on words of length ``0..bound``."""
    comps = {}
    for n in range(bound + 1):
        table = _collect(fn, grading.words(n, suspended), target == MODULE)
        if table:
            comps[n] = MultiMap(n, degree, table, None, target)
    return comps


def marked_components(fn, grading: Grading, bound: int, degree: int, suspended=True) -> dict[tuple[int, int], MultiMap]:
    """Corestrictions ``pr_W o fn`` on marked words with ``<= bound`` algebra factors."""
    comps: dict = {}
    for n in range(bound + 1):
        for w in grading.marked_words(n, suspended):
            val = fn(w)
            out = {w2.entries[0]: c for w2, c in val.items() if len(w2.entries) == 1 and w2.mark == 0}
            if out:
                key = (w.mark, n - w.mark)
                comps.setdefault(key, {})[w.entries] = out
    return {
        (k, l): MultiMap(k + l + 1, degree, table, k, MODULE) for (k, l), table in comps.items()
    }


# ---------------------------------------------------------------------------
# coderivation squares


@dataclass
class SquareResult:
    passed: bool
    word: TensorWord | None = None
    lhs: dict | None = None
    rhs: dict | None = None

    def __bool__(self):
        return self.passed


def _pairs(ring, acc):
    return {k: v for k, v in ((k, ring.normalize(v)) for k, v in acc.items()) if v != 0}


def check_coderivation(f, kind: str, bound: int, grading: Grading, ring: Ring, degree: int | None = None,
                       psi=None, suspended: bool = True) -> SquareResult:
    """Verify the defining square of ``f`` on every basis word up to ``bound``.

    ``kind`` is ``"algebra"`` (TV -> TV), ``"bicomodule"`` (TV -> T^W V),
    ``"morphism"`` (T^W V -> T^Z V) or ``"module"`` (T^W V -> T^W V over the
    coderivation ``psi``).  Returns the first violating word with both sides.
    """
    if degree is None:
        degree = f.degree
    if kind in ("algebra", "bicomodule"):
        words = (w for n in range(bound + 1) for w in grading.words(n, suspended))
    elif kind in ("morphism", "module"):
        words = (w for n in range(bound + 1) for w in grading.marked_words(n, suspended))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "module" and psi is None:
        raise ValueError("module kind needs psi")
    for word in words:
        lhs: dict = {}
        for w2, c in f(word).items():
            split = comultiply(w2) if w2.mark is None else comultiply_marked(w2)
            for pair in split:
                lhs[pair] = lhs.get(pair, 0) + c
        rhs: dict = {}
        split = comultiply(word) if word.mark is None else comultiply_marked(word)
        for u, v in split:
            du = grading.degree(u)
            if kind == "algebra":
                for u2, c in f(u).items():
                    rhs[(u2, v)] = rhs.get((u2, v), 0) + c
                s = koszul_sign(degree, du)
                for v2, c in f(v).items():
                    rhs[(u, v2)] = rhs.get((u, v2), 0) + s * c
            elif kind == "bicomodule":
                for u2, c in f(u).items():
                    rhs[(u2, v)] = rhs.get((u2, v), 0) + c
                s = koszul_sign(degree, du)
                for v2, c in f(v).items():
                    rhs[(u, v2)] = rhs.get((u, v2), 0) + s * c
            elif kind == "morphism":
                if u.mark is None:
                    s = koszul_sign(degree, du)
                    for v2, c in f(v).items():
                        rhs[(u, v2)] = rhs.get((u, v2), 0) + s * c
                else:
                    for u2, c in f(u).items():
                        rhs[(u2, v)] = rhs.get((u2, v), 0) + c
            else:  # module
                if u.mark is None:
                    s = koszul_sign(degree, du)
                    for v2, c in f(v).items():
                        rhs[(u, v2)] = rhs.get((u, v2), 0) + s * c
                    for u2, c in psi(u).items():
                        rhs[(u2, v)] = rhs.get((u2, v), 0) + c
                else:
                    for u2, c in f(u).items():
                        rhs[(u2, v)] = rhs.get((u2, v), 0) + c
                    s = koszul_sign(psi.degree, du)
                    for v2, c in psi(v).items():
                        rhs[(u, v2)] = rhs.get((u, v2), 0) + s * c
        lhs, rhs = _pairs(ring, lhs), _pairs(ring, rhs)
        if lhs != rhs:
            return SquareResult(False, word, lhs, rhs)
    return SquareResult(True)
