"""Exact scalars, graded bases, tensor words and the Koszul sign rules.

Every sign produced anywhere in the package comes from two places:
:func:`koszul_sign` (maps jumping over elements) and :func:`suspension_sign`
(rewriting a suspended component ``s o m o (s^-1)^{(x)k}``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Ground ring: ``"Z"``, ``"Q"`` or ``"Zmod"`` with a prime ``p``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zmod"):
            raise ValueError(f"unknown ring {self.kind!r}")
        if self.kind == "Zmod":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"Zmod needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"ring {self.kind} takes no modulus")

    @classmethod
    def from_spec(cls, spec) -> "Ring":
        if spec in ("Z", "Q"):
            return cls(spec)
        if isinstance(spec, dict) and set(spec) == {"Zmod"}:
            p = spec["Zmod"]
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValueError("Zmod modulus must be an integer")
            return cls("Zmod", p)
        raise ValueError(f"bad ring specification {spec!r}")

    def to_spec(self):
        return {"Zmod": self.p} if self.kind == "Zmod" else self.kind

    def __str__(self):
        return f"Z/{self.p}" if self.kind == "Zmod" else self.kind

    def normalize(self, x):
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if self.kind == "Z":
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x.numerator)
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} is not defined mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if self.kind == "Z":
            return int(x)
        return int(x) % self.p

    def parse(self, text: str):
        """Parse a decimal integer or ``"p/q"`` string exactly."""
        if not isinstance(text, str):
            raise ValueError(f"coefficient must be a string, got {text!r}")
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad coefficient {text!r}") from None
        if "." in text or "e" in text.lower():
            raise ValueError(f"bad coefficient {text!r}")
        return self.normalize(value)

    def format(self, x) -> str:
        return str(x)

    @property
    def zero(self):
        return self.normalize(0)

    @property
    def one(self):
        return self.normalize(1)

    def random(self, rng, spread: int = 2):
        return self.normalize(rng.randint(-spread, spread))


Z = Ring("Z")
Q = Ring("Q")
Z2 = Ring("Zmod", 2)


@dataclass(frozen=True)
class GradedBasis:
    """Ordered named generators with integer degrees."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    unit: str | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        index = {n: i for i, n in enumerate(self.names)}
        object.__setattr__(self, "_index", index)
        if self.unit is not None:
            if self.unit not in index:
                raise ValueError(f"unit {self.unit!r} is not a generator")
            if self.degrees[index[self.unit]] != 0:
                raise ValueError("the unit must have degree 0")

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, int]], unit: str | None = None) -> "GradedBasis":
        pairs = list(pairs)
        return cls(tuple(n for n, _ in pairs), tuple(d for _, d in pairs), unit)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def of_degree(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def dual(self) -> "GradedBasis":
        """Dual basis, same order, degrees negated, names starred."""
        return GradedBasis(tuple(n + "*" for n in self.names), tuple(-d for d in self.degrees))


class TensorWord(NamedTuple):
    """A basis word; ``mark`` is the position of the bimodule entry, if any."""

    entries: tuple[int, ...]
    mark: int | None = None
    suspended: bool = False

    def __len__(self):  # type: ignore[override]
        return len(self.entries)

    @property
    def left(self) -> int:
        """Number of algebra factors before the marked entry."""
        return self.mark

    @property
    def right(self) -> int:
        return len(self.entries) - self.mark - 1


@dataclass(frozen=True)
class Grading:
    """Degree lookup for words over an algebra basis and optional module basis."""

    algebra: GradedBasis
    module: GradedBasis | None = None

    def entry_degree(self, word: TensorWord, i: int) -> int:
        if i == word.mark:
            d = self.module.degrees[word.entries[i]]
        else:
            d = self.algebra.degrees[word.entries[i]]
        return d + 1 if word.suspended else d

    def entry_degrees(self, word: TensorWord) -> list[int]:
        return [self.entry_degree(word, i) for i in range(len(word.entries))]

    def degree(self, word: TensorWord) -> int:
        return sum(self.entry_degrees(word))

    def prefix_degrees(self, word: TensorWord) -> list[int]:
        """``out[i]`` is the total degree of the first ``i`` entries."""
        out = [0]
        for d in self.entry_degrees(word):
            out.append(out[-1] + d)
        return out

    def names(self, word: TensorWord) -> list[str]:
        out = []
        for i, e in enumerate(word.entries):
            out.append(self.module.names[e] if i == word.mark else self.algebra.names[e])
        return out

    def word(self, names: Sequence[str], mark: int | None = None, suspended: bool = False) -> TensorWord:
        entries = tuple(
            self.module.index(n) if i == mark else self.algebra.index(n) for i, n in enumerate(names)
        )
        return TensorWord(entries, mark, suspended)

    def words(self, length: int, suspended: bool = True) -> Iterator[TensorWord]:
        """All unmarked words of the given length."""
        n = len(self.algebra)
        for entries in _tuples(n, length):
            yield TensorWord(entries, None, suspended)

    def marked_words(self, algebra_factors: int, suspended: bool = True) -> Iterator[TensorWord]:
        """All marked words with exactly ``algebra_factors`` algebra entries."""
        n, nm = len(self.algebra), len(self.module)
        for k in range(algebra_factors + 1):
            for entries in _tuples(n, algebra_factors):
                for w in range(nm):
                    yield TensorWord(entries[:k] + (w,) + entries[k:], k, suspended)


def _tuples(n: int, length: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for head in _tuples(n, length - 1):
        for i in range(n):
            yield head + (i,)


def word_degree(word: TensorWord, basis: GradedBasis, module: GradedBasis | None = None) -> int:
    """Total degree; each suspended entry is shifted up by one."""
    return Grading(basis, module).degree(word)


def koszul_sign(deg_left: int, deg_right: int) -> int:
    return -1 if (deg_left * deg_right) % 2 else 1


def suspension_sign(degrees: Sequence[int]) -> int:
    """Sign relating ``D_k(sa_1,...,sa_k)`` to ``s m_k(a_1,...,a_k)``.

    ``degrees`` are the unsuspended degrees ``|a_j|``; the exponent is
    ``sum_j (k - j)(|a_j| + 1)``.
    """
    k = len(degrees)
    e = sum((k - j) * (d + 1) for j, d in enumerate(degrees, start=1))
    return -1 if e % 2 else 1


class Vector:
    """Finite linear combination of tensor words (or of plain keys).

    Immutable once built; zero coefficients are never stored.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: Ring, terms: dict | None = None):
        self.ring = ring
        self._terms = {}
        if terms:
            for w, c in terms.items():
                c = ring.normalize(c)
                if c != 0:
                    self._terms[w] = c

    @classmethod
    def from_terms(cls, ring: Ring, pairs: Iterable[tuple[object, object]]) -> "Vector":
        acc: dict = {}
        for w, c in pairs:
            acc[w] = acc.get(w, 0) + c
        return cls(ring, acc)

    @classmethod
    def _trusted(cls, ring: Ring, acc: dict) -> "Vector":
        v = cls.__new__(cls)
        v.ring = ring
        terms = {}
        for w, c in acc.items():
            c = ring.normalize(c)
            if c != 0:
                terms[w] = c
        v._terms = terms
        return v

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def __getitem__(self, word):
        return self._terms.get(word, 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Vector") -> "Vector":
        acc = dict(self._terms)
        for w, c in other.items():
            acc[w] = acc.get(w, 0) + c
        return Vector._trusted(self.ring, acc)

    def __neg__(self) -> "Vector":
        return Vector._trusted(self.ring, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def scale(self, c) -> "Vector":
        return Vector._trusted(self.ring, {w: c * x for w, x in self._terms.items()})

    def __repr__(self):
        if not self._terms:
            return "Vector(0)"
        return "Vector(" + " + ".join(f"{c}*{w}" for w, c in self._terms.items()) + ")"


@dataclass(frozen=True)
class Identity:
    """Identity block of a given arity in a tensor product of maps."""

    arity: int
    degree: int = 0
    marked_input: int | None = None


def apply_tensor_of_maps(blocks: Sequence, word: TensorWord, grading: Grading, ring: Ring) -> Vector:
    """Evaluate ``(phi_1 (x) ... (x) phi_r)(word)`` with Koszul signs.

    Blocks are :class:`Identity` or multilinear maps (anything with ``arity``,
    ``degree``, ``marked_input``, ``target`` and ``evaluate``).  Each block's
    degree times the degree of the entries to its left contributes a sign.
    """
    if sum(b.arity for b in blocks) != len(word.entries):
        raise ValueError("block arities do not partition the word")
    degs = grading.entry_degrees(word)
    partial = [((), None, 1)]  # (entries so far, mark, coefficient)
    pos = 0
    for b in blocks:
        chunk = word.entries[pos:pos + b.arity]
        has_mark = word.mark is not None and pos <= word.mark < pos + b.arity
        local = word.mark - pos if has_mark else None
        sign = koszul_sign(b.degree, sum(degs[:pos]))
        new = []
        if isinstance(b, Identity):
            for ent, mk, c in partial:
                m2 = len(ent) + local if has_mark else mk
                new.append((ent + chunk, m2, c * sign))
        else:
            if b.marked_input != local:
                return Vector(ring)
            value = b.evaluate(chunk)
            if b.target == "scalar":
                if value:
                    new = [(ent, mk, c * sign * value) for ent, mk, c in partial]
            else:
                for ent, mk, c in partial:
                    for out, x in value.items():
                        m2 = len(ent) if (has_mark or b.target == "module") else mk
                        new.append((ent + (out,), m2, c * sign * x))
        partial = new
        pos += b.arity
    return Vector.from_terms(
        ring, ((TensorWord(ent, mk, word.suspended), c) for ent, mk, c in partial)
    )
