"""Inner-product diagrams over Z/2: an open circle with ``r`` top slots,
``s`` bottom slots and two special horizontal legs, each slot carrying a
planar tree of multiplications.

A tree is ``()`` for a leaf or a tuple of at least two subtrees.  Slots are
ordered top ``1..r``, left ``r+1``, bottom ``r+2..r+s+1``, right ``r+s+2``.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from typing import NamedTuple

LEAF = ()


class Diagram(NamedTuple):
    r: int
    s: int
    slots: tuple


def canonical_tree(t):
    if t == "leaf" or t == LEAF or t == []:
        return LEAF
    if isinstance(t, dict):
        if set(t) != {"m"}:
            raise ValueError(f"bad tree node {t!r}")
        t = t["m"]
    if not isinstance(t, (list, tuple)) or len(t) < 2:
        raise ValueError(f"a vertex needs at least two children: {t!r}")
    return tuple(canonical_tree(c) for c in t)


def canonicalize(d) -> Diagram:
    r, s, slots = d
    if r < 0 or s < 0 or len(slots) != r + s + 2:
        raise ValueError(f"({r},{s}) needs {r + s + 2} slots, got {len(slots)}")
    return Diagram(int(r), int(s), tuple(canonical_tree(t) for t in slots))


def bare(r: int, s: int) -> Diagram:
    return Diagram(r, s, (LEAF,) * (r + s + 2))


def tree_leaves(t) -> int:
    return 1 if t == LEAF else sum(tree_leaves(c) for c in t)


def tree_vertices(t):
    """Arity of every internal vertex, preorder."""
    if t == LEAF:
        return []
    out = [len(t)]
    for c in t:
        out.extend(tree_vertices(c))
    return out


def leaves(d: Diagram) -> int:
    return sum(tree_leaves(t) for t in d.slots)


def degree(d: Diagram) -> int:
    return d.r + d.s + sum(a - 2 for t in d.slots for a in tree_vertices(t))


# ---------------------------------------------------------------------------
# differential


def _tree_insertions(t):
    """Trees with one more vertex splitting off a consecutive block of children."""
    if t == LEAF:
        return []
    out = []
    n = len(t)
    for b in range(2, n):
        for i in range(n - b + 1):
            out.append(t[:i] + (t[i:i + b],) + t[i + b:])
    for i, c in enumerate(t):
        for c2 in _tree_insertions(c):
            out.append(t[:i] + (c2,) + t[i + 1:])
    return out


def circle_insertions(d: Diagram) -> list[Diagram]:
    slots = d.slots
    S = len(slots)
    left, right = d.r, S - 1
    out = []
    for start in range(S):
        for b in range(2, S):
            block = [(start + t) % S for t in range(b)]
            if left in block and right in block:
                continue
            merged = tuple(slots[p] for p in block)
            if right in block:
                end = block[-1] if block[-1] < start else -1
                rest = slots[end + 1:start]
                new_left = left - (end + 1)
                new_slots = rest + (merged,)
            else:
                new_slots = slots[:start] + (merged,) + slots[start + b:]
                if left in block:
                    new_left = start
                elif left < start:
                    new_left = left
                else:
                    new_left = left - b + 1
            r = new_left
            s = len(new_slots) - r - 2
            out.append(Diagram(r, s, new_slots))
    return out


def insertions(d: Diagram) -> list[Diagram]:
    """Every diagram with exactly one more multiplication vertex."""
    out = circle_insertions(d)
    for p, t in enumerate(d.slots):
        for t2 in _tree_insertions(t):
            out.append(Diagram(d.r, d.s, d.slots[:p] + (t2,) + d.slots[p + 1:]))
    return out


def differential(chain) -> dict:
    """Z/2 boundary of a chain (an iterable of diagrams or a dict to coefficients)."""
    items = chain.items() if isinstance(chain, dict) else ((x, 1) for x in chain)
    acc = Counter()
    for x, c in items:
        if c % 2:
            acc.update(insertions(x))
    return {x: 1 for x, c in sorted(acc.items()) if c % 2}


# ---------------------------------------------------------------------------
# enumeration and homology


@lru_cache(maxsize=None)
def trees(n: int) -> tuple:
    """All planar trees with ``n`` leaves and no unary vertices."""
    if n == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(n):
        if len(parts) < 2:
            continue
        combos = [()]
        for p in parts:
            combos = [c + (t,) for c in combos for t in trees(p)]
        out.extend(combos)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _compositions(n: int, k: int | None = None) -> tuple:
    if k is None:
        return tuple(c for k2 in range(1, n + 1) for c in _compositions(n, k2))
    if k == 1:
        return ((n,),)
    return tuple((h,) + rest for h in range(1, n - k + 2) for rest in _compositions(n - h, k - 1))


@lru_cache(maxsize=None)
def _all_diagrams(n_leaves: int) -> tuple:
    out = []
    for S in range(2, n_leaves + 1):
        for parts in _compositions(n_leaves, S):
            combos = [()]
            for p in parts:
                combos = [c + (t,) for c in combos for t in trees(p)]
            for slots in combos:
                for r in range(S - 1):
                    out.append(Diagram(r, S - 2 - r, slots))
    return tuple(sorted(out))


def enumerate_diagrams(n_leaves: int, deg: int | None = None) -> list[Diagram]:
    if n_leaves < 2:
        raise ValueError("diagrams need at least two leaves")
    ds = _all_diagrams(n_leaves)
    return list(ds) if deg is None else [d for d in ds if degree(d) == deg]


def boundary_columns(n_leaves: int, deg: int) -> tuple[list[Diagram], list[Diagram], list[int]]:
    """Basis in degree ``deg``, basis in ``deg - 1`` and the boundary as bitmask columns."""
    src = enumerate_diagrams(n_leaves, deg)
    dst = enumerate_diagrams(n_leaves, deg - 1)
    index = {x: i for i, x in enumerate(dst)}
    cols = []
    for x in src:
        bits = 0
        for y in differential([x]):
            bits |= 1 << index[y]
        cols.append(bits)
    return src, dst, cols


def boundary_matrix(n_leaves: int, deg: int):
    """Dense 0/1 matrix (rows: degree ``deg - 1``, columns: degree ``deg``)."""
    import numpy as np

    src, dst, cols = boundary_columns(n_leaves, deg)
    m = np.zeros((len(dst), len(src)), dtype=np.uint8)
    for j, bits in enumerate(cols):
        for i in range(len(dst)):
            if bits >> i & 1:
                m[i, j] = 1
    return m


def gf2_rank(columns: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for v in columns:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                rank += 1
                break
            v ^= pivots[top]
    return rank


def homology_ranks(n_leaves: int) -> list[tuple[int, int]]:
    """``(degree, betti)`` over Z/2 for degrees ``0..n_leaves - 2``."""
    top = n_leaves - 2
    dims = {n: len(enumerate_diagrams(n_leaves, n)) for n in range(top + 1)}
    ranks = {n: gf2_rank(boundary_columns(n_leaves, n)[2]) if n > 0 else 0 for n in range(top + 2)}
    ranks[top + 1] = 0
    return [(n, dims[n] - ranks[n] - ranks[n + 1]) for n in range(top + 1)]


def check_d_squared(n_leaves: int) -> list[tuple[Diagram, str]]:
    """Diagrams violating degree drop or ``d^2 = 0``; empty when all is well."""
    bad = []
    for x in enumerate_diagrams(n_leaves):
        dx = insertions(x)
        if any(degree(y) != degree(x) - 1 or leaves(y) != leaves(x) for y in dx):
            bad.append((x, "degree"))
        if differential(differential([x])):
            bad.append((x, "d2"))
    return bad


# ---------------------------------------------------------------------------
# text forms


def tree_text(t, labels) -> str:
    if t == LEAF:
        return next(labels)
    return f"m{len(t)}(" + ",".join(tree_text(c, labels) for c in t) + ")"


def diagram_text(d: Diagram, labels=None) -> str:
    it = iter(labels or [f"a{i}" for i in range(1, leaves(d) + 1)])
    return "<" + ",".join(tree_text(t, it) for t in d.slots) + f">_{{{d.r},{d.s}}}"


def tree_json(t):
    return "leaf" if t == LEAF else {"m": [tree_json(c) for c in t]}


def diagram_json(d: Diagram) -> dict:
    return {"r": d.r, "s": d.s, "slots": [tree_json(t) for t in d.slots]}


def diagram_from_json(obj) -> Diagram:
    if not isinstance(obj, dict) or set(obj) != {"r", "s", "slots"}:
        raise ValueError("diagram needs exactly the keys r, s, slots")
    if not all(isinstance(obj[k], int) and not isinstance(obj[k], bool) for k in ("r", "s")):
        raise ValueError("r and s must be integers")
    if not isinstance(obj["slots"], list):
        raise ValueError("slots must be a list")
    return canonicalize((obj["r"], obj["s"], obj["slots"]))


# ---------------------------------------------------------------------------
# drawing


def slot_angles(d: Diagram) -> list[float]:
    """Counterclockwise angles in degrees: top slots in (0, 180), left at 180,
    bottom in (180, 360), right at 0."""
    out = [180.0 * (i + 1) / (d.r + 1) for i in range(d.r)]
    out.append(180.0)
    out.extend(180.0 + 180.0 * (i + 1) / (d.s + 1) for i in range(d.s))
    out.append(0.0)
    return out


def _height(t) -> int:
    return 0 if t == LEAF else 1 + max(_height(c) for c in t)


def layout(d: Diagram):
    """Points and segments for a picture of ``d``.

    Returns ``(vertices, leaves, segments)``: vertex positions, leaf
    positions with their numbers (slot order), and line segments.
    """
    angles = slot_angles(d)
    S = len(d.slots)
    wedge = 360.0 / S
    core = 0.3
    vertices, leaf_pts, segments = [], [], []
    counter = [0]

    def polar(rad, ang):
        a = math.radians(ang)
        return (round(rad * math.cos(a), 3), round(rad * math.sin(a), 3))

    for theta, t in zip(angles, d.slots):
        n = tree_leaves(t)
        outer = 1.2 + 0.5 * _height(t)
        spread = min(wedge * 0.7, 18.0 * n) if n > 1 else 0.0
        first = [0]

        def place(node, depth):
            if node == LEAF:
                i = first[0]
                first[0] += 1
                ang = theta + (spread * (i / (n - 1) - 0.5) if n > 1 else 0.0)
                counter[0] += 1
                p = polar(outer, ang)
                leaf_pts.append((p, counter[0]))
                return p, ang
            kids = [place(c, depth + 1) for c in node]
            ang = sum(a for _, a in kids) / len(kids)
            p = polar(0.8 + 0.5 * depth, ang)
            vertices.append(p)
            for q, _ in kids:
                segments.append((p, q))
            return p, ang

        root, ang = place(t, 0)
        segments.append((polar(core, ang), root))
    return vertices, leaf_pts, segments


def render(d: Diagram, fmt: str) -> str:
    """Deterministic DOT or TikZ source for one diagram."""
    d = canonicalize(d)
    if fmt == "dot":
        return _render_dot(d)
    if fmt == "tikz":
        return _render_tikz(d)
    raise ValueError(f"unknown format {fmt!r}")


def _render_dot(d: Diagram) -> str:
    lines = ["graph diagram {", f'  label="{diagram_text(d)}";',
             '  pairing [shape=circle,style=empty,label=""];']
    counter = [0, 0]

    def walk(t, parent):
        if t == LEAF:
            counter[0] += 1
            name = f"a{counter[0]}"
            lines.append(f'  {name} [shape=plaintext,label="{name}"];')
        else:
            counter[1] += 1
            name = f"m{counter[1]}"
            lines.append(f'  {name} [shape=point,style=filled,width=0.08,label=""];')
            for c in t:
                walk(c, name)
        lines.append(f"  {parent} -- {name};")

    for p, t in enumerate(d.slots, start=1):
        lines.append(f"  // slot {p}")
        walk(t, "pairing")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _render_tikz(d: Diagram) -> str:
    vertices, leaf_pts, segments = layout(d)
    fmt = lambda p: f"({p[0]:.3f},{p[1]:.3f})"  # noqa: E731
    lines = [r"\begin{tikzpicture}", f"  % {diagram_text(d)}"]
    for a, b in segments:
        lines.append(f"  \\draw {fmt(a)} -- {fmt(b)};")
    lines.append(r"  \draw[fill=white] (0,0) circle (0.3);")
    for p in vertices:
        lines.append(f"  \\fill {fmt(p)} circle (1.5pt);")
    for p, i in leaf_pts:
        q = (p[0] * 1.15, p[1] * 1.15)
        lines.append(f"  \\node at {fmt(q)} {{$a_{{{i}}}$}};")
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"
