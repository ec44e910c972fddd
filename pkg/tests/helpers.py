"""Fixtures and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ainfinity.ainf import AInfAlgebra, from_dga
from ainfinity.bimod import from_dg_bimodule
from ainfinity.graded import Q, Z, GradedBasis, Vector, suspension_sign
from ainfinity.iprod import InnerProduct
from ainfinity.tensor import ALGEBRA, MODULE, SCALAR, Coderivation, MultiMap

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


# ---------------------------------------------------------------------------
# classical algebra given by dicts: mu[(i, j)] = {k: c}, d[i] = {k: c}


def _mul(mu, x, y):
    out = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in mu.get((i, j), {}).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def _apply(d, x):
    out = {}
    for i, a in x.items():
        for k, c in d.get(i, {}).items():
            out[k] = out.get(k, 0) + a * c
    return {k: v for k, v in out.items() if v}


def _sub(x, y, s=1):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) - s * v
    return {k: v for k, v in out.items() if v}


def classical_dga_ok(degs, d, mu, p=None) -> bool:
    """Associativity, Leibniz rule and d^2 = 0, checked on basis elements."""
    red = (lambda x: {k: v % p for k, v in x.items() if v % p}) if p else (lambda x: x)
    n = len(degs)
    e = [{i: 1} for i in range(n)]
    for a, b, c in itertools.product(range(n), repeat=3):
        if red(_sub(_mul(mu, _mul(mu, e[a], e[b]), e[c]), _mul(mu, e[a], _mul(mu, e[b], e[c])))):
            return False
    for a, b in itertools.product(range(n), repeat=2):
        lhs = _apply(d, _mul(mu, e[a], e[b]))
        rhs = _mul(mu, _apply(d, e[a]), e[b])
        rhs = _sub(rhs, _mul(mu, e[a], _apply(d, e[b])), (-1) ** degs[a] * -1)
        if red(_sub(lhs, rhs)):
            return False
    return all(not red(_apply(d, _apply(d, e[a]))) for a in range(n))


def search_dga3():
    """First DGA (in a fixed search order) on ``1, x, y`` with ``|x| = 1``,
    ``|y| = 0``, unit ``1`` and nonzero differential."""
    degs = [0, 1, 0]
    vals = (0, 1, -1)
    for xy, yx, yy1, yyy, dx1, dxy in itertools.product(vals, repeat=6):
        if not (dx1 or dxy):
            continue
        mu = {(0, a): {a: 1} for a in range(3)}
        mu.update({(a, 0): {a: 1} for a in range(3)})
        mu[(1, 2)] = {1: xy} if xy else {}
        mu[(2, 1)] = {1: yx} if yx else {}
        mu[(2, 2)] = {k: v for k, v in ((0, yy1), (2, yyy)) if v}
        d = {1: {k: v for k, v in ((0, dx1), (2, dxy)) if v}}
        if classical_dga_ok(degs, d, mu):
            return degs, d, {k: v for k, v in mu.items() if v}
    raise AssertionError("no DGA found")


def to_algebra(names, degs, d, mu, ring=Z, unit=None) -> AInfAlgebra:
    basis = GradedBasis(tuple(names), tuple(degs), unit)
    dm = MultiMap.plain(1, -1, {(i,): o for i, o in d.items() if o}) if d else None
    mm = MultiMap.plain(2, 0, {k: o for k, o in mu.items() if o})
    return from_dga(basis, dm, mm, ring)


def dga3(ring=Z) -> AInfAlgebra:
    degs, d, mu = search_dga3()
    return to_algebra(["1", "x", "y"], degs, d, mu, ring, unit="1")


def exterior(ring=Z) -> AInfAlgebra:
    """Exterior algebra on one odd generator ``x``."""
    mu = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return to_algebra(["1", "x"], [0, 1], None, mu, ring, unit="1")


def exterior2(ring=Z) -> AInfAlgebra:
    """Exterior algebra on ``x`` (degree 1) and ``y`` (degree 2)."""
    names, degs = ["1", "x", "y", "xy"], [0, 1, 2, 3]
    mu = {}
    for a in range(4):
        mu[(0, a)] = {a: 1}
        mu[(a, 0)] = {a: 1}
    mu[(1, 2)] = {3: 1}
    mu[(2, 1)] = {3: 1}
    return to_algebra(names, degs, None, mu, ring, unit="1")


def truncated(n=3, ring=Z) -> AInfAlgebra:
    """``R[x]/x^n`` concentrated in degree 0."""
    mu = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    return to_algebra([f"x{i}" for i in range(n)], [0] * n, None, mu, ring, unit="x0")


def dual_numbers(ring=Z) -> AInfAlgebra:
    return truncated(2, ring)


def nonassociative(ring=Z) -> AInfAlgebra:
    """Degree-0 product on ``1, u`` with ``u*u = 1`` except the unit is
    only a right unit: ``1*u = 0``."""
    mu = {(0, 0): {0: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}
    return to_algebra(["1", "u"], [0, 0], None, mu, ring)


def leibniz_violating(ring=Z) -> AInfAlgebra:
    """Associative product with a differential that is not a derivation,
    found by search over ``1, x (deg 1), y (deg 0)``."""
    degs = [0, 1, 0]
    mu = {(0, a): {a: 1} for a in range(3)}
    mu.update({(a, 0): {a: 1} for a in range(3)})
    for c in (1, -1):
        d = {0: {}, 1: {0: c}}
        if not classical_dga_ok(degs, d, mu):
            return to_algebra(["1", "x", "y"], degs, d, mu, ring)
    raise AssertionError("unreachable")


def invariant_pairing(ring=Z, invariant=True) -> InnerProduct:
    """``<1,x> = <x,1> = 1`` on ``R[x]/x^2``; the broken variant sets ``<1,1> = 1`` too."""
    alg = dual_numbers(ring)
    table = {(0, 1): 1, (1, 0): 1}
    if not invariant:
        table = {(0, 0): 1, (0, 1): 1}
    return InnerProduct(alg, {(0, 0): MultiMap(2, 0, table, None, SCALAR)}, 2)


def trivial_module(alg: AInfAlgebra):
    """``R`` with ``x`` acting by zero and ``1`` by the identity."""
    unit = alg.basis.index(alg.basis.unit)
    module = GradedBasis(("r",), (0,))
    left = MultiMap.bimodule(1, 0, 0, {(unit, 0): {0: 1}})
    right = MultiMap.bimodule(0, 1, 0, {(0, unit): {0: 1}})
    return from_dg_bimodule(alg, module, None, left, right)


# ---------------------------------------------------------------------------
# twisted fixtures: conjugate D by exp(xi) to get nonzero m_3, m_4


def twist(alg: AInfAlgebra, xi_table: dict, top: int) -> AInfAlgebra:
    g = alg.grading
    base = AInfAlgebra(alg.basis, Q, alg.ops, alg.max_arity)
    xi = Coderivation({2: MultiMap.plain(2, 0, xi_table)}, g, Q)
    D = base.coderivation

    def exp(vec, s):
        out = term = vec
        for n in range(1, 12):
            term = xi.apply(term).scale(Fraction(s, n))
            if not term:
                break
            out = out + term
        return out

    degs = alg.basis.degrees
    comps = {}
    for n in range(1, top + 1):
        table = {}
        for w in g.words(n, True):
            v = exp(D.apply(exp(Vector(Q, {w: 1}), 1)), -1)
            out = {u.entries[0]: c * suspension_sign([degs[e] for e in w.entries])
                   for u, c in v.items() if len(u.entries) == 1}
            if out:
                table[w.entries] = out
        if table:
            comps[n] = MultiMap.plain(n, n - 2, table)
    return AInfAlgebra(alg.basis, Q, comps, top)


def twisted_dga3() -> AInfAlgebra:
    return twist(dga3(Q), {(2, 2): {1: 1}, (0, 2): {1: 2}, (2, 0): {1: -1}}, 4)


def twisted_exterior() -> AInfAlgebra:
    return twist(exterior2(Q), {(1, 0): {2: 1}, (0, 2): {3: -1}}, 4)


# ---------------------------------------------------------------------------
# classical Hochschild oracles on ordinary algebras (1-cochains and up)


def classical_cup(mu, f, g, p, q, n_basis, ring_mod=2):
    """``(f u g)(a_1..a_{p+q}) = f(a_1..a_p) * g(a_{p+1}..a_{p+q})`` mod ``ring_mod``."""
    out = {}
    for key in itertools.product(range(n_basis), repeat=p + q):
        x = f.get(key[:p], {})
        y = g.get(key[p:], {})
        v = {k: c % ring_mod for k, c in _mul(mu, x, y).items() if c % ring_mod}
        if v:
            out[key] = v
    return out


def classical_delta(mu, g, n_basis, degs, mod=None):
    """Hochschild coboundary of an even 1-cochain ``g`` on an ungraded algebra:
    ``(dg)(a, b) = a g(b) - g(ab) + g(a) b``."""
    out = {}
    for a, b in itertools.product(range(n_basis), repeat=2):
        ea, eb = {a: 1}, {b: 1}
        v = _mul(mu, ea, g.get((b,), {}))
        v = _sub(v, _apply({k: o for (k,), o in g.items()}, _mul(mu, ea, eb)))
        v = _sub(v, _mul(mu, g.get((a,), {}), eb), -1)
        if mod:
            v = {k: c % mod for k, c in v.items() if c % mod}
        if v:
            out[(a, b)] = v
    return out



# ---------------------------------------------------------------------------
# random component families for the lift round trips

ALG = GradedBasis.of([("a", 0), ("b", 1), ("c", -1)])
MOD = GradedBasis.of([("w", 0), ("z", 1), ("v", -1)])


def _random_table(rng, in_degs, out_degs, degree, density=0.15):
    """Structure constants with ``|out| = sum(|in| + 1) - 1 + degree`` on
    suspended degrees, i.e. homogeneous of the given suspended degree."""
    table = {}
    for key in itertools.product(*[range(len(d)) for d in in_degs]):
        target = sum(d[i] + 1 for d, i in zip(in_degs, key)) + degree - 1
        out = {b: rng.choice((1, -1, 2)) for b, d in enumerate(out_degs)
               if d == target and rng.random() < density}
        if out:
            table[key] = out
    return table


def random_family(kind, rng, max_arity=4, degree=None):
    """Components keyed like the corresponding lift expects.

    ``kind``: ``algebra`` (TV -> TV), ``bicomodule`` (TV -> T^W V),
    ``module`` ((k, l) components of a module differential) or ``morphism``.
    """
    if degree is None:
        degree = {"morphism": 0, "module": -1}.get(kind, rng.choice((-1, 0, 1)))
    a, m = ALG.degrees, MOD.degrees
    out = {}
    if kind in ("algebra", "bicomodule"):
        target = ALGEBRA if kind == "algebra" else MODULE
        for n in range(1, max_arity + 1):
            t = _random_table(rng, [a] * n, a if kind == "algebra" else m, degree)
            if t:
                out[n] = MultiMap(n, degree, t, None, target)
        return out, degree
    for n in range(1, max_arity + 1):
        for k in range(n):
            l = n - 1 - k
            t = _random_table(rng, [a] * k + [m] + [a] * l, m, degree)
            if t:
                out[(k, l)] = MultiMap.bimodule(k, l, degree, t)
    return out, degree


def lift_round_trip(kind, rng, bound=6):
    """Components -> lift -> components, and lift -> components -> lift,
    compared exactly.  Returns a list of problems (empty when both hold)."""
    from ainfinity.graded import Grading
    from ainfinity.tensor import (
        BicomoduleMap, ModuleDifferential, coderivation_components, marked_components,
    )

    g = Grading(ALG, MOD)
    comps, degree = random_family(kind, rng)
    problems = []

    def rebuild(c):
        if kind == "algebra":
            return Coderivation(c, g, Z, ALGEBRA)
        if kind == "bicomodule":
            return Coderivation(c, g, Z, MODULE)
        if kind == "module":
            return ModuleDifferential(psi, c, g, Z)
        return BicomoduleMap(c, g, Z)

    def extract(lift):
        if kind in ("algebra", "bicomodule"):
            return coderivation_components(lift, g, bound, degree, ALGEBRA if kind == "algebra" else MODULE)
        return marked_components(lift, g, bound - 1, degree)

    def words():
        if kind in ("algebra", "bicomodule"):
            return [w for n in range(bound + 1) for w in g.words(n, True)]
        return [w for n in range(bound) for w in g.marked_words(n, True)]

    psi = Coderivation(random_family("algebra", rng, degree=-1)[0], g, Z) if kind == "module" else None
    lift = rebuild(comps)
    back = extract(lift)
    if {n: c.table for n, c in back.items()} != {n: c.table for n, c in comps.items()}:
        problems.append("components -> lift -> components")
    again = rebuild(back)
    for w in words():
        if lift(w) != again(w):
            problems.append(f"lift -> components -> lift differs on {w}")
            break
    return problems


def homotopy_morphism(bm, rng, max_arity=2, density=0.5):
    """``F = id + D H + H D`` for a random comodule map ``H`` of degree 1;
    a morphism ``bm -> bm`` whose higher components are usually nonzero."""
    from ainfinity.morph import BimoduleMorphism, desuspend_marked
    from ainfinity.tensor import BicomoduleMap, marked_components

    g = bm.grading
    a, m = bm.algebra.basis.degrees, bm.module.degrees
    comps = {}
    for n in range(1, max_arity + 1):
        for k in range(n):
            l = n - 1 - k
            t = _random_table(rng, [a] * k + [m] + [a] * l, m, 1, density)
            if t:
                comps[(k, l)] = MultiMap.bimodule(k, l, 1, t)
    H = BicomoduleMap(comps, g, bm.ring)
    D = bm.differential

    def F(w):
        return Vector(bm.ring, {w: 1}) + D.apply(H(w)) + H.apply(D(w))

    bound = max_arity + bm.max_arity - 1
    ops = desuspend_marked(marked_components(F, g, bound - 1, 0), g, 0)
    return BimoduleMorphism(bm, bm, ops, bound)
