"""JSON structure files.

One document describes one family of maps over a named basis::

    {"ring": "Z" | "Q" | {"Zmod": p},
     "basis": [{"name": "x", "degree": 1}, ...],
     "unit": "1",                                  # algebras only, optional
     "max_arity": 2,                               # optional
     "ops": [{"arity": 2 | [k, l],
              "entries": [{"in": ["x", "x"], "out": [{"c": "1", "b": "y"}]},
                          {"in": [...], "scalar": "3/2"}]}]}

Cochain files additionally carry ``"degree"`` and ``"values"``
(``"A"``, ``"A*"`` or ``"M"``).  Algebra, bimodule, morphism, inner
product and cochain files are told apart by the caller, not by a tag.
"""

from __future__ import annotations

import json

from .ainf import AInfAlgebra
from .bimod import AInfBimodule, dual_self_bimodule, self_bimodule
from .graded import GradedBasis, Ring
from .hoch import HochschildCochain
from .iprod import InnerProduct
from .morph import BimoduleMorphism
from .tensor import MODULE, SCALAR, MultiMap


class StructureError(ValueError):
    """Malformed or inconsistent input file."""


BASE_KEYS = {"ring", "basis", "unit", "ops", "max_arity"}
COCHAIN_KEYS = BASE_KEYS | {"degree", "values"}


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise StructureError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise StructureError(f"{path}: top level must be an object")
    return doc


def _fail(where: str, msg: str):
    raise StructureError(f"{where}: {msg}")


def _check_keys(doc: dict, allowed: set, where: str):
    unknown = sorted(set(doc) - allowed)
    if unknown:
        _fail(where, f"unknown field(s) {', '.join(unknown)}")
    for key in ("ring", "basis", "ops"):
        if key not in doc:
            _fail(where, f"missing field {key!r}")


def parse_ring(doc: dict, where: str) -> Ring:
    try:
        return Ring.from_spec(doc["ring"])
    except ValueError as exc:
        _fail(where + ".ring", str(exc))


def parse_basis(doc: dict, where: str, allow_unit: bool = True) -> GradedBasis:
    raw = doc["basis"]
    if not isinstance(raw, list):
        _fail(where + ".basis", "must be a list")
    pairs = []
    for i, item in enumerate(raw):
        loc = f"{where}.basis[{i}]"
        if not isinstance(item, dict) or set(item) != {"name", "degree"}:
            _fail(loc, "needs exactly the keys name and degree")
        name, deg = item["name"], item["degree"]
        if not isinstance(name, str) or not name:
            _fail(loc, "name must be a non-empty string")
        if not isinstance(deg, int) or isinstance(deg, bool):
            _fail(loc, "degree must be an integer")
        pairs.append((name, deg))
    unit = doc.get("unit")
    if unit is not None and not allow_unit:
        _fail(where + ".unit", "only algebras have a unit")
    try:
        return GradedBasis.of(pairs, unit)
    except ValueError as exc:
        _fail(where + ".basis", str(exc))


def _index(basis: GradedBasis, name, loc: str) -> int:
    if not isinstance(name, str):
        _fail(loc, f"generator names must be strings, got {name!r}")
    try:
        return basis.index(name)
    except KeyError:
        _fail(loc, f"unknown generator {name!r}")


def _coefficient(ring: Ring, text, loc: str):
    try:
        return ring.parse(text)
    except ValueError as exc:
        _fail(loc, str(exc))


def parse_ops(doc: dict, where: str, ring: Ring, in_basis, out_basis, shape: str) -> dict:
    """Tables keyed by arity (``shape="plain"``) or ``(k, l)`` (``"marked"``).

    ``in_basis(pos, key)`` gives the basis of input slot ``pos``; ``out_basis``
    is None for scalar-valued maps.
    """
    ops = doc["ops"]
    if not isinstance(ops, list):
        _fail(where + ".ops", "must be a list")
    tables: dict = {}
    for i, op in enumerate(ops):
        loc = f"{where}.ops[{i}]"
        if not isinstance(op, dict) or set(op) != {"arity", "entries"}:
            _fail(loc, "needs exactly the keys arity and entries")
        ar = op["arity"]
        if shape == "plain":
            if not isinstance(ar, int) or isinstance(ar, bool) or ar < 0:
                _fail(loc + ".arity", "must be a non-negative integer")
            key, n = ar, ar
        else:
            if (not isinstance(ar, list) or len(ar) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in ar)):
                _fail(loc + ".arity", "must be a pair [k, l] of non-negative integers")
            key, n = tuple(ar), ar[0] + ar[1] + 1 + (1 if out_basis is None else 0)
        if key in tables:
            _fail(loc + ".arity", f"duplicate arity {ar}")
        if not isinstance(op["entries"], list):
            _fail(loc + ".entries", "must be a list")
        table: dict = {}
        for e, entry in enumerate(op["entries"]):
            eloc = f"{loc}.entries[{e}]"
            want = {"in", "scalar"} if out_basis is None else {"in", "out"}
            if not isinstance(entry, dict) or set(entry) != want:
                _fail(eloc, f"needs exactly the keys {', '.join(sorted(want))}")
            names = entry["in"]
            if not isinstance(names, list) or len(names) != n:
                _fail(eloc + ".in", f"needs {n} generator names")
            inputs = tuple(_index(in_basis(p, key), x, f"{eloc}.in[{p}]") for p, x in enumerate(names))
            if inputs in table:
                _fail(eloc + ".in", "duplicate input tuple")
            if out_basis is None:
                table[inputs] = _coefficient(ring, entry["scalar"], eloc + ".scalar")
                continue
            if not isinstance(entry["out"], list):
                _fail(eloc + ".out", "must be a list")
            out: dict = {}
            for o, term in enumerate(entry["out"]):
                oloc = f"{eloc}.out[{o}]"
                if not isinstance(term, dict) or set(term) != {"c", "b"}:
                    _fail(oloc, "needs exactly the keys c and b")
                b = _index(out_basis, term["b"], oloc + ".b")
                out[b] = out.get(b, 0) + _coefficient(ring, term["c"], oloc + ".c")
            table[inputs] = out
        tables[key] = table
    return tables


def _max_arity(doc: dict, where: str, default: int) -> int:
    n = doc.get("max_arity", default)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        _fail(where + ".max_arity", "must be a non-negative integer")
    return n


def _same_ring(ring: Ring, other: Ring, where: str):
    if ring != other:
        _fail(where + ".ring", f"ring {other} differs from the algebra's ring {ring}")


def _build(where: str, fn):
    try:
        return fn()
    except StructureError:
        raise
    except ValueError as exc:
        _fail(where, str(exc))


def parse_algebra(doc: dict, where: str = "algebra") -> AInfAlgebra:
    _check_keys(doc, BASE_KEYS, where)
    ring = parse_ring(doc, where)
    basis = parse_basis(doc, where)
    tables = parse_ops(doc, where, ring, lambda p, k: basis, basis, "plain")
    for n in tables:
        if n == 0:
            _fail(where + ".ops", "m_0 must vanish")
    n = _max_arity(doc, where, max(tables, default=1))
    ops = {i: MultiMap.plain(i, i - 2, t) for i, t in tables.items()}
    return _build(where, lambda: AInfAlgebra(basis, ring, ops, n))


def _marked_inputs(alg_basis, mod_basis):
    return lambda p, key: mod_basis if p == key[0] else alg_basis


def parse_bimodule(doc: dict, alg: AInfAlgebra, where: str = "bimodule") -> AInfBimodule:
    _check_keys(doc, BASE_KEYS - {"unit"}, where)
    _same_ring(alg.ring, parse_ring(doc, where), where)
    module = parse_basis(doc, where, allow_unit=False)
    tables = parse_ops(doc, where, alg.ring, _marked_inputs(alg.basis, module), module, "marked")
    n = _max_arity(doc, where, max((k + l + 1 for k, l in tables), default=alg.max_arity))
    ops = {(k, l): MultiMap.bimodule(k, l, k + l - 1, t) for (k, l), t in tables.items()}
    return _build(where, lambda: AInfBimodule(alg, module, ops, n))


def parse_morphism(doc: dict, source: AInfBimodule, target: AInfBimodule,
                   where: str = "morphism") -> BimoduleMorphism:
    _check_keys(doc, BASE_KEYS - {"unit"}, where)
    _same_ring(source.ring, parse_ring(doc, where), where)
    basis = parse_basis(doc, where, allow_unit=False)
    if basis.names != source.module.names or basis.degrees != source.module.degrees:
        _fail(where + ".basis", "must repeat the source module basis")
    alg = source.algebra
    tables = parse_ops(doc, where, alg.ring, _marked_inputs(alg.basis, source.module), target.module, "marked")
    n = _max_arity(doc, where, max((k + l + 1 for k, l in tables), default=1))
    ops = {(k, l): MultiMap.bimodule(k, l, k + l, t) for (k, l), t in tables.items()}
    return _build(where, lambda: BimoduleMorphism(source, target, ops, n))


def parse_inner_product(doc: dict, alg: AInfAlgebra, where: str = "iprod") -> InnerProduct:
    _check_keys(doc, BASE_KEYS - {"unit"}, where)
    _same_ring(alg.ring, parse_ring(doc, where), where)
    basis = parse_basis(doc, where, allow_unit=False)
    if basis.names != alg.basis.names or basis.degrees != alg.basis.degrees:
        _fail(where + ".basis", "must repeat the algebra basis")
    tables = parse_ops(doc, where, alg.ring, lambda p, k: alg.basis, None, "marked")
    n = _max_arity(doc, where, max((k + l + 1 for k, l in tables), default=1))
    ops = {(k, l): MultiMap(k + l + 2, k + l, t, None, SCALAR) for (k, l), t in tables.items()}
    return _build(where, lambda: InnerProduct(alg, ops, n))


def cochain_bimodule(alg: AInfAlgebra, values: str, module: AInfBimodule | None = None) -> AInfBimodule:
    if values == "A":
        return self_bimodule(alg)
    if values == "A*":
        return dual_self_bimodule(alg)
    if values == "M":
        if module is None:
            raise StructureError("cochain with values in M needs a bimodule file")
        return module
    raise StructureError(f"values must be A, A* or M, not {values!r}")


def parse_cochain(doc: dict, alg: AInfAlgebra, module: AInfBimodule | None = None,
                  where: str = "cochain") -> HochschildCochain:
    _check_keys(doc, COCHAIN_KEYS - {"unit"}, where)
    for key in ("degree", "values"):
        if key not in doc:
            _fail(where, f"missing field {key!r}")
    _same_ring(alg.ring, parse_ring(doc, where), where)
    deg = doc["degree"]
    if not isinstance(deg, int) or isinstance(deg, bool):
        _fail(where + ".degree", "must be an integer")
    try:
        bm = cochain_bimodule(alg, doc["values"], module)
    except StructureError as exc:
        _fail(where + ".values", str(exc))
    basis = parse_basis(doc, where, allow_unit=False)
    if basis.names != bm.module.names or basis.degrees != bm.module.degrees:
        _fail(where + ".basis", "must repeat the value module basis")
    tables = parse_ops(doc, where, alg.ring, lambda p, k: alg.basis, bm.module, "plain")
    comps = {j: MultiMap(j, deg + j - 1, t, None, MODULE) for j, t in tables.items()}
    return _build(where, lambda: HochschildCochain(bm, deg, comps, doc["values"]))


# ---------------------------------------------------------------------------
# writing


def _basis_json(basis: GradedBasis) -> list:
    return [{"name": n, "degree": d} for n, d in zip(basis.names, basis.degrees)]


def _entries(table: dict, in_names, out_basis) -> list:
    out = []
    for key in sorted(table):
        names = [in_names(p, key) for p in range(len(key))]
        val = table[key]
        if out_basis is None:
            out.append({"in": names, "scalar": str(val)})
        else:
            terms = [{"c": str(c), "b": out_basis.names[b]} for b, c in sorted(val.items())]
            out.append({"in": names, "out": terms})
    return out


def _doc(ring: Ring, basis: GradedBasis, ops: list, max_arity: int, **extra) -> dict:
    doc = {"ring": ring.to_spec(), "basis": _basis_json(basis)}
    doc.update(extra)
    doc["max_arity"] = max_arity
    doc["ops"] = ops
    return doc


def algebra_to_json(alg: AInfAlgebra) -> dict:
    names = lambda p, key: alg.basis.names[key[p]]  # noqa: E731
    ops = [{"arity": n, "entries": _entries(m.table, names, alg.basis)} for n, m in sorted(alg.ops.items())]
    extra = {"unit": alg.basis.unit} if alg.basis.unit else {}
    return _doc(alg.ring, alg.basis, ops, alg.max_arity, **extra)


def _marked_names(alg_basis, mod_basis, k):
    return lambda p, key: (mod_basis if p == k else alg_basis).names[key[p]]


def bimodule_to_json(bm: AInfBimodule) -> dict:
    ops = [{"arity": [k, l], "entries": _entries(b.table, _marked_names(bm.algebra.basis, bm.module, k), bm.module)}
           for (k, l), b in sorted(bm.ops.items())]
    return _doc(bm.ring, bm.module, ops, bm.max_arity)


def morphism_to_json(mor: BimoduleMorphism) -> dict:
    src = mor.source
    ops = [{"arity": [k, l],
            "entries": _entries(f.table, _marked_names(src.algebra.basis, src.module, k), mor.target.module)}
           for (k, l), f in sorted(mor.ops.items())]
    return _doc(mor.ring, src.module, ops, mor.max_arity)


def inner_product_to_json(ip: InnerProduct) -> dict:
    names = lambda p, key: ip.algebra.basis.names[key[p]]  # noqa: E731
    ops = [{"arity": [k, l], "entries": _entries(p.table, names, None)} for (k, l), p in sorted(ip.ops.items())]
    return _doc(ip.ring, ip.algebra.basis, ops, ip.max_arity)


def cochain_to_json(f: HochschildCochain) -> dict:
    names = lambda p, key: f.algebra.basis.names[key[p]]  # noqa: E731
    ops = [{"arity": j, "entries": _entries(c.table, names, f.bimodule.module)}
           for j, c in sorted(f.components.items())]
    return _doc(f.ring, f.bimodule.module, ops, f.max_arity, degree=f.degree, values=f.values)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
