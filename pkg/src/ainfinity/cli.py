"""``ainf`` command line.

Exit codes: 0 success (or check passed), 1 a relation failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import diagrams as dg
from . import io
from .ainf import check_relations
from .bimod import check_bimodule, dual
from .graded import Grading
from .hoch import bracket, connes_b, cup, delta
from .iprod import check_inner_product
from .morph import check_morphism
from .report import result_json, result_text


class InputError(Exception):
    pass


def _emit(text: str, out: str | None = None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _nfiles(files, counts, usage):
    if len(files) not in counts:
        raise InputError(f"expected {usage}")


# ---------------------------------------------------------------------------
# check / dual


def _load_check(kind, files):
    if kind == "algebra":
        _nfiles(files, {1}, "ALGEBRA")
        alg = io.parse_algebra(io.load(files[0]), files[0])
        return alg, alg.max_arity, alg.grading
    if kind == "bimodule":
        _nfiles(files, {2}, "ALGEBRA BIMODULE")
        alg = io.parse_algebra(io.load(files[0]), files[0])
        bm = io.parse_bimodule(io.load(files[1]), alg, files[1])
        return bm, max(alg.max_arity, bm.max_arity), bm.grading
    if kind == "morphism":
        _nfiles(files, {4}, "ALGEBRA SOURCE TARGET MORPHISM")
        alg = io.parse_algebra(io.load(files[0]), files[0])
        src = io.parse_bimodule(io.load(files[1]), alg, files[1])
        tgt = io.parse_bimodule(io.load(files[2]), alg, files[2])
        mor = io.parse_morphism(io.load(files[3]), src, tgt, files[3])
        top = max(alg.max_arity, src.max_arity, tgt.max_arity, mor.max_arity)
        return mor, top, Grading(alg.basis, tgt.module)
    _nfiles(files, {2}, "ALGEBRA IPROD")
    alg = io.parse_algebra(io.load(files[0]), files[0])
    ip = io.parse_inner_product(io.load(files[1]), alg, files[1])
    return ip, max(alg.max_arity, ip.max_arity), alg.grading


_CHECKS = {"algebra": check_relations, "bimodule": check_bimodule,
           "morphism": check_morphism, "iprod": check_inner_product}


def cmd_check(args) -> int:
    obj, top, grading = _load_check(args.kind, args.files)
    bound = args.bound if args.bound is not None else top + 2
    if bound < 0:
        raise InputError("--bound must be non-negative")
    res = _CHECKS[args.kind](obj, bound)
    if args.report == "json":
        _emit(json.dumps(result_json(res, grading), indent=2, ensure_ascii=False) + "\n")
    else:
        _emit(result_text(res, grading))
    return 0 if res.passed else 1


def cmd_dual(args) -> int:
    alg = io.parse_algebra(io.load(args.algebra), args.algebra)
    bm = io.parse_bimodule(io.load(args.bimodule), alg, args.bimodule)
    _emit(io.dumps(io.bimodule_to_json(dual(bm, printed_sign=args.printed_sign))), args.out)
    return 0


# ---------------------------------------------------------------------------
# diagrams


def _leaves(args) -> int:
    if args.leaves is None:
        raise InputError("--leaves is required")
    if args.leaves < 2:
        raise InputError("--leaves must be at least 2")
    return args.leaves


def _load_chain(path):
    doc = io.load(path) if path != "-" else json.load(sys.stdin)
    items = doc if isinstance(doc, list) else [doc]
    try:
        return [dg.diagram_from_json(x) for x in items]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _chain_out(chain, report) -> str:
    if report == "json":
        return json.dumps([dg.diagram_json(x) for x in chain], indent=2) + "\n"
    return "".join(f"{dg.diagram_text(x)}  degree {dg.degree(x)}\n" for x in chain)


def cmd_diagrams(args) -> int:
    sub = args.sub
    if sub == "enum":
        chain = dg.enumerate_diagrams(_leaves(args), args.degree)
        _emit(_chain_out(chain, args.report), args.out)
        return 0
    if sub == "d":
        if not args.file:
            raise InputError("d needs a diagram file")
        _emit(_chain_out(list(dg.differential(_load_chain(args.file))), args.report), args.out)
        return 0
    if sub == "d2check":
        n = _leaves(args)
        bad = dg.check_d_squared(n)
        count = len(dg.enumerate_diagrams(n))
        lines = [f"d2check leaves={n} diagrams={count}: {'pass' if not bad else 'fail'}"]
        lines += [f"  {why}: {dg.diagram_text(x)}" for x, why in bad]
        _emit("\n".join(lines) + "\n", args.out)
        return 0 if not bad else 1
    if sub == "homology":
        n = _leaves(args)
        ranks = dg.homology_ranks(n)
        if args.report == "json":
            text = json.dumps([{"degree": d, "betti": b} for d, b in ranks]) + "\n"
        else:
            text = "".join(f"{d}: {b}\n" for d, b in ranks)
        _emit(text, args.out)
        if args.figure:
            from .plotting import plot_betti

            plot_betti(ranks, args.figure, f"{n} leaves")
        return 0
    # render
    if not args.file:
        raise InputError("render needs a diagram file")
    chain = _load_chain(args.file)
    if len(chain) != 1:
        raise InputError("render takes exactly one diagram")
    if args.format == "png":
        path = args.out or args.figure
        if not path:
            raise InputError("--format png needs --out")
        from .plotting import render_png

        render_png(chain[0], path)
        return 0
    _emit(dg.render(chain[0], args.format), args.out)
    return 0


# ---------------------------------------------------------------------------
# hochschild


def _cochain(path, alg, module=None):
    return io.parse_cochain(io.load(path), alg, module, path)


def cmd_hoch(args) -> int:
    files = args.files
    signed = args.experimental_signs
    alg = io.parse_algebra(io.load(files[0]), files[0]) if files else None
    if args.sub == "delta":
        _nfiles(files, {2, 3}, "ALGEBRA [BIMODULE] COCHAIN")
        module = io.parse_bimodule(io.load(files[1]), alg, files[1]) if len(files) == 3 else None
        res = delta(_cochain(files[-1], alg, module), args.bound)
    elif args.sub in ("cup", "bracket"):
        _nfiles(files, {3}, "ALGEBRA COCHAIN COCHAIN")
        f, g = _cochain(files[1], alg), _cochain(files[2], alg)
        res = (cup if args.sub == "cup" else bracket)(f, g, signed)
    else:
        _nfiles(files, {2}, "ALGEBRA COCHAIN")
        res = connes_b(_cochain(files[1], alg), signed)
    _emit(io.dumps(io.cochain_to_json(res)), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ainf", description="A-infinity structure checker.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="verify the defining relations up to a bound")
    c.add_argument("kind", choices=sorted(_CHECKS))
    c.add_argument("files", nargs="+",
                   help="algebra: A; bimodule: A M; morphism: A M N F; iprod: A P")
    c.add_argument("--bound", type=int, default=None, help="truncation (default max_arity + 2)")
    c.add_argument("--report", choices=["json", "text"], default="text")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("dual", help="write the dual bimodule")
    d.add_argument("algebra")
    d.add_argument("bimodule")
    d.add_argument("--printed-sign", action="store_true",
                   help="use the uncorrected closed-form sign")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dual)

    g = sub.add_parser("diagrams", help="inner-product diagram complex")
    g.add_argument("sub", choices=["enum", "d", "d2check", "homology", "render"])
    g.add_argument("file", nargs="?", help="diagram JSON (d, render)")
    g.add_argument("--leaves", type=int)
    g.add_argument("--degree", type=int)
    g.add_argument("--format", choices=["dot", "tikz", "png"], default="dot")
    g.add_argument("--report", choices=["json", "text"], default="text")
    g.add_argument("--out")
    g.add_argument("--figure", help="also write a matplotlib figure here")
    g.set_defaults(func=cmd_diagrams)

    h = sub.add_parser("hoch", help="Hochschild cochain operations")
    h.add_argument("sub", choices=["delta", "cup", "bracket", "b"])
    h.add_argument("files", nargs="+")
    h.add_argument("--bound", type=int, default=None)
    h.add_argument("--experimental-signs", action="store_true",
                   help="allow cup, bracket and b outside Z/2")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hoch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, io.StructureError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ainf: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
