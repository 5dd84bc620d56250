"""Command-line interface: one subcommand per verification task.

Reports are a single JSON document on stdout with deterministic field
order; a one-line human summary goes to stderr.  Exit code 0 means all
checks passed, 1 means a check verified a negative (an axiom fails, a
structure is not equivalent, a symbol is not involutive), 2 means the
inputs could not be processed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from ocat import __version__

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


def _enum_bound(default=20000):
    raw = os.environ.get("OCAT_ENUM_BOUND")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise InputError(f"OCAT_ENUM_BOUND is not an integer: {raw!r}")
    return default


def report(command, inputs, options, verdict, findings=(), data=None):
    return {
        "tool": "ocat",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": list(inputs),
        "options": dict(sorted(options.items())),
        "verdict": verdict,
        "findings": sorted(findings, key=lambda f: json.dumps(f, sort_keys=True)),
        "data": data or {},
    }


def emit(rep, summary):
    print(json.dumps(rep, indent=2, sort_keys=False))
    print(summary, file=sys.stderr)
    return 0 if rep["verdict"] == "pass" else 1


def emit_error(command, inputs, message):
    rep = report(command, inputs, {}, "error", [], {"error": message})
    print(json.dumps(rep, indent=2, sort_keys=False))
    print(f"error: {message}", file=sys.stderr)
    return 2


def load_workspace(path):
    from ocat import dsl

    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    try:
        ast = dsl.parse(source)
        return dsl.build(ast)
    except (dsl.ParseError, dsl.BuildError) as exc:
        raise InputError(f"{path}: {exc}")


def _pick(table, name, kind, path):
    if name is None:
        if len(table) == 1:
            return next(iter(table.values()))
        raise InputError(f"{path}: choose one of the {len(table)} {kind}s with --name")
    if name not in table:
        raise InputError(f"{path}: no {kind} named {name!r}")
    return table[name]


def cmd_check_category(args):
    from ocat.core import validate_category, validate_precategory

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.name, "category", args.file)
    rep = validate_category(cat, up_to_equiv=not args.strict)
    findings = [
        {"axiom": f.clause, "cells": list(f.cells), "detail": f.detail} for f in rep.findings
    ]
    verdict = "pass" if rep.ok else "fail"
    data = {
        "category": cat.name,
        "cells": len(cat.cells),
        "top_degree": cat.top_degree,
        "precategory_ok": validate_precategory(cat).ok,
    }
    out = report("check-category", [args.file], {"name": cat.name, "strict": args.strict}, verdict, findings, data)
    return emit(out, f"check-category {cat.name}: {verdict} ({len(findings)} findings)")


def cmd_check_functor(args):
    from ocat.functors import check_functor, functor_diagnostics

    ws = load_workspace(args.file)
    f = _pick(ws.functors, args.name, "functor", args.file)
    rep = check_functor(f, args.strictness)
    verdict = "pass" if rep.passes(args.strictness) else "fail"
    findings = [{"law": kind, "at": str(where)} for kind, where in rep.failures]
    data = {
        "functor": f.name,
        "strictness": args.strictness,
        "identities_strict": rep.identities_strict,
        "composites_strict": rep.composites_strict,
        "diagnostics": functor_diagnostics(f),
    }
    out = report("check-functor", [args.file], {"name": f.name, "strictness": args.strictness}, verdict, findings, data)
    return emit(out, f"check-functor {f.name}: {verdict}")


def cmd_check_modification(args):
    from ocat.functors import check_modification

    ws = load_workspace(args.file)
    m = _pick(ws.modifications, args.name, "modification", args.file)
    rep = check_modification(m)
    verdict = "pass" if rep.passes("weak") else "fail"
    findings = [{"law": kind, "at": str(where)} for kind, where in rep.failures]
    data = {"level": m.level, "strict": rep.natural_strict}
    out = report("check-modification", [args.file], {"name": args.name or m.name}, verdict, findings, data)
    return emit(out, f"check-modification: {verdict}")


def cmd_equiv(args):
    from ocat.equivalence import are_equivalent, witness_arrows

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    for cell in (args.x, args.y):
        if cell not in cat.cells:
            raise InputError(f"{args.file}: no cell {cell!r} in {cat.name}")
    if cat.degree(args.x) != cat.degree(args.y):
        raise InputError(f"{args.file}: cells {args.x} and {args.y} have different degrees")
    w = are_equivalent(cat, args.x, args.y)
    verdict = "pass" if w is not None else "fail"
    findings = [] if w else [{"witness": "none", "detail": f"no witness for {args.x} ~ {args.y}"}]
    data = {"x": args.x, "y": args.y}
    if w is not None:
        data["witness_arrows"] = witness_arrows(w)
    out = report("equiv", [args.file], {"cat": cat.name, "x": args.x, "y": args.y}, verdict, findings, data)
    return emit(out, f"equiv {args.x} ~ {args.y}: {verdict}")


def cmd_degree(args):
    from ocat.equivalence import are_equivalent, category_degree, pair_degree

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    if args.x is not None and args.y is not None:
        if are_equivalent(cat, args.x, args.y) is None:
            out = report(
                "degree", [args.file], {"cat": cat.name, "x": args.x, "y": args.y}, "fail",
                [{"detail": "cells are not equivalent"}], {},
            )
            return emit(out, "degree: not equivalent")
        d = pair_degree(cat, args.x, args.y).pair_degree
        data = {"pair_degree": d}
        opts = {"cat": cat.name, "x": args.x, "y": args.y}
        summary = f"degree({args.x} ~ {args.y}) = {d}"
    else:
        d = category_degree(cat)
        data = {"category_degree": d}
        opts = {"cat": cat.name}
        summary = f"degree({cat.name}) = {d}"
    return emit(report("degree", [args.file], opts, "pass", [], data), summary)


def cmd_classify(args):
    from ocat.equivalence import classify_arrow

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    if args.arrow not in cat.cells:
        raise InputError(f"{args.file}: no cell {args.arrow!r}")
    c = classify_arrow(cat, args.arrow)
    data = {"monic": c.monic, "epic": c.epic, "equivalence": c.equivalence}
    out = report("classify", [args.file], {"cat": cat.name, "arrow": args.arrow}, "pass", [], data)
    return emit(out, f"classify {args.arrow}: monic={c.monic} epic={c.epic} equivalence={c.equivalence}")


def cmd_homotopy(args):
    from ocat.equivalence import HomotopyGroupError, homotopy_group

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    try:
        g = homotopy_group(cat, args.I, args.a, args.x, args.n)
    except HomotopyGroupError as exc:
        raise InputError(f"{args.file}: {exc}")
    data = {
        "n": args.n,
        "carrier": list(g.carrier),
        "classes": [sorted(c) for c in g.classes],
        "order": g.order,
    }
    opts = {"cat": cat.name, "I": args.I, "a": args.a, "x": args.x, "n": args.n}
    out = report("homotopy", [args.file], opts, "pass", [], data)
    return emit(out, f"homotopy group at level {args.n}: order {g.order}")


def cmd_yoneda(args):
    from ocat.presheaf import hom_functor, yoneda_check

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    if args.presheaf:
        p = _pick(ws.presheaves, args.presheaf, "presheaf", args.file)
    else:
        p = hom_functor(cat, args.object, "contravariant")
    rep = yoneda_check(cat, args.object, p, bound=_enum_bound())
    verdict = "pass" if rep.ok else "fail"
    findings = []
    for level, okay in sorted(rep.counts_match.items()):
        if not okay:
            findings.append({"level": level, "detail": "family count differs from value cells"})
    for level, okay in sorted(rep.ev_bijective.items()):
        if not okay:
            findings.append({"level": level, "detail": "double evaluation is not bijective"})
    data = {
        "object": args.object,
        "levels": sorted(rep.counts_match),
        "natural_in_object": rep.natural_in_object,
    }
    out = report("yoneda", [args.file], {"cat": cat.name, "object": args.object, "presheaf": args.presheaf}, verdict, findings, data)
    return emit(out, f"yoneda at {args.object}: {verdict}")


def cmd_representable(args):
    from ocat.presheaf import representability_check

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    p = _pick(ws.presheaves, args.presheaf, "presheaf", args.file)
    v = representability_check(cat, p, args.object, args.witness, bound=_enum_bound(4096))
    verdict = "pass" if (v.strict or v.weak) else "fail"
    findings = []
    if not v.strict and v.witness_failure:
        b, gamma, nsols = v.witness_failure
        findings.append({"at": b, "value": gamma, "preimages": nsols})
    data = {"strict": v.strict, "weak": v.weak}
    opts = {"cat": cat.name, "presheaf": args.presheaf, "object": args.object, "witness": args.witness}
    out = report("representable", [args.file], opts, verdict, findings, data)
    return emit(out, f"representable at {args.object}: strict={v.strict} weak={v.weak}")


def cmd_limit(args):
    from ocat.limits import check_cone, verify_strict_limit

    ws = load_workspace(args.file)
    cone = _pick(ws.cones, args.name, "cone", args.file)
    crep = check_cone(cone)
    findings = [{"law": kind, "at": str(where)} for kind, where in crep.failures]
    lrep = verify_strict_limit(cone)
    verdict = "pass" if lrep.ok else "fail"
    data = {
        "direction": cone.direction,
        "vertex": cone.vertex,
        "cone_ok": crep.passes("weak"),
        "strict": lrep.strict,
        "weak": lrep.weak,
        "failing_level": list(lrep.failing_level) if lrep.failing_level else None,
    }
    out = report("limit", [args.file], {"name": args.name}, verdict, findings, data)
    return emit(out, f"limit {cone.vertex}: {verdict} (strict={lrep.strict}, weak={lrep.weak})")


def cmd_adjoint(args):
    from ocat.limits import check_adjunction_kan, check_adjunction_unit_counit

    ws = load_workspace(args.file)
    adj = _pick(ws.adjunctions, args.name, "adjunction", args.file)
    data = {}
    findings = []
    passes = True
    if adj.unit is not None and adj.counit is not None:
        trep = check_adjunction_unit_counit(adj)
        data["triangles"] = {
            "left": trep.left_triangle,
            "right": trep.right_triangle,
            "derived_inverse": trep.derived_inverse,
            "derived_natural": trep.derived_natural,
        }
        findings.extend({"law": k, "at": str(w)} for k, w in trep.failures)
        passes = passes and trep.ok
    if adj.phi is not None:
        krep = check_adjunction_kan(adj)
        data["hom_isos"] = {
            "bijective": krep.bijective,
            "functorial": krep.functorial,
            "natural": krep.natural,
        }
        findings.extend({"law": k, "at": str(w)} for k, w in krep.failures)
        passes = passes and krep.ok
    if adj.unit is None and adj.phi is None:
        raise InputError(f"{args.file}: adjunction carries neither unit/counit nor hom maps")
    verdict = "pass" if passes else "fail"
    out = report("adjoint", [args.file], {"name": args.name}, verdict, findings, data)
    return emit(out, f"adjoint {args.name}: {verdict}")


def cmd_duality(args):
    from ocat.limits import check_concrete_duality

    ws = load_workspace(args.file)
    data_in = _pick(ws.dualities, args.name, "duality", args.file)
    rep = check_concrete_duality(data_in, bound=_enum_bound(256))
    verdict = "pass" if rep.ok else "fail"
    findings = [{"law": k, "at": str(w)} for k, w in rep.failures]
    data = {
        "adjunction_bijective": rep.adjunction_bijective,
        "underlying_equivalent": rep.underlying_equivalent,
        "left_hom_factors": rep.left_hom_factors,
        "right_hom_factors": rep.right_hom_factors,
    }
    out = report("duality", [args.file], {"name": args.name}, verdict, findings, data)
    return emit(out, f"duality {args.name}: {verdict}")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def cmd_spencer(args):
    from ocat.linalg import QMatrix
    from ocat.spencer import SymbolInput, check_involutive, sym_dim

    raw = _load_json(args.file)
    try:
        n, k, q = int(raw["n"]), int(raw["k"]), int(raw["q"])
        rows = [[Fraction(v) for v in row] for row in raw.get("relations", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.file}: bad symbol input ({exc})")
    ambient = sym_dim(n, q) * k
    for row in rows:
        if len(row) != ambient:
            raise InputError(f"{args.file}: relation row has {len(row)} entries, expected {ambient}")
    sym = SymbolInput(n, k, q, QMatrix(rows, ambient))
    rep = check_involutive(sym, args.rmax)
    verdict = "pass" if rep.involutive else "fail"
    findings = []
    if not rep.involutive:
        r, l = rep.first_nonzero()
        findings.append({"r": r, "l": l, "detail": "nonzero cohomology"})
    data = {
        "n": n,
        "k": k,
        "q": q,
        "r_max": args.rmax,
        "cohomology": {str(r): dims for r, dims in sorted(rep.table.items())},
    }
    out = report("spencer", [args.file], {"rmax": args.rmax}, verdict, findings, data)
    return emit(out, f"spencer: {'involutive' if rep.involutive else 'not involutive'} up to r={args.rmax}")


def _build_algebra(raw, path):
    from ocat.jetdiff import AlgebraError, FiniteAlgebra, FiniteModuleData
    from ocat.linalg import QMatrix

    try:
        basis = list(raw["basis"])
        unit = [Fraction(v) for v in raw["unit"]]
        structure = [
            [[Fraction(v) for v in raw["structure"][i][j]] for j in range(len(basis))]
            for i in range(len(basis))
        ]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: bad algebra input ({exc})")
    try:
        alg = FiniteAlgebra.build(basis, structure, unit)
    except AlgebraError as exc:
        raise InputError(f"{path}: {exc}")
    modules = {}
    for name, spec in sorted(raw.get("modules", {}).items()):
        try:
            actions = [QMatrix([[Fraction(v) for v in row] for row in mat]) for mat in spec["actions"]]
            modules[name] = FiniteModuleData.build(alg, actions)
        except (KeyError, TypeError, ValueError, AlgebraError) as exc:
            raise InputError(f"{path}: bad module {name!r} ({exc})")
    return alg, modules


def cmd_jetdiff(args):
    from ocat.jetdiff import free_module, verify_representability, verify_vinogradov_duality

    raw = _load_json(args.file)
    alg, modules = _build_algebra(raw, args.file)
    if not modules:
        modules = {"A": free_module(alg, 1)}
    a_free = free_module(alg, 1)
    results = {}
    all_ok = True
    for name, mod in sorted(modules.items()):
        rep = verify_representability(mod, a_free, args.s)
        dual = verify_vinogradov_duality(mod, args.s)
        results[name] = {
            "representable": rep.ok,
            "dim_diff": rep.dim_diff,
            "dim_hom_jet": rep.dim_hom_jet_q,
            "duality": dual.ok,
            "dim_jet": dual.dim_jet,
            "dim_hom_diff_a": dual.dim_hom_diff_a,
        }
        all_ok = all_ok and rep.ok and dual.ok
    verdict = "pass" if all_ok else "fail"
    findings = [] if all_ok else [{"detail": "an operator/jet correspondence failed", "modules": sorted(results)}]
    out = report("jetdiff", [args.file], {"s": args.s}, verdict, findings, {"modules": results})
    return emit(out, f"jetdiff s={args.s}: {verdict}")


def cmd_truncate(args):
    from ocat import dsl
    from ocat.core import truncate

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    result = truncate(cat, args.level)
    decl = dsl.category_to_decl(result)
    text = dsl.print_ast(dsl.PresentationAST((decl,)))
    data = {"presentation": text, "objects": len(result.objects()), "cells": len(result.cells)}
    out = report("truncate", [args.file], {"cat": cat.name, "level": args.level}, "pass", [], data)
    return emit(out, f"truncate {cat.name} at {args.level}: {len(result.cells)} cells")


def cmd_opposite(args):
    from ocat import dsl
    from ocat.core import opposite

    ws = load_workspace(args.file)
    cat = _pick(ws.categories, args.cat, "category", args.file)
    result = opposite(cat)
    result.name = f"{cat.name}_op"
    decl = dsl.category_to_decl(result)
    text = dsl.print_ast(dsl.PresentationAST((decl,)))
    data = {"presentation": text}
    out = report("opposite", [args.file], {"cat": cat.name}, "pass", [], data)
    return emit(out, f"opposite of {cat.name}: {len(result.cells)} cells")


def make_parser():
    top = argparse.ArgumentParser(prog="ocat", description=__doc__)
    top.add_argument("--seed", type=int, default=None, help="reserved; all checks are deterministic")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, conf):
        p = sub.add_parser(name)
        conf(p)
        p.set_defaults(fn=fn)

    add("check-category", cmd_check_category, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
        p.add_argument("--strict", action="store_true"),
    ))
    add("check-functor", cmd_check_functor, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
        p.add_argument("--strictness", choices=["weak", "strict"], default="weak"),
    ))
    add("check-modification", cmd_check_modification, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
    ))
    add("equiv", cmd_equiv, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--x", required=True),
        p.add_argument("--y", required=True),
    ))
    add("degree", cmd_degree, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--x"),
        p.add_argument("--y"),
    ))
    add("classify", cmd_classify, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--arrow", required=True),
    ))
    add("homotopy", cmd_homotopy, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--I", required=True),
        p.add_argument("--a", required=True),
        p.add_argument("--x", required=True),
        p.add_argument("--n", type=int, required=True),
    ))
    add("yoneda", cmd_yoneda, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--object", required=True),
        p.add_argument("--presheaf"),
    ))
    add("representable", cmd_representable, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--presheaf", required=True),
        p.add_argument("--object", required=True),
        p.add_argument("--witness", required=True),
    ))
    add("limit", cmd_limit, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
    ))
    add("adjoint", cmd_adjoint, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
    ))
    add("duality", cmd_duality, lambda p: (
        p.add_argument("file"),
        p.add_argument("--name"),
    ))
    add("spencer", cmd_spencer, lambda p: (
        p.add_argument("file"),
        p.add_argument("--rmax", type=int, default=4),
    ))
    add("jetdiff", cmd_jetdiff, lambda p: (
        p.add_argument("file"),
        p.add_argument("--s", type=int, default=1),
    ))
    add("truncate", cmd_truncate, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
        p.add_argument("--level", type=int, required=True),
    ))
    add("opposite", cmd_opposite, lambda p: (
        p.add_argument("file"),
        p.add_argument("--cat"),
    ))
    return top


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        return emit_error(args.command, [getattr(args, "file", "")], str(exc))
    except Exception as exc:  # verification bugs should not masquerade as results
        return emit_error(args.command, [getattr(args, "file", "")], f"internal error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
