"""Shared corpus of small categories used across the test suite.

Builders, not fixtures: every call returns a fresh structure so tests
can mutate tables without interfering with each other.
"""

from __future__ import annotations

from itertools import product

from ocat.core import Cell, FiniteOmegaCat


def one_cat(objects, arrows, compose, name="", strict=True):
    """A 1-truncated category from named arrows and a composition map.

    arrows: list of (name, dom, cod) for the non-identity 1-cells.
    compose: dict (f, g) -> h for non-identity composable pairs,
    f after g; identity composites are filled in automatically.
    """
    cells = {o: Cell(o, 0) for o in objects}
    idname = {o: f"1{o}" for o in objects}
    for o in objects:
        cells[idname[o]] = Cell(idname[o], 1, o, o)
    for fname, dom, cod in arrows:
        cells[fname] = Cell(fname, 1, dom, cod)
    identities = {o: idname[o] for o in objects}
    comp = {}
    one_cells = [c for c in cells.values() if c.degree == 1]
    for f in one_cells:
        for g in one_cells:
            if f.dom != g.cod:
                continue
            if g.cid == idname[g.dom]:
                comp[(1, f.cid, g.cid)] = f.cid
            elif f.cid == idname[f.cod]:
                comp[(1, f.cid, g.cid)] = g.cid
            else:
                if (f.cid, g.cid) not in compose:
                    raise KeyError(f"composite {f.cid} after {g.cid} not given")
                comp[(1, f.cid, g.cid)] = compose[(f.cid, g.cid)]
    return FiniteOmegaCat(cells, 1, identities, comp, strict=strict, name=name)


def poset_category(elements, leq, name=""):
    """Thin category of a partial order: one arrow per related pair."""
    arrows = []
    compose = {}
    rel = [(a, b) for a in elements for b in elements if a != b and leq(a, b)]
    for a, b in rel:
        arrows.append((f"{a}to{b}", a, b))
    for a, b in rel:
        for c, d in rel:
            if d != a:
                continue
            # (a->b) after (c->a): c -> b
            if (c, b) in rel:
                compose[(f"{a}to{b}", f"{c}to{a}")] = f"{c}to{b}"
            else:
                raise ValueError("relation not transitive")
    return one_cat(list(elements), arrows, compose, name=name)


def thin2_cat(base: FiniteOmegaCat, iso_classes, name=""):
    """Thicken a 1-category to a 2-truncated one with at most one 2-cell
    between parallel 1-cells, present exactly inside the given classes.

    iso_classes: iterable of iterables of 1-cell names; the generated
    relation is their reflexive closure and must be a congruence.
    """
    cls_of = {}
    for cls in iso_classes:
        cls = tuple(cls)
        for f in cls:
            cls_of[f] = cls
    one_cells = base.by_degree.get(1, [])
    for f in one_cells:
        cls_of.setdefault(f, (f,))

    def related(s, t):
        return t in cls_of[s]

    for (k, f, g), h in base.comp.items():
        for f2 in cls_of[f]:
            for g2 in cls_of[g]:
                h2 = base.comp.get((1, f2, g2))
                if h2 is None or not related(h, h2):
                    raise ValueError("classes are not a congruence")

    cells = dict(base.cells)
    identities = dict(base.e)
    comp = dict(base.comp)
    two_name = {}
    for s in one_cells:
        for t in cls_of[s]:
            cell = base.cells[s]
            tcell = base.cells[t]
            if (cell.dom, cell.cod) != (tcell.dom, tcell.cod):
                raise ValueError("class members must be parallel")
            nid = f"[{s}>{t}]"
            two_name[(s, t)] = nid
            cells[nid] = Cell(nid, 2, s, t)
    for s in one_cells:
        identities[s] = two_name[(s, s)]
    # vertical composition: glue along the shared 1-cell
    for (s, t), a in two_name.items():
        for (s2, t2), b in two_name.items():
            if t2 == s:
                comp[(1, a, b)] = two_name[(s2, t)]
    # composition over objects: pairwise composite of the underlying 1-cells
    for (s, t), a in two_name.items():
        for (s2, t2), b in two_name.items():
            if base.cells[s].dom != base.cells[s2].cod:
                continue
            st = base.comp[(1, s, s2)]
            tt = base.comp[(1, t, t2)]
            comp[(2, a, b)] = two_name[(st, tt)]
    return FiniteOmegaCat(cells, 2, identities, comp, strict=base.declared_strict, name=name)


def terminal():
    return one_cat(["pt"], [], {}, name="terminal")


def discrete(n: int):
    return one_cat([f"a{i}" for i in range(n)], [], {}, name=f"discrete{n}")


def walking_arrow():
    return one_cat(["a", "b"], [("f", "a", "b")], {}, name="arrow")


def parallel_pair():
    return one_cat(["a", "b"], [("f", "a", "b"), ("g", "a", "b")], {}, name="parallel")


def walking_iso():
    return one_cat(
        ["a", "b"],
        [("f", "a", "b"), ("g", "b", "a")],
        {("g", "f"): "1a", ("f", "g"): "1b"},
        name="iso",
    )


def composable_pair():
    return one_cat(
        ["a", "b", "c"],
        [("f", "a", "b"), ("g", "b", "c"), ("gf", "a", "c")],
        {("g", "f"): "gf"},
        name="triangle",
    )


def diamond_poset():
    order = {"bot": 0, "x": 1, "y": 1, "top": 2}

    def leq(p, q):
        if p == q:
            return True
        if p == "bot":
            return True
        if q == "top":
            return True
        return False

    return poset_category(["bot", "x", "y", "top"], leq, name="diamond")


def chain_poset(n: int, name=""):
    els = [f"c{i}" for i in range(n)]
    return poset_category(els, lambda p, q: int(p[1:]) <= int(q[1:]), name=name or f"chain{n}")


def zmod2_loop_cat():
    """One object, one 1-cell, two 2-cells composing as the 2-element group."""
    cells = {
        "s": Cell("s", 0),
        "x": Cell("x", 1, "s", "s"),
        "ix": Cell("ix", 2, "x", "x"),
        "gx": Cell("gx", 2, "x", "x"),
    }
    identities = {"s": "x", "x": "ix"}
    comp = {(1, "x", "x"): "x"}
    for a in ("ix", "gx"):
        for b in ("ix", "gx"):
            val = "ix" if a == b else "gx"
            comp[(1, a, b)] = val
            comp[(2, a, b)] = val
    return FiniteOmegaCat(cells, 2, identities, comp, name="zmod2loop")


def walking_iso_thin2():
    """Two objects with arrows both ways, round trips isomorphic to
    identities through 2-cells (invertible strictly at the top level)."""
    base = one_cat(
        ["a", "b"],
        [("f", "a", "b"), ("g", "b", "a"), ("h", "a", "a"), ("k", "b", "b")],
        {
            ("g", "f"): "h",
            ("f", "g"): "k",
            ("h", "h"): "h",
            ("f", "h"): "f",
            ("h", "g"): "g",
            ("k", "f"): "f",
            ("g", "k"): "g",
            ("k", "k"): "k",
        },
        name="iso2base",
    )
    return thin2_cat(base, [("1a", "h"), ("1b", "k")], name="iso2")


def equalizer_two_cat():
    """A 2-truncated category with a distinguished 2-cell whose whiskers
    along the would-be limit edge collapse to identities."""
    base = one_cat(
        ["v", "a", "b"],
        [("p", "v", "a"), ("q", "v", "b"), ("f", "a", "b"), ("g", "a", "b")],
        {("f", "p"): "q", ("g", "p"): "q"},
        name="eqbase",
    )
    return thin2_cat(base, [("f", "g")], name="eq2")


def set_maps_category(sets=None, name="setmaps"):
    """Skeleton-free category of all maps between the given finite sets."""
    if sets is None:
        sets = [(), (1,), (2,), (1, 2)]
    objs = {s: f"S{''.join(map(str, s)) or 'e'}" for s in sets}
    arrows = []
    compose = {}
    fn_name = {}
    for s in sets:
        for t in sets:
            for fn in _functions(s, t):
                if s == t and all(dict(fn)[v] == v for v in s):
                    nm = f"1{objs[s]}"
                else:
                    nm = f"m_{objs[s]}_{objs[t]}_" + "".join(str(dict(fn)[v]) for v in s)
                fn_name[(s, t, fn)] = nm
                if not nm.startswith("1"):
                    arrows.append((nm, objs[s], objs[t]))
    for s in sets:
        for t in sets:
            for u in sets:
                for f1 in _functions(s, t):
                    for f2 in _functions(t, u):
                        comp_fn = tuple(sorted((v, dict(f2)[dict(f1)[v]]) for v in s))
                        n2 = fn_name[(t, u, f2)]
                        n1 = fn_name[(s, t, f1)]
                        nc = fn_name[(s, u, comp_fn)]
                        if not n2.startswith("1") and not n1.startswith("1"):
                            compose[(n2, n1)] = nc
    return one_cat(list(objs.values()), arrows, compose, name=name)


def _functions(s, t):
    if not s:
        return [()]
    if not t:
        return []
    out = []
    for values in product(t, repeat=len(s)):
        out.append(tuple(sorted(zip(s, values))))
    return out


def corpus_categories():
    """At least ten known-valid categories for false-positive sweeps."""
    return [
        terminal(),
        discrete(2),
        discrete(3),
        walking_arrow(),
        parallel_pair(),
        walking_iso(),
        composable_pair(),
        diamond_poset(),
        chain_poset(3),
        zmod2_loop_cat(),
        walking_iso_thin2(),
        equalizer_two_cat(),
        set_maps_category(),
    ]
