"""Functors between finite cell tables, natural families at every level,
their composites, and enumeration helpers.

A functor is a total cell map preserving degree and boundaries strictly
and identities/composites at least up to equivalence.  A level-n family
(natural transformation at n = 0) assigns to every source object a
target cell of degree n+1; the defining exchange condition is checked
against the tables, strictly and up to equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ocat.core import (
    CompositionError,
    FiniteOmegaCat,
    StructureError,
)
from ocat.equivalence import are_equivalent, is_equivalence_cell


class FunctorData:
    """Total cell map between two finite categories."""

    __slots__ = ("source", "target", "cell_map", "name", "_hash")

    def __init__(self, source, target, mapping: dict, name=""):
        missing = [c for c in source.cells if c not in mapping]
        if missing:
            raise StructureError(f"cell map not total, missing {missing[:3]}")
        self.source = source
        self.target = target
        self.cell_map = dict(mapping)
        self.name = name
        self._hash = hash((id(source), id(target), tuple(sorted(mapping.items()))))

    build = classmethod(lambda cls, source, target, mapping, name="": cls(source, target, mapping, name))

    def __call__(self, cid: str) -> str:
        return self.cell_map[cid]

    def apply_ec(self, ec: tuple) -> tuple:
        cid, pad = ec
        return self.target.ec_normalize((self.cell_map[cid], pad))

    def __eq__(self, other):
        return (
            isinstance(other, FunctorData)
            and self.source is other.source
            and self.target is other.target
            and self.cell_map == other.cell_map
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FunctorData({self.name or 'functor'}: {self.source.name or '?'} -> {self.target.name or '?'})"


def identity_functor(cat: FiniteOmegaCat) -> FunctorData:
    return FunctorData(cat, cat, {c: c for c in cat.cells}, name="id")


def compose_functors(f: FunctorData, g: FunctorData) -> FunctorData:
    """f after g."""
    return FunctorData(
        g.source, f.target, {c: f(v) for c, v in g.cell_map.items()},
        name=f"{f.name}.{g.name}" if f.name and g.name else "",
    )


@dataclass
class FunctorReport:
    total: bool
    degree_ok: bool
    boundaries_ok: bool
    identities_strict: bool
    identities_weak: bool
    composites_strict: bool
    composites_weak: bool
    failures: list = field(default_factory=list)

    def passes(self, strictness: str) -> bool:
        base = self.total and self.degree_ok and self.boundaries_ok
        if strictness == "strict":
            return base and self.identities_strict and self.composites_strict
        return base and self.identities_weak and self.composites_weak


def check_functor(f: FunctorData, strictness: str = "weak") -> FunctorReport:
    """Verify the functor laws cell by cell against both tables."""
    src, tgt = f.source, f.target
    mapping = f.cell_map
    rep = FunctorReport(True, True, True, True, True, True, True)
    for cid, cell in src.cells.items():
        img = mapping.get(cid)
        if img is None or img not in tgt.cells:
            rep.total = False
            rep.failures.append(("total", cid))
            continue
        if tgt.degree(img) != cell.degree:
            rep.degree_ok = False
            rep.failures.append(("degree", cid))
            continue
        if cell.degree >= 1:
            if tgt.d(img) != mapping[cell.dom] or tgt.c(img) != mapping[cell.cod]:
                rep.boundaries_ok = False
                rep.failures.append(("boundary", cid))
    if not (rep.total and rep.degree_ok and rep.boundaries_ok):
        return rep
    for base, idc in sorted(src.e.items()):
        want = mapping[idc]
        img_base = mapping[base]
        if tgt.degree(img_base) >= tgt.top_degree:
            continue
        ident = tgt.e[img_base]
        if want != ident:
            rep.identities_strict = False
            if are_equivalent(tgt, want, ident) is None:
                rep.identities_weak = False
                rep.failures.append(("identity", base))
    for (k, a, b), h in sorted(src.comp.items()):
        try:
            got = tgt.compose(k, mapping[a], mapping[b])
        except CompositionError:
            rep.composites_weak = rep.composites_strict = False
            rep.failures.append(("composite", (k, a, b)))
            continue
        if got != mapping[h]:
            rep.composites_strict = False
            if are_equivalent(tgt, got, mapping[h]) is None:
                rep.composites_weak = False
                rep.failures.append(("composite", (k, a, b)))
    return rep


def functor_diagnostics(f: FunctorData) -> dict:
    """Derived implications: weak preservation of the doubled identity
    forces strict identity preservation; equivalence preservation forces
    strict composite preservation."""
    rep = check_functor(f)
    src, tgt = f.source, f.target
    mapping = f.cell_map
    e2_weak = True
    for base in src.objects():
        if src.top_degree < 2 or tgt.top_degree < 2:
            continue
        ee = src.e[src.e[base]]
        ident2 = tgt.e[tgt.e[mapping[base]]]
        if are_equivalent(tgt, mapping[ee], ident2) is None:
            e2_weak = False
    preserves = check_equiv_preservation(f).preserved
    return {
        "e2_weak_implies_e_strict": (not e2_weak) or rep.identities_strict,
        "equiv_preserving_implies_strict_composites": (not preserves) or rep.composites_strict,
    }


@dataclass
class EquivPreservationReport:
    preserved: bool
    failing_pairs: list
    homwise: bool


def check_equiv_preservation(f: FunctorData) -> EquivPreservationReport:
    """Image pairs of equivalent cells must be equivalent.

    Also evaluates the hom-wise criterion: preservation restricted to
    parallel cells (each hom-set) versus preservation everywhere.
    """
    src, tgt = f.source, f.target
    mapping = f.cell_map
    failing = []
    homwise = True
    for n, ids in sorted(src.by_degree.items()):
        for i, x in enumerate(ids):
            for y in ids[i + 1 :]:
                if are_equivalent(src, x, y) is None:
                    continue
                if are_equivalent(tgt, mapping[x], mapping[y]) is None:
                    failing.append((x, y))
                    cx, cy = src.cells[x], src.cells[y]
                    if n >= 1 and (cx.dom, cx.cod) == (cy.dom, cy.cod):
                        homwise = False
    return EquivPreservationReport(not failing, failing, homwise)


class ModificationData:
    """Level-n family between parallel level-(n-1) families (functors below).

    Components assign each source object a target cell of degree n+1
    whose boundaries are the parents' components at that object.
    """

    __slots__ = ("level", "dom", "cod", "components", "name", "_hash")

    def __init__(self, level, dom, cod, components: dict, name=""):
        self.level = level
        self.dom = dom
        self.cod = cod
        self.components = dict(components)
        self.name = name
        self._hash = hash((level, dom, cod, tuple(sorted(components.items()))))

    build = classmethod(lambda cls, level, dom, cod, components, name="": cls(level, dom, cod, components, name))

    def __call__(self, obj: str) -> str:
        return self.components[obj]

    def __eq__(self, other):
        return (
            isinstance(other, ModificationData)
            and self.level == other.level
            and self.dom == other.dom
            and self.cod == other.cod
            and self.components == other.components
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ModificationData(level {self.level}, {len(self.components)} components)"

    def root_functors(self) -> tuple:
        lo, hi = self.dom, self.cod
        while isinstance(lo, ModificationData):
            lo = lo.dom
        while isinstance(hi, ModificationData):
            hi = hi.cod
        return lo, hi

    def source_cat(self) -> FiniteOmegaCat:
        return self.root_functors()[0].source

    def target_cat(self) -> FiniteOmegaCat:
        return self.root_functors()[0].target


def identity_modification(of: Union[FunctorData, ModificationData]) -> ModificationData:
    """Componentwise identity one level up."""
    if isinstance(of, FunctorData):
        tgt = of.target
        comps = {a: tgt.e[of(a)] for a in of.source.objects()}
        return ModificationData(0, of, of, comps, name=f"e({of.name})" if of.name else "")
    tgt = of.target_cat()
    comps = {a: tgt.e[of(a)] for a in of.source_cat().objects()}
    return ModificationData(of.level + 1, of, of, comps, name=f"e({of.name})" if of.name else "")


@dataclass
class ModificationReport:
    boundaries_ok: bool
    natural_strict: bool
    natural_weak: bool
    failures: list

    def passes(self, strictness: str = "weak") -> bool:
        if strictness == "strict":
            return self.boundaries_ok and self.natural_strict
        return self.boundaries_ok and self.natural_weak


def check_modification(m: ModificationData) -> ModificationReport:
    """Boundary chain plus the exchange condition over all padded cells.

    The exchange condition quantifies over source cells of hom-degree at
    least the level; the strict verdict is reported separately (expected
    to hold on valid tables).
    """
    src = m.source_cat()
    tgt = m.target_cat()
    f_root, g_root = m.root_functors()
    failures = []
    bounds_ok = True
    for a in src.objects():
        comp = m.components.get(a)
        if comp is None or comp not in tgt.cells:
            bounds_ok = False
            failures.append(("missing-component", a))
            continue
        if tgt.degree(comp) != m.level + 1:
            bounds_ok = False
            failures.append(("component-degree", a))
            continue
        if tgt.d(comp) != m.dom(a) or tgt.c(comp) != m.cod(a):
            bounds_ok = False
            failures.append(("component-boundary", a))
    if not bounds_ok:
        return ModificationReport(False, False, False, failures)
    natural_strict = True
    natural_weak = True
    n = m.level
    for cid in src.cell_ids():
        deg = src.degree(cid)
        if deg < n + 1:
            continue
        a = src.d_iter(cid, deg)
        b = src.c_iter(cid, deg)
        k = deg - 1 - n
        try:
            lhs = tgt.ec_cid(tgt.ec_compose(deg, tgt.ec(m(b), k), tgt.ec(f_root(cid))))
            rhs = tgt.ec_cid(tgt.ec_compose(deg, tgt.ec(g_root(cid)), tgt.ec(m(a), k)))
        except CompositionError:
            failures.append(("exchange-undefined", cid))
            natural_strict = natural_weak = False
            continue
        if lhs != rhs:
            natural_strict = False
            if are_equivalent(tgt, lhs, rhs) is None:
                natural_weak = False
                failures.append(("exchange", cid))
    return ModificationReport(True, natural_strict, natural_weak, failures)


def compose_modifications(a: ModificationData, b: ModificationData, k: int) -> ModificationData:
    """Composite at deepness k: componentwise below the full deepness,
    whiskering through the boundary functors at it."""
    n = a.level
    if b.level != n:
        raise CompositionError("modification levels differ")
    if k < 1 or k > n + 2:
        raise CompositionError(f"deepness {k} out of range for level {n}")
    tgt = a.target_cat()
    if k < n + 2:
        src = a.source_cat()
        comps = {
            obj: tgt.ec_cid(tgt.ec_compose(k, tgt.ec(a(obj)), tgt.ec(b(obj))))
            for obj in src.objects()
        }
        if k == 1:
            dom, cod = b.dom, a.cod
        else:
            dom = compose_modifications(a.dom, b.dom, k - 1)
            cod = compose_modifications(a.cod, b.cod, k - 1)
        return ModificationData(n, dom, cod, comps)
    # k == n + 2: a sits over the target of b
    f_prime = _cod_functor(b)
    g = _dom_functor(a)
    src = b.source_cat()
    comps = {}
    for obj in src.objects():
        left = a(f_prime(obj))
        right = g(b(obj))
        comps[obj] = tgt.ec_cid(tgt.ec_compose(n + 1, tgt.ec(left), tgt.ec(right)))
    if n == 0:
        dom = compose_functors(a.dom, b.dom)
        cod = compose_functors(a.cod, b.cod)
    else:
        dom = compose_modifications(a.dom, b.dom, n + 1)
        cod = compose_modifications(a.cod, b.cod, n + 1)
    return ModificationData(n, dom, cod, comps)


def _dom_functor(m: ModificationData) -> FunctorData:
    return m.root_functors()[0]


def _cod_functor(m: ModificationData) -> FunctorData:
    return m.root_functors()[1]


def whisker_functor_left(g: FunctorData, m: ModificationData) -> ModificationData:
    """Post-compose a family with a functor out of its target."""
    comps = {obj: g(m(obj)) for obj in m.source_cat().objects()}
    if isinstance(m.dom, FunctorData):
        return ModificationData(0, compose_functors(g, m.dom), compose_functors(g, m.cod), comps)
    return ModificationData(
        m.level, whisker_functor_left(g, m.dom), whisker_functor_left(g, m.cod), comps
    )


def whisker_functor_right(m: ModificationData, g: FunctorData) -> ModificationData:
    """Pre-compose a family with a functor into its source."""
    comps = {obj: m(g(obj)) for obj in g.source.objects()}
    if isinstance(m.dom, FunctorData):
        return ModificationData(0, compose_functors(m.dom, g), compose_functors(m.cod, g), comps)
    return ModificationData(
        m.level, whisker_functor_right(m.dom, g), whisker_functor_right(m.cod, g), comps
    )


def enumerate_functors(src: FiniteOmegaCat, tgt: FiniteOmegaCat, strictness="weak", bound=4096):
    """All functors src -> tgt, by boundary-pruned backtracking."""
    order = [c for _, ids in sorted(src.by_degree.items()) for c in ids]
    results = []
    mapping: dict = {}

    def candidates(cid):
        cell = src.cells[cid]
        if cell.degree == 0:
            return tgt.by_degree.get(0, [])
        return tgt.arrows_between.get((mapping[cell.dom], mapping[cell.cod]), [])

    def rec(i):
        if len(results) >= bound:
            raise StructureError(f"functor enumeration exceeded bound {bound}")
        if i == len(order):
            f = FunctorData(src, tgt, dict(mapping))
            if check_functor(f, strictness).passes(strictness):
                results.append(f)
            return
        cid = order[i]
        for cand in candidates(cid):
            mapping[cid] = cand
            rec(i + 1)
        mapping.pop(cid, None)

    rec(0)
    return results


def enumerate_transformations(f: FunctorData, g: FunctorData, bound=4096):
    """All strictly natural level-0 families f -> g."""
    src, tgt = f.source, f.target
    objs = src.objects()
    results = []
    comps: dict = {}

    def natural_at(obj):
        for cid in src.cell_ids():
            deg = src.degree(cid)
            if deg < 1:
                continue
            a = src.d_iter(cid, deg)
            b = src.c_iter(cid, deg)
            if a not in comps or b not in comps or obj not in (a, b):
                continue
            k = deg - 1
            try:
                lhs = tgt.ec_cid(tgt.ec_compose(deg, tgt.ec(comps[b], k), tgt.ec(f(cid))))
                rhs = tgt.ec_cid(tgt.ec_compose(deg, tgt.ec(g(cid)), tgt.ec(comps[a], k)))
            except CompositionError:
                return False
            if lhs != rhs:
                return False
        return True

    def rec(i):
        if len(results) >= bound:
            raise StructureError(f"transformation enumeration exceeded bound {bound}")
        if i == len(objs):
            results.append(ModificationData(0, f, g, dict(comps)))
            return
        obj = objs[i]
        for cand in tgt.arrows_between.get((f(obj), g(obj)), []):
            comps[obj] = cand
            if natural_at(obj):
                rec(i + 1)
        comps.pop(obj, None)

    rec(0)
    return results


def enumerate_higher_modifications(dom: ModificationData, cod: ModificationData, bound=4096):
    """All level-(n+1) families between two parallel level-n families."""
    if dom.level != cod.level:
        raise StructureError("parents must share a level")
    src = dom.source_cat()
    tgt = dom.target_cat()
    level = dom.level + 1
    objs = src.objects()
    results = []
    comps: dict = {}

    def rec(i):
        if len(results) >= bound:
            raise StructureError(f"modification enumeration exceeded bound {bound}")
        if i == len(objs):
            m = ModificationData(level, dom, cod, dict(comps))
            if check_modification(m).natural_strict:
                results.append(m)
            return
        obj = objs[i]
        for cand in tgt.arrows_between.get((dom(obj), cod(obj)), []):
            comps[obj] = cand
            rec(i + 1)
        comps.pop(obj, None)

    rec(0)
    return results


def modifications_equivalent(m1: ModificationData, m2: ModificationData, bound=256) -> bool:
    """Equivalence of two parallel families, one level up at a time.

    Bottoms out where components would live above the target's top
    degree, where only equality is left.
    """
    if m1.level != m2.level:
        return False
    tgt = m1.target_cat()
    if m1.level + 2 > tgt.top_degree:
        return m1.components == m2.components
    if m1.components == m2.components and m1.dom == m2.dom and m1.cod == m2.cod:
        return True
    for u in enumerate_higher_modifications(m1, m2, bound):
        for v in enumerate_higher_modifications(m2, m1, bound):
            uv = compose_modifications(v, u, 1)
            vu = compose_modifications(u, v, 1)
            if modifications_equivalent(identity_modification(m1), uv, bound) and modifications_equivalent(
                vu, identity_modification(m2), bound
            ):
                return True
    return False


def functors_equivalent(f: FunctorData, g: FunctorData, bound=256) -> bool:
    """Are two parallel functors connected by mutually quasi-inverse
    transformations?"""
    if f == g:
        return True
    for u in enumerate_transformations(f, g, bound):
        for v in enumerate_transformations(g, f, bound):
            uv = compose_modifications(v, u, 1)
            vu = compose_modifications(u, v, 1)
            if modifications_equivalent(identity_modification(f), uv, bound) and modifications_equivalent(
                vu, identity_modification(g), bound
            ):
                return True
    return False


def functor_is_equivalence(f: FunctorData, bound=256) -> bool:
    """Does the functor admit a quasi-inverse (searched exhaustively)?"""
    try:
        backs = enumerate_functors(f.target, f.source, bound=bound)
    except StructureError:
        raise
    idc = identity_functor(f.source)
    idd = identity_functor(f.target)
    for g in backs:
        if functors_equivalent(idc, compose_functors(g, f), bound) and functors_equivalent(
            compose_functors(f, g), idd, bound
        ):
            return True
    return False


def cats_equivalent(c: FiniteOmegaCat, d: FiniteOmegaCat, bound=256) -> bool:
    """Equivalence of two finite categories by exhaustive functor search."""
    for f in enumerate_functors(c, d, bound=bound):
        if functor_is_equivalence(f, bound):
            return True
    return False


def equivalence_core(cat: FiniteOmegaCat, k: int) -> FiniteOmegaCat:
    """Keep all cells up to degree k; above it only the invertible ones
    whose boundaries were kept."""
    from ocat.core import sub_category

    keep = set()
    for n, ids in sorted(cat.by_degree.items()):
        for cid in ids:
            if n <= k:
                keep.add(cid)
            else:
                cell = cat.cells[cid]
                if cell.dom in keep and cell.cod in keep and is_equivalence_cell(cat, cid):
                    keep.add(cid)
    core = sub_category(cat, keep, name=f"{cat.name}~{k}" if cat.name else "")
    for cid in core.cell_ids():
        if core.degree(cid) < core.top_degree and cid not in core.e:
            raise StructureError(f"core lost the identity of {cid}")
    for (kk, f, g), h in cat.comp.items():
        if f in keep and g in keep and h not in keep:
            raise StructureError(f"core not closed under composition at ({kk}, {f}, {g})")
    return core
