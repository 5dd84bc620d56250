"""Equivalence search, degree invariants, arrow classification, and
homotopy groups over finite cell tables.

Two parallel cells are equivalent when mutually inverse arrows exist one
degree up whose round trips are equivalent to identities one degree up
again; at the top degree the relation bottoms out as equality, which
makes the search finite.  Witnesses are kept as explicit trees so every
claimed equivalence can be replayed against the composition tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ocat.core import CompositionError, FiniteOmegaCat, StructureError


@dataclass(frozen=True)
class EquivalenceWitness:
    forward: Optional[str]
    backward: Optional[str]
    left: Optional["EquivalenceWitness"]  # e(a) ~ backward . forward
    right: Optional["EquivalenceWitness"]  # forward . backward ~ e(b)

    @property
    def is_leaf(self) -> bool:
        return self.forward is None


_LEAF = EquivalenceWitness(None, None, None, None)


def are_equivalent(cat: FiniteOmegaCat, x: str, y: str) -> Optional[EquivalenceWitness]:
    """Search for an equivalence witness between two same-degree cells.

    Memoised per category; the recursion climbs one degree per step and
    stops where only identities remain, so it always terminates.
    """
    if cat.degree(x) != cat.degree(y):
        raise StructureError("cells of different degree are never equivalent")
    cache = cat._equiv_cache
    key = (x, y)
    if key in cache:
        return cache[key]
    cache[key] = None  # cut cycles pessimistically; overwritten on success
    result = _search(cat, x, y)
    cache[key] = result
    if result is not None:
        cache[(y, x)] = EquivalenceWitness(result.backward, result.forward, result.right, result.left) if not result.is_leaf else result
    return result


def _search(cat, x, y):
    if cat.degree(x) >= cat.top_degree:
        return _LEAF if x == y else None
    ex, ey = cat.e[x], cat.e[y]
    for f in cat.arrows_between.get((x, y), []):
        for g in cat.arrows_between.get((y, x), []):
            try:
                gf = cat.compose(1, g, f)
                fg = cat.compose(1, f, g)
            except CompositionError:
                continue
            left = are_equivalent(cat, ex, gf)
            if left is None:
                continue
            right = are_equivalent(cat, fg, ey)
            if right is None:
                continue
            return EquivalenceWitness(f, g, left, right)
    return None


def replay_witness(cat: FiniteOmegaCat, x: str, y: str, w: EquivalenceWitness) -> bool:
    """Re-run a witness against the tables, independently of the search."""
    if w.is_leaf:
        return cat.degree(x) >= cat.top_degree and x == y
    f, g = w.forward, w.backward
    if cat.d(f) != x or cat.c(f) != y or cat.d(g) != y or cat.c(g) != x:
        return False
    try:
        gf = cat.compose(1, g, f)
        fg = cat.compose(1, f, g)
    except CompositionError:
        return False
    return replay_witness(cat, cat.e[x], gf, w.left) and replay_witness(cat, fg, cat.e[y], w.right)


def witness_arrows(w: EquivalenceWitness) -> list:
    if w.is_leaf:
        return []
    return [w.forward, w.backward] + witness_arrows(w.left) + witness_arrows(w.right)


@dataclass(frozen=True)
class DegreeReport:
    pair_degree: int
    witness: EquivalenceWitness


def _min_nonid_top(cat: FiniteOmegaCat, x: str, y: str) -> Optional[tuple]:
    """Minimal-over-witnesses top level of nonidentity arrows, with a witness.

    Returns (level, witness); level equals deg(x) when a witness made of
    identities alone exists.
    """
    cache = cat._degree_cache
    key = (x, y)
    if key in cache:
        return cache[key]
    cache[key] = None
    n = cat.degree(x)
    if n >= cat.top_degree:
        result = (0, _LEAF) if x == y else None
        cache[key] = result
        return result
    best = None
    for f in cat.arrows_between.get((x, y), []):
        for g in cat.arrows_between.get((y, x), []):
            try:
                gf = cat.compose(1, g, f)
                fg = cat.compose(1, f, g)
            except CompositionError:
                continue
            left = _min_nonid_top(cat, cat.e[x], gf)
            if left is None:
                continue
            right = _min_nonid_top(cat, fg, cat.e[y])
            if right is None:
                continue
            here = 0 if (cat.is_identity_cell(f) and cat.is_identity_cell(g)) else n + 1
            lvl = max(here, left[0], right[0])
            if best is None or lvl < best[0]:
                best = (lvl, EquivalenceWitness(f, g, left[1], right[1]))
    cache[key] = best
    return best


def pair_degree(cat: FiniteOmegaCat, x: str, y: str) -> DegreeReport:
    """Lowest level above which some witness consists of identities only."""
    found = _min_nonid_top(cat, x, y)
    if found is None:
        raise StructureError(f"{x} and {y} are not equivalent")
    lvl, witness = found
    return DegreeReport(max(lvl - cat.degree(x), 0), witness)


def category_degree(cat: FiniteOmegaCat) -> int:
    """Largest pair degree over all equivalent object pairs (0 if none)."""
    best = 0
    objs = cat.objects()
    for i, a in enumerate(objs):
        for b in objs[i:]:
            if are_equivalent(cat, a, b) is not None:
                best = max(best, pair_degree(cat, a, b).pair_degree)
    return best


@dataclass(frozen=True)
class ArrowClassification:
    monic: bool
    epic: bool
    equivalence: bool


def classify_arrow(cat: FiniteOmegaCat, f: str) -> ArrowClassification:
    """Monic/epic by quantifying over parallel test arrows; equivalence by search."""
    if cat.degree(f) < 1:
        raise StructureError("classification needs an arrow, not an object")
    a, b = cat.d(f), cat.c(f)
    monic = True
    for z in cat.by_degree.get(cat.degree(a), []):
        tests = cat.arrows_between.get((z, a), [])
        for g in tests:
            for h in tests:
                try:
                    fg = cat.compose(1, f, g)
                    fh = cat.compose(1, f, h)
                except CompositionError:
                    continue
                if are_equivalent(cat, fg, fh) is not None and are_equivalent(cat, g, h) is None:
                    monic = False
    epic = True
    for w in cat.by_degree.get(cat.degree(a), []):
        tests = cat.arrows_between.get((b, w), [])
        for g in tests:
            for h in tests:
                try:
                    gf = cat.compose(1, g, f)
                    hf = cat.compose(1, h, f)
                except CompositionError:
                    continue
                if are_equivalent(cat, gf, hf) is not None and are_equivalent(cat, g, h) is None:
                    epic = False
    equivalence = False
    for finv in cat.arrows_between.get((b, a), []):
        try:
            ff = cat.compose(1, finv, f)
            ffi = cat.compose(1, f, finv)
        except CompositionError:
            continue
        if (
            are_equivalent(cat, cat.e[a], ff) is not None
            and are_equivalent(cat, cat.e[b], ffi) is not None
        ):
            equivalence = True
            break
    return ArrowClassification(monic, epic, equivalence)


def is_equivalence_cell(cat: FiniteOmegaCat, f: str) -> bool:
    """Cell possessing a quasi-inverse one degree up from its boundaries."""
    if cat.degree(f) < 1:
        return False
    a, b = cat.d(f), cat.c(f)
    for g in cat.arrows_between.get((b, a), []):
        try:
            gf = cat.compose(1, g, f)
            fg = cat.compose(1, f, g)
        except CompositionError:
            continue
        if (
            are_equivalent(cat, cat.e[a], gf) is not None
            and are_equivalent(cat, cat.e[b], fg) is not None
        ):
            return True
    return False


class HomotopyGroupError(ValueError):
    pass


@dataclass
class HomotopyGroup:
    n: int
    carrier: list  # cell ids (for n = 0: hom-degree-0 cells I -> a)
    base_point: Optional[str]
    op_table: Optional[dict]  # (u, v) -> u . v at deepness 1
    classes: list  # partition of the carrier by equivalence
    class_of: dict

    def class_index(self, cid: str) -> int:
        return self.class_of[cid]

    @property
    def order(self) -> int:
        return len(self.classes)


def _check_star_preserves_e(cat: FiniteOmegaCat):
    """Horizontal composition must send identity pairs to identities."""
    for (k, f, g), h in sorted(cat.comp.items()):
        if cat.degree(f) + 1 > cat.top_degree:
            continue
        ef, eg = cat.e[f], cat.e[g]
        if (k + 1, ef, eg) in cat.comp and cat.comp[(k + 1, ef, eg)] != cat.e[h]:
            raise HomotopyGroupError(
                f"horizontal composition does not strictly preserve identities at ({f}, {g})"
            )


def homotopy_group(cat: FiniteOmegaCat, i_obj: str, a: str, x: str, n: int) -> HomotopyGroup:
    """Automorphism classes of the (n-1)-fold identity on a chosen arrow.

    For n = 0 this is the pointed set of arrows from the representing
    object; for n > 0 the carrier consists of the degree-(n+1) loop
    cells on e^(n-1)(x) that admit quasi-inverses, with composition at
    deepness 1 and the class partition forming an exact group.
    """
    if cat.degree(x) != 1 or cat.d(x) != i_obj or cat.c(x) != a:
        raise StructureError(f"{x} is not an arrow {i_obj} -> {a}")
    if n == 0:
        carrier = list(cat.arrows_between.get((i_obj, a), []))
        classes, class_of = _partition(cat, carrier)
        return HomotopyGroup(0, carrier, x, None, classes, class_of)
    _check_star_preserves_e(cat)
    base = x
    for _ in range(n - 1):
        base = cat.e[base]
    if cat.degree(base) + 1 > cat.top_degree:
        carrier = []
    else:
        carrier = [
            u
            for u in cat.arrows_between.get((base, base), [])
            if is_equivalence_cell(cat, u)
        ]
    op = {}
    for u in carrier:
        for v in carrier:
            op[(u, v)] = cat.compose(1, u, v)
            if op[(u, v)] not in carrier:
                raise HomotopyGroupError("carrier is not closed under composition")
    classes, class_of = _partition(cat, carrier)
    group = HomotopyGroup(n, carrier, cat.e[base] if carrier else None, op, classes, class_of)
    _verify_group(cat, group)
    return group


def _partition(cat, carrier):
    classes = []
    class_of = {}
    for cid in carrier:
        for idx, cls in enumerate(classes):
            if are_equivalent(cat, cid, cls[0]) is not None:
                cls.append(cid)
                class_of[cid] = idx
                break
        else:
            classes.append([cid])
            class_of[cid] = len(classes) - 1
    return classes, class_of


def _verify_group(cat, group: HomotopyGroup):
    """Group axioms on the quotient, checked exhaustively."""
    if not group.carrier:
        return
    k = len(group.classes)
    table = {}
    for u in group.carrier:
        for v in group.carrier:
            got = group.class_of[group.op_table[(u, v)]]
            key = (group.class_of[u], group.class_of[v])
            if table.setdefault(key, got) != got:
                raise HomotopyGroupError("composition is not constant on classes")
    unit = group.class_of[group.base_point]
    for i in range(k):
        if table[(unit, i)] != i or table[(i, unit)] != i:
            raise HomotopyGroupError("quotient unit law fails")
        if not any(table[(i, j)] == unit and table[(j, i)] == unit for j in range(k)):
            raise HomotopyGroupError("quotient inverses missing")
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if table[(table[(i, j)], l)] != table[(i, table[(j, l)])]:
                    raise HomotopyGroupError("quotient associativity fails")


@dataclass
class InducedMapReport:
    mapping: dict
    carrier_preserved: bool
    respects_op: bool


def induced_map(cat: FiniteOmegaCat, f: str, i_obj: str, x: str, n: int) -> InducedMapReport:
    """Push a homotopy group forward along an arrow out of its object."""
    a = cat.c(x)
    b = cat.c(f)
    if cat.d(f) != a:
        raise StructureError(f"{f} does not start at {a}")
    from ocat.core import star

    y = cat.compose(1, f, x)
    src = homotopy_group(cat, i_obj, a, x, n)
    tgt = homotopy_group(cat, i_obj, b, y, n)
    mapping = {}
    carrier_ok = True
    if n == 0:
        for u in src.carrier:
            mapping[u] = cat.compose(1, f, u)
            if mapping[u] not in tgt.carrier:
                carrier_ok = False
    else:
        for u in src.carrier:
            mapping[u] = star(cat, f, u)
            if mapping[u] not in tgt.carrier:
                carrier_ok = False
    respects = True
    if n > 0 and carrier_ok:
        for u in src.carrier:
            for v in src.carrier:
                lhs = mapping[src.op_table[(u, v)]]
                rhs = tgt.op_table[(mapping[u], mapping[v])]
                if are_equivalent(cat, lhs, rhs) is None:
                    respects = False
    return InducedMapReport(mapping, carrier_ok, respects)


@dataclass
class InvariantReport:
    preserves_equivalence: bool
    bound_holds: bool
    bound_attained: bool
    violating_pair: Optional[tuple]
    classification: Optional[tuple]


def check_invariant(functor, m: int, n: int) -> InvariantReport:
    """Is the functor an (m, n)-invariant: equivalence-preserving, degree-bounding."""
    src, tgt = functor.source, functor.target
    preserves = True
    bound = True
    attained = False
    violating = None
    objs = src.objects()
    for i, a in enumerate(objs):
        for b in objs[i:]:
            if are_equivalent(src, a, b) is None:
                continue
            fa, fb = functor.cell_map[a], functor.cell_map[b]
            if are_equivalent(tgt, fa, fb) is None:
                preserves = False
                violating = (a, b)
                continue
            d_src = pair_degree(src, a, b).pair_degree
            d_tgt = pair_degree(tgt, fa, fb).pair_degree
            if d_src <= m:
                if d_tgt > n:
                    bound = False
                    violating = (a, b)
                if d_tgt == n:
                    attained = True
    ok = preserves and bound and attained
    return InvariantReport(preserves, bound, attained, violating, (m, n) if ok else None)
