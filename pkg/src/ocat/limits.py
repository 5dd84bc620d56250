"""Diagrams over graded graphs, strict (co)limit verification, adjunctions
in both hom-bijection and unit/counit form, and concrete duality checks.

A cone is a family of edges from a candidate vertex into a diagram that
commutes with every diagram cell; a vertex is a strict limit when
transporting along it is a bijection between arrows into the vertex and
cone families, level by level.  Adjunctions come either as an explicit
family of hom isomorphisms or as unit/counit data; the two presentations
are converted into each other and cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ocat.core import (
    Cell,
    CompositionError,
    FiniteOmegaCat,
    StructureError,
    hom_set,
)
from ocat.equivalence import are_equivalent
from ocat.functors import (
    FunctorData,
    ModificationData,
    check_functor,
    check_modification,
    compose_functors,
    identity_functor,
)


@dataclass(frozen=True)
class GraphNode:
    nid: str
    degree: int
    dom: Optional[str] = None
    cod: Optional[str] = None


class GraphData:
    """Graded nodes with globular source/target maps; no composition."""

    def __init__(self, nodes):
        self.nodes = {n.nid: n for n in nodes}
        for n in self.nodes.values():
            if n.degree > 0:
                if n.dom not in self.nodes or n.cod not in self.nodes:
                    raise StructureError(f"graph node {n.nid} has dangling boundary")
                if self.nodes[n.dom].degree != n.degree - 1 or self.nodes[n.cod].degree != n.degree - 1:
                    raise StructureError(f"graph node {n.nid} boundary degree wrong")
        for n in self.nodes.values():
            if n.degree >= 2:
                dd = self.nodes[n.dom]
                cc = self.nodes[n.cod]
                if dd.dom != cc.dom or dd.cod != cc.cod:
                    raise StructureError(f"graph node {n.nid} breaks globularity")

    def by_degree(self, k):
        return sorted(n.nid for n in self.nodes.values() if n.degree == k)

    def objects(self):
        return self.by_degree(0)

    def max_degree(self):
        return max((n.degree for n in self.nodes.values()), default=0)

    def d_iter(self, nid, k):
        for _ in range(k):
            nid = self.nodes[nid].dom
        return nid

    def c_iter(self, nid, k):
        for _ in range(k):
            nid = self.nodes[nid].cod
        return nid


def discrete_graph(names):
    return GraphData([GraphNode(n, 0) for n in names])


@dataclass
class DiagramData:
    graph: GraphData
    target: FiniteOmegaCat
    assignment: dict  # node -> cell, degree preserving

    def __post_init__(self):
        for nid, node in self.graph.nodes.items():
            cell = self.assignment.get(nid)
            if cell is None or cell not in self.target.cells:
                raise StructureError(f"diagram misses node {nid}")
            if self.target.degree(cell) != node.degree:
                raise StructureError(f"diagram changes degree at {nid}")
            if node.degree > 0:
                if (
                    self.target.d(cell) != self.assignment[node.dom]
                    or self.target.c(cell) != self.assignment[node.cod]
                ):
                    raise StructureError(f"diagram breaks boundaries at {nid}")

    def __call__(self, nid):
        return self.assignment[nid]

    def key(self):
        return tuple(sorted(self.assignment.items()))


def constant_diagram(graph: GraphData, cat: FiniteOmegaCat, a: str) -> DiagramData:
    assignment = {}
    for nid, node in graph.nodes.items():
        assignment[nid] = cat.ec_cid(cat.ec(a, node.degree))
    return DiagramData(graph, cat, assignment)


@dataclass
class ConeData:
    diagram: DiagramData
    vertex: str
    edges: dict  # graph object -> 1-cell
    direction: str = "limit"


@dataclass
class ConeReport:
    edges_ok: bool
    commutes_strict: bool
    commutes_weak: bool
    failures: list = field(default_factory=list)

    def passes(self, strictness="weak"):
        return self.edges_ok and (self.commutes_strict if strictness == "strict" else self.commutes_weak)


def _transport(cat, direction, edge_cell, pad, other_ec, deep):
    """Edge composed with a diagram cell on the appropriate side."""
    if direction == "limit":
        return cat.ec_compose(deep, other_ec, cat.ec(edge_cell, pad))
    return cat.ec_compose(deep, cat.ec(edge_cell, pad), other_ec)


def check_cone(cone: ConeData) -> ConeReport:
    """Edges must exist and commute with every diagram cell."""
    d = cone.diagram
    cat = d.target
    g = d.graph
    failures = []
    edges_ok = True
    for obj in g.objects():
        e = cone.edges.get(obj)
        if e is None or e not in cat.cells or cat.degree(e) != 1:
            edges_ok = False
            failures.append(("edge-missing", obj))
            continue
        want = (cone.vertex, d(obj)) if cone.direction == "limit" else (d(obj), cone.vertex)
        if (cat.d(e), cat.c(e)) != want:
            edges_ok = False
            failures.append(("edge-boundary", obj))
    if not edges_ok:
        return ConeReport(False, False, False, failures)
    strict = True
    weak = True
    for nid, node in sorted(g.nodes.items()):
        if node.degree < 1:
            continue
        deg = node.degree
        src = g.d_iter(nid, deg)
        tgt = g.c_iter(nid, deg)
        k = deg - 1
        try:
            if cone.direction == "limit":
                lhs = cat.ec_cid(_transport(cat, "limit", cone.edges[src], k, cat.ec(d(nid)), deg))
            else:
                lhs = cat.ec_cid(_transport(cat, "colimit", cone.edges[tgt], k, cat.ec(d(nid)), deg))
        except CompositionError:
            strict = weak = False
            failures.append(("edge-noncomposable", nid))
            continue
        rhs_edge = cone.edges[tgt] if cone.direction == "limit" else cone.edges[src]
        rhs = cat.ec_cid(cat.ec(rhs_edge, k))
        if lhs != rhs:
            strict = False
            if are_equivalent(cat, lhs, rhs) is None:
                weak = False
                failures.append(("edge-square", nid))
    return ConeReport(True, strict, weak, failures)


def _family_exchange_ok(cat, d: DiagramData, comps: dict, n: int, direction: str, partial=False):
    """Exchange conditions of a level-n family against every diagram cell."""
    g = d.graph
    for nid, node in g.nodes.items():
        if node.degree < n + 1:
            continue
        deg = node.degree
        src = g.d_iter(nid, deg)
        tgt = g.c_iter(nid, deg)
        if partial and (src not in comps or tgt not in comps):
            continue
        k = deg - 1 - n
        try:
            if direction == "limit":
                lhs = cat.ec_cid(cat.ec_compose(deg, cat.ec(d(nid)), cat.ec(comps[src], k)))
                rhs = cat.ec_cid(cat.ec(comps[tgt], k))
            else:
                lhs = cat.ec_cid(cat.ec_compose(deg, cat.ec(comps[tgt], k), cat.ec(d(nid))))
                rhs = cat.ec_cid(cat.ec(comps[src], k))
        except CompositionError:
            return False
        if lhs != rhs:
            return False
    return True


def _boundary_chain_ok(cat, d: DiagramData, comps: dict, n: int, direction: str):
    """A genuine level-n family projects to valid families at every level.

    The j-fold source and the target-of-source projections must satisfy
    the level-(n-j) exchange conditions; flat component data that fails
    this names no cell between cones.
    """
    for j in range(1, n + 1):
        d_proj = {o: cat.d_iter(c, j) for o, c in comps.items()}
        c_proj = {o: cat.c(cat.d_iter(c, j - 1)) for o, c in comps.items()}
        for proj in (d_proj, c_proj):
            if not _family_exchange_ok(cat, d, proj, n - j, direction):
                return False
    return True


def cone_families(cat: FiniteOmegaCat, d: DiagramData, b: str, n: int, direction="limit"):
    """Strict level-n cone families with vertex b, enumerated directly."""
    g = d.graph
    objs = g.objects()
    results = []
    comps: dict = {}

    def pool(obj):
        want = (b, d(obj)) if direction == "limit" else (d(obj), b)
        return [
            cid
            for cid in cat.by_degree.get(n + 1, [])
            if (cat.d_iter(cid, n + 1), cat.c_iter(cid, n + 1)) == want
        ]

    def rec(i):
        if i == len(objs):
            if _boundary_chain_ok(cat, d, comps, n, direction):
                results.append(dict(comps))
            return
        for cand in pool(objs[i]):
            comps[objs[i]] = cand
            if _family_exchange_ok(cat, d, comps, n, direction, partial=True):
                rec(i + 1)
        comps.pop(objs[i], None)

    rec(0)
    return results


def _transported_family(cat, cone: ConeData, u: str, n: int):
    """The level-n family obtained by moving the cone along u."""
    fam = {}
    for obj, edge in cone.edges.items():
        if cone.direction == "limit":
            fam[obj] = cat.ec_cid(cat.ec_compose(n + 1, cat.ec(edge, n), cat.ec(u)))
        else:
            fam[obj] = cat.ec_cid(cat.ec_compose(n + 1, cat.ec(u), cat.ec(edge, n)))
    return fam


@dataclass
class LimitReport:
    cone_ok: bool
    strict: bool
    weak: bool
    failing_level: Optional[tuple] = None

    @property
    def ok(self):
        return self.cone_ok and self.strict


def verify_strict_limit(cone: ConeData) -> LimitReport:
    """Transporting along the cone must biject arrows with cone families.

    Checked for every object and every level up to the top degree; the
    weak verdict only asks for bijectivity of equivalence classes.
    """
    crep = check_cone(cone)
    if not crep.passes("weak"):
        return LimitReport(False, False, False)
    cat = cone.diagram.target
    a = cone.vertex
    strict = True
    weak = True
    failing = None
    for b in cat.objects():
        for n in range(0, cat.top_degree):
            fams = cone_families(cat, cone.diagram, b, n, cone.direction)
            if cone.direction == "limit":
                hom_cells = [u for u in cat.by_degree.get(n + 1, []) if cat.d_iter(u, n + 1) == b and cat.c_iter(u, n + 1) == a]
            else:
                hom_cells = [u for u in cat.by_degree.get(n + 1, []) if cat.d_iter(u, n + 1) == a and cat.c_iter(u, n + 1) == b]
            images = {}
            for u in hom_cells:
                key = tuple(sorted(_transported_family(cat, cone, u, n).items()))
                images.setdefault(key, []).append(u)
            fam_keys = {tuple(sorted(f.items())) for f in fams}
            onto = set(images) == fam_keys
            one_to_one = all(len(v) == 1 for v in images.values())
            if not (onto and one_to_one):
                strict = False
                if failing is None:
                    failing = (b, n)
                if not _weak_level_match(cat, hom_cells, fams, cone, n):
                    weak = False
    return LimitReport(True, strict, weak, failing)


def _weak_level_match(cat, hom_cells, fams, cone, n):
    """Class-level correspondence: every family is hit up to equivalence
    and equivalent transports come from equivalent arrows."""
    transported = {u: _transported_family(cat, cone, u, n) for u in hom_cells}

    def fam_equiv(f1, f2):
        return all(are_equivalent(cat, f1[o], f2[o]) is not None for o in f1)

    for fam in fams:
        if not any(fam_equiv(fam, tf) for tf in transported.values()):
            return False
    us = list(hom_cells)
    for i, u in enumerate(us):
        for v in us[i + 1 :]:
            if fam_equiv(transported[u], transported[v]) and are_equivalent(cat, u, v) is None:
                return False
    return True


# ---------------------------------------------------------------- adjunctions


@dataclass
class AdjunctionData:
    left: FunctorData  # F: L -> L'
    right: FunctorData  # G: L' -> L
    unit: Optional[ModificationData] = None  # 1_L -> G F
    counit: Optional[ModificationData] = None  # F G -> 1_{L'}
    phi: Optional[dict] = None  # (a, b) -> {cell of L(a, G b) -> cell of L'(F a, b)}


@dataclass
class KanReport:
    bijective: bool
    functorial: bool
    natural: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.bijective and self.functorial and self.natural


def check_adjunction_kan(adj: AdjunctionData) -> KanReport:
    """The hom maps must be isomorphisms of hom tables, natural in both slots."""
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    failures = []
    bijective = True
    functorial = True
    for a in l.objects():
        for b in lp.objects():
            phi = adj.phi.get((a, b))
            src = hom_set(l, a, g(b))
            tgt = hom_set(lp, f(a), b)
            if phi is None or sorted(phi) != src.cell_ids() or sorted(set(phi.values())) != tgt.cell_ids() or len(set(phi.values())) != len(phi):
                bijective = False
                failures.append(("bijection", (a, b)))
                continue
            for (k, u, v), h in src.comp.items():
                if phi[h] != tgt.compose(k, phi[u], phi[v]):
                    functorial = False
                    failures.append(("functorial", (a, b, u, v)))
            for u, iu in src.e.items():
                if phi[iu] != tgt.e[phi[u]]:
                    functorial = False
                    failures.append(("functorial-identity", (a, b, u)))
    natural = _phi_natural(adj, failures)
    return KanReport(bijective, functorial, natural, failures)


def _phi_natural(adj: AdjunctionData, failures) -> bool:
    """Naturality squares for test cells on both sides.

    Two shapes cover the general case: an arbitrary hom cell against
    object-level reindexings, and an object-level hom cell against
    arbitrary reindexing cells.
    """
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    natural = True
    for a in l.objects():
        for b in lp.objects():
            phi_ab = adj.phi[(a, b)]
            for x in l.by_degree.get(1, []):
                if l.c(x) != a:
                    continue
                a2 = l.d(x)
                for y in lp.by_degree.get(1, []):
                    if lp.d(y) != b:
                        continue
                    b2 = lp.c(y)
                    phi_a2b2 = adj.phi[(a2, b2)]
                    for h, img in sorted(phi_ab.items()):
                        deg = l.degree(h)
                        k = deg - 1
                        try:
                            moved = l.ec_cid(
                                l.ec_compose(
                                    deg,
                                    l.ec(g(y), k),
                                    l.ec_compose(deg, l.ec(h), l.ec(x, k)),
                                )
                            )
                            want = lp.ec_cid(
                                lp.ec_compose(
                                    deg,
                                    lp.ec(y, k),
                                    lp.ec_compose(deg, lp.ec(img), lp.ec(f(x), k)),
                                )
                            )
                        except CompositionError:
                            natural = False
                            failures.append(("naturality-undefined", (a, b, x, y, h)))
                            continue
                        if phi_a2b2.get(moved) != want:
                            natural = False
                            failures.append(("naturality", (a, b, x, y, h)))
    return natural


@dataclass
class TriangleReport:
    unit_valid: bool
    counit_valid: bool
    left_triangle: bool
    right_triangle: bool
    derived_inverse: bool
    derived_natural: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            self.unit_valid
            and self.counit_valid
            and self.left_triangle
            and self.right_triangle
            and self.derived_inverse
            and self.derived_natural
        )


def derive_phi(adj: AdjunctionData) -> dict:
    """Hom maps built out of unit and counit."""
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    eta, eps = adj.unit, adj.counit
    phi = {}
    for a in l.objects():
        for b in lp.objects():
            src = hom_set(l, a, g(b))
            mapping = {}
            for h in src.cell_ids():
                n = src.degree(h)
                mapping[h] = lp.ec_cid(
                    lp.ec_compose(n + 1, lp.ec(eps(b), n), lp.ec(f(h)))
                )
            phi[(a, b)] = mapping
    return phi


def derive_phi_star(adj: AdjunctionData) -> dict:
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    eta = adj.unit
    phi_star = {}
    for a in l.objects():
        for b in lp.objects():
            tgt = hom_set(lp, f(a), b)
            mapping = {}
            for h in tgt.cell_ids():
                n = tgt.degree(h)
                mapping[h] = l.ec_cid(
                    l.ec_compose(n + 1, l.ec(g(h)), l.ec(eta(a), n))
                )
            phi_star[(a, b)] = mapping
    return phi_star


def check_adjunction_unit_counit(adj: AdjunctionData) -> TriangleReport:
    """Triangle identities, then the derived hom maps must invert each other."""
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    eta, eps = adj.unit, adj.counit
    failures = []
    unit_ok = check_modification(eta).passes("weak") if eta else False
    counit_ok = check_modification(eps).passes("weak") if eps else False
    left_tri = True
    right_tri = True
    if unit_ok and counit_ok:
        for a in l.objects():
            try:
                lhs = lp.compose(1, eps(f(a)), f(eta(a)))
            except CompositionError:
                left_tri = False
                failures.append(("left-triangle-undefined", a))
                continue
            if lhs != lp.e[f(a)]:
                left_tri = False
                failures.append(("left-triangle", a))
        for b in lp.objects():
            try:
                rhs = l.compose(1, g(eps(b)), eta(g(b)))
            except CompositionError:
                right_tri = False
                failures.append(("right-triangle-undefined", b))
                continue
            if rhs != l.e[g(b)]:
                right_tri = False
                failures.append(("right-triangle", b))
    else:
        left_tri = right_tri = False
    derived_inverse = False
    derived_natural = False
    if unit_ok and counit_ok:
        phi = derive_phi(adj)
        phi_star = derive_phi_star(adj)
        derived_inverse = True
        for key, mapping in phi.items():
            back = phi_star[key]
            for h, img in mapping.items():
                if back.get(img) != h:
                    derived_inverse = False
                    failures.append(("phi-not-inverse", key + (h,)))
            for h2, img2 in back.items():
                if mapping.get(img2) != h2:
                    derived_inverse = False
                    failures.append(("phi-star-not-inverse", key + (h2,)))
        probe = AdjunctionData(f, g, eta, eps, phi)
        derived_natural = _phi_natural(probe, failures) and check_adjunction_kan(probe).functorial
    return TriangleReport(
        unit_ok, counit_ok, left_tri, right_tri, derived_inverse, derived_natural, failures
    )


@dataclass
class UniversalElementsReport:
    counit_universal: bool
    unit_universal: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.counit_universal and self.unit_universal


def check_universal_elements(adj: AdjunctionData) -> UniversalElementsReport:
    """Each counit component factors every arrow into its object uniquely
    through the right adjoint; dually for the unit."""
    f, g = adj.left, adj.right
    l, lp = f.source, f.target
    eps, eta = adj.counit, adj.unit
    failures = []
    counit_ok = True
    for b in lp.objects():
        for c in l.objects():
            src = hom_set(l, c, g(b))
            tgt = hom_set(lp, f(c), b)
            for h in tgt.cell_ids():
                n = tgt.degree(h)
                sols = [
                    u
                    for u in src.cell_ids()
                    if src.degree(u) == n
                    and lp.ec_cid(lp.ec_compose(n + 1, lp.ec(eps(b), n), lp.ec(f(u)))) == h
                ]
                if len(sols) != 1:
                    counit_ok = False
                    failures.append(("counit-factorisation", (b, c, h, len(sols))))
    unit_ok = True
    for a in l.objects():
        for c in lp.objects():
            src = hom_set(lp, f(a), c)
            tgt = hom_set(l, a, g(c))
            for h in tgt.cell_ids():
                n = tgt.degree(h)
                sols = [
                    u
                    for u in src.cell_ids()
                    if src.degree(u) == n
                    and l.ec_cid(l.ec_compose(n + 1, l.ec(g(u)), l.ec(eta(a), n))) == h
                ]
                if len(sols) != 1:
                    unit_ok = False
                    failures.append(("unit-factorisation", (a, c, h, len(sols))))
    return UniversalElementsReport(counit_ok, unit_ok, failures)


# ------------------------------------------------------- diagram categories


class DiagramCategory:
    """Diagrams over a graph and their families, as one explicit table.

    A degree-m cell is a strict level-(m-1) family; the whole boundary
    chain of such a family is forced by its root diagrams plus its
    components, so (level, source diagram, target diagram, components)
    is a sound cell identity.  Composition is componentwise throughout
    (a family's deepest composite is at its component degree).
    """

    def __init__(self, graph: GraphData, cat: FiniteOmegaCat):
        self.graph = graph
        self.cat = cat
        self.diagrams = _all_diagrams(graph, cat)
        self.dia_id = {d.key(): f"D{i}" for i, d in enumerate(self.diagrams)}
        self.dia_by_id = {self.dia_id[d.key()]: d for d in self.diagrams}
        self.fam_id: dict = {}
        self.fam_data: dict = {}
        self._build()

    def _key(self, level, root_lo, root_hi, comps):
        return (level, root_lo, root_hi, tuple(sorted(comps.items())))

    def _build(self):
        graph, cat = self.graph, self.cat
        objs = graph.objects()
        cells = {did: Cell(did, 0) for did in self.dia_by_id}
        level_cells = {0: sorted(self.dia_by_id)}
        counter = 0
        for m in range(1, cat.top_degree + 1):
            n = m - 1
            this_level = []
            if m == 1:
                pairs = [
                    (x, y, {o: self.dia_by_id[x](o) for o in objs}, {o: self.dia_by_id[y](o) for o in objs}, x, y)
                    for x in level_cells[0]
                    for y in level_cells[0]
                ]
            else:
                pairs = []
                for x in level_cells[m - 1]:
                    for y in level_cells[m - 1]:
                        if cells[x].dom == cells[y].dom and cells[x].cod == cells[y].cod:
                            _, rl, rh, fx = self.fam_data[x]
                            _, _, _, fy = self.fam_data[y]
                            pairs.append((x, y, fx, fy, rl, rh))
            for dom_cell, cod_cell, lo_comps, hi_comps, root_lo, root_hi in pairs:
                d_lo = self.dia_by_id[root_lo]
                d_hi = self.dia_by_id[root_hi]
                for fam in _diagram_families(graph, cat, d_lo, d_hi, n, lo_comps, hi_comps):
                    key = self._key(n, root_lo, root_hi, fam)
                    if key in self.fam_id:
                        continue
                    counter += 1
                    fid = f"T{counter}"
                    self.fam_id[key] = fid
                    self.fam_data[fid] = (n, root_lo, root_hi, fam)
                    cells[fid] = Cell(fid, m, dom_cell, cod_cell)
                    this_level.append(fid)
            level_cells[m] = this_level
        identities = {}
        for did, d in self.dia_by_id.items():
            comps = {o: cat.e[d(o)] for o in objs}
            identities[did] = self.fam_id[self._key(0, did, did, comps)]
        for m in range(1, cat.top_degree):
            for fid in level_cells[m]:
                n, rl, rh, fam = self.fam_data[fid]
                comps = {o: cat.e[c] for o, c in fam.items()}
                identities[fid] = self.fam_id[self._key(n + 1, rl, rh, comps)]
        comp = {}
        probe = FiniteOmegaCat(cells, cat.top_degree, identities, {})
        for m in range(1, cat.top_degree + 1):
            for x in level_cells[m]:
                nx, rlx, rhx, famx = self.fam_data[x]
                for y in level_cells[m]:
                    ny, rly, rhy, famy = self.fam_data[y]
                    for k in range(1, m + 1):
                        if not probe.composable(k, x, y):
                            continue
                        comps = {
                            o: cat.ec_cid(cat.ec_compose(k, cat.ec(famx[o]), cat.ec(famy[o])))
                            for o in objs
                        }
                        roots = (rly, rhx) if k == m else (rlx, rhx)
                        comp[(k, x, y)] = self.fam_id[self._key(nx, roots[0], roots[1], comps)]
        self.table = FiniteOmegaCat(cells, cat.top_degree, identities, comp, name="diagrams")

    def diagram_cell(self, d: DiagramData) -> str:
        return self.dia_id[d.key()]

    def family_cell(self, level, lo_did, hi_did, comps) -> str:
        return self.fam_id[self._key(level, lo_did, hi_did, comps)]


def _all_diagrams(graph: GraphData, cat: FiniteOmegaCat):
    order = sorted(graph.nodes, key=lambda n: (graph.nodes[n].degree, n))
    out = []
    partial: dict = {}

    def rec(i):
        if i == len(order):
            out.append(DiagramData(graph, cat, dict(partial)))
            return
        nid = order[i]
        node = graph.nodes[nid]
        if node.degree == 0:
            pool = cat.objects()
        else:
            pool = cat.arrows_between.get((partial[node.dom], partial[node.cod]), [])
        for cand in pool:
            partial[nid] = cand
            rec(i + 1)
        partial.pop(nid, None)

    rec(0)
    return out


def _diagram_families(graph, cat, d_lo: DiagramData, d_hi: DiagramData, n, lo_comps, hi_comps):
    """Strict level-n families between two diagrams, component boundaries given."""
    objs = graph.objects()
    results = []
    comps: dict = {}

    def consistent(obj):
        for nid, node in graph.nodes.items():
            if node.degree < n + 1:
                continue
            deg = node.degree
            src = graph.d_iter(nid, deg)
            tgt = graph.c_iter(nid, deg)
            if src not in comps or tgt not in comps or obj not in (src, tgt):
                continue
            k = deg - 1 - n
            try:
                lhs = cat.ec_cid(cat.ec_compose(deg, cat.ec(comps[tgt], k), cat.ec(d_lo(nid))))
                rhs = cat.ec_cid(cat.ec_compose(deg, cat.ec(d_hi(nid)), cat.ec(comps[src], k)))
            except CompositionError:
                return False
            if lhs != rhs:
                return False
        return True

    def rec(i):
        if i == len(objs):
            results.append(dict(comps))
            return
        obj = objs[i]
        for cand in cat.arrows_between.get((lo_comps[obj], hi_comps[obj]), []):
            comps[obj] = cand
            if consistent(obj):
                rec(i + 1)
        comps.pop(obj, None)

    rec(0)
    return results


def delta_functor(graph: GraphData, cat: FiniteOmegaCat, dgm: DiagramCategory) -> FunctorData:
    """The constant-diagram functor into the diagram category."""
    objs = graph.objects()
    mapping = {}
    order = [cid for _, ids in sorted(cat.by_degree.items()) for cid in ids]
    for cid in order:
        deg = cat.degree(cid)
        if deg == 0:
            mapping[cid] = dgm.diagram_cell(constant_diagram(graph, cat, cid))
        else:
            lo = mapping[cat.d(cid)]
            hi = mapping[cat.c(cid)]
            if deg == 1:
                rl, rh = lo, hi
            else:
                rl, rh = dgm.fam_data[lo][1], dgm.fam_data[lo][2]
            comps = {o: cid for o in objs}
            mapping[cid] = dgm.family_cell(deg - 1, rl, rh, comps)
    return FunctorData(cat, dgm.table, mapping, name="constant-diagram")


def limit_of(dgm: DiagramCategory, d: DiagramData, direction="limit") -> Optional[ConeData]:
    """Search the objects for a strict (co)limit cone of one diagram."""
    cat = d.target
    for a in cat.objects():
        for fam in cone_families(cat, d, a, 0, direction):
            cone = ConeData(d, a, fam, direction)
            if verify_strict_limit(cone).ok:
                return cone
    return None


def limit_functor(graph: GraphData, cat: FiniteOmegaCat, dgm: DiagramCategory, direction="limit"):
    """Choose a strict (co)limit for every diagram and extend to families
    by unique mediating cells.  Returns the functor plus the chosen cones."""
    cones = {}
    for did, d in dgm.dia_by_id.items():
        cone = limit_of(dgm, d, direction)
        if cone is None:
            raise StructureError(f"diagram {did} has no strict {direction}")
        cones[did] = cone
    mapping = {}
    for did, cone in cones.items():
        mapping[did] = cone.vertex
    for fid, (n, rl, rh, fam) in sorted(dgm.fam_data.items()):
        cone_lo, cone_hi = cones[rl], cones[rh]
        if direction == "limit":
            target = {
                o: cat.ec_cid(cat.ec_compose(n + 1, cat.ec(fam[o]), cat.ec(cone_lo.edges[o], n)))
                for o in fam
            }
            mapping[fid] = _mediate(cat, cone_hi, target, n)
        else:
            target = {
                o: cat.ec_cid(cat.ec_compose(n + 1, cat.ec(cone_hi.edges[o], n), cat.ec(fam[o])))
                for o in fam
            }
            mapping[fid] = _mediate(cat, cone_lo, target, n)
    name = "limit" if direction == "limit" else "colimit"
    return FunctorData(dgm.table, cat, mapping, name=name), cones


def _mediate(cat, cone: ConeData, target_family: dict, n: int) -> str:
    """The unique degree-(n+1) cell whose transport along the cone hits
    the target family."""
    sols = []
    for u in cat.by_degree.get(n + 1, []):
        if cone.direction == "limit":
            if cat.c_iter(u, n + 1) != cone.vertex:
                continue
        else:
            if cat.d_iter(u, n + 1) != cone.vertex:
                continue
        if _transported_family(cat, cone, u, n) == target_family:
            sols.append(u)
    if len(sols) != 1:
        raise StructureError(f"mediating cell not unique: {len(sols)} candidates")
    return sols[0]


@dataclass
class DeltaLimitReport:
    delta_valid: bool
    limit_adjunction: TriangleReport
    colimit_adjunction: TriangleReport

    @property
    def ok(self):
        return self.delta_valid and self.limit_adjunction.ok and self.colimit_adjunction.ok


def check_delta_lim_adjunction(cat: FiniteOmegaCat, graph: GraphData) -> DeltaLimitReport:
    """Assemble the constant-diagram/limit adjunction and its colimit dual,
    and run the full unit/counit verification on both."""
    dgm = DiagramCategory(graph, cat)
    delta = delta_functor(graph, cat, dgm)
    delta_ok = check_functor(delta, "strict").passes("strict")
    lim, cones = limit_functor(graph, cat, dgm, "limit")
    unit_comps = {}
    for a in cat.objects():
        da = dgm.dia_by_id[delta(a)]
        target = {o: cat.e[a] for o in graph.objects()}
        unit_comps[a] = _mediate(cat, cones[delta(a)], target, 0)
    eta = ModificationData(0, identity_functor(cat), compose_functors(lim, delta), unit_comps)
    counit_comps = {}
    for did, cone in cones.items():
        counit_comps[did] = dgm.family_cell(0, delta(cone.vertex), did, dict(cone.edges))
    eps = ModificationData(0, compose_functors(delta, lim), identity_functor(dgm.table), counit_comps)
    lim_rep = check_adjunction_unit_counit(AdjunctionData(delta, lim, eta, eps))

    colim, cocones = limit_functor(graph, cat, dgm, "colimit")
    co_unit_comps = {}
    for did, cone in cocones.items():
        co_unit_comps[did] = dgm.family_cell(0, did, delta(cone.vertex), dict(cone.edges))
    eta2 = ModificationData(0, identity_functor(dgm.table), compose_functors(delta, colim), co_unit_comps)
    co_counit_comps = {}
    for a in cat.objects():
        target = {o: cat.e[a] for o in graph.objects()}
        co_counit_comps[a] = _mediate(cat, cocones[delta(a)], target, 0)
    eps2 = ModificationData(0, compose_functors(colim, delta), identity_functor(cat), co_counit_comps)
    colim_rep = check_adjunction_unit_counit(AdjunctionData(colim, delta, eta2, eps2))
    return DeltaLimitReport(delta_ok, lim_rep, colim_rep)


def functor_preserves_limit(g: FunctorData, cone: ConeData) -> bool:
    """Apply a functor to a verified cone and verify the image cone."""
    d = cone.diagram
    new_assignment = {nid: g(c) for nid, c in d.assignment.items()}
    new_d = DiagramData(d.graph, g.target, new_assignment)
    new_cone = ConeData(new_d, g(cone.vertex), {o: g(c) for o, c in cone.edges.items()}, cone.direction)
    return verify_strict_limit(new_cone).ok


# ----------------------------------------------------------- concrete duality


@dataclass
class DualityData:
    """A dual adjunction presented by hom bijections, with forgetful data.

    phi[(A, B)] maps cells of hom(A, from_dual(B)) in left to cells of
    hom(B, to_dual(A)) in right.  The forgetful functors are the hom
    functors at a0 (left side) and b0 (right side); the dualizing pair
    defaults to from_dual(b0) and to_dual(a0).
    """

    left: FiniteOmegaCat
    right: FiniteOmegaCat
    to_dual: dict  # object map left -> right (G on objects)
    from_dual: dict  # object map right -> left (F on objects)
    phi: dict
    a0: str
    b0: str
    a_tilde: str
    b_tilde: str


@dataclass
class DualityReport:
    adjunction_bijective: bool
    dualizer_match: bool
    underlying_equivalent: bool
    left_hom_factors: bool
    right_hom_factors: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            self.adjunction_bijective
            and self.dualizer_match
            and self.underlying_equivalent
            and self.left_hom_factors
            and self.right_hom_factors
        )


def check_concrete_duality(data: DualityData, bound=256) -> DualityReport:
    """Schizophrenic-object conditions for a dual adjunction.

    The underlying objects of the dualizing pair must be equivalent, and
    each forgetful composed with the dualizing functor must agree with
    the hom functor at the dualizer, object by object (through the
    supplied hom bijections when the dualizer is the canonical one, by
    equivalence search otherwise).
    """
    from ocat.functors import cats_equivalent

    l, r = data.left, data.right
    failures = []
    bijective = True
    for a in l.objects():
        for b in r.objects():
            phi = data.phi.get((a, b))
            src = hom_set(l, a, data.from_dual[b])
            tgt = hom_set(r, b, data.to_dual[a])
            if phi is None or sorted(phi) != src.cell_ids() or sorted(phi.values()) != tgt.cell_ids():
                bijective = False
                failures.append(("hom-bijection", (a, b)))
    dualizer_match = data.a_tilde == data.from_dual[data.b0] and data.b_tilde == data.to_dual[data.a0]
    u_at = hom_set(l, data.a0, data.a_tilde)
    v_bt = hom_set(r, data.b0, data.b_tilde)
    underlying = cats_equivalent(u_at, v_bt, bound)
    if not underlying:
        failures.append(("underlying", (data.a_tilde, data.b_tilde)))
    left_ok = True
    for a in l.objects():
        va = hom_set(r, data.b0, data.to_dual[a])
        la = hom_set(l, a, data.a_tilde)
        if dualizer_match:
            phi = data.phi.get((a, data.b0), {})
            if sorted(phi) != la.cell_ids() or sorted(phi.values()) != va.cell_ids():
                left_ok = False
                failures.append(("left-hom", a))
        elif not cats_equivalent(va, la, bound):
            left_ok = False
            failures.append(("left-hom", a))
    right_ok = True
    for b in r.objects():
        ub = hom_set(l, data.a0, data.from_dual[b])
        rb = hom_set(r, b, data.b_tilde)
        if dualizer_match:
            phi = data.phi.get((data.a0, b), {})
            if sorted(phi) != ub.cell_ids() or sorted(phi.values()) != rb.cell_ids():
                right_ok = False
                failures.append(("right-hom", b))
        elif not cats_equivalent(ub, rb, bound):
            right_ok = False
            failures.append(("right-hom", b))
    return DualityReport(bijective, dualizer_match, underlying, left_ok, right_ok, failures)
