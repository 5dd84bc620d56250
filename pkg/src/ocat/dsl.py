"""Presentation language for categories, functors, families, diagrams,
cones, adjunctions, dualities, and presheaves.

Hand-rolled tokenizer and recursive-descent parser; every error carries
a line:column span.  The printer emits a canonical form whose reparse
gives an identical syntax tree, which the test suite pins down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # name | int | punct
    text: str
    line: int
    col: int


_PUNCT = ["->", "=>", "{", "}", ":", ".", "=", ","]


def tokenize(source: str):
    tokens = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        two = source[i : i + 2]
        if two in ("->", "=>"):
            tokens.append(Token("punct", two, line, col))
            i += 2
            col += 2
            continue
        if ch in "{}:.=,":
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_'"):
                j += 1
            tokens.append(Token("name", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


# ------------------------------------------------------------------ AST


@dataclass(frozen=True)
class CellDecl:
    name: str
    degree: int
    dom: Optional[str]
    cod: Optional[str]


@dataclass(frozen=True)
class CategoryDecl:
    name: str
    max_degree: int
    cells: tuple
    identities: tuple  # (identity cell, base)
    compositions: tuple  # (deepness, f, g, h)


@dataclass(frozen=True)
class FunctorDecl:
    name: str
    source: str
    target: str
    mapping: tuple


@dataclass(frozen=True)
class ModificationDecl:
    name: str
    level: int
    dom: str
    cod: str
    components: tuple


@dataclass(frozen=True)
class GraphDecl:
    name: str
    nodes: tuple  # CellDecl reused


@dataclass(frozen=True)
class DiagramDecl:
    name: str
    graph: str
    target: str
    assignment: tuple


@dataclass(frozen=True)
class ConeDecl:
    name: str
    diagram: str
    direction: str
    vertex: str
    edges: tuple


@dataclass(frozen=True)
class PhiDecl:
    a: str
    b: str
    mapping: tuple


@dataclass(frozen=True)
class AdjunctionDecl:
    name: str
    left: str
    right: str
    unit: Optional[str]
    counit: Optional[str]
    phis: tuple


@dataclass(frozen=True)
class DualityDecl:
    name: str
    left: str
    right: str
    base_left: str
    base_right: str
    dualizer: tuple  # (a_tilde, b_tilde)
    to_dual: tuple
    from_dual: tuple
    phis: tuple


@dataclass(frozen=True)
class PresheafDecl:
    name: str
    base: str
    variance: str  # "op" (contravariant) or "id"
    assignment: tuple  # (base cell, value name)


@dataclass(frozen=True)
class PresentationAST:
    decls: tuple


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("punct", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, kind, text=None) -> Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def name(self) -> str:
        return self.expect("name").text

    def integer(self) -> int:
        return int(self.expect("int").text)

    def at_keyword(self, word) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "name" and tok.text == word

    def parse_file(self) -> PresentationAST:
        decls = []
        while self.peek() is not None:
            tok = self.peek()
            handler = {
                "category": self.parse_category,
                "functor": self.parse_functor,
                "modification": self.parse_modification,
                "graph": self.parse_graph,
                "diagram": self.parse_diagram,
                "cone": self.parse_cone,
                "adjunction": self.parse_adjunction,
                "duality": self.parse_duality,
                "presheaf": self.parse_presheaf,
            }.get(tok.text if tok.kind == "name" else None)
            if handler is None:
                raise ParseError(f"unknown declaration {tok.text!r}", tok.line, tok.col)
            decls.append(handler())
        return PresentationAST(tuple(decls))

    def parse_category(self) -> CategoryDecl:
        self.expect("name", "category")
        name = self.name()
        self.expect("name", "max_degree")
        max_degree = self.integer()
        self.expect("punct", "{")
        cells, identities, compositions = [], [], []
        while not self._at_close():
            tok = self.peek()
            if self.at_keyword("cell"):
                self.next()
                cname = self.name()
                self.expect("punct", ":")
                deg = self.integer()
                dom = cod = None
                if self.peek() and self.peek().kind == "name" and self.peek().text not in (
                    "cell", "identity", "compose",
                ):
                    dom = self.name()
                    self.expect("punct", "->")
                    cod = self.name()
                cells.append(CellDecl(cname, deg, dom, cod))
            elif self.at_keyword("identity"):
                self.next()
                idc = self.name()
                self.expect("punct", "=")
                base = self.name()
                identities.append((idc, base))
            elif self.at_keyword("compose"):
                self.next()
                k = self.integer()
                self.expect("punct", ":")
                f = self.name()
                self.expect("punct", ".")
                g = self.name()
                self.expect("punct", "=")
                h = self.name()
                compositions.append((k, f, g, h))
            else:
                raise ParseError(f"unexpected {tok.text!r} in category body", tok.line, tok.col)
        self.expect("punct", "}")
        return CategoryDecl(name, max_degree, tuple(cells), tuple(identities), tuple(compositions))

    def _at_close(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.text == "}"

    def parse_functor(self) -> FunctorDecl:
        self.expect("name", "functor")
        name = self.name()
        self.expect("punct", ":")
        src = self.name()
        self.expect("punct", "->")
        tgt = self.name()
        mapping = self._map_block("map", "=>")
        return FunctorDecl(name, src, tgt, mapping)

    def _map_block(self, keyword, arrow) -> tuple:
        self.expect("punct", "{")
        entries = []
        while not self._at_close():
            self.expect("name", keyword)
            lhs = self.name()
            self.expect("punct", arrow)
            rhs = self.name()
            entries.append((lhs, rhs))
        self.expect("punct", "}")
        return tuple(entries)

    def parse_modification(self) -> ModificationDecl:
        self.expect("name", "modification")
        name = self.name()
        self.expect("name", "level")
        level = self.integer()
        self.expect("punct", ":")
        dom = self.name()
        self.expect("punct", "=>")
        cod = self.name()
        comps = self._map_block("at", "=")
        return ModificationDecl(name, level, dom, cod, comps)

    def parse_graph(self) -> GraphDecl:
        self.expect("name", "graph")
        name = self.name()
        self.expect("punct", "{")
        nodes = []
        while not self._at_close():
            self.expect("name", "node")
            nname = self.name()
            self.expect("punct", ":")
            deg = self.integer()
            dom = cod = None
            if self.peek() and self.peek().kind == "name" and self.peek().text != "node":
                dom = self.name()
                self.expect("punct", "->")
                cod = self.name()
            nodes.append(CellDecl(nname, deg, dom, cod))
        self.expect("punct", "}")
        return GraphDecl(name, tuple(nodes))

    def parse_diagram(self) -> DiagramDecl:
        self.expect("name", "diagram")
        name = self.name()
        self.expect("punct", ":")
        graph = self.name()
        self.expect("punct", "->")
        target = self.name()
        assignment = self._map_block("at", "=")
        return DiagramDecl(name, graph, target, assignment)

    def parse_cone(self) -> ConeDecl:
        self.expect("name", "cone")
        name = self.name()
        self.expect("punct", ":")
        diagram = self.name()
        direction = self.name()
        if direction not in ("limit", "colimit"):
            tok = self.tokens[self.pos - 1]
            raise ParseError("cone direction must be limit or colimit", tok.line, tok.col)
        self.expect("name", "vertex")
        vertex = self.name()
        edges = self._map_block("edge", "=")
        return ConeDecl(name, diagram, direction, vertex, edges)

    def parse_adjunction(self) -> AdjunctionDecl:
        self.expect("name", "adjunction")
        name = self.name()
        self.expect("punct", "{")
        self.expect("name", "left")
        left = self.name()
        self.expect("name", "right")
        right = self.name()
        unit = counit = None
        phis = []
        while not self._at_close():
            if self.at_keyword("unit"):
                self.next()
                unit = self.name()
            elif self.at_keyword("counit"):
                self.next()
                counit = self.name()
            elif self.at_keyword("phi"):
                phis.append(self._parse_phi())
            else:
                tok = self.peek()
                raise ParseError(f"unexpected {tok.text!r} in adjunction body", tok.line, tok.col)
        self.expect("punct", "}")
        return AdjunctionDecl(name, left, right, unit, counit, tuple(phis))

    def _parse_phi(self) -> PhiDecl:
        self.expect("name", "phi")
        a = self.name()
        b = self.name()
        mapping = self._map_block("map", "=>")
        return PhiDecl(a, b, mapping)

    def parse_duality(self) -> DualityDecl:
        self.expect("name", "duality")
        name = self.name()
        self.expect("punct", "{")
        self.expect("name", "left")
        left = self.name()
        self.expect("name", "right")
        right = self.name()
        self.expect("name", "base_left")
        base_left = self.name()
        self.expect("name", "base_right")
        base_right = self.name()
        self.expect("name", "dualizer")
        a_tilde = self.name()
        b_tilde = self.name()
        self.expect("name", "to_dual")
        to_dual = self._map_block("map", "=>")
        self.expect("name", "from_dual")
        from_dual = self._map_block("map", "=>")
        phis = []
        while not self._at_close():
            phis.append(self._parse_phi())
        self.expect("punct", "}")
        return DualityDecl(
            name, left, right, base_left, base_right, (a_tilde, b_tilde), to_dual, from_dual, tuple(phis)
        )

    def parse_presheaf(self) -> PresheafDecl:
        self.expect("name", "presheaf")
        name = self.name()
        self.expect("punct", ":")
        base = self.name()
        variance = "op"
        if self.at_keyword("op") or self.at_keyword("id"):
            variance = self.next().text
        assignment = self._map_block("at", "=")
        return PresheafDecl(name, base, variance, assignment)


def parse(source: str) -> PresentationAST:
    return _Parser(tokenize(source)).parse_file()


# -------------------------------------------------------------- printer


def print_ast(ast: PresentationAST) -> str:
    out = []
    for decl in ast.decls:
        out.append(_print_decl(decl))
    return "\n".join(out)


def _print_decl(decl) -> str:
    if isinstance(decl, CategoryDecl):
        lines = [f"category {decl.name} max_degree {decl.max_degree} {{"]
        for c in sorted(decl.cells, key=lambda c: (c.degree, c.name)):
            if c.dom is None:
                lines.append(f"  cell {c.name} : {c.degree}")
            else:
                lines.append(f"  cell {c.name} : {c.degree} {c.dom} -> {c.cod}")
        for idc, base in sorted(decl.identities):
            lines.append(f"  identity {idc} = {base}")
        for k, f, g, h in sorted(decl.compositions):
            lines.append(f"  compose {k} : {f} . {g} = {h}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, FunctorDecl):
        lines = [f"functor {decl.name} : {decl.source} -> {decl.target} {{"]
        for lhs, rhs in sorted(decl.mapping):
            lines.append(f"  map {lhs} => {rhs}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, ModificationDecl):
        lines = [f"modification {decl.name} level {decl.level} : {decl.dom} => {decl.cod} {{"]
        for lhs, rhs in sorted(decl.components):
            lines.append(f"  at {lhs} = {rhs}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, GraphDecl):
        lines = [f"graph {decl.name} {{"]
        for c in sorted(decl.nodes, key=lambda c: (c.degree, c.name)):
            if c.dom is None:
                lines.append(f"  node {c.name} : {c.degree}")
            else:
                lines.append(f"  node {c.name} : {c.degree} {c.dom} -> {c.cod}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, DiagramDecl):
        lines = [f"diagram {decl.name} : {decl.graph} -> {decl.target} {{"]
        for lhs, rhs in sorted(decl.assignment):
            lines.append(f"  at {lhs} = {rhs}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, ConeDecl):
        lines = [f"cone {decl.name} : {decl.diagram} {decl.direction} vertex {decl.vertex} {{"]
        for lhs, rhs in sorted(decl.edges):
            lines.append(f"  edge {lhs} = {rhs}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, AdjunctionDecl):
        lines = [f"adjunction {decl.name} {{", f"  left {decl.left}", f"  right {decl.right}"]
        if decl.unit:
            lines.append(f"  unit {decl.unit}")
        if decl.counit:
            lines.append(f"  counit {decl.counit}")
        for phi in decl.phis:
            lines.append(f"  phi {phi.a} {phi.b} {{")
            for lhs, rhs in sorted(phi.mapping):
                lines.append(f"    map {lhs} => {rhs}")
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, DualityDecl):
        lines = [
            f"duality {decl.name} {{",
            f"  left {decl.left}",
            f"  right {decl.right}",
            f"  base_left {decl.base_left}",
            f"  base_right {decl.base_right}",
            f"  dualizer {decl.dualizer[0]} {decl.dualizer[1]}",
            "  to_dual {",
        ]
        for lhs, rhs in sorted(decl.to_dual):
            lines.append(f"    map {lhs} => {rhs}")
        lines.append("  }")
        lines.append("  from_dual {")
        for lhs, rhs in sorted(decl.from_dual):
            lines.append(f"    map {lhs} => {rhs}")
        lines.append("  }")
        for phi in decl.phis:
            lines.append(f"  phi {phi.a} {phi.b} {{")
            for lhs, rhs in sorted(phi.mapping):
                lines.append(f"    map {lhs} => {rhs}")
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(decl, PresheafDecl):
        lines = [f"presheaf {decl.name} : {decl.base} {decl.variance} {{"]
        for lhs, rhs in sorted(decl.assignment):
            lines.append(f"  at {lhs} = {rhs}")
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(f"unknown declaration {decl!r}")


# -------------------------------------------------------------- builder


class BuildError(ValueError):
    pass


class Workspace:
    """Resolved domain objects from one presentation file."""

    def __init__(self):
        self.categories: dict = {}
        self.functors: dict = {}
        self.modifications: dict = {}
        self.graphs: dict = {}
        self.diagrams: dict = {}
        self.cones: dict = {}
        self.adjunctions: dict = {}
        self.dualities: dict = {}
        self.presheaves: dict = {}


def build(ast: PresentationAST) -> Workspace:
    from ocat.core import Cell, FiniteOmegaCat, opposite
    from ocat.functors import FunctorData, ModificationData
    from ocat.limits import AdjunctionData, ConeData, DiagramData, DualityData, GraphData, GraphNode
    from ocat.presheaf import CatValuedPresheaf

    ws = Workspace()
    for decl in ast.decls:
        if isinstance(decl, CategoryDecl):
            _require_fresh(ws.categories, decl.name, "category")
            cells = {}
            for c in decl.cells:
                if c.name in cells:
                    raise BuildError(f"duplicate cell {c.name} in category {decl.name}")
                cells[c.name] = Cell(c.name, c.degree, c.dom, c.cod)
            declared = {c.name for c in decl.cells}
            for c in decl.cells:
                for ref in (c.dom, c.cod):
                    if ref is not None and ref not in declared:
                        raise BuildError(
                            f"cell {c.name} in category {decl.name} references unknown cell {ref!r}"
                        )
            identities = {}
            for idc, base in decl.identities:
                if base in identities:
                    raise BuildError(f"duplicate identity for {base} in {decl.name}")
                if base not in cells or idc not in cells:
                    raise BuildError(f"identity references unknown cell in {decl.name}")
                identities[base] = idc
            comp = {}
            for k, f, g, h in decl.compositions:
                for ref in (f, g, h):
                    if ref not in cells:
                        raise BuildError(f"composition references unknown cell {ref} in {decl.name}")
                if (k, f, g) in comp:
                    raise BuildError(f"duplicate composite ({k}, {f}, {g}) in {decl.name}")
                comp[(k, f, g)] = h
            ws.categories[decl.name] = FiniteOmegaCat(
                cells, decl.max_degree, identities, comp, name=decl.name
            )
        elif isinstance(decl, FunctorDecl):
            _require_fresh(ws.functors, decl.name, "functor")
            src = _lookup(ws.categories, decl.source, "category")
            tgt = _lookup(ws.categories, decl.target, "category")
            ws.functors[decl.name] = FunctorData(src, tgt, dict(decl.mapping), name=decl.name)
        elif isinstance(decl, ModificationDecl):
            _require_fresh(ws.modifications, decl.name, "modification")
            if decl.level == 0:
                dom = _lookup(ws.functors, decl.dom, "functor")
                cod = _lookup(ws.functors, decl.cod, "functor")
            else:
                dom = _lookup(ws.modifications, decl.dom, "modification")
                cod = _lookup(ws.modifications, decl.cod, "modification")
            ws.modifications[decl.name] = ModificationData(
                decl.level, dom, cod, dict(decl.components), name=decl.name
            )
        elif isinstance(decl, GraphDecl):
            _require_fresh(ws.graphs, decl.name, "graph")
            ws.graphs[decl.name] = GraphData(
                [GraphNode(c.name, c.degree, c.dom, c.cod) for c in decl.nodes]
            )
        elif isinstance(decl, DiagramDecl):
            _require_fresh(ws.diagrams, decl.name, "diagram")
            graph = _lookup(ws.graphs, decl.graph, "graph")
            target = _lookup(ws.categories, decl.target, "category")
            ws.diagrams[decl.name] = DiagramData(graph, target, dict(decl.assignment))
        elif isinstance(decl, ConeDecl):
            _require_fresh(ws.cones, decl.name, "cone")
            diagram = _lookup(ws.diagrams, decl.diagram, "diagram")
            ws.cones[decl.name] = ConeData(diagram, decl.vertex, dict(decl.edges), decl.direction)
        elif isinstance(decl, AdjunctionDecl):
            _require_fresh(ws.adjunctions, decl.name, "adjunction")
            left = _lookup(ws.functors, decl.left, "functor")
            right = _lookup(ws.functors, decl.right, "functor")
            unit = _lookup(ws.modifications, decl.unit, "modification") if decl.unit else None
            counit = _lookup(ws.modifications, decl.counit, "modification") if decl.counit else None
            phi = {(p.a, p.b): dict(p.mapping) for p in decl.phis} or None
            ws.adjunctions[decl.name] = AdjunctionData(left, right, unit, counit, phi)
        elif isinstance(decl, DualityDecl):
            _require_fresh(ws.dualities, decl.name, "duality")
            left = _lookup(ws.categories, decl.left, "category")
            right = _lookup(ws.categories, decl.right, "category")
            ws.dualities[decl.name] = DualityData(
                left,
                right,
                dict(decl.to_dual),
                dict(decl.from_dual),
                {(p.a, p.b): dict(p.mapping) for p in decl.phis},
                decl.base_left,
                decl.base_right,
                decl.dualizer[0],
                decl.dualizer[1],
            )
        elif isinstance(decl, PresheafDecl):
            _require_fresh(ws.presheaves, decl.name, "presheaf")
            cat = _lookup(ws.categories, decl.base, "category")
            base = opposite(cat) if decl.variance == "op" else cat
            object_part = {}
            cell_part = {}
            for cell, value in decl.assignment:
                if cell not in base.cells:
                    raise BuildError(f"presheaf {decl.name} references unknown cell {cell}")
                deg = base.degree(cell)
                if deg == 0:
                    object_part[cell] = _lookup(ws.categories, value, "category")
                elif deg == 1:
                    cell_part[cell] = _lookup(ws.functors, value, "functor")
                else:
                    cell_part[cell] = _lookup(ws.modifications, value, "modification")
            ws.presheaves[decl.name] = CatValuedPresheaf(base, object_part, cell_part, name=decl.name)
    return ws


def _require_fresh(table, name, kind):
    if name in table:
        raise BuildError(f"duplicate {kind} name {name}")


def _lookup(table, name, kind):
    if name not in table:
        raise BuildError(f"unknown {kind} {name!r}")
    return table[name]


def category_to_decl(cat) -> CategoryDecl:
    """Presentation of a category table (used by the rewriting commands)."""
    cells = tuple(
        CellDecl(c.cid, c.degree, c.dom, c.cod)
        for c in sorted(cat.cells.values(), key=lambda c: (c.degree, c.cid))
    )
    identities = tuple(sorted((img, base) for base, img in cat.e.items()))
    compositions = tuple(sorted((k, f, g, h) for (k, f, g), h in cat.comp.items()))
    return CategoryDecl(cat.name or "result", cat.top_degree, cells, identities, compositions)
