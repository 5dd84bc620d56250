"""Graded cell model of finite higher categories.

A category is a finite table: cells graded by degree with source/target
maps one degree down, an identity map one degree up (stored below the
top degree, symbolic above it), and one partial composition table per
deepness k (f composed over g is defined exactly when the k-fold source
of f equals the k-fold target of g).

Cells above the top degree are iterated identities and never stored;
operations treat them through the unit laws via (cell, padding) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


class StructureError(ValueError):
    """Reference to a missing cell, or tables that cannot be indexed."""


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    cid: str
    degree: int
    dom: Optional[str] = None
    cod: Optional[str] = None


@dataclass(frozen=True)
class IteratedIdentity:
    """e^height applied to a stored cell, living above the top degree."""

    base: str
    height: int


@dataclass(frozen=True, order=True)
class Finding:
    clause: str
    cells: tuple
    detail: str


class ValidationReport:
    def __init__(self, findings: Iterable[Finding]):
        self.findings = sorted(set(findings))

    @property
    def ok(self) -> bool:
        return not self.findings

    def clauses(self) -> set:
        return {f.clause for f in self.findings}

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return f"ValidationReport({len(self.findings)} findings: {sorted(self.clauses())})"


class FiniteOmegaCat:
    """Finite cell tables with identity and composition maps."""

    def __init__(self, cells, top_degree, identities, compositions, strict=True, name=""):
        self.cells: dict[str, Cell] = dict(cells)
        self.top_degree = top_degree
        self.e: dict[str, str] = dict(identities)
        self.comp: dict[tuple, str] = dict(compositions)
        self.declared_strict = strict
        self.name = name
        self._index()

    def _index(self):
        self.by_degree: dict[int, list[str]] = {}
        for cid in sorted(self.cells):
            self.by_degree.setdefault(self.cells[cid].degree, []).append(cid)
        self.arrows_between: dict[tuple, list[str]] = {}
        for cid in sorted(self.cells):
            cell = self.cells[cid]
            if cell.degree >= 1 and cell.dom in self.cells and cell.cod in self.cells:
                self.arrows_between.setdefault((cell.dom, cell.cod), []).append(cid)
        self._equiv_cache: dict = {}
        self._degree_cache: dict = {}

    def degree(self, cid: str) -> int:
        return self.cells[cid].degree

    def d(self, cid: str) -> str:
        cell = self.cells[cid]
        if cell.dom is None:
            raise StructureError(f"{cid} has no source (degree 0)")
        return cell.dom

    def c(self, cid: str) -> str:
        cell = self.cells[cid]
        if cell.cod is None:
            raise StructureError(f"{cid} has no target (degree 0)")
        return cell.cod

    def d_iter(self, cid: str, k: int) -> str:
        for _ in range(k):
            cid = self.d(cid)
        return cid

    def c_iter(self, cid: str, k: int) -> str:
        for _ in range(k):
            cid = self.c(cid)
        return cid

    def objects(self) -> list[str]:
        return self.by_degree.get(0, [])

    def cell_ids(self) -> list[str]:
        return sorted(self.cells)

    def is_identity_cell(self, cid: str) -> bool:
        cell = self.cells[cid]
        if cell.degree == 0:
            return False
        return cell.dom == cell.cod and self.e.get(cell.dom) == cid

    def identity(self, cid: str):
        """e applied once: a stored cell below top degree, symbolic above."""
        deg = self.degree(cid)
        if deg < self.top_degree:
            if cid not in self.e:
                raise StructureError(f"no identity stored for {cid}")
            return self.e[cid]
        return IteratedIdentity(cid, 1)

    def compose(self, k: int, f: str, g: str) -> str:
        key = (k, f, g)
        if key not in self.comp:
            raise CompositionError(f"no composite at deepness {k} for ({f}, {g})")
        return self.comp[key]

    def composable(self, k: int, f: str, g: str) -> bool:
        if f not in self.cells or g not in self.cells:
            return False
        df, dg = self.degree(f), self.degree(g)
        if df != dg or k < 1 or k > df:
            return False
        return self.d_iter(f, k) == self.c_iter(g, k)

    # -- extended cells: (cid, padding) meaning e^padding applied to cid --

    def ec(self, cid: str, pad: int = 0) -> tuple:
        return self.ec_normalize((cid, pad))

    def ec_normalize(self, ec: tuple) -> tuple:
        cid, pad = ec
        while pad > 0 and self.degree(cid) < self.top_degree:
            cid = self.e[cid]
            pad -= 1
        return (cid, pad)

    def ec_degree(self, ec: tuple) -> int:
        cid, pad = ec
        return self.degree(cid) + pad

    def ec_d(self, ec: tuple) -> tuple:
        cid, pad = ec
        if pad > 0:
            return (cid, pad - 1)
        return (self.d(cid), 0)

    def ec_c(self, ec: tuple) -> tuple:
        cid, pad = ec
        if pad > 0:
            return (cid, pad - 1)
        return (self.c(cid), 0)

    def ec_e(self, ec: tuple) -> tuple:
        cid, pad = ec
        return self.ec_normalize((cid, pad + 1))

    def ec_d_iter(self, ec: tuple, k: int) -> tuple:
        for _ in range(k):
            ec = self.ec_d(ec)
        return ec

    def ec_c_iter(self, ec: tuple, k: int) -> tuple:
        for _ in range(k):
            ec = self.ec_c(ec)
        return ec

    def ec_compose(self, k: int, f: tuple, g: tuple) -> tuple:
        f = self.ec_normalize(f)
        g = self.ec_normalize(g)
        if self.ec_degree(f) != self.ec_degree(g):
            raise CompositionError(f"degree mismatch composing {f} and {g}")
        (bf, pf), (bg, pg) = f, g
        if pf != pg:
            # normalized equal-degree cells share their padding
            raise CompositionError(f"cannot align paddings of {f} and {g}")
        if pf == 0:
            if not self.composable(k, bf, bg):
                raise CompositionError(f"({bf}, {bg}) not composable at deepness {k}")
            return (self.compose(k, bf, bg), 0)
        if k <= pf:
            if bf != bg:
                raise CompositionError(f"identity padding mismatch for {f}, {g}")
            return f
        return (self.compose(k - pf, bf, bg), pf)

    def ec_cid(self, ec: tuple) -> str:
        cid, pad = self.ec_normalize(ec)
        if pad:
            raise CompositionError(f"{ec} lies above the top degree")
        return cid


def star(cat: FiniteOmegaCat, g: str, f: str) -> str:
    """Horizontal composite across degrees: pad with identities, compose.

    The deepness used is the smallest one at which the padded cells share
    a boundary; at equal degrees this is the stored table entry.
    """
    ecg, ecf = cat.ec(g), cat.ec(f)
    m = max(cat.ec_degree(ecg), cat.ec_degree(ecf))
    ecg = cat.ec_normalize((ecg[0], m - cat.degree(g)))
    ecf = cat.ec_normalize((ecf[0], m - cat.degree(f)))
    for k in range(1, m + 1):
        if cat.ec_d_iter(ecg, k) == cat.ec_c_iter(ecf, k):
            return cat.ec_cid(cat.ec_compose(k, ecg, ecf))
    raise CompositionError(f"{g} and {f} share no boundary at any deepness")


def validate_precategory(cat: FiniteOmegaCat) -> ValidationReport:
    """Check grading, globularity, identity laws, and the composition domain."""
    findings: list[Finding] = []
    bad: set[str] = set()

    for cid in cat.cell_ids():
        cell = cat.cells[cid]
        if cell.degree < 0:
            findings.append(Finding("grading", (cid,), "negative degree"))
            bad.add(cid)
            continue
        if cell.degree == 0:
            if cell.dom is not None or cell.cod is not None:
                findings.append(Finding("grading", (cid,), "degree 0 cell with boundary"))
                bad.add(cid)
            continue
        for which, ref in (("source", cell.dom), ("target", cell.cod)):
            if ref is None:
                findings.append(Finding("structure", (cid,), f"missing {which}"))
                bad.add(cid)
            elif ref not in cat.cells:
                findings.append(Finding("structure", (cid, ref), f"dangling {which}"))
                bad.add(cid)
            elif cat.cells[ref].degree != cell.degree - 1:
                findings.append(
                    Finding("grading", (cid, ref), f"{which} degree is not one lower")
                )
                bad.add(cid)

    def good(cid):
        return cid in cat.cells and cid not in bad

    for cid in cat.cell_ids():
        cell = cat.cells[cid]
        if cell.degree >= 2 and good(cid) and good(cell.dom) and good(cell.cod):
            if cat.d(cell.dom) != cat.d(cell.cod) or cat.c(cell.cod) != cat.c(cell.dom):
                findings.append(Finding("globularity", (cid,), "d^2 != dc or c^2 != cd"))

    for base in cat.cell_ids():
        if not good(base) or cat.degree(base) >= cat.top_degree:
            continue
        if base not in cat.e:
            findings.append(Finding("identity", (base,), "no identity assigned"))
            continue
        img = cat.e[base]
        if img not in cat.cells:
            findings.append(Finding("structure", (base, img), "identity points at missing cell"))
            continue
        if cat.degree(img) != cat.degree(base) + 1:
            findings.append(Finding("identity", (base, img), "identity does not raise degree by 1"))
            continue
        if good(img) and (cat.d(img) != base or cat.c(img) != base):
            findings.append(Finding("identity", (base, img), "de=1 or ce=1 fails"))

    for (k, f, g), h in sorted(cat.comp.items()):
        for ref in (f, g, h):
            if ref not in cat.cells:
                findings.append(Finding("structure", (f, g, h), f"composition references missing {ref}"))
                break
        else:
            if not (good(f) and good(g) and good(h)):
                continue
            if not cat.composable(k, f, g):
                findings.append(
                    Finding("compose-domain", (f, g), f"entry at deepness {k} is not composable")
                )
    # completeness: every composable pair has an entry
    for n, ids in sorted(cat.by_degree.items()):
        if n < 1:
            continue
        for f in ids:
            if not good(f):
                continue
            for g in ids:
                if not good(g):
                    continue
                for k in range(1, n + 1):
                    if cat.composable(k, f, g) and (k, f, g) not in cat.comp:
                        findings.append(
                            Finding("compose-domain", (f, g), f"missing composite at deepness {k}")
                        )
    return ValidationReport(findings)


def validate_category(cat: FiniteOmegaCat, up_to_equiv: bool = True) -> ValidationReport:
    """Exhaustively check the category laws on top of the precategory ones.

    Boundary behaviour of composites is always strict; the identity
    compatibility, interchange, associativity, and unit laws are checked
    up to equivalence when the flag is set, strictly otherwise.
    Instances whose prerequisites already failed are skipped so a single
    broken table surfaces as a single clause.
    """
    pre = validate_precategory(cat)
    findings = list(pre.findings)
    structurally_bad = {c for f in pre.findings if f.clause in ("structure", "grading") for c in f.cells}
    bad_entries = {
        f.cells for f in pre.findings if f.clause == "compose-domain"
    }

    def entry_ok(k, f, g):
        return (k, f, g) in cat.comp and (f, g) not in bad_entries

    def ids_ok(*cids):
        return all(c not in structurally_bad for c in cids)

    def same(x, y):
        if up_to_equiv:
            from ocat.equivalence import are_equivalent

            return are_equivalent(cat, x, y) is not None
        return x == y

    # mu laws (1)-(2): grading and boundaries of every composite
    for (k, f, g), h in sorted(cat.comp.items()):
        if not (ids_ok(f, g, h) and entry_ok(k, f, g)):
            continue
        n = cat.degree(f)
        if cat.degree(h) != n:
            findings.append(Finding("mu-grading", (f, g, h), f"composite changes degree at deepness {k}"))
            continue
        if k == 1:
            if cat.d(h) != cat.d(g) or cat.c(h) != cat.c(f):
                findings.append(Finding("mu-boundary", (f, g, h), "deepness-1 boundary rule fails"))
        else:
            sub = cat.comp.get((k - 1, cat.d(f), cat.d(g)))
            if sub is not None and cat.d(h) != sub:
                findings.append(Finding("mu-boundary", (f, g, h), "source of composite mismatched"))
            sub_c = cat.comp.get((k - 1, cat.c(f), cat.c(g)))
            if sub_c is not None and cat.c(h) != sub_c:
                findings.append(Finding("mu-boundary", (f, g, h), "target of composite mismatched"))

    identity_ok: dict[str, bool] = {}

    def id_chain_ok(base, height):
        cur = base
        for _ in range(height):
            if cat.degree(cur) >= cat.top_degree:
                return True
            if cur not in cat.e:
                return False
            nxt = cat.e[cur]
            if identity_ok.get(cur) is None:
                identity_ok[cur] = (
                    nxt in cat.cells
                    and cat.degree(nxt) == cat.degree(cur) + 1
                    and cat.cells[nxt].dom == cur
                    and cat.cells[nxt].cod == cur
                )
            if not identity_ok[cur]:
                return False
            cur = nxt
        return True

    # mu law (3): identities are compatible with every composite
    for (k, f, g), h in sorted(cat.comp.items()):
        if not (ids_ok(f, g, h) and entry_ok(k, f, g)):
            continue
        if cat.degree(f) + 1 > cat.top_degree:
            continue  # forced by the symbolic identity layer
        if not (id_chain_ok(f, 1) and id_chain_ok(g, 1) and id_chain_ok(h, 1)):
            continue
        ef, eg, eh = cat.e[f], cat.e[g], cat.e[h]
        got = cat.comp.get((k + 1, ef, eg))
        if got is None:
            findings.append(Finding("compose-domain", (ef, eg), f"missing composite at deepness {k + 1}"))
        elif not same(got, eh):
            findings.append(Finding("mu-identity", (f, g), f"e(f) composed with e(g) differs from e(f.g) at deepness {k + 1}"))

    # mu law (4): interchange between a shallower and a deeper composite
    for (k, f, fp), ffp in sorted(cat.comp.items()):
        if not (ids_ok(f, fp, ffp) and entry_ok(k, f, fp)):
            continue
        n = cat.degree(f)
        for h in range(k + 1, n + 1):
            for (k2, g, gp), ggp in sorted(cat.comp.items()):
                if k2 != k or not (ids_ok(g, gp, ggp) and entry_ok(k, g, gp)):
                    continue
                if not cat.composable(h, ffp, ggp):
                    continue
                if not (entry_ok(h, f, g) and entry_ok(h, fp, gp) and entry_ok(h, ffp, ggp)):
                    continue
                fg = cat.comp[(h, f, g)]
                fpgp = cat.comp[(h, fp, gp)]
                if not entry_ok(k, fg, fpgp):
                    continue
                lhs = cat.comp[(h, ffp, ggp)]
                rhs = cat.comp[(k, fg, fpgp)]
                if not same(lhs, rhs):
                    findings.append(
                        Finding("mu-interchange", (f, fp, g, gp), f"interchange fails between deepness {k} and {h}")
                    )

    # associativity per deepness
    for (k, f, g), fg in sorted(cat.comp.items()):
        if not (ids_ok(f, g, fg) and entry_ok(k, f, g)):
            continue
        for (k2, g2, h), gh in sorted(cat.comp.items()):
            if k2 != k or g2 != g or not (ids_ok(h, gh) and entry_ok(k, g, h)):
                continue
            if not (entry_ok(k, fg, h) and entry_ok(k, f, gh)):
                continue
            if not same(cat.comp[(k, fg, h)], cat.comp[(k, f, gh)]):
                findings.append(Finding("associativity", (f, g, h), f"associativity fails at deepness {k}"))

    # unit law
    for cid in cat.cell_ids():
        if not ids_ok(cid):
            continue
        n = cat.degree(cid)
        for k in range(1, n + 1):
            tgt = cat.c_iter(cid, k)
            src = cat.d_iter(cid, k)
            if not (id_chain_ok(tgt, k) and id_chain_ok(src, k)):
                continue
            left = tgt
            for _ in range(k):
                left = cat.e[left]
            right = src
            for _ in range(k):
                right = cat.e[right]
            if entry_ok(k, left, cid) and not same(cat.comp[(k, left, cid)], cid):
                findings.append(Finding("unit", (cid,), f"left unit fails at deepness {k}"))
            if entry_ok(k, cid, right) and not same(cat.comp[(k, cid, right)], cid):
                findings.append(Finding("unit", (cid,), f"right unit fails at deepness {k}"))

    # equivalence clauses need witness search over the tables as given
    from ocat.equivalence import are_equivalent

    if not any(f.clause in ("structure", "grading") for f in findings):
        for n, ids in sorted(cat.by_degree.items()):
            pairs = [
                (x, y)
                for i, x in enumerate(ids)
                for y in ids[i:]
                if are_equivalent(cat, x, y) is not None
            ]
            related = set(pairs) | {(y, x) for x, y in pairs}
            for x, y in sorted(related):
                for z in ids:
                    if (y, z) in related and (x, z) not in related:
                        findings.append(
                            Finding("equiv-transitive", (x, y, z), "equivalence is not transitive")
                        )
            # compatibility with composites
            for (k, f, h), fh in sorted(cat.comp.items()):
                if cat.degree(f) != n or not entry_ok(k, f, h):
                    continue
                for fp in ids:
                    if (f, fp) not in related and f != fp:
                        continue
                    for hp in ids:
                        if (h, hp) not in related and h != hp:
                            continue
                        if fp == f and hp == h:
                            continue
                        if not entry_ok(k, fp, hp):
                            continue
                        if are_equivalent(cat, fh, cat.comp[(k, fp, hp)]) is None:
                            findings.append(
                                Finding(
                                    "equiv-compat",
                                    (f, h, fp, hp),
                                    f"composites of equivalent cells not equivalent at deepness {k}",
                                )
                            )
    return ValidationReport(findings)


def hom_set(cat: FiniteOmegaCat, a: str, b: str) -> FiniteOmegaCat:
    """The inner category of cells bounded by a and b, re-graded.

    A cell of ambient degree t with k-fold source a and k-fold target b
    becomes a cell of degree t - deg(a) - 1; iterated inner structure is
    untouched, so nested hom-sets coincide with directly-built ones.
    """
    if cat.degree(a) != cat.degree(b):
        raise StructureError("hom-set endpoints must share a degree")
    base_deg = cat.degree(a)
    members = {}
    for cid in cat.cell_ids():
        t = cat.degree(cid)
        k = t - base_deg
        if k < 1:
            continue
        if cat.d_iter(cid, k) == a and cat.c_iter(cid, k) == b:
            cell = cat.cells[cid]
            hom_deg = t - base_deg - 1
            members[cid] = Cell(
                cid,
                hom_deg,
                cell.dom if hom_deg >= 1 else None,
                cell.cod if hom_deg >= 1 else None,
            )
    identities = {
        cid: img
        for cid, img in cat.e.items()
        if cid in members and img in members
    }
    comps = {
        (k, f, g): h
        for (k, f, g), h in cat.comp.items()
        if f in members and g in members and h in members and k <= members[f].degree
    }
    return FiniteOmegaCat(
        members,
        cat.top_degree - base_deg - 1,
        identities,
        comps,
        strict=cat.declared_strict,
        name=f"{cat.name}({a},{b})" if cat.name else f"hom({a},{b})",
    )


def opposite(cat: FiniteOmegaCat) -> FiniteOmegaCat:
    """Reverse sources and targets of 1-cells and the object-level composites."""
    cells = {}
    for cid, cell in cat.cells.items():
        if cell.degree == 1:
            cells[cid] = Cell(cid, 1, cell.cod, cell.dom)
        else:
            cells[cid] = cell
    comps = {}
    for (k, f, g), h in cat.comp.items():
        if k == cat.cells[f].degree:
            comps[(k, g, f)] = h
        else:
            comps[(k, f, g)] = h
    return FiniteOmegaCat(
        cells,
        cat.top_degree,
        dict(cat.e),
        comps,
        strict=cat.declared_strict,
        name=f"{cat.name}^op" if cat.name else "",
    )


def truncate(cat: FiniteOmegaCat, n: int) -> FiniteOmegaCat:
    """Quotient level n by equivalence and cut everything above it."""
    if n >= cat.top_degree:
        return FiniteOmegaCat(
            dict(cat.cells), cat.top_degree, dict(cat.e), dict(cat.comp),
            strict=cat.declared_strict, name=cat.name,
        )
    from ocat.equivalence import are_equivalent

    level = cat.by_degree.get(n, [])
    rep: dict[str, str] = {}
    for cid in level:
        for other in sorted(set(rep.values())):
            if are_equivalent(cat, cid, other) is not None:
                rep[cid] = other
                break
        else:
            rep[cid] = cid
    keep = {
        cid: cell
        for cid, cell in cat.cells.items()
        if cell.degree < n or (cell.degree == n and rep[cid] == cid)
    }
    identities = {
        cid: (rep[img] if cat.degree(img) == n else img)
        for cid, img in cat.e.items()
        if cid in keep and cat.degree(cid) < n
    }
    comps = {}
    for (k, f, g), h in cat.comp.items():
        if f not in keep or g not in keep:
            continue
        comps[(k, f, g)] = rep[h] if cat.degree(h) == n else h
    return FiniteOmegaCat(
        keep, n, identities, comps, strict=cat.declared_strict,
        name=f"{cat.name}|{n}" if cat.name else "",
    )


def same_tables(c1: FiniteOmegaCat, c2: FiniteOmegaCat) -> bool:
    """Structural equality: identical cells, identities, and composites."""
    return (
        c1.cells == c2.cells
        and c1.top_degree == c2.top_degree
        and c1.e == c2.e
        and c1.comp == c2.comp
    )


def sub_category(cat: FiniteOmegaCat, keep_ids: set, name="") -> FiniteOmegaCat:
    """Restrict the tables to a set of cells (caller ensures closure)."""
    cells = {cid: cat.cells[cid] for cid in keep_ids}
    identities = {c: i for c, i in cat.e.items() if c in keep_ids and i in keep_ids}
    comps = {
        key: h
        for key, h in cat.comp.items()
        if key[1] in keep_ids and key[2] in keep_ids and h in keep_ids
    }
    return FiniteOmegaCat(cells, cat.top_degree, identities, comps,
                          strict=cat.declared_strict, name=name)
