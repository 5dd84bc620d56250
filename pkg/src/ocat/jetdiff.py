"""Difference operators, operator order, Diff/Jet spaces, and their duality
over finite-dimensional commutative Q-algebras.

An algebra is given by structure constants on a chosen basis; modules by
action matrices.  Everything is exact: order computations, the Diff_s
filtration, jet quotients, and the representability/duality isomorphisms
are all matrix computations over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from ocat.linalg import (
    QMatrix,
    Subspace,
    coordinates,
    kernel,
    solve,
)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    """Commutative associative unital algebra over Q, by structure constants.

    structure[i][j] is the coordinate vector of (basis_i * basis_j).
    """

    dim: int
    basis_labels: tuple[str, ...]
    structure: tuple[tuple[tuple[Fraction, ...], ...], ...]
    unit: tuple[Fraction, ...]

    @classmethod
    def build(cls, basis_labels, structure, unit) -> "FiniteAlgebra":
        labels = tuple(basis_labels)
        m = len(labels)
        struct = tuple(
            tuple(tuple(Fraction(v) for v in structure[i][j]) for j in range(m))
            for i in range(m)
        )
        alg = cls(m, labels, struct, tuple(Fraction(v) for v in unit))
        alg.validate()
        return alg

    def validate(self):
        m = self.dim
        for i in range(m):
            for j in range(m):
                if self.structure[i][j] != self.structure[j][i]:
                    raise AlgebraError(f"not commutative at basis pair ({i},{j})")
        mats = [self.mult_matrix_basis(i) for i in range(m)]
        one = self.mult_matrix(self.unit)
        if one != QMatrix.identity(m):
            raise AlgebraError("unit does not act as identity")
        for i in range(m):
            for j in range(m):
                # (e_i e_j) e_l == e_i (e_j e_l) checked via matrices:
                # L_{e_i e_j} == L_{e_i} L_{e_j}
                prod = self.mult_matrix(self.structure[i][j])
                if prod != mats[i] * mats[j]:
                    raise AlgebraError(f"not associative at basis pair ({i},{j})")

    def mult_matrix_basis(self, i: int) -> QMatrix:
        """Matrix of multiplication by basis element i."""
        m = self.dim
        return QMatrix(
            [[self.structure[i][j][r] for j in range(m)] for r in range(m)], m
        )

    def mult_matrix(self, coords) -> QMatrix:
        m = self.dim
        out = QMatrix.zeros(m, m)
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c:
                out = out + self.mult_matrix_basis(i).scale(c)
        return out

    def multiply(self, a, b):
        return self.mult_matrix(a).apply(b)


def truncated_polynomial_algebra(m: int) -> FiniteAlgebra:
    """Q[x]/(x^m) on the basis 1, x, ..., x^(m-1)."""
    if m < 1:
        raise AlgebraError("need dimension >= 1")
    labels = tuple("1" if i == 0 else f"x^{i}" if i > 1 else "x" for i in range(m))
    structure = [
        [
            [Fraction(1 if r == i + j else 0) for r in range(m)]
            for j in range(m)
        ]
        for i in range(m)
    ]
    unit = [Fraction(1 if i == 0 else 0) for i in range(m)]
    return FiniteAlgebra.build(labels, structure, unit)


@dataclass(frozen=True)
class FiniteModuleData:
    """Module over a FiniteAlgebra: one action matrix per algebra basis element."""

    algebra: FiniteAlgebra
    dim: int
    actions: tuple[QMatrix, ...]

    @classmethod
    def build(cls, algebra: FiniteAlgebra, actions) -> "FiniteModuleData":
        acts = tuple(a if isinstance(a, QMatrix) else QMatrix(a) for a in actions)
        if len(acts) != algebra.dim:
            raise AlgebraError("one action matrix per algebra basis element required")
        dim = acts[0].nrows if acts else 0
        mod = cls(algebra, dim, acts)
        mod.validate()
        return mod

    def validate(self):
        m = self.algebra.dim
        for a in self.actions:
            if a.nrows != self.dim or a.ncols != self.dim:
                raise AlgebraError("action matrix shape mismatch")
        unit = self.action(self.algebra.unit)
        if unit != QMatrix.identity(self.dim):
            raise AlgebraError("unit does not act as identity on module")
        for i in range(m):
            for j in range(m):
                lhs = self.actions[i] * self.actions[j]
                rhs = self.action(self.algebra.structure[i][j])
                if lhs != rhs:
                    raise AlgebraError(f"module law fails at basis pair ({i},{j})")

    def action(self, coords) -> QMatrix:
        out = QMatrix.zeros(self.dim, self.dim)
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c:
                out = out + self.actions[i].scale(c)
        return out


def free_module(algebra: FiniteAlgebra, copies: int = 1) -> FiniteModuleData:
    """A^copies with the diagonal regular action."""
    m = algebra.dim
    acts = []
    for i in range(m):
        block = algebra.mult_matrix_basis(i)
        rows = []
        for bi in range(copies):
            for r in range(m):
                row = [Fraction(0)] * (m * copies)
                for c in range(m):
                    row[bi * m + c] = block.rows[r][c]
                rows.append(row)
        acts.append(QMatrix(rows, m * copies))
    return FiniteModuleData.build(algebra, acts)


def delta_op(alg: FiniteAlgebra, a_coords, d: QMatrix, p: FiniteModuleData, q: FiniteModuleData) -> QMatrix:
    """Difference operator: multiply-then-apply minus apply-then-multiply."""
    if d.nrows != q.dim or d.ncols != p.dim:
        raise AlgebraError("operator shape does not match the modules")
    la_q = q.action(a_coords)
    la_p = p.action(a_coords)
    return la_q * d - d * la_p


def _basis_vec(m: int, i: int):
    return [Fraction(1 if j == i else 0) for j in range(m)]


def _delta_composite(alg, d, p, q, idx_tuple):
    out = d
    for i in idx_tuple:
        out = delta_op(alg, _basis_vec(alg.dim, i), out, p, q)
    return out


def operator_order(
    d: QMatrix, p: FiniteModuleData, q: FiniteModuleData, max_r: int
) -> int | None:
    """Smallest r <= max_r with every (r+1)-fold difference vanishing.

    The difference operators by basis elements commute, so multisets of
    basis indices suffice.
    """
    alg = p.algebra
    for r in range(max_r + 1):
        ok = True
        for idx in combinations_with_replacement(range(alg.dim), r + 1):
            if not _delta_composite(alg, d, p, q, idx).is_zero():
                ok = False
                break
        if ok:
            return r
    return None


def _flatten(mat: QMatrix):
    return [v for row in mat.rows for v in row]


def _unflatten(vec, nrows, ncols) -> QMatrix:
    return QMatrix([list(vec[r * ncols : (r + 1) * ncols]) for r in range(nrows)], ncols)


def diff_space(p: FiniteModuleData, q: FiniteModuleData, s: int) -> Subspace:
    """Operators of order <= s inside the space of all Q-linear maps P -> Q."""
    if s < 0:
        raise AlgebraError("order bound must be nonnegative")
    alg = p.algebra
    ambient = p.dim * q.dim
    constraint_rows = []
    for idx in combinations_with_replacement(range(alg.dim), s + 1):
        cols = []
        for u in range(q.dim):
            for v in range(p.dim):
                e_uv = QMatrix(
                    [[Fraction(1 if (r, c) == (u, v) else 0) for c in range(p.dim)] for r in range(q.dim)],
                    p.dim,
                )
                cols.append(_flatten(_delta_composite(alg, e_uv, p, q, idx)))
        # cols are images of the basis operators: constraints say the
        # linear combination vanishes
        for out_pos in range(ambient):
            constraint_rows.append([cols[b][out_pos] for b in range(ambient)])
    space = kernel(QMatrix(constraint_rows, ambient))
    for vec in space.basis.rows:
        mat = _unflatten(vec, q.dim, p.dim)
        for i in range(alg.dim):
            left = _flatten(q.actions[i] * mat)
            right = _flatten(mat * p.actions[i])
            if not space.contains(left) or not space.contains(right):
                raise AssertionError("Diff space not closed under the module actions")
    return space


@dataclass
class JetModule:
    """Quotient of A (x) P by the span of iterated tensor differences."""

    module: FiniteModuleData  # the quotient as an A-module (left-factor action)
    projection: QMatrix  # (A (x) P) -> Jet coordinates
    section: QMatrix  # Jet coordinates -> canonical representatives
    j_map: QMatrix  # P -> Jet, p |-> class of 1 (x) p
    mu: Subspace  # the subspace that was divided out


def _tensor_action_left(alg: FiniteAlgebra, p: FiniteModuleData, i: int) -> QMatrix:
    """Action of basis_i on A (x) P through the left factor."""
    m, dp = alg.dim, p.dim
    la = alg.mult_matrix_basis(i)
    rows = []
    for a_row in range(m):
        for p_row in range(dp):
            row = [Fraction(0)] * (m * dp)
            for a_col in range(m):
                row[a_col * dp + p_row] = la.rows[a_row][a_col]
            rows.append(row)
    return QMatrix(rows, m * dp)


def _tensor_action_right(alg: FiniteAlgebra, p: FiniteModuleData, i: int) -> QMatrix:
    """Map a (x) p |-> a (x) (basis_i p) on A (x) P."""
    m, dp = alg.dim, p.dim
    lp = p.actions[i]
    rows = []
    for a_row in range(m):
        for p_row in range(dp):
            row = [Fraction(0)] * (m * dp)
            for p_col in range(dp):
                row[a_row * dp + p_col] = lp.rows[p_row][p_col]
            rows.append(row)
    return QMatrix(rows, m * dp)


def mu_space(p: FiniteModuleData, s: int) -> Subspace:
    """Span of (s+1)-fold tensor differences inside A (x) P."""
    alg = p.algebra
    m, dp = alg.dim, p.dim
    ambient = m * dp
    diffs = [
        _tensor_action_left(alg, p, i) - _tensor_action_right(alg, p, i)
        for i in range(m)
    ]
    gens = []
    for idx in combinations_with_replacement(range(m), s + 1):
        op = QMatrix.identity(ambient)
        for i in idx:
            op = diffs[i] * op
        for col in range(ambient):
            gens.append([op.rows[r][col] for r in range(ambient)])
    return Subspace.from_rows(ambient, gens)


def jet_module(p: FiniteModuleData, s: int) -> JetModule:
    """Jet module of order s with its projection and the map p |-> [1 (x) p]."""
    if s < 0:
        raise AlgebraError("jet order must be nonnegative")
    alg = p.algebra
    m, dp = alg.dim, p.dim
    ambient = m * dp
    mu = mu_space(p, s)
    pivots = []
    for row in mu.basis.rows:
        pivots.append(next(j for j, v in enumerate(row) if v))
    free = [j for j in range(ambient) if j not in set(pivots)]
    jdim = len(free)
    # projection: reduce modulo mu, then read off free coordinates
    proj_rows = []
    for f in free:
        row = [Fraction(0)] * ambient
        row[f] = Fraction(1)
        for piv, brow in zip(pivots, mu.basis.rows):
            row[piv] = -brow[f]
        proj_rows.append(row)
    projection = QMatrix(proj_rows, ambient)
    # section: canonical representative has zero pivot coordinates
    sec_rows = []
    for r in range(ambient):
        row = [Fraction(0)] * jdim
        if r in free:
            row[free.index(r)] = Fraction(1)
        sec_rows.append(row)
    section = QMatrix(sec_rows, jdim)
    actions = []
    for i in range(m):
        actions.append(projection * _tensor_action_left(alg, p, i) * section)
    module = FiniteModuleData.build(alg, actions)
    unit_rows = [[Fraction(0)] * dp for _ in range(ambient)]
    for a_idx, c in enumerate(alg.unit):
        if c:
            for pi in range(dp):
                unit_rows[a_idx * dp + pi][pi] = c
    j_map = projection * QMatrix(unit_rows, dp)
    return JetModule(module, projection, section, j_map, mu)


def hom_module_space(p: FiniteModuleData, q: FiniteModuleData) -> Subspace:
    """A-linear maps P -> Q inside all Q-linear maps (flattened)."""
    ambient = p.dim * q.dim
    constraint_rows = []
    for i in range(p.algebra.dim):
        images = []
        for u in range(q.dim):
            for v in range(p.dim):
                e_uv = QMatrix(
                    [[Fraction(1 if (r, c) == (u, v) else 0) for c in range(p.dim)] for r in range(q.dim)],
                    p.dim,
                )
                images.append(_flatten(q.actions[i] * e_uv - e_uv * p.actions[i]))
        for out_pos in range(ambient):
            constraint_rows.append([images[b][out_pos] for b in range(ambient)])
    return kernel(QMatrix(constraint_rows, ambient))


@dataclass
class RepresentabilityReport:
    dim_hom_jet_q: int
    dim_diff: int
    forward_bijective: bool  # f |-> f o j^s lands in Diff_s and is invertible
    backward_bijective: bool  # D |-> f^D is the two-sided inverse
    a_linear: bool
    dual_dim_hom: int
    dual_dim_diff: int
    dual_bijective: bool

    @property
    def ok(self) -> bool:
        return (
            self.dim_hom_jet_q == self.dim_diff
            and self.forward_bijective
            and self.backward_bijective
            and self.a_linear
            and self.dual_dim_hom == self.dual_dim_diff
            and self.dual_bijective
        )


def _hom_basis_mats(space: Subspace, nrows, ncols):
    return [_unflatten(v, nrows, ncols) for v in space.basis.rows]


def verify_representability(p: FiniteModuleData, q: FiniteModuleData, s: int) -> RepresentabilityReport:
    """Both adjoint descriptions of order-<=s operators, checked exactly.

    Jet side: composing with p |-> [1 (x) p] identifies A-linear maps out
    of the jet module with Diff_s(P,Q); the inverse sends an operator D
    to [a (x) p] |-> a D(p).  Dual side: A-linear maps Q -> Diff_s^+(P)
    (right action structure on operators A -> P) correspond to Diff_s(Q,P)
    via evaluation at 1.
    """
    alg = p.algebra
    jet = jet_module(p, s)
    dspace = diff_space(p, q, s)
    hom = hom_module_space(jet.module, q)
    hom_mats = _hom_basis_mats(hom, q.dim, jet.module.dim)

    forward_ok = True
    fwd_images = []
    for f in hom_mats:
        comp = f * jet.j_map  # P -> Q
        flat = _flatten(comp)
        if not dspace.contains(flat):
            forward_ok = False
        fwd_images.append(flat)
    fwd_matrix = QMatrix(fwd_images, p.dim * q.dim) if fwd_images else QMatrix([], p.dim * q.dim)
    from ocat.linalg import rank as _rank

    forward_bij = forward_ok and hom.dim == dspace.dim and _rank(fwd_matrix) == hom.dim

    backward_ok = True
    for vec in dspace.basis.rows:
        d = _unflatten(vec, q.dim, p.dim)
        # ambient lift a (x) p |-> a D(p), must kill mu^{s+1}
        lift = _ambient_operator(alg, p, q, d)
        for gen in jet.mu.basis.rows:
            if any(v != 0 for v in lift.apply(gen)):
                raise AssertionError("f^D is not well defined on the jet quotient")
        f_d = lift * jet.section  # Jet -> Q
        back = f_d * jet.j_map
        if _flatten(back) != list(vec):
            backward_ok = False
        if not hom.contains(_flatten(f_d)):
            backward_ok = False
    # mutual inversion the other way: f |-> D |-> f
    for f in hom_mats:
        d = f * jet.j_map
        lift = _ambient_operator(alg, p, q, d)
        f_back = lift * jet.section
        if _flatten(f_back) != _flatten(f):
            backward_ok = False

    a_linear = True
    for f in hom_mats:
        for i in range(alg.dim):
            lhs = _flatten((q.actions[i] * f) * jet.j_map)
            rhs = _flatten(q.actions[i] * (f * jet.j_map))
            if lhs != rhs:
                a_linear = False

    dual_hom_dim, dual_diff_dim, dual_bij = _verify_plus_side(p, q, s)

    return RepresentabilityReport(
        dim_hom_jet_q=hom.dim,
        dim_diff=dspace.dim,
        forward_bijective=forward_bij,
        backward_bijective=backward_ok,
        a_linear=a_linear,
        dual_dim_hom=dual_hom_dim,
        dual_dim_diff=dual_diff_dim,
        dual_bijective=dual_bij,
    )


def _ambient_operator(alg, p, q, d: QMatrix) -> QMatrix:
    """The map A (x) P -> Q, a (x) p |-> a . D(p)."""
    m, dp, dq = alg.dim, p.dim, q.dim
    cols = []
    for a_idx in range(m):
        la_q = q.actions[a_idx]
        for p_idx in range(dp):
            dp_vec = [d.rows[r][p_idx] for r in range(dq)]
            cols.append(la_q.apply(dp_vec))
    rows = [[cols[c][r] for c in range(m * dp)] for r in range(dq)]
    return QMatrix(rows, m * dp)


def _module_on_subspace(alg: FiniteAlgebra, space: Subspace, action_of_basis) -> FiniteModuleData:
    """Turn an invariant subspace (flattened operators) into module data.

    action_of_basis(i, vec) returns the flattened image of a basis vector.
    """
    acts = []
    for i in range(alg.dim):
        cols = []
        for vec in space.basis.rows:
            img = action_of_basis(i, vec)
            coords = coordinates(space, img)
            if coords is None:
                raise AssertionError("action leaves the subspace")
            cols.append(coords)
        rows = [[cols[c][r] for c in range(space.dim)] for r in range(space.dim)]
        acts.append(QMatrix(rows, space.dim) if space.dim else QMatrix([], 0))
    return FiniteModuleData.build(alg, acts)


def _verify_plus_side(p: FiniteModuleData, q: FiniteModuleData, s: int):
    """A-Mod(Q, Diff_s^+(P)) vs Diff_s(Q, P) via evaluation at 1."""
    alg = p.algebra
    a_free = free_module(alg, 1)
    dplus_space = diff_space(a_free, p, s)  # operators A -> P
    # right structure: (b . D) = D o (mult by b)
    def right_act(i, vec):
        mat = _unflatten(vec, p.dim, alg.dim)
        return _flatten(mat * alg.mult_matrix_basis(i))

    dplus_mod = _module_on_subspace(alg, dplus_space, right_act)
    hom_q_dplus = hom_module_space(q, dplus_mod)
    diff_q_p = diff_space(q, p, s)
    if hom_q_dplus.dim != diff_q_p.dim:
        return hom_q_dplus.dim, diff_q_p.dim, False
    # ev: Diff^+(P) -> P, D |-> D(1)
    unit_col = list(alg.unit)
    ev_rows = []
    for r in range(p.dim):
        row = []
        for vec in dplus_space.basis.rows:
            mat = _unflatten(vec, p.dim, alg.dim)
            row.append(mat.apply(unit_col)[r])
        ev_rows.append(row)
    ev = QMatrix(ev_rows, dplus_space.dim) if dplus_space.dim else QMatrix([], 0)
    ok = True
    for vec in _hom_basis_mats(hom_q_dplus, dplus_mod.dim, q.dim):
        comp = ev * vec  # Q -> P
        if not diff_q_p.contains(_flatten(comp)):
            ok = False
            continue
        # inverse: D |-> f_D with f_D(q)(a) = D(a q)
        back = _f_delta(alg, p, q, comp, dplus_space)
        if _flatten(back) != _flatten(vec):
            ok = False
    for vec in diff_q_p.basis.rows:
        d = _unflatten(vec, p.dim, q.dim)
        f_d = _f_delta(alg, p, q, d, dplus_space)
        if not hom_q_dplus.contains(_flatten(f_d)):
            ok = False
            continue
        if _flatten(ev * f_d) != list(vec):
            ok = False
    return hom_q_dplus.dim, diff_q_p.dim, ok


def _f_delta(alg, p, q, d: QMatrix, dplus_space: Subspace) -> QMatrix:
    """f_D : Q -> Diff^+(P) coordinates, q |-> (a |-> D(a q))."""
    cols = []
    for qi in range(q.dim):
        qvec = _basis_vec(q.dim, qi)
        mat_cols = []
        for ai in range(alg.dim):
            aq = q.actions[ai].apply(qvec)
            mat_cols.append(d.apply(aq))
        mat = QMatrix(
            [[mat_cols[c][r] for c in range(alg.dim)] for r in range(p.dim)], alg.dim
        )
        coords = coordinates(dplus_space, _flatten(mat))
        if coords is None:
            raise AssertionError("f_D image is not an order-bounded operator")
        cols.append(coords)
    rows = [[cols[c][r] for c in range(q.dim)] for r in range(dplus_space.dim)]
    return QMatrix(rows, q.dim) if dplus_space.dim else QMatrix([], q.dim)


@dataclass
class DualityReport:
    dim_diff: int
    dim_hom_jet_a: int
    dim_jet: int
    dim_hom_diff_a: int
    first_iso: bool
    second_iso: bool

    @property
    def ok(self) -> bool:
        return (
            self.first_iso
            and self.second_iso
            and self.dim_diff == self.dim_hom_jet_a
            and self.dim_jet == self.dim_hom_diff_a
        )


def verify_vinogradov_duality(p: FiniteModuleData, s: int) -> DualityReport:
    """The two object-level isomorphisms of the operator/jet duality over A.

    First: Diff_s(P,A) vs A-Mod(Jet^s(P), A) by the representability maps.
    Second: Jet^s(P) vs A-Mod(Diff_s(P,A), A) via [a (x) p] |-> (D |-> a D(p)),
    inverted by exact matrix inversion.
    """
    alg = p.algebra
    a_free = free_module(alg, 1)
    rep = verify_representability(p, a_free, s)
    first = rep.dim_hom_jet_q == rep.dim_diff and rep.forward_bijective and rep.backward_bijective

    jet = jet_module(p, s)
    dspace = diff_space(p, a_free, s)

    def left_act(i, vec):
        mat = _unflatten(vec, alg.dim, p.dim)
        return _flatten(alg.mult_matrix_basis(i) * mat)

    dmod = _module_on_subspace(alg, dspace, left_act)
    hom_d_a = hom_module_space(dmod, a_free)

    # natural map xi: Jet -> Hom(Diff, A), [a (x) p] |-> (D |-> a D(p))
    xi_cols = []
    for col in range(jet.module.dim):
        rep_vec = [jet.section.rows[r][col] for r in range(alg.dim * p.dim)]
        # rep_vec is the canonical representative in A (x) P
        func_rows = []
        for a_row in range(alg.dim):
            row = []
            for dvec in dspace.basis.rows:
                d = _unflatten(dvec, alg.dim, p.dim)
                total = Fraction(0)
                for a_idx in range(alg.dim):
                    for p_idx in range(p.dim):
                        c = rep_vec[a_idx * p.dim + p_idx]
                        if c:
                            dp_val = d.apply(_basis_vec(p.dim, p_idx))
                            adp = alg.mult_matrix_basis(a_idx).apply(dp_val)
                            total += c * adp[a_row]
                row.append(total)
            func_rows.append(row)
        func = QMatrix(func_rows, dspace.dim) if dspace.dim else QMatrix([], 0)
        xi_cols.append(_flatten(func))
    amb = alg.dim * dspace.dim
    xi = QMatrix(
        [[xi_cols[c][r] for c in range(jet.module.dim)] for r in range(amb)],
        jet.module.dim,
    ) if jet.module.dim else QMatrix([], 0)

    second = hom_d_a.dim == jet.module.dim
    if second:
        for col in range(jet.module.dim):
            img = [xi.rows[r][col] for r in range(amb)]
            if not hom_d_a.contains(img):
                second = False
                break
    if second and jet.module.dim:
        from ocat.linalg import rank as _rank

        if _rank(xi) != jet.module.dim:
            second = False
        else:
            # explicit inverse: solve xi . y = h for each hom basis vector
            for hvec in hom_d_a.basis.rows:
                y = solve(xi, list(hvec))
                if y is None:
                    second = False
                    break
    # A-linearity of xi
    if second:
        for i in range(alg.dim):
            for col in range(jet.module.dim):
                jv = _basis_vec(jet.module.dim, col)
                lhs = xi.apply(jet.module.actions[i].apply(jv))
                func = _unflatten(xi.apply(jv), alg.dim, dspace.dim)
                rhs = _flatten(alg.mult_matrix_basis(i) * func)
                if lhs != rhs:
                    second = False

    return DualityReport(
        dim_diff=dspace.dim,
        dim_hom_jet_a=rep.dim_hom_jet_q,
        dim_jet=jet.module.dim,
        dim_hom_diff_a=hom_d_a.dim,
        first_iso=first,
        second_iso=second,
    )
