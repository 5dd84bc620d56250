import pytest

from corpus import (
    composable_pair,
    corpus_categories,
    diamond_poset,
    discrete,
    equalizer_two_cat,
    parallel_pair,
    terminal,
    thin2_cat,
    walking_arrow,
    walking_iso,
    walking_iso_thin2,
    zmod2_loop_cat,
)
from ocat.core import (
    Cell,
    CompositionError,
    FiniteOmegaCat,
    hom_set,
    opposite,
    same_tables,
    star,
    truncate,
    validate_category,
    validate_precategory,
)


def test_terminal_is_valid_precategory():
    assert validate_precategory(terminal()).ok


def test_broken_identity_boundary_reported():
    cat = walking_arrow()
    cells = dict(cat.cells)
    cells["ghost"] = Cell("ghost", 1, "a", "a")
    identities = dict(cat.e)
    identities["b"] = "ghost"  # d(e b) = a, not b
    bad = FiniteOmegaCat(cells, 1, identities, dict(cat.comp))
    rep = validate_precategory(bad)
    assert "identity" in rep.clauses()


def test_walking_arrow_valid_by_hand():
    # hand-check of every clause on the smallest nontrivial table
    cat = walking_arrow()
    assert validate_precategory(cat).ok
    assert validate_category(cat, up_to_equiv=False).ok
    assert validate_category(cat, up_to_equiv=True).ok


def test_whole_corpus_validates():
    for cat in corpus_categories():
        rep = validate_category(cat)
        assert rep.ok, (cat.name, rep.findings[:3])


def test_associativity_mutation_flagged_with_triple():
    cat = composable_pair()
    comp = dict(cat.comp)
    comp[(1, "g", "f")] = "1a"  # break g.f, boundary-compatible? no: 1a: a->a vs gf: a->c
    # use a parallel replacement instead: add a second arrow a -> c
    cells = dict(cat.cells)
    cells["gf2"] = Cell("gf2", 1, "a", "c")
    comp[(1, "g", "f")] = "gf"
    comp[(1, "gf2", "1a")] = "gf2"
    comp[(1, "1c", "gf2")] = "gf2"
    bigger = FiniteOmegaCat(cells, 1, dict(cat.e), comp, name="triangle2")
    assert validate_category(bigger).ok
    comp2 = dict(comp)
    comp2[(1, "g", "f")] = "gf2"
    mutated = FiniteOmegaCat(cells, 1, dict(cat.e), comp2)
    rep = validate_category(mutated)
    assert not rep.ok
    finding = [f for f in rep.findings if f.clause == "associativity"]
    assert finding and set(finding[0].cells) <= {"g", "f", "1a", "1b", "1c"}


def test_up_to_equiv_passes_where_strict_fails():
    cat = walking_iso_thin2()
    assert validate_category(cat, up_to_equiv=True).ok
    assert validate_category(cat, up_to_equiv=False).ok  # this table happens to be strict
    # force a weak-only unit: compose f . 1a = h-composite-equivalent is not
    # representable in a thin table, so check the flag plumbing instead
    assert validate_category(zmod2_loop_cat(), up_to_equiv=False).ok


def test_hom_set_terminal_single_object():
    h = hom_set(terminal(), "pt", "pt")
    assert h.by_degree.get(0) == ["1pt"]
    assert h.top_degree == 0


def test_hom_set_empty_when_boundaries_mismatch():
    cat = parallel_pair()
    assert hom_set(cat, "f", "g").cell_ids() == []
    arr = walking_arrow()
    assert hom_set(arr, "b", "a").cell_ids() == []


def test_iterated_hom_matches_direct():
    cat = zmod2_loop_cat()
    outer = hom_set(cat, "s", "s")
    inner = hom_set(outer, "x", "x")
    direct = hom_set(cat, "x", "x")
    assert same_tables(inner, direct)


def test_hom_set_inherits_validity():
    for cat in (walking_iso_thin2(), zmod2_loop_cat(), diamond_poset()):
        assert validate_category(cat).ok
        for a in cat.objects():
            for b in cat.objects():
                sub = hom_set(cat, a, b)
                assert validate_precategory(sub).ok
                assert validate_category(sub).ok, (cat.name, a, b)


def test_star_unit_absorption():
    cat = walking_arrow()
    assert star(cat, "1b", "f") == "f"
    assert star(cat, "f", "1a") == "f"


def test_star_equal_degrees_is_table_lookup():
    cat = walking_iso()
    for (k, f, g), h in cat.comp.items():
        if k == cat.degree(f):
            assert star(cat, f, g) == h


def test_star_mixed_degree_matches_padded_table():
    cat = zmod2_loop_cat()
    # 2-cell against the 1-cell: pad the 1-cell once and use the deep table
    got = star(cat, "gx", "x")
    padded = cat.comp[(2, "gx", cat.e["x"])]
    assert got == padded


def test_star_noncomposable_raises():
    cat = discrete(2)
    with pytest.raises(CompositionError):
        star(cat, "1a0", "1a1")


def test_opposite_terminal_fixed():
    assert same_tables(opposite(terminal()), terminal())


def test_opposite_reverses_arrow():
    op = opposite(walking_arrow())
    assert op.cells["f"].dom == "b" and op.cells["f"].cod == "a"
    assert validate_category(op).ok


def test_opposite_involution_on_corpus():
    for cat in corpus_categories():
        assert same_tables(opposite(opposite(cat)), cat), cat.name


def test_opposite_swaps_top_level_composition_only():
    cat = zmod2_loop_cat()
    op = opposite(cat)
    # degree-2 cells at deepness 2 are swapped, deepness 1 kept
    assert op.comp[(1, "gx", "ix")] == cat.comp[(1, "gx", "ix")]
    assert op.comp[(2, "gx", "ix")] == cat.comp[(2, "ix", "gx")]
    assert validate_category(op).ok


def test_truncate_identity_at_top():
    cat = walking_iso()
    assert same_tables(truncate(cat, 1), cat)


def test_truncate_collapses_equivalent_objects():
    tr = truncate(walking_iso(), 0)
    assert len(tr.objects()) == 1
    tr2 = truncate(discrete(2), 0)
    assert len(tr2.objects()) == 2


def test_truncate_two_cat_to_one_cat():
    cat = walking_iso_thin2()
    tr = truncate(cat, 1)
    assert tr.top_degree == 1
    assert validate_category(tr).ok
    # h collapses onto the identity class
    assert len(tr.by_degree[1]) < len(cat.by_degree[1])


def test_globularity_holds_across_corpus():
    for cat in corpus_categories():
        for cid in cat.cell_ids():
            if cat.degree(cid) >= 2:
                assert cat.d(cat.d(cid)) == cat.d(cat.c(cid))
                assert cat.c(cat.c(cid)) == cat.c(cat.d(cid))


def test_boundary_rule_of_composites():
    for cat in corpus_categories():
        for (k, f, g), h in cat.comp.items():
            if k == 1:
                assert cat.d(h) == cat.d(g) and cat.c(h) == cat.c(f)
            else:
                assert cat.comp[(k - 1, cat.d(f), cat.d(g))] == cat.d(h)
                assert cat.comp[(k - 1, cat.c(f), cat.c(g))] == cat.c(h)


def test_each_level_forms_one_category():
    # objects with n-cells under the n-fold boundary behave 1-categorically
    for cat in (walking_iso_thin2(), zmod2_loop_cat()):
        for n in range(1, cat.top_degree + 1):
            for f in cat.by_degree.get(n, []):
                src = cat.d_iter(f, n)
                tgt = cat.c_iter(f, n)
                left = f
                for _ in range(n):
                    left = cat.e[cat.c_iter(f, n)] if False else left
                # unit and associativity at deepness n through the table
                e_src = src
                for _ in range(n):
                    e_src = cat.e[e_src]
                e_tgt = tgt
                for _ in range(n):
                    e_tgt = cat.e[e_tgt]
                assert cat.comp[(n, f, e_src)] == f
                assert cat.comp[(n, e_tgt, f)] == f
            for f in cat.by_degree.get(n, []):
                for g in cat.by_degree.get(n, []):
                    for h in cat.by_degree.get(n, []):
                        if cat.composable(n, f, g) and cat.composable(n, g, h):
                            assert cat.comp[(n, cat.comp[(n, f, g)], h)] == cat.comp[(n, f, cat.comp[(n, g, h)])]


def test_thin2_rejects_non_congruence():
    base = composable_pair()
    with pytest.raises(ValueError):
        thin2_cat(base, [("f", "gf")])  # not parallel


def test_validation_report_deterministic_order():
    cat = walking_arrow()
    cells = dict(cat.cells)
    del cells["1b"]
    broken = FiniteOmegaCat(cells, 1, {k: v for k, v in cat.e.items() if v != "1b"},
                            {k: v for k, v in cat.comp.items() if "1b" not in k and v != "1b"})
    r1 = validate_precategory(broken)
    r2 = validate_precategory(broken)
    assert [f for f in r1.findings] == [f for f in r2.findings]
