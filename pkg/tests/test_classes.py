import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from regugen.classes import (
    EnumerationError,
    class_table,
    count_subgroup_conjugates_containing,
    delta_brute,
    delta_star,
    enumerate_classes,
    sigma_brute,
)
from regugen.groups import parse_group, standard_generators

BURNSIDE_GROUPS = ("Cyclic(3)", "Sym(3)", "Sym(4)", "SL(2,3)", "Dihedral(10)", "SL(2,5)",
                   "SU(3,2)", "SL(3,2)", "Sym(5)", "Alt(6)")


def test_sym3_class_sizes(tables):
    ct = tables("Sym(3)")
    assert sorted(c.size for c in ct.classes) == [1, 2, 3]
    assert [c.label for c in ct.classes] == ["1a", "2a", "3a"]


def test_small_class_counts(tables):
    assert len(tables("SL(2,3)")) == 7
    ct = tables("SU(4,2)")
    assert len(ct) == 20 and sum(c.size for c in ct.classes) == 25920


@pytest.mark.parametrize("name", BURNSIDE_GROUPS + ("SL(3,3)", "SU(3,3)", "Sp(4,3)"))
def test_class_equation_and_inverse_map(tables, name):
    ct = tables(name)
    assert sum(c.size for c in ct.classes) == ct.order
    assert all(ct.order % c.size == 0 for c in ct.classes)
    inv = list(ct.inverse)
    assert sorted(inv) == list(range(len(ct)))
    assert all(inv[inv[i]] == i for i in range(len(ct)))
    # labels: order then decreasing size
    keys = [(c.order, -c.size) for c in ct.classes]
    assert keys == sorted(keys)


def test_delta_examples(tables):
    ct = tables("Sym(3)")
    assert delta_brute(ct, 1, 1, 2) == 3
    assert delta_star(ct, 1, 1, 2) == 3
    ct = tables("SU(3,2)")
    assert delta_brute(ct, ct.by_label("4a"), ct.by_label("4b"), ct.by_label("4c")) == 10


@pytest.mark.parametrize("name", ("Sym(4)", "SL(2,5)", "SU(3,2)"))
def test_identity_class_forces_inverse(tables, name):
    ct = tables(name)
    for c in range(len(ct)):
        for d in range(len(ct)):
            want = ct.classes[c].size if d == ct.inverse[c] else 0
            assert delta_brute(ct, c, d, 0) == want


@pytest.mark.parametrize("name", BURNSIDE_GROUPS)
def test_burnside_rotation_symmetry(tables, name):
    """|c1| D(c1,c2,c3) = |c2| D(c2,c3*,c1*) with c* the inverse class, on every triple."""
    ct = tables(name)
    r, inv = len(ct), ct.inverse
    size = [c.size for c in ct.classes]
    D = {t: delta_brute(ct, *t) for t in itertools.product(range(r), repeat=3)}
    for a, b, c in D:
        assert size[c] * D[a, b, c] == size[a] * D[b, inv[c], inv[a]]
        assert D[a, b, c] == D[b, a, c]


@given(st.sampled_from(("Sym(4)", "SL(2,3)", "SL(3,2)", "SU(3,2)")), st.data())
def test_generating_pairs_bounded_by_all_pairs(tables, name, data):
    ct = tables(name)
    r = len(ct)
    t = [data.draw(st.integers(0, r - 1)) for _ in range(3)]
    ds, d = delta_star(ct, *t), delta_brute(ct, *t)
    assert 0 <= ds <= d


def test_worker_count_does_not_change_results(tables):
    ct = tables("SL(3,2)")
    a = [delta_star(ct, 3, 3, 5, workers=1), delta_star(ct, 3, 3, 5, workers=4)]
    assert a[0] == a[1]


def test_class_dump_is_json(tables):
    rows = json.loads(tables("Sym(3)").to_json())
    assert rows[1] == {"label": "2a", "size": 3, "elementOrder": 2, "representative": rows[1]["representative"]}
    assert rows[1]["representative"].startswith("perm:")


def test_enumeration_budget(tables):
    with pytest.raises(EnumerationError):
        enumerate_classes(parse_group("SL(3,3)"), budget=100)


def test_subgroup_conjugate_counts(tables):
    ct = tables("SL(2,5)")
    gens = standard_generators(parse_group("SL(2,5)"))
    x = ct.classes[-1].rep
    assert count_subgroup_conjugates_containing(ct, gens, x) == 1
    ident = ct.classes[0].rep
    assert count_subgroup_conjugates_containing(ct, [ident], x) == 0


def test_sigma_degenerate_cases(tables):
    ct = tables("SU(3,2)")
    c = [ct.by_label(x) for x in ("4a", "4b", "4c")]
    assert sigma_brute(ct, ct.gens, *c) == delta_brute(ct, *c)
    g3 = ct.classes[c[2]].rep
    # <g3> is cyclic of order 4, so it has no elements of order 3
    assert sigma_brute(ct, [g3], ct.by_label("3a"), ct.by_label("3a"), c[2]) == 0


def test_class_table_from_explicit_generators(tables):
    ct0 = tables("Sym(4)")
    ct = class_table(ct0.gens, ct0.U)
    assert [c.size for c in ct.classes] == [c.size for c in ct0.classes]
    assert np.array_equal(ct.codes, ct0.codes)
