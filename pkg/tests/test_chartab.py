import itertools

import pytest
from hypothesis import given, strategies as st

from regugen.chartab import (
    CharacterTable,
    TableError,
    ThetaInput,
    delta_from_table,
    dixon_build,
    h_from_formula,
    theta,
)
from regugen.classes import delta_brute
from regugen.exact import Cyclotomic

TABLE_GROUPS = ("Cyclic(3)", "Sym(3)", "Sym(4)", "SL(2,3)", "Dihedral(10)", "SL(2,5)", "SU(3,2)", "SL(3,2)", "Alt(6)")


def z(N, j):
    return Cyclotomic.zeta(N, j)


def test_cyclic_three_table(tables):
    T = dixon_build(tables("Cyclic(3)"))
    one = Cyclotomic.rational(1, 3)
    rows = sorted(T.irreducibles, key=lambda r: [c.to_literal() for c in r])
    want = sorted([[one, one, one], [one, z(3, 1), z(3, 2)], [one, z(3, 2), z(3, 1)]],
                  key=lambda r: [c.to_literal() for c in r])
    assert rows == want


def test_degree_multisets(tables):
    assert sorted(dixon_build(tables("Sym(3)")).degrees) == [1, 1, 2]
    assert sorted(dixon_build(tables("SL(2,3)")).degrees) == [1, 1, 1, 2, 2, 2, 3]


def test_su42_table_gives_published_constant(tables):
    ct = tables("SU(4,2)")
    T = dixon_build(ct)
    reg = [c.index for c in ct.classes if c.order == 4 and c.label == "4a"]
    vals = [delta_from_table(T, reg[0], reg[0], c) for c in ct.with_order(9)]
    assert 486 in vals


@pytest.mark.parametrize("name", TABLE_GROUPS)
def test_table_matches_brute_force_on_all_triples(tables, name):
    ct = tables(name)
    T = dixon_build(ct)
    r = len(ct)
    for t in itertools.product(range(r), repeat=3):
        assert delta_from_table(T, *t) == delta_brute(ct, *t)
        assert delta_from_table(T, *t) == delta_from_table(T, t[1], t[0], t[2])


@pytest.mark.parametrize("name", TABLE_GROUPS)
def test_orthogonality_and_json_round_trip(tables, name):
    T = dixon_build(tables(name))
    assert T.validate()
    text = T.to_json()
    back = CharacterTable.from_json(text)
    assert back.to_json() == text


def test_corrupted_tables_rejected(tables):
    T = dixon_build(tables("Sym(3)"))
    rows = [list(r) for r in T.irreducibles]
    rows[0][1] = rows[0][1] + Cyclotomic.rational(1, T.conductor)
    with pytest.raises(TableError):
        CharacterTable(T.name, T.order, T.conductor, T.classes, rows)
    with pytest.raises(TableError):
        CharacterTable(T.name, T.order + 1, T.conductor, T.classes, T.irreducibles)
    bad = CharacterTable(T.name, T.order, T.conductor, T.classes, rows, validate=False)
    with pytest.raises(TableError):
        for t in itertools.product(range(3), repeat=3):
            delta_from_table(bad, *t)


def test_theta_examples():
    assert theta(ThetaInput(486, ((1, 81),))).value == 405
    assert theta(ThetaInput(17)).value == 17
    assert theta(ThetaInput(808582807552, ((1, 519168),))).value == 808582288384
    r = theta(ThetaInput(5, ((2, 3),)))
    assert r.value == -1 and r.negative
    with pytest.raises(ValueError):
        ThetaInput(-1)


def test_h_from_formula_examples():
    assert h_from_formula(9, [], 9, 1) == 0
    assert h_from_formula(9, [9], 9, 1) == 1
    with pytest.raises(ValueError):
        h_from_formula(9, [9], 9, 3)
    with pytest.raises(ValueError):
        h_from_formula(9, [4], 9, 1)


@given(st.integers(0, 10**30), st.lists(st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)), max_size=4))
def test_theta_is_delta_minus_corrections(d, corr):
    assert theta(ThetaInput(d, tuple(corr))).value == d - sum(h * s for h, s in corr)
