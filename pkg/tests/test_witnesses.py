from dataclasses import replace

import pytest

from regugen.formulas import order_of
from regugen.galois import field_of_size
from regugen.matrices import is_regular_unipotent, jordan_block
from regugen.report import FAIL, INCONCLUSIVE, PASS
from regugen.witnesses import (
    GENERATION_WITNESSES,
    WitnessError,
    beta_squared_mutant,
    catalog,
    evaluate_word,
    get_witness,
    load_witness,
    uu4_orientation,
    verify,
    witness_ids,
)

FAST = ("sl2-9", "sl4-2", "sp4-2", "su4-3", "su5-3", "su4-even(4)", "su4-even(8)",
        "pa2(3,2)", "pa2(3,3)", "pa2(4,2)", "pa2(3,9)")


@pytest.mark.parametrize("wid", FAST)
def test_witness_passes(wid):
    reps = verify(get_witness(wid))
    assert reps and all(r.status == PASS for r in reps), [r.to_dict() for r in reps if r.status != PASS]


def test_catalog_contents():
    ids = witness_ids()
    for wid in GENERATION_WITNESSES:
        assert wid in ids
    assert len([w for w in catalog() if w.id.startswith("t2r(")]) == 32
    sp = get_witness("sp6-9")
    assert len(sp.assertions) == 6
    gen = [a for a in sp.assertions if a.kind == "generates"][0]
    assert gen.expected == order_of("Sp", 6, 9)


def test_su4_even_scalar_order_and_regular_x():
    w = get_witness("su4-even(4)")
    orders = [a for a in w.assertions if a.kind == "order"]
    assert orders[0].expected == 5
    env = w.environment()
    assert is_regular_unipotent(env["x"], w.group)
    assert uu4_orientation(4) == uu4_orientation(8) == "maps"


def test_both_commutator_conventions_reach_ten():
    env = get_witness("sl2-9").environment()
    from regugen.chain import element_order

    assert element_order(evaluate_word("[a,b]", env)) == 10
    assert element_order(evaluate_word("a^-1*b^-1*a*b", env)) == 10


def test_word_language():
    F = field_of_size(3)
    J = jordan_block(F, 2)
    env = {"a": J, "b": J.T}
    assert evaluate_word("a^b", env) == J.T.inverse() @ J @ J.T
    assert evaluate_word("[a,b]", env) == J @ J.T @ J.inverse() @ J.T.inverse()
    assert evaluate_word("(a*b)^-2", env) == (J @ J.T).inverse() @ (J @ J.T).inverse()
    with pytest.raises(WitnessError):
        evaluate_word("a*c", env)
    with pytest.raises(WitnessError):
        evaluate_word("(a*b", env)


def test_beta_squared_mutation_fails():
    reps = verify(beta_squared_mutant(get_witness("sl2-9")))
    assert any(r.status == FAIL and "order" in r.check for r in reps)


def _drop_generator(w):
    out = []
    for a in w.assertions:
        if a.kind == "generates":
            for i in range(len(a.words)):
                words = a.words[:i] + a.words[i + 1:]
                out.append(replace(w, assertions=[replace(a, words=words)]))
    return out


@pytest.mark.parametrize("wid", GENERATION_WITNESSES)
def test_dropping_a_generator_fails_generation(wid):
    for w in _drop_generator(get_witness(wid)):
        if any(a.kind == "subgroup-order" for a in w.assertions):
            continue
        reps = verify(replace(w, members=()))
        assert [r.status for r in reps] == [FAIL]


def test_verification_is_deterministic():
    a = [r.to_json(timing=False) for r in verify(get_witness("sp4-2"))]
    b = [r.to_json(timing=False) for r in verify(get_witness("sp4-2"))]
    assert a == b


def test_budget_gives_inconclusive():
    reps = verify(get_witness("su4-3"), budget=50)
    assert any(r.status == INCONCLUSIVE for r in reps)
    assert not any(r.status == PASS and "generates" in r.check for r in reps)


def test_membership_of_catalog_elements():
    for wid in GENERATION_WITNESSES + ("pa2(3,3)",):
        reps = [r for r in verify(get_witness(wid)) if "/member" in r.check]
        assert all(r.status == PASS for r in reps)


def test_user_witness_file():
    text = """group SL(2,9)
field 3 2
dim 2
mat: a
1, 1
0, 1
mat: b
1, 0
b, 1
word: c = a*b^2
assert: order c = 8
assert: order [a,b] = 10
assert: generates a, b = 720
assert: regular a
"""
    w = load_witness(text)
    reps = verify(w)
    assert [r.status for r in reps] == [PASS] * 4
    bad = load_witness(text.replace("order c = 8", "order c = 9"))
    assert verify(bad)[0].status == FAIL
