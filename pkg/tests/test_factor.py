import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from eqlogic.factor import (ZERO, FactorMonoid, TableTooLarge, brute_force_decide, decide_identity,
                            is_isoterm_for_factor_monoid, isoterm_certificate)
from eqlogic.family import build_family, five_identities
from eqlogic.monoid import Counterexample, IsotermUpTo
from eqlogic.words import Identity, ident, letters

from strategies import words


def distinct_factors(ws):
    return {w[i:j] for w in ws for i in range(len(w)) for j in range(i + 1, len(w) + 1)}


def test_element_sets():
    assert FactorMonoid([letters("xy")]).elements() == [(), ("x",), ("y",), ("x", "y"), ZERO]
    assert len(FactorMonoid([letters("xyx")])) == 7
    fam = build_family(2)
    assert FactorMonoid(fam).size == len(distinct_factors(fam)) + 2 == 2830
    with pytest.raises(ValueError):
        FactorMonoid([])
    with pytest.raises(TableTooLarge):
        FactorMonoid(fam).to_finite_monoid(cap=100)


def test_product_rule():
    fm = FactorMonoid([letters("xyx")])
    assert fm.multiply(("x",), ("y",)) == ("x", "y")
    assert fm.multiply(("y",), ("y",)) is ZERO
    assert fm.multiply((), ("y", "x")) == ("y", "x")
    assert fm.multiply(ZERO, ()) is ZERO
    fm.to_finite_monoid().validate()


def test_decision_examples():
    fm = FactorMonoid([letters("xy")])
    res = decide_identity(fm, ident("xy", "yx"))
    assert not res.holds
    assert fm.evaluate(letters("xy"), res.witness) != fm.evaluate(letters("yx"), res.witness)
    single = FactorMonoid([letters("xytzsxzy")])
    fam = build_family(2)
    assert all(decide_identity(single, Identity(u, v)).holds for u in fam for v in fam)
    pair = FactorMonoid([letters("xyzxy"), letters("xyzyx")])
    assert [decide_identity(pair, i).holds for i in five_identities()] == [True, True, True, True, False]


def test_family_members_separate_each_other():
    fam = build_family(2)
    fm = FactorMonoid(fam)
    for u, v in itertools.permutations(fam, 2):
        res = fm.decide(Identity(u, v))
        assert not res.holds
        assert fm.evaluate(u, res.witness) != fm.evaluate(v, res.witness)


def test_content_difference_is_decided_symbolically():
    fm = FactorMonoid([letters("xyz")])
    res = fm.decide(ident("xy", "x"))
    assert not res.holds and res.witness["y"] is ZERO


def test_isoterms():
    fam = build_family(2)
    fm = FactorMonoid(fam)
    for w in fam:
        assert isoterm_certificate(fm, w) is not None
        assert is_isoterm_for_factor_monoid(fm, w, 48) == IsotermUpTo(48)
    assert is_isoterm_for_factor_monoid(FactorMonoid([letters("x")]), letters("xy"), 3) == Counterexample(letters("yx"))


@pytest.mark.slow
def test_reference_word_is_isoterm_by_search():
    fm = FactorMonoid([letters("xzytxy")])
    assert is_isoterm_for_factor_monoid(fm, letters("xzytxy"), 7, use_certificate=False) == IsotermUpTo(7)


def random_instance(rnd):
    ws = []
    budget = rnd.randint(1, 6)
    while budget > 0:
        k = rnd.randint(1, budget)
        ws.append(tuple(rnd.choice("ab") for _ in range(k)))
        budget -= k
    names = "xyz"[:rnd.randint(1, 3)]
    u = tuple(rnd.choice(names) for _ in range(rnd.randint(0, 5)))
    v = tuple(rnd.choice(names) for _ in range(rnd.randint(0, 5)))
    return ws, Identity(u, v)


def test_decision_matches_table_evaluation():
    rnd = random.Random(2024)
    for _ in range(250):
        ws, idn = random_instance(rnd)
        fm = FactorMonoid(ws)
        got = decide_identity(fm, idn)
        assert got.holds == brute_force_decide(fm, idn).holds, (ws, idn)
        if not got.holds:
            assert fm.evaluate(idn.lhs, got.witness) != fm.evaluate(idn.rhs, got.witness)


small_sets = st.lists(words("ab", min_size=1, max_size=3), min_size=1, max_size=2)


@settings(max_examples=40)
@given(small_sets, words("xy", max_size=4))
def test_trivial_identity_always_holds(ws, u):
    assert decide_identity(FactorMonoid(ws), Identity(u, u)).holds


@given(small_sets, words("xy", max_size=4), words("xy", max_size=4), st.sampled_from("xy"))
def test_zero_variable_makes_sides_equal(ws, u, v, x):
    fm = FactorMonoid(ws)
    if x in u and x in v:
        phi = {y: ("a",) for y in "xy"}
        phi[x] = ZERO
        assert fm.evaluate(u, phi) is ZERO and fm.evaluate(v, phi) is ZERO


@settings(max_examples=40)
@given(small_sets, small_sets, words("xy", max_size=4), words("xy", max_size=4))
def test_witness_transfers_to_larger_word_set(ws, extra, u, v):
    small = FactorMonoid(ws)
    res = small.decide(Identity(u, v))
    if not res.holds:
        big = FactorMonoid(ws + extra)
        assert big.evaluate(u, res.witness) != big.evaluate(v, res.witness)
