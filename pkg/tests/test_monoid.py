import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eqlogic.family import five_identities, two_identities
from eqlogic.monoid import (BadParam, Counterexample, FiniteMonoid, IsotermUpTo, MonoidError, NoIdentity,
                            NotAssociative, TooManyVariables, UnboundVariable, a21, brandt, build, builtin, cyclic,
                            dihedral, direct_product, from_generators, quaternion, trivial)
from eqlogic.words import Identity, ident, letters

from strategies import words

SMALL = {"b21": brandt(), "a21": a21(), "d3": dihedral(3), "q8": quaternion(), "z3": cyclic(3)}


def test_build_basics():
    t = build([[0]], 0)
    assert t.size == 1 and t.zero == 0
    with pytest.raises(NoIdentity):
        build([[0, 0], [0, 0]], 0)
    # right-zero semigroup on {a, b} with an identity adjoined
    build([[0, 1, 2], [1, 1, 2], [2, 1, 2]], 0)
    with pytest.raises(NotAssociative):
        build([[0, 1, 2], [1, 2, 2], [2, 1, 2]], 0)


def test_brandt_presentation():
    b = brandt()
    assert b.size == 6 and b.zero is not None
    for lhs, rhs in (("aba", "a"), ("bab", "b"), ("aa", "0"), ("bb", "0")):
        assert b.product_of(lhs) == b.product_of(rhs)
    assert b.evaluate(letters("xyx"), {"x": b.element("a"), "y": b.element("b")}) == b.element("a")


def test_a21_presentation():
    m = a21()
    assert m.size == 6
    for lhs, rhs in (("aba", "a"), ("bab", "b"), ("aa", "0"), ("bb", "b")):
        assert m.product_of(lhs) == m.product_of(rhs)


def test_groups():
    for p in (3, 5, 7):
        d = dihedral(p)
        assert d.size == 2 * p and d.is_group() and not d.is_commutative()
    q = quaternion()
    assert q.size == 8 and q.is_group() and not q.is_commutative()
    with pytest.raises(BadParam):
        dihedral(4)
    with pytest.raises(BadParam):
        builtin("nope")


def test_dihedral_witnesses_give_a_squared_and_a_to_p_minus_2():
    for p in (3, 5):
        d = dihedral(p)
        a, b = d.element("a"), d.element("b")
        phi = {"x": d.product_of("ab"), "y": b, "z": d.identity}
        psi = {"x": a, "y": b, "z": d.identity}
        assert d.evaluate(letters("xyzxy"), phi) == d.power(a, 2)
        assert d.evaluate(letters("yxzyx"), phi) == d.power(a, p - 2)
        assert d.evaluate(letters("xyzyx"), psi) == d.power(a, 2)
        assert d.evaluate(letters("yxzxy"), psi) == d.power(a, p - 2)
        assert d.power(a, 2) != d.power(a, p - 2)


def test_satisfaction_of_the_two_identities():
    for idn in two_identities():
        assert quaternion().satisfies(idn).holds
        for p in (3, 5):
            res = dihedral(p).satisfies(idn)
            assert not res.holds
            m = dihedral(p)
            assert m.evaluate(idn.lhs, res.witness) != m.evaluate(idn.rhs, res.witness)


def test_satisfies_errors_and_trivial_case():
    b = brandt()
    assert b.satisfies(ident("x", "x")).holds
    with pytest.raises(TooManyVariables):
        b.satisfies(ident("abcdefghi", "ihgfedcba"))
    with pytest.raises(UnboundVariable):
        b.evaluate(letters("xy"), {"x": 0})


def test_index_and_period():
    assert trivial().index_and_period() == (1, 1)
    for k in (1, 2, 3, 4, 6):
        assert cyclic(k).index_and_period() == (1, k)
    assert brandt().index_and_period() == (2, 1)
    assert brandt().satisfies(ident("xx", "xxx")).holds
    assert not brandt().satisfies(ident("x", "xx")).holds


def test_bounded_isoterms():
    b = brandt()
    assert b.bounded_isoterm(letters("xyzxy"), 7) == IsotermUpTo(7)
    assert b.bounded_isoterm(letters("xyzyx"), 7) == IsotermUpTo(7)
    assert b.bounded_isoterm(letters("xx"), 3) == Counterexample(letters("xxx"))
    # candidates are tried shortest first, so the empty word is the first collapse in the trivial monoid
    assert trivial().bounded_isoterm(letters("xy"), 2) == Counterexample(())


def test_json_round_trip():
    for m in SMALL.values():
        again = FiniteMonoid.from_json(json.dumps(m.to_json()))
        assert np.array_equal(again.table, m.table) and again.names == m.names
    flat = {"names": ["1", "a"], "table": [0, 1, 1, 1], "identity": 0}
    assert FiniteMonoid.from_json(flat).size == 2


def test_generator_closure_checks_relations():
    with pytest.raises(MonoidError):
        from_generators({"a": 1}, lambda x, y: (x + y) % 3, 0, relations=[("aa", "1")])


def test_direct_product_satisfies_iff_both_factors_do():
    for left, right in itertools.combinations(["b21", "z3", "a21"], 2):
        m, n = SMALL[left], SMALL[right]
        prod = direct_product(m, n)
        assert prod.size == m.size * n.size
        for idn in five_identities():
            assert prod.satisfies(idn).holds == (m.satisfies(idn).holds and n.satisfies(idn).holds)


monoids = st.sampled_from(sorted(SMALL))


@given(monoids, words("xyz", max_size=5), words("xyz", max_size=5), st.data())
def test_evaluation_respects_concatenation(name, u, v, data):
    m = SMALL[name]
    asg = {x: data.draw(st.integers(0, m.size - 1)) for x in "xyz"}
    assert m.evaluate(u + v, asg) == m.mul(m.evaluate(u, asg), m.evaluate(v, asg))


@given(monoids, words("xyz", max_size=5), words("xyz", max_size=5), st.permutations("xyz"))
def test_satisfaction_is_invariant_under_renaming(name, u, v, perm):
    m = SMALL[name]
    ren = dict(zip("xyz", perm))
    renamed = Identity(tuple(ren[x] for x in u), tuple(ren[x] for x in v))
    assert m.satisfies(Identity(u, v)).holds == m.satisfies(renamed).holds


@given(monoids, words("xy", max_size=4), words("xy", max_size=4), words("xy", max_size=4))
def test_satisfaction_is_transitive(name, u, v, w):
    m = SMALL[name]
    if m.satisfies(Identity(u, v)).holds and m.satisfies(Identity(v, w)).holds:
        assert m.satisfies(Identity(u, w)).holds


@pytest.mark.parametrize("name", ["d3", "q8"])
def test_group_identities_cancel_common_prefix(name):
    g = SMALL[name] if name in SMALL else builtin(name)
    for idn in two_identities() + [ident("xyx", "yxx"), ident("xy", "yx")]:
        longer = Identity(("t",) + idn.lhs, ("t",) + idn.rhs)
        assert g.satisfies(idn).holds == g.satisfies(longer).holds
