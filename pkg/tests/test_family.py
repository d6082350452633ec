import itertools

import pytest
from hypothesis import given, strategies as st

from eqlogic.factor import FactorMonoid
from eqlogic.family import (BadN, DegreeMismatch, Permutation, SignVector, build_family, build_p, build_q, build_r,
                            build_w, c_words, embedding_substitution, expected_simple_vars, five_identities, middle,
                            sign_vectors, square_pullout_words, two_identities)
from eqlogic.monitors import unique_long_factors
from eqlogic.words import (Identity, apply, content, delete, format_word, ident, is_factor, is_square_free, letters,
                           multiple_vars, occ, parse_word, project, simple_vars)


def test_part_lengths_and_transcriptions():
    assert (len(build_p(2)), len(build_q(2)), len(build_r(2))) == (12, 7, 19)
    assert format_word(build_q(2)) == "s0 y0 s1 y1 s2 y2 t"
    assert build_r(2)[:3] == ("b", "y0", "x1_1")
    assert format_word(middle(2, SignVector.parse("00"))) == "a1 a2 a x1_1 x2_1 x1_2 x2_2 b b1 b2"
    assert format_word(middle(2, SignVector.parse("10"))) == "a1 a2 a x2_1 x1_1 x1_2 x2_2 b b1 b2"


def test_word_length_is_twenty_n_plus_eight():
    # the displayed products give 6n + (4n+2) + (2n+3) + (8n+3)
    for n in (2, 3, 4):
        assert {len(w) for w in build_family(n)} == {20 * n + 8}


def test_family_sizes_and_distinctness():
    assert len(build_family(2)) == 4
    assert len(build_family(3)) == 8
    fam = build_family(3)
    assert len(set(fam)) == 8


def test_bad_parameters():
    with pytest.raises(BadN):
        build_w(1, "0")
    with pytest.raises(BadN):
        SignVector.parse("012")
    with pytest.raises(DegreeMismatch):
        c_words(1, 1, 1, [1, 2])
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_sign_vector_encoding():
    xs = sign_vectors(2)
    assert [x.bits for x in xs] == ["00", "01", "10", "11"]
    assert [x.index for x in xs] == [0, 1, 2, 3]
    assert SignVector.parse("10").hamming(SignVector.parse("01")) == 2


def test_identity_lists():
    five = five_identities()
    assert five[0] == ident("xx", "xxx")
    assert five[3] == ident("xzxyty", "xzyxty")
    assert five[4] == ident("xzytxy", "xzytyx")
    assert two_identities() == [ident("xyzxy", "yxzyx"), ident("xyzyx", "yxzxy")]


@pytest.mark.parametrize("n", [2, 3])
def test_member_invariants(n):
    for w in build_family(n):
        assert len(content(w)) == 12 * n + 5
        assert simple_vars(w) == expected_simple_vars(n)
        assert len(simple_vars(w)) == 4 * n + 2
        assert all(occ(w, x) == 2 for x in multiple_vars(w))
        assert is_square_free(w)
        assert unique_long_factors(w)
        assert project(w, {"b", "s0", "t", "y0"}) == parse_word("b s0 y0 t b y0")
        assert occ(w, "a") == 2


def test_multiple_variables_at_n2():
    assert sorted(multiple_vars(build_w(2, "00"))) == [
        "a", "a1", "a2", "b", "b1", "b2", "x1_1", "x1_2", "x2_1", "x2_2",
        "y0", "y1", "y2", "z1", "z2", "zp1", "zp2", "zpp1", "zpp2"]


def test_middle_pairs_project_to_xyt_then_square_factor():
    w = build_w(2, "01")
    for x, y in (("x1_1", "x2_1"), ("x2_2", "x1_2"), ("x1_1", "x1_2")):
        tail = project(w, {x, y, "t"})
        assert tail[:3] == (x, y, "t") and tail[3:] in ((x, y), (y, x))


@pytest.mark.parametrize("xi,eta", [("00", "11"), ("01", "10"), ("010", "111"), ("000", "100")])
def test_deleting_differing_pairs_equalises(xi, eta):
    n = len(xi)
    diff = {f"x{j}_{i + 1}" for i in range(n) if xi[i] != eta[i] for j in (1, 2)}
    assert delete(build_w(n, xi), diff) == delete(build_w(n, eta), diff)


def test_projection_onto_five_letters_is_xytzsxzy_up_to_renaming():
    for n in (2, 3):
        for w in build_family(n):
            for i in range(1, n):
                keep = {f"a{i}", f"a{i + 1}", f"s{i}", "t", f"y{i}"}
                u = project(w, keep)
                rename = {f"a{i}": "x", f"a{i + 1}": "y", f"s{i}": "t", f"y{i}": "z", "t": "s"}
                assert tuple(rename[x] for x in u) == letters("xytzsxzy")


def test_c_words_transcription():
    c, cp = c_words(1, 1, 1, Permutation.identity(3))
    assert format_word(c) == "z1 t1 x y t z2 t2 x z1 z2 z3 y t3 z3"
    assert format_word(cp) == "z1 t1 y x t z2 t2 x z1 z2 z3 y t3 z3"


@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2), st.randoms(use_true_random=False))
def test_c_words_shape(n, m, k, rnd):
    rho = list(range(1, n + m + k + 1))
    rnd.shuffle(rho)
    c, cp = c_words(n, m, k, rho)
    assert content(c) == content(cp) and len(c) == len(cp)
    diff = [p for p in range(len(c)) if c[p] != cp[p]]
    assert len(diff) == 2 and {c[diff[0]], c[diff[1]]} == {"x", "y"}
    twice = {"x", "y"} | {f"z{i}" for i in range(1, n + m + k + 1)}
    assert all(occ(c, v) == (2 if v in twice else 1) for v in content(c))


def test_c_and_square_pullout_identities_hold_in_reference_monoid():
    ref = FactorMonoid([letters("xzytxy")])
    for n, m, k in itertools.product((1, 2), repeat=3):
        for rho in itertools.permutations(range(1, n + m + k + 1)):
            assert ref.decide(Identity(*c_words(n, m, k, rho))).holds
    for n, m in itertools.product((1, 2), repeat=2):
        for rho in itertools.permutations(range(1, n + m + 1)):
            assert ref.decide(Identity(*square_pullout_words(n, m, rho))).holds


def test_family_factor_monoid_violates_smallest_c_identity():
    # Sending z1, z3, t1, t3 to 1 turns c = c' into xytzsxzy = yxtzsxzy, and
    # xytzsxzy embeds into w_00, so M(W_2) separates the two sides.
    fm = FactorMonoid(build_family(2))
    for rho in itertools.permutations((1, 2, 3)):
        assert not fm.decide(Identity(*c_words(1, 1, 1, rho))).holds


def test_embedding_substitution():
    for n in (2, 3):
        phi = embedding_substitution(n)
        assert phi["x"] == ("x2_1",)
        assert phi["z"] == ("y1",)
        assert is_factor(apply(phi, letters("xytzsxzy")), build_w(n, "0" * n))
