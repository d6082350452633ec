import random
from math import comb

from hypothesis import given

from eqlogic.family import build_family
from eqlogic.matching import (BlockSearch, brute_force_matches, match_factor, match_whole, rewrite_sites,
                              split_difference)
from eqlogic.words import apply, letters

from strategies import words


def as_set(phis):
    return {tuple(sorted(phi.items())) for phi in phis}


def test_whole_examples():
    got = as_set(match_whole(letters("xy"), letters("ab")))
    assert got == as_set([{"x": (), "y": letters("ab")}, {"x": ("a",), "y": ("b",)}, {"x": letters("ab"), "y": ()}])
    assert list(match_whole(letters("xx"), letters("abab"))) == [{"x": letters("ab")}]
    assert list(match_whole(letters("xx"), letters("aba"))) == []
    assert list(match_whole((), ())) == [{}]
    assert list(match_whole(letters("xy"), letters("ab"), nonempty=True)) == [{"x": ("a",), "y": ("b",)}]


def test_factor_examples():
    ms = list(match_factor(("x",), letters("ab")))
    assert len(ms) == 6
    assert sum(1 for m in ms if m.substitution["x"] == ()) == 3
    ms = list(match_factor(letters("xyx"), letters("aba")))
    assert any(m.prefix == () and m.suffix == () and m.substitution == {"x": ("a",), "y": ("b",)} for m in ms)


def test_family_members_match_only_themselves_with_nonempty_images():
    fam = build_family(2)
    for u in fam:
        for v in fam:
            # with empty images any member matches any other, since simple letters absorb everything
            assert next(BlockSearch(u, v).solutions(), None) is not None
            strict = [sol.substitution() for sol in BlockSearch(u, v, keep=set(u), nonempty=True).solutions()]
            assert strict == ([{x: (x,) for x in set(u)}] if u == v else [])


def test_linear_pattern_counts_are_weak_compositions():
    for k in range(1, 4):
        pattern = tuple(f"x{i}" for i in range(k))
        for m in range(6):
            target = tuple("ab"[i % 2] for i in range(m))
            assert len(list(match_whole(pattern, target))) == comb(m + k - 1, k - 1)
            # a factor match is a whole match of the pattern with two extra linear variables
            assert len(list(match_factor(pattern, target))) == comb(m + k + 1, k + 1)


def test_matcher_agrees_with_brute_force_on_random_instances():
    rnd = random.Random(8)
    for _ in range(600):
        pattern = tuple(rnd.choice("xyz") for _ in range(rnd.randint(0, 4)))
        target = tuple(rnd.choice("ab") for _ in range(rnd.randint(0, 6)))
        whole = list(match_whole(pattern, target))
        assert len(whole) == len(as_set(whole))
        assert as_set(whole) == brute_force_matches(pattern, target)
        facs = {(m.span, tuple(sorted(m.substitution.items()))) for m in match_factor(pattern, target)}
        oracle = {((i, j), phi) for i in range(len(target) + 1) for j in range(i, len(target) + 1)
                  for phi in brute_force_matches(pattern, target[i:j])}
        assert facs == oracle


@given(words("xyz", max_size=4), words("ab", max_size=6))
def test_every_factor_match_reassembles(pattern, target):
    for m in match_factor(pattern, target):
        assert m.reassemble(pattern) == target
        assert target[m.span[0]:m.span[1]] == m.image(pattern)


@given(words("xyz", max_size=5), words("ab", max_size=7))
def test_block_search_finds_the_same_whole_matches(pattern, target):
    got = as_set(sol.substitution() for sol in BlockSearch(pattern, target, keep=set(pattern)).solutions())
    assert got == as_set(match_whole(pattern, target))


@given(words("xyz", max_size=5), words("ab", max_size=7))
def test_block_search_projection_covers_images(pattern, target):
    keep = {x for x in "xy" if x in pattern}
    expect = {tuple(sorted((x, phi[x]) for x in keep)) for phi in match_whole(pattern, target)}
    got = {tuple(sorted((x, s.env[x]) for x in keep))
           for s in BlockSearch(pattern, target, keep=keep).solutions(project=True)}
    assert got == expect


@given(words("xyz", min_size=1, max_size=4), words("xyz", min_size=1, max_size=4), words("ab", max_size=6))
def test_rewrite_sites_match_naive_enumeration(s, t, target):
    a, ds, dt = split_difference(s, t)
    if s == t or not set(t) <= set(s):
        return
    expect = set()
    for m in match_factor(s, target):
        phi = m.substitution
        if apply(phi, ds) != apply(phi, dt):
            start = len(m.prefix) + len(apply(phi, s[:a]))
            expect.add((start, start + len(apply(phi, ds)), apply(phi, dt)))
    got = {(site.start, site.end, apply(site.env, dt)) for site in rewrite_sites(s, t, target)}
    assert got == expect


def test_split_difference():
    assert split_difference(letters("xzytxy"), letters("xzytyx")) == (4, letters("xy"), letters("yx"))
    assert split_difference(letters("xx"), letters("x")) == (1, ("x",), ())
