"""Named verification checks, aggregated by ``verify all``.

Each check returns a CheckRecord; a check that raises is recorded as a
failure with the exception text, so one broken component cannot hide the
others.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .corpus import reduction_corpus
from .factor import FactorMonoid, brute_force_decide, decide_identity, is_isoterm_for_factor_monoid
from .family import build_family, embedding_substitution, five_identities, two_identities
from .lattice import (Partition, all_partitions, check_antiisomorphism_proxy, embed_lattice, eq_lattice,
                      id_set, m3, n5)
from .matching import brute_force_matches, match_factor, match_whole
from .monitors import MONITORS, monitor_lemma, unique_long_factors
from .monoid import Counterexample, FiniteMonoid, IsotermUpTo, MonoidError, builtin
from .rewrite import REFERENCE_WORD, reduce_identity
from .words import (Identity, apply, format_word, is_factor, is_reduced_word_pair, is_square_free, letters,
                    project)

PASS, FAIL, OPEN = "pass", "fail", "no-within-caps"


@dataclass
class CheckRecord:
    name: str
    status: str
    counts: dict = field(default_factory=dict)
    witness: object = None
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "counts": self.counts,
                "witness": self.witness, "elapsed_ms": round(self.elapsed_ms, 1)}


def run_check(name: str, fn: Callable[[], tuple[bool, dict, object]]) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        ok, counts, witness = fn()
        status = PASS if ok else FAIL
    except Exception as exc:  # a crashing check is a failed check
        status, counts, witness = FAIL, {}, f"{type(exc).__name__}: {exc}"
    return CheckRecord(name, status, counts, witness, (time.perf_counter() - t0) * 1000)


# --- individual checks -------------------------------------------------------

def _relations_hold(m: FiniteMonoid, relations: Mapping[str, str]) -> list[str]:
    return [f"{l}={r}" for l, r in relations.items() if m.product_of(l) != m.product_of(r)]


def check_builtin_monoids(monoids: Mapping[str, FiniteMonoid]) -> tuple[bool, dict, object]:
    bad = []
    for name, m in monoids.items():
        try:
            m.validate()
        except MonoidError as exc:
            bad.append(f"{name}: {exc}")
    b21, a21 = monoids["b21"], monoids["a21"]
    for name, m, rel in (("b21", b21, {"aba": "a", "bab": "b", "aa": "0", "bb": "0"}),
                         ("a21", a21, {"aba": "a", "bab": "b", "aa": "0", "bb": "b"})):
        if m.size != 6:
            bad.append(f"{name} has {m.size} elements")
        bad += [f"{name}: {r}" for r in _relations_hold(m, rel)]
    for p in (3, 5):
        d = monoids[f"d{p}"]
        if d.size != 2 * p or d.is_commutative():
            bad.append(f"d{p}: size {d.size}, commutative={d.is_commutative()}")
    if monoids["q8"].size != 8:
        bad.append(f"q8 has {monoids['q8'].size} elements")
    return not bad, {name: m.size for name, m in monoids.items()}, bad or None


def check_group_identities(monoids: Mapping[str, FiniteMonoid]) -> tuple[bool, dict, object]:
    """Q8 satisfies both identities; D3 and D5 violate both, via x->ab / x->a with y->b."""
    bad = []
    ids = two_identities()
    for idn in ids:
        if not monoids["q8"].satisfies(idn).holds:
            bad.append(f"q8 violates {idn}")
    for p in (3, 5):
        d = monoids[f"d{p}"]
        a = d.element("a")
        want = (d.power(a, 2), d.power(a, p - 2))
        for idn, x_image in zip(ids, ("ab", "a")):
            if d.satisfies(idn).holds:
                bad.append(f"d{p} satisfies {idn}")
            asg = {"x": d.product_of(x_image), "y": d.product_of("b"), "z": d.identity}
            got = (d.evaluate(idn.lhs, asg), d.evaluate(idn.rhs, asg))
            if got != want:
                bad.append(f"d{p}: x->{x_image}, y->b gives {[d.names[g] for g in got]}")
    return not bad, {"identities": len(ids)}, bad or None


def check_brandt_isoterms(monoids: Mapping[str, FiniteMonoid]) -> tuple[bool, dict, object]:
    b21 = monoids["b21"]
    got = {w: b21.bounded_isoterm(letters(w), 7) for w in ("xyzxy", "xyzyx")}
    sq = b21.bounded_isoterm(letters("xx"), 3)
    ok = all(r == IsotermUpTo(7) for r in got.values()) and sq == Counterexample(letters("xxx"))
    witness = None if ok else {w: repr(r) for w, r in {**got, "xx": sq}.items()}
    return ok, {"words": 3}, witness


def check_factor_decisions() -> tuple[bool, dict, object]:
    fam = build_family(2)
    m = FactorMonoid([letters("xytzsxzy")])
    bad = [f"{i}{j}" for i in range(4) for j in range(4) if not decide_identity(m, Identity(fam[i], fam[j])).holds]
    m2 = FactorMonoid([letters("xyzxy"), letters("xyzyx")])
    verdicts = [decide_identity(m2, idn).holds for idn in five_identities()]
    ok = not bad and verdicts == [True, True, True, True, False]
    sub = embedding_substitution(2)
    image = apply(sub, letters("xytzsxzy"))
    emb = is_factor(image, fam[0])
    return ok and emb, {"family_pairs": 16, "five_identities": verdicts}, (bad or None) if ok else {
        "failing_pairs": bad, "verdicts": verdicts, "substitution_embeds": emb}


def check_directly(n: int) -> tuple[bool, dict, object]:
    rep = monitor_lemma("directly", n)
    return rep.ok and rep.exhaustive, {"instances": rep.instances}, rep.violations[:5] or None


def check_classes(n: int) -> tuple[bool, dict, object]:
    rep = check_antiisomorphism_proxy(n)
    counts = {"partitions": len(rep.partitions), "distinct_class_systems": len(set(rep.class_systems))}
    return rep.ok, counts, rep.mismatches[:5] or None


def random_word_set(rng: random.Random, total: int = 6) -> list:
    words, left = [], rng.randint(1, total)
    while left > 0:
        k = rng.randint(1, left)
        words.append(tuple(rng.choice("abc") for _ in range(k)))
        left -= k
    return words


def random_identity(rng: random.Random, max_vars: int = 3, max_len: int = 4) -> Identity:
    names = "xyz"[:rng.randint(1, max_vars)]
    side = lambda: tuple(rng.choice(names) for _ in range(rng.randint(0, max_len)))  # noqa: E731
    return Identity(side(), side())


def check_decide_cross_validation(trials: int = 200, seed: int = 7) -> tuple[bool, dict, object]:
    rng = random.Random(seed)
    bad = []
    holds = 0
    for _ in range(trials):
        fm = FactorMonoid(random_word_set(rng))
        idn = random_identity(rng)
        fast, slow = decide_identity(fm, idn), brute_force_decide(fm, idn)
        holds += fast.holds
        if fast.holds != slow.holds:
            bad.append(f"{[format_word(w) for w in fm.words]}: {idn}")
    return not bad, {"instances": trials, "hold": holds}, bad[:5] or None


def check_matcher_cross_validation(trials: int = 500, seed: int = 11) -> tuple[bool, dict, object]:
    rng = random.Random(seed)
    bad = []
    total = 0
    for _ in range(trials):
        pat = tuple(rng.choice("xyz") for _ in range(rng.randint(0, 4)))
        tgt = tuple(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        ref = brute_force_matches(pat, tgt)
        got = {tuple(sorted(phi.items())) for phi in match_whole(pat, tgt)}
        ref_f = {(i, j, s) for i in range(len(tgt) + 1) for j in range(i, len(tgt) + 1)
                 for s in brute_force_matches(pat, tgt[i:j])}
        got_f = {(m.span[0], m.span[1], tuple(sorted(m.substitution.items()))) for m in match_factor(pat, tgt)}
        total += len(ref)
        if got != ref or got_f != ref_f:
            bad.append(f"{format_word(pat)} in {format_word(tgt)}")
    return not bad, {"instances": trials, "whole_matches": total}, bad[:5] or None


def family_invariant_failures(n: int, length: int) -> list[str]:
    fam = build_family(n)
    bad = []
    if len(fam) != 2 ** n:
        bad.append(f"{len(fam)} words")
    target = ("b", "s0", "y0", "t", "b", "y0")
    for k, w in enumerate(fam):
        if len(w) != length:
            bad.append(f"word {k} has length {len(w)}")
        if len(set(w)) != 12 * n + 5:
            bad.append(f"word {k} has {len(set(w))} letters")
        if not is_square_free(w):
            bad.append(f"word {k} has a square")
        if not unique_long_factors(w):
            bad.append(f"word {k} repeats a long factor")
        if project(w, {"b", "s0", "t", "y0"}) != target:
            bad.append(f"word {k} projects wrongly")
    return bad


def check_family(n: int) -> tuple[bool, dict, object]:
    bad = family_invariant_failures(n, 20 * n + 8)
    return not bad, {"n": n, "words": 2 ** n, "length": 20 * n + 8}, bad or None


def check_reduction_corpus() -> tuple[bool, dict, object]:
    ref = FactorMonoid([REFERENCE_WORD])
    bad = []
    steps = 0
    for idn in reduction_corpus():
        if not ref.decide(idn).holds:
            bad.append(f"{idn} does not hold")
            continue
        red = reduce_identity(idn)
        steps += len(red.steps)
        if not (red.replay() and is_reduced_word_pair(red.reduced.lhs, red.reduced.rhs)):
            bad.append(f"{idn}: bad certificate")
        for st in red.steps:
            if st.kind != "delete" and not ref.decide(st.as_identity()).holds:
                bad.append(f"{idn}: step {st.kind} fails in M(xzytxy)")
        # a deletion substitutes 1 for the dropped letters, so the normal form must hold too
        if not ref.decide(red.reduced).holds:
            bad.append(f"{idn}: normal form {red.reduced} fails in M(xzytxy)")
    return not bad, {"identities": len(reduction_corpus()), "steps": steps}, bad or None


def check_lattices() -> tuple[bool, dict, object]:
    bell = [1, 1, 2, 5, 15, 52, 203]
    bad = [f"|Eq({k})|" for k in range(7) if len(all_partitions(k)) != bell[k]]
    for k in range(6):
        lat, _ = eq_lattice(k)
        bad += [f"Eq({k}) {a}" for a in lat.axiom_failures()]
    e3 = embed_lattice(m3(), 3)
    if not (e3 and e3.verify(m3())):
        bad.append("M3 into Eq(3)")
    found = next((embed_lattice(n5(), k) for k in range(1, 6) if embed_lattice(n5(), k)), None)
    if not (found and found.verify(n5())):
        bad.append("N5 not embedded for n <= 5")
    if len(id_set(Partition.universal(4), 2).nontrivial()) != 6:
        bad.append("Id(universal) size")
    return not bad, {"n5_smallest_n": found.n if found else None}, bad or None


def check_family_isoterms(n: int) -> tuple[bool, dict, object]:
    fam = build_family(n)
    fm = FactorMonoid(fam)
    bad = [k for k, w in enumerate(fam) if is_isoterm_for_factor_monoid(fm, w, len(w)) != IsotermUpTo(len(w))]
    bad += [f"{i}={j}" for i in range(len(fam)) for j in range(len(fam))
            if i != j and decide_identity(fm, Identity(fam[i], fam[j])).holds]
    return not bad, {"words": len(fam), "size": fm.size}, bad or None


def check_monitor_sample(name: str, n: int, limit: int) -> tuple[bool, dict, object]:
    rep = monitor_lemma(name, n, limit=limit)
    return rep.ok, {"instances": rep.instances, "generated": rep.generated}, rep.violations[:5] or None


# --- aggregation -------------------------------------------------------------

def default_monoids() -> dict[str, FiniteMonoid]:
    return {name: builtin(name) for name in ("b21", "a21", "d3", "d5", "q8")}


def verification_plan(n: int = 2, profile: str = "fast",
                      monoids: Mapping[str, FiniteMonoid] | None = None) -> list[tuple[str, Callable]]:
    ms = {**default_monoids(), **(monoids or {})}
    plan: list[tuple[str, Callable]] = [
        ("builtin_monoids", lambda: check_builtin_monoids(ms)),
        ("group_identities", lambda: check_group_identities(ms)),
        ("brandt_isoterms", lambda: check_brandt_isoterms(ms)),
        ("factor_monoid_decisions", check_factor_decisions),
        ("whole_word_deductions", lambda: check_directly(n)),
        ("deduction_classes", lambda: check_classes(n)),
        ("decide_cross_validation", check_decide_cross_validation),
        ("matcher_cross_validation", check_matcher_cross_validation),
        (f"family_invariants_n{n}", lambda: check_family(n)),
        ("reduction_corpus", check_reduction_corpus),
        ("partition_lattices", check_lattices),
    ]
    if profile == "full":
        plan.append(("family_invariants_n3", lambda: check_family(3)))
        plan.append((f"family_isoterms_n{n}", lambda: check_family_isoterms(n)))
        plan += [(f"monitor_{m}", lambda m=m: check_monitor_sample(m, n, 12)) for m in MONITORS if m != "directly"]
    return plan


def run_plan(plan) -> list[CheckRecord]:
    return [run_check(name, fn) for name, fn in plan]
