"""Exhaustive monitors for the structural claims about the family w_xi.

Each monitor enumerates the words a claim quantifies over (built from
w_zeta by inserting fresh letters, replacing letters or factors, or
taking factors), keeps those that satisfy the claim's hypotheses, and
checks the conclusion against every nontrivial one-step rewrite by the
identities w_xi = w_eta.  Hypotheses are re-checked on the constructed
word, so generators may over-produce.

The claims also allow steps that hold in M(W_n); those are covered by the
isoterm property of W_n (a word of W_n can only be rewritten inside the
identities themselves) and are not enumerated here.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .family import SignVector, build_family, build_w, sign_vectors
from .matching import rewrite_sites
from .rewrite import IdentitySet, direct_deductions
from .words import (Identity, Word, block_index, blocks, delete, format_word, is_block_linear,
                    multiple_vars, occurrence_indices, occurrence_position, simple_vars)


class GeneratorOverflow(RuntimeError):
    pass


class UnknownMonitor(ValueError):
    pass


MONITORS = ("directly", "u_C", "u_ch", "adj_2x2c2y", "adj_1x1c1y", "cor_ix1hiy",
            "adj_2c1c2", "adj_1c1c2", "fic_class", "three_isoterms")

DEFAULT_MAX_INSTANCES = 200_000


@dataclass
class MonitorReport:
    name: str
    n: int
    instances: int
    generated: int
    violations: list = field(default_factory=list)
    elapsed: float = 0.0
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        d = asdict(self)
        d["elapsed"] = round(self.elapsed, 3)
        return d


@dataclass(frozen=True)
class Instance:
    zeta: str
    word: Word
    fresh: frozenset  # letters to delete to recover w_zeta (empty for the isoterm/class checks)
    note: str = ""


def upsilon(n: int) -> IdentitySet:
    ws = build_family(n)
    return IdentitySet([Identity(ws[i], ws[j]) for i in range(len(ws)) for j in range(i + 1, len(ws))])


# --- word surgery helpers ------------------------------------------------------

def insert(w: Word, items: Sequence[tuple[int, str]]) -> Word:
    """Insert letters before the given gap indices; ties keep the listed order."""
    out: list[str] = []
    order = sorted(range(len(items)), key=lambda k: (items[k][0], k))
    it = 0
    for g in range(len(w) + 1):
        while it < len(order) and items[order[it]][0] == g:
            out.append(items[order[it]][1])
            it += 1
        if g < len(w):
            out.append(w[g])
    return tuple(out)


def unique_long_factors(u: Word) -> bool:
    seen = set()
    for i in range(len(u) - 1):
        f = u[i:i + 2]
        if f in seen:
            return False
        seen.add(f)
    return True  # a repeated longer factor repeats its first two letters


def pos(u: Word, x: str, i: int) -> int:
    return occurrence_position(u, x, i)


def adjacent(p: int, q: int) -> bool:
    return abs(p - q) == 1


def same_block(u: Word, p: int, q: int) -> bool:
    b = block_index(u)
    return b[p] is not None and b[p] == b[q]


def forms_block(u: Word, p: int) -> bool:
    sim = simple_vars(u)
    left = p == 0 or u[p - 1] in sim
    right = p == len(u) - 1 or u[p + 1] in sim
    return u[p] not in sim and left and right


def simple_between(u: Word, p: int, q: int) -> bool:
    sim = simple_vars(u)
    return any(u[k] in sim for k in range(min(p, q) + 1, max(p, q)))


def adjacent_pairs(w: Word, index: int) -> list[int]:
    """Gaps g (between w[g-1] and w[g]) flanked by two multiple letters, both at occurrence ``index``."""
    mul = multiple_vars(w)
    occ = occurrence_indices(w)
    return [g for g in range(1, len(w))
            if w[g - 1] in mul and w[g] in mul and occ[g - 1] == index and occ[g] == index]


# --- hypotheses ---------------------------------------------------------------

def hyp_u_C(u: Word, c_set: Iterable[str], n: int) -> bool:
    if not unique_long_factors(u):
        return False
    a1, bn = pos(u, "a1", 1), pos(u, f"b{n}", 1)
    b2, a2 = pos(u, "b", 2), pos(u, "a", 2)
    if simple_between(u, a1, bn) or simple_between(u, b2, a2):
        return False
    for c in c_set:
        ps = [k for k, x in enumerate(u) if x == c]
        if ps and a1 < ps[0] < bn:
            return True
        if len(ps) > 1 and b2 < ps[1] < a2:
            return True
    return False


def hyp_u_ch(u: Word, w: Word) -> bool:
    c, h = "c", "h"
    if not is_block_linear(u) or u.count(c) != 2 or u.count(h) != 1:
        return False
    mul_w = multiple_vars(w)
    for i, j in ((1, 2), (2, 1)):
        p = pos(u, c, i)
        if 0 < p < len(u) - 1:
            x, y = u[p - 1], u[p + 1]
            if x in mul_w and y in mul_w and occurrence_indices(u)[p - 1] == i \
                    and occurrence_indices(u)[p + 1] == i and forms_block(u, pos(u, c, j)):
                return True
    return False


def hyp_adj_2x2c2y(u: Word, n: int) -> bool:
    c = "c"
    if not is_block_linear(u) or u.count(c) != 2:
        return False
    p1, p2 = pos(u, c, 1), pos(u, c, 2)
    if p2 in (0, len(u) - 1):
        return False
    x, y = u[p2 - 1], u[p2 + 1]
    occ = occurrence_indices(u)
    if x == c or y == c or u.count(x) != 2 or u.count(y) != 2 or occ[p2 - 1] != 2 or occ[p2 + 1] != 2:
        return False
    x1, y1 = pos(u, x, 1), pos(u, y, 1)
    if x != "b" and y != "a" and not adjacent(p1, x1) and not adjacent(p1, y1):
        return True
    if x == "b" and not same_block(u, p1, x1) and not adjacent(p1, y1):
        return True
    if y == "a" and not same_block(u, p1, y1) and not adjacent(p1, x1):
        return True
    return False


def hyp_adj_1x1c1y(u: Word, w: Word) -> bool:
    c = "c"
    if not is_block_linear(u) or u.count(c) != 2:
        return False
    p1, p2 = pos(u, c, 1), pos(u, c, 2)
    if p1 in (0, len(u) - 1):
        return False
    x, y = u[p1 - 1], u[p1 + 1]
    mul_w = multiple_vars(w)
    if x not in mul_w or y not in mul_w:
        return False
    occ = occurrence_indices(u)
    if occ[p1 - 1] != 1 or occ[p1 + 1] != 1:
        return False
    return not adjacent(p2, pos(u, x, 2)) and not adjacent(p2, pos(u, y, 2))


def hyp_cor(u: Word) -> bool:
    h = "h"
    if u.count(h) != 1:
        return False
    p = u.index(h)
    if p in (0, len(u) - 1):
        return False
    mul = multiple_vars(u)
    return u[p - 1] in mul and u[p + 1] in mul and u[p - 1] != u[p + 1]


def hyp_adj_2c1c2(u: Word, w: Word) -> bool:
    c1, c2 = "c1", "c2"
    if u.count(c1) != 2 or u.count(c2) != 2:
        return False
    q1, q2 = pos(u, c1, 2), pos(u, c2, 2)
    if q2 != q1 + 1 or q1 == 0 or q2 == len(u) - 1:
        return False
    x, y = u[q1 - 1], u[q2 + 1]
    mul_w = multiple_vars(w)
    occ = occurrence_indices(u)
    if x not in mul_w or y not in mul_w or occ[q1 - 1] != 2 or occ[q2 + 1] != 2:
        return False
    return same_block(u, pos(u, c1, 1), pos(u, y, 1)) and same_block(u, pos(u, c2, 1), pos(u, x, 1))


def hyp_adj_1c1c2(u: Word, w: Word) -> bool:
    c1, c2 = "c1", "c2"
    if u.count(c1) != 2 or u.count(c2) != 2:
        return False
    p1, p2 = pos(u, c1, 1), pos(u, c2, 1)
    if p2 != p1 + 1 or p1 == 0 or p2 == len(u) - 1:
        return False
    x, y = u[p1 - 1], u[p2 + 1]
    mul_w = multiple_vars(w)
    occ = occurrence_indices(u)
    if x not in mul_w or y not in mul_w or occ[p1 - 1] != 1 or occ[p2 + 1] != 1:
        return False
    return adjacent(pos(u, c1, 2), pos(u, y, 2)) and adjacent(pos(u, c2, 2), pos(u, x, 2))


# --- generators ---------------------------------------------------------------

def _zetas(n: int, zetas: Iterable[str] | None) -> list[SignVector]:
    if zetas is None:
        return sign_vectors(n)
    return [SignVector.parse(z) for z in zetas]


def gen_u_C(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for p in range(len(w) + 1):
            for q in range(p, len(w) + 1):
                u = insert(w, [(p, "c"), (q, "c")])
                if hyp_u_C(u, {"c"}, n):
                    yield Instance(z.bits, u, frozenset({"c"}), f"c at gaps {p},{q}")


def gen_u_ch(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        sim = simple_vars(w)
        for i in (1, 2):
            for g in adjacent_pairs(w, i):
                for g2 in range(len(w) + 1):
                    before_simple = g2 == 0 or w[g2 - 1] in sim
                    after_simple = g2 == len(w) or w[g2] in sim
                    options = []
                    if after_simple:
                        options.append([(g2, "h"), (g2, "c")])
                    if before_simple:
                        options.append([(g2, "c"), (g2, "h")])
                    for extra in options:
                        u = insert(w, [(g, "c")] + extra if g <= g2 else extra + [(g, "c")])
                        if hyp_u_ch(u, w):
                            yield Instance(z.bits, u, frozenset({"c", "h"}), f"c at gap {g}, block c at {g2}")


def gen_adj_2x2c2y(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for g in adjacent_pairs(w, 2):
            for g1 in range(g + 1):
                u = insert(w, [(g1, "c"), (g, "c")])
                if hyp_adj_2x2c2y(u, n):
                    yield Instance(z.bits, u, frozenset({"c"}), f"c at gaps {g1},{g}")


def gen_adj_1x1c1y(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for g in adjacent_pairs(w, 1):
            for g2 in range(g, len(w) + 1):
                u = insert(w, [(g, "c"), (g2, "c")])
                if hyp_adj_1x1c1y(u, w):
                    yield Instance(z.bits, u, frozenset({"c"}), f"c at gaps {g},{g2}")


def gen_cor(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for g in range(1, len(w)):
            u = insert(w, [(g, "h")])
            if hyp_cor(u):
                yield Instance(z.bits, u, frozenset({"h"}), f"h at gap {g}")


def _block_gaps(w: Word, p: int) -> range:
    for _, (s, e) in blocks(w):
        if s <= p < e:
            return range(s, e + 1)
    return range(p, p + 1)


def gen_adj_2c1c2(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for g in adjacent_pairs(w, 2):
            x, y = w[g - 1], w[g]
            seen = set()
            for g1 in _block_gaps(w, pos(w, y, 1)):
                for g2 in _block_gaps(w, pos(w, x, 1)):
                    for firsts in ([(g1, "c1"), (g2, "c2")], [(g2, "c2"), (g1, "c1")]):
                        u = insert(w, firsts + [(g, "c1"), (g, "c2")])
                        if u in seen:
                            continue
                        seen.add(u)
                        if hyp_adj_2c1c2(u, w):
                            yield Instance(z.bits, u, frozenset({"c1", "c2"}), f"x y = {x} {y}")


def gen_adj_1c1c2(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        for g in adjacent_pairs(w, 1):
            x, y = w[g - 1], w[g]
            py, px = pos(w, y, 2), pos(w, x, 2)
            seen = set()
            for g1 in (py, py + 1):
                for g2 in (px, px + 1):
                    for order in ((0, 1), (1, 0)):
                        later = [(g1, "c1"), (g2, "c2")]
                        later = [later[k] for k in order]
                        u = insert(w, [(g, "c1"), (g, "c2")] + later)
                        if u not in seen:
                            seen.add(u)
                            if hyp_adj_1c1c2(u, w):
                                yield Instance(z.bits, u, frozenset({"c1", "c2"}), f"x y = {x} {y}")


def gen_three_isoterms(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        w = build_w(n, z)
        mul = multiple_vars(w)
        seen: set[Word] = set()

        def fresh(word: Word, note: str):
            if word not in seen:
                seen.add(word)
                yield Instance(z.bits, word, frozenset(), note)

        for p, x in enumerate(w):
            if x in mul:
                yield from fresh(w[:p] + ("h",) + w[p + 1:], f"(i) position {p}")
        for i in range(len(w)):
            for j in range(i + 2, len(w) + 1):
                yield from fresh(w[:i] + ("h",) + w[j:], f"(ii) factor {i}:{j}")
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                if (i, j) != (0, len(w)):
                    yield from fresh(w[i:j], f"(iii) factor {i}:{j}")


def gen_fic(n: int, zetas) -> Iterator[Instance]:
    for z in _zetas(n, zetas):
        yield Instance(z.bits, build_w(n, z), frozenset(), "")


GENERATORS: dict[str, Callable] = {
    "u_C": gen_u_C,
    "u_ch": gen_u_ch,
    "adj_2x2c2y": gen_adj_2x2c2y,
    "adj_1x1c1y": gen_adj_1x1c1y,
    "cor_ix1hiy": gen_cor,
    "adj_2c1c2": gen_adj_2c1c2,
    "adj_1c1c2": gen_adj_1c1c2,
    "three_isoterms": gen_three_isoterms,
    "fic_class": gen_fic,
}


# --- checks -------------------------------------------------------------------

def check_instance(name: str, n: int, inst: Instance) -> list[str]:
    """Violations for one instance (empty list when the conclusion holds)."""
    sigma = upsilon(n)
    steps = direct_deductions(inst.word, sigma)
    bad = []
    if name == "three_isoterms":
        for st in steps:
            bad.append(f"{format_word(inst.word)} -> {format_word(st.result)}")
    elif name == "fic_class":
        family = set(build_family(n))
        for st in steps:
            if st.result not in family:
                bad.append(f"w_{inst.zeta} -> {format_word(st.result)}")
    else:
        target = build_w(n, inst.zeta)
        for st in steps:
            if delete(st.result, inst.fresh) != target:
                bad.append(f"{format_word(inst.word)} -> {format_word(st.result)}")
    return bad


def check_directly(n: int, zeta: str, xi: str, eta: str) -> list[str]:
    """Every rewrite of w_zeta by w_xi = w_eta is the whole-word identity substitution."""
    wz, wx, we = build_w(n, zeta), build_w(n, xi), build_w(n, eta)
    alpha, beta = "_pre", "_suf"
    keep = multiple_vars(wx) | {alpha, beta}
    bad = []
    for site in rewrite_sites(wx, we, wz, extra_keep=keep, wrap=(alpha, beta)):
        phi = site.solution.substitution()
        ident = all(phi[x] == (x,) for x in set(wx))
        if not (ident and phi[alpha] == () and phi[beta] == () and zeta == xi):
            bad.append(f"zeta={zeta} xi={xi} eta={eta}: non-identity match")
            continue
        gaps_single = all(
            sum(1 for x in wx[s:e] if x not in keep) <= 1
            for s, e in _free_runs(wx, keep))
        if not gaps_single:
            bad.append(f"zeta={zeta} xi={xi} eta={eta}: ambiguous gap")
    return bad


def _free_runs(w: Word, keep: set[str]) -> list[tuple[int, int]]:
    runs = []
    p = 0
    while p < len(w):
        if w[p] in keep:
            p += 1
            continue
        q = p
        while q < len(w) and w[q] not in keep:
            q += 1
        runs.append((p, q))
        p = q
    return runs


def select(items: list, limit: int | None) -> list:
    """Evenly spaced deterministic sample of at most ``limit`` items."""
    if limit is None or limit <= 0 or limit >= len(items):
        return items
    step = len(items) / limit
    return [items[int(k * step)] for k in range(limit)]


def workers() -> int:
    try:
        return max(1, int(os.environ.get("WORKBENCH_THREADS", "1")))
    except ValueError:
        return 1


def _run_one(args):
    name, n, inst = args
    return check_instance(name, n, inst)


def monitor_lemma(name: str, n: int = 2, zetas: Iterable[str] | None = None, limit: int | None = None,
                  max_instances: int = DEFAULT_MAX_INSTANCES) -> MonitorReport:
    """Run one monitor; ``limit`` picks an evenly spaced subset of the generated instances."""
    if name not in MONITORS:
        raise UnknownMonitor(f"unknown monitor {name!r}; choose from {', '.join(MONITORS)}")
    t0 = time.perf_counter()
    if name == "directly":
        zs = [z.bits for z in _zetas(n, zetas)]
        allv = [z.bits for z in sign_vectors(n)]
        triples = [(z, x, e) for z in zs for x in allv for e in allv if x != e]
        chosen = select(triples, limit)
        violations = []
        for z, x, e in chosen:
            violations += check_directly(n, z, x, e)
        return MonitorReport(name, n, len(chosen), len(triples), violations,
                             time.perf_counter() - t0, len(chosen) == len(triples))
    gen = GENERATORS[name](n, zetas)
    instances = []
    for inst in gen:
        instances.append(inst)
        if len(instances) > max_instances:
            raise GeneratorOverflow(f"{name} generated more than {max_instances} instances")
    chosen = select(instances, limit)
    violations: list[str] = []
    k = workers()
    if k > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(max_workers=k) as ex:
            for bad in ex.map(_run_one, [(name, n, inst) for inst in chosen]):
                violations += bad
    else:
        for inst in chosen:
            violations += check_instance(name, n, inst)
    return MonitorReport(name, n, len(chosen), len(instances), violations,
                         time.perf_counter() - t0, len(chosen) == len(instances))
