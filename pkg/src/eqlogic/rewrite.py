"""One-step deduction, bounded deduction closure, and identity normalisation."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .factor import FactorMonoid
from .family import five_identities
from .matching import Match, rewrite_sites, split_difference
from .words import (Identity, Word, apply, block_index, blocks, delete, islands, is_linear_balanced,
                    is_reduced_word_pair, letters, multiple_vars, occurrence_indices, simple_vars)


class CapExceeded(RuntimeError):
    def __init__(self, message: str, partial: set):
        super().__init__(message)
        self.partial = partial


class NotReducible(ValueError):
    pass


@dataclass(frozen=True)
class IdentitySet:
    identities: tuple[Identity, ...]
    closed_under_symmetry: bool = True

    def __init__(self, identities: Iterable[Identity], closed_under_symmetry: bool = True):
        ids: list[Identity] = []
        for i in identities:
            if i not in ids and not (closed_under_symmetry and i.reversed() in ids):
                ids.append(i)
        object.__setattr__(self, "identities", tuple(ids))
        object.__setattr__(self, "closed_under_symmetry", closed_under_symmetry)

    def __iter__(self) -> Iterator[Identity]:
        return iter(self.identities)

    def __len__(self) -> int:
        return len(self.identities)

    def nontrivial(self) -> list[Identity]:
        return [i for i in self.identities if i.nontrivial]

    def directed(self) -> list[tuple[Word, Word]]:
        """Rewrite rules: both orientations when symmetric, else lhs -> rhs only."""
        out: list[tuple[Word, Word]] = []
        for i in self.identities:
            pairs = ((i.lhs, i.rhs), (i.rhs, i.lhs)) if self.closed_under_symmetry else ((i.lhs, i.rhs),)
            for pair in pairs:
                if pair[0] != pair[1] and pair not in out:
                    out.append(pair)
        return out


@dataclass(frozen=True)
class DeductionStep:
    source: Word
    result: Word
    identity: Identity  # oriented so that source = prefix phi(lhs) suffix
    match: Match = field(compare=False)

    def replay(self) -> bool:
        m = self.match
        return (m.prefix + apply(m.substitution, self.identity.lhs) + m.suffix == self.source
                and m.prefix + apply(m.substitution, self.identity.rhs) + m.suffix == self.result)


# --- direct deductions -------------------------------------------------------

def _words_up_to(alphabet: Sequence[str], top: int) -> Iterator[Word]:
    for length in range(top + 1):
        yield from product(alphabet, repeat=length)


@lru_cache(maxsize=100_000)
def _oriented_steps(w: Word, s: Word, t: Word, length_cap: int | None) -> tuple[DeductionStep, ...]:
    _, ds, dt = split_difference(s, t)
    extras = sorted(set(t) - set(s))
    alphabet = sorted(set(w))
    out: dict[Word, DeductionStep] = {}
    for site in rewrite_sites(s, t, w):
        search = site.solution.search
        full = search.full_substitution(site.solution)
        alpha, beta = search.P[0], search.P[-1]
        phi = {x: full[x] for x in set(s)}
        prefix, suffix = full[alpha], full[beta]
        base = len(w) - (site.end - site.start)
        if extras:
            fixed = len(apply(phi, dt))
            room = (length_cap - base - fixed) if length_cap is not None else len(extras)
            if room < 0:
                continue
            per_var = room if length_cap is not None else 1
            choices = [img for img in _words_up_to(alphabet, per_var)]
            assignments = product(choices, repeat=len(extras))
        else:
            assignments = [()]
        for imgs in assignments:
            full_phi = dict(phi)
            full_phi.update(zip(extras, imgs))
            new = w[:site.start] + apply(full_phi, dt) + w[site.end:]
            if new == w or (length_cap is not None and len(new) > length_cap):
                continue
            if new not in out:
                span = (len(prefix), len(w) - len(suffix))
                out[new] = DeductionStep(w, new, Identity(s, t), Match(full_phi, prefix, suffix, span))
    return tuple(out[k] for k in sorted(out))


def direct_deductions(w: Sequence[str], sigma: IdentitySet | Iterable[Identity],
                      length_cap: int | None = None) -> list[DeductionStep]:
    """All words one deduction step away from w (w itself excluded), one step per result.

    Variables of one side that do not occur in the other range over words
    on the letters of w: of any length fitting under ``length_cap``, or of
    length at most one when no cap is given.
    """
    w = tuple(w)
    if not isinstance(sigma, IdentitySet):
        sigma = IdentitySet(sigma)
    out: dict[Word, DeductionStep] = {}
    for s, t in sigma.directed():
        for step in _oriented_steps(w, s, t, length_cap):
            out.setdefault(step.result, step)
    return [out[k] for k in sorted(out)]


@dataclass
class ClosureResult:
    words: set[Word]
    exhausted: bool
    depth: int


def closure(w: Sequence[str], sigma: IdentitySet | Iterable[Identity], depth_cap: int | None = None,
            size_cap: int = 100_000, length_cap: int | None = None) -> ClosureResult:
    """Breadth-first closure of {w} under direct deductions, within caps.

    ``exhausted`` is True when the search stopped because nothing new was
    reachable, so the returned set is the full class within the length cap.
    """
    w = tuple(w)
    if not isinstance(sigma, IdentitySet):
        sigma = IdentitySet(sigma)
    seen = {w}
    frontier = [w]
    depth = 0
    while frontier:
        if depth_cap is not None and depth >= depth_cap:
            return ClosureResult(seen, False, depth)
        nxt = []
        for u in frontier:
            for step in direct_deductions(u, sigma, length_cap):
                if step.result not in seen:
                    seen.add(step.result)
                    nxt.append(step.result)
                    if len(seen) > size_cap:
                        raise CapExceeded(f"closure exceeded {size_cap} words", seen)
        frontier = sorted(nxt)
        depth += 1 if nxt else 0
    return ClosureResult(seen, True, depth)


@dataclass(frozen=True)
class Yes:
    path: tuple[DeductionStep, ...]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NoWithinCaps:
    explored: int
    exhausted: bool

    def __bool__(self) -> bool:
        return False


def derivable(u: Sequence[str], v: Sequence[str], sigma: IdentitySet | Iterable[Identity],
              depth_cap: int | None = 6, length_cap: int | None = None,
              max_states: int = 100_000) -> Yes | NoWithinCaps:
    u, v = tuple(u), tuple(v)
    if u == v:
        return Yes(())
    if not isinstance(sigma, IdentitySet):
        sigma = IdentitySet(sigma)
    parent: dict[Word, DeductionStep | None] = {u: None}
    queue = deque([(u, 0)])
    capped = False
    while queue:
        w, d = queue.popleft()
        if depth_cap is not None and d >= depth_cap:
            capped = True
            continue
        for step in direct_deductions(w, sigma, length_cap):
            if step.result in parent:
                continue
            parent[step.result] = step
            if step.result == v:
                path = []
                x = v
                while parent[x] is not None:
                    path.append(parent[x])
                    x = parent[x].source
                return Yes(tuple(reversed(path)))
            if len(parent) > max_states:
                return NoWithinCaps(len(parent), False)
            queue.append((step.result, d + 1))
    return NoWithinCaps(len(parent), not capped)


# --- normalisation to reduced identities ---------------------------------------

SWAP_IDENTITY = five_identities()[3]  # x z x y t y = x z y x t y
REFERENCE_WORD = letters("xzytxy")


@dataclass(frozen=True)
class CertificateStep:
    """One rewrite of one side of the identity being normalised.

    kind is one of
      square_pullout     before = after as a whole-word identity (squares moved to the front)
      delete             after is before with the letters in ``dropped`` removed
      first_second_swap  an instance of x z x y t y = x z y x t y
      island_swap        two adjacent second occurrences in one island exchanged
    """

    kind: str
    side: str
    before: Word
    after: Word
    identity: Identity | None = None
    substitution: tuple[tuple[str, Word], ...] = ()
    prefix: Word = ()
    suffix: Word = ()
    dropped: frozenset = frozenset()

    def replay(self) -> bool:
        if self.kind == "delete":
            return delete(self.before, self.dropped) == self.after
        phi = dict(self.substitution)
        ok = (self.prefix + apply(phi, self.identity.lhs) + self.suffix == self.before
              and self.prefix + apply(phi, self.identity.rhs) + self.suffix == self.after)
        if self.kind == "island_swap":
            ok = ok and _is_island_swap(self.before, self.after)
        return ok

    def as_identity(self) -> Identity:
        return Identity(self.before, self.after)


@dataclass(frozen=True)
class Reduction:
    source: Identity
    reduced: Identity
    steps: tuple[CertificateStep, ...]
    squares: frozenset

    def replay(self) -> bool:
        cur = {"lhs": self.source.lhs, "rhs": self.source.rhs}
        for st in self.steps:
            if st.before != cur[st.side] or not st.replay():
                return False
            cur[st.side] = st.after
        return Identity(cur["lhs"], cur["rhs"]) == self.reduced


def _two_occurrence_split(w: Word) -> tuple[set[str], set[str]]:
    """(A, B): A are the twice-occurring letters whose occurrences are split by a simple letter."""
    counts = Counter(w)
    bidx = block_index(w)
    first: dict[str, int] = {}
    a: set[str] = set()
    for p, x in enumerate(w):
        if counts[x] < 2:
            continue
        if x not in first:
            first[x] = p
        elif counts[x] == 2 and bidx[first[x]] != bidx[p]:
            a.add(x)
    return a, set(multiple_vars(w)) - a


def _is_island_swap(before: Word, after: Word) -> bool:
    diff = [p for p in range(len(before)) if before[p] != after[p]] if len(before) == len(after) else []
    if len(diff) != 2 or diff[1] != diff[0] + 1:
        return False
    p = diff[0]
    if (before[p], before[p + 1]) != (after[p + 1], after[p]):
        return False
    for isl, (s, e) in islands(before):
        if s <= p and p + 1 < e:
            return True
    return False


def _whole_word_instance(kind: str, side: str, before: Word, after: Word) -> CertificateStep:
    return CertificateStep(kind, side, before, after, Identity(before, after))


def _first_second_swaps(w: Word, side: str, steps: list[CertificateStep]) -> Word:
    """Move every first occurrence in front of adjacent second occurrences."""
    sim = simple_vars(w)
    changed = True
    while changed:
        changed = False
        idx = occurrence_indices(w)
        for p in range(len(w) - 1):
            x, y = w[p], w[p + 1]
            if idx[p] == 2 and idx[p + 1] == 1 and y not in sim:
                # w = A x B x y C y D with phi(z) = B, phi(t) = C
                px = w.index(x)
                py = w.index(y, p + 2)
                phi = {"x": (x,), "y": (y,), "z": w[px + 1:p], "t": w[p + 2:py]}
                new = w[:p] + (y, x) + w[p + 2:]
                steps.append(CertificateStep("first_second_swap", side, w, new, SWAP_IDENTITY,
                                             tuple(sorted(phi.items())), w[:px], w[py + 1:]))
                w = new
                changed = True
                break
    return w


def _second_parts(w: Word) -> list[tuple[int, int]]:
    """Spans of the second-occurrence tails of each block (split into first part then second part)."""
    idx = occurrence_indices(w)
    out = []
    for _, (s, e) in blocks(w):
        p = s
        while p < e and idx[p] == 1:
            p += 1
        if any(idx[q] != 2 for q in range(p, e)):
            raise NotReducible("a block is not a first-occurrence part followed by a second-occurrence part")
        out.append((p, e))
    return out


def reduce_identity(identity: Identity, check: bool = True) -> Reduction:
    """Normalise an identity of M(xzytxy) to an equivalent reduced identity.

    The certificate rewrites each side separately: the squares of letters
    in B are pulled to the front and then deleted, first occurrences are
    moved in front of adjacent second occurrences, and finally the
    second-occurrence tails of the left side are put in the order of the
    right side by swaps inside islands.
    """
    u, v = identity.lhs, identity.rhs
    ref = FactorMonoid([REFERENCE_WORD])
    if check and not ref.decide(identity).holds:
        raise NotReducible(f"{identity} does not hold in M(xzytxy)")
    a_u, b_u = _two_occurrence_split(u)
    a_v, b_v = _two_occurrence_split(v)
    if (a_u, b_u) != (a_v, b_v):
        raise NotReducible("the two sides disagree on which letters are squares")
    squares = frozenset(b_u)
    steps: list[CertificateStep] = []
    sides = {}
    for side, w in (("lhs", u), ("rhs", v)):
        if squares:
            lead = tuple(x for b in sorted(squares) for x in (b, b))
            pulled = lead + delete(w, squares)
            if pulled != w:
                steps.append(_whole_word_instance("square_pullout", side, w, pulled))
            stripped = delete(pulled, squares)
            steps.append(CertificateStep("delete", side, pulled, stripped, dropped=squares))
            w = stripped
        sides[side] = w
    if not is_linear_balanced(sides["lhs"], sides["rhs"]):
        raise NotReducible("identity is not linear-balanced after removing squares")
    for side in ("lhs", "rhs"):
        sides[side] = _first_second_swaps(sides[side], side, steps)
    w1, w2 = sides["lhs"], sides["rhs"]
    tails1, tails2 = _second_parts(w1), _second_parts(w2)
    if len(tails1) != len(tails2):
        raise NotReducible("block structure differs")
    for (s1, e1), (s2, e2) in zip(tails1, tails2):
        goal = w2[s2:e2]
        if sorted(w1[s1:e1]) != sorted(goal):
            raise NotReducible("corresponding second-occurrence parts have different content")
        rank = {x: i for i, x in enumerate(goal)}
        changed = True
        while changed:
            changed = False
            for p in range(s1, e1 - 1):
                if rank[w1[p]] > rank[w1[p + 1]]:
                    new = w1[:p] + (w1[p + 1], w1[p]) + w1[p + 2:]
                    if not _is_island_swap(w1, new):
                        raise NotReducible(f"letters {w1[p]} and {w1[p + 1]} lie in different islands")
                    steps.append(_whole_word_instance("island_swap", "lhs", w1, new))
                    w1 = new
                    changed = True
    result = Identity(w1, w2)
    if not is_reduced_word_pair(w1, w2):
        raise NotReducible(f"normal form {result} is not reduced")
    return Reduction(identity, result, tuple(steps), squares)
