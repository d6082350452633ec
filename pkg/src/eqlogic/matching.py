"""Pattern matching of words with variables against concrete target words.

Two engines live here.

``match_whole`` / ``match_factor`` enumerate every substitution explicitly
(depth-first, with a dead-state memo).  They are exact and simple, and
they serve as the reference for everything else.

``BlockSearch`` answers the questions the deduction and decision code
actually asks about long words: which *projections* of matches exist
(images of a few chosen variables plus target positions of chosen
pattern boundaries).  Pattern variables that occur once and are not
asked about only fill gaps, so the pattern is cut into blocks of the
remaining variables; blocks are placed one at a time in the target,
choosing the most constrained block first.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .words import Span, Word, apply


@dataclass(frozen=True)
class Match:
    substitution: Mapping[str, Word]
    prefix: Word
    suffix: Word
    span: Span

    def image(self, pattern: Sequence[str]) -> Word:
        return apply(self.substitution, pattern)

    def reassemble(self, pattern: Sequence[str]) -> Word:
        return self.prefix + self.image(pattern) + self.suffix


class FactorCounter:
    """Greedy maximum number of non-overlapping occurrences of factors of a target."""

    def __init__(self, target: Sequence[str]):
        self.target = tuple(target)
        self._cache: dict[Word, int] = {}
        self._maxlen: dict[int, int] = {}

    def count(self, u: Word) -> int:
        got = self._cache.get(u)
        if got is not None:
            return got
        t, n = self.target, len(u)
        c = 0
        if n:
            p = 0
            while p + n <= len(t):
                if t[p:p + n] == u:
                    c += 1
                    p += n
                else:
                    p += 1
        self._cache[u] = c
        return c

    def max_len(self, k: int) -> int:
        """Longest factor length that still has k non-overlapping occurrences."""
        if k <= 1:
            return len(self.target)
        got = self._maxlen.get(k)
        if got is None:
            t = self.target
            got = 0
            for length in range(1, len(t) // k + 1):
                if any(self.count(t[i:i + length]) >= k for i in range(len(t) - length + 1)):
                    got = length
                else:
                    break
            self._maxlen[k] = got
        return got


def match_whole(pattern: Sequence[str], target: Sequence[str], nonempty: bool = False) -> Iterator[dict[str, Word]]:
    """All substitutions phi on content(pattern) with phi(pattern) == target."""
    pattern, target = tuple(pattern), tuple(target)
    n, m = len(pattern), len(target)
    minlen = 1 if nonempty else 0
    later = [Counter(pattern[k + 1:]) for k in range(n)]
    live = [frozenset(pattern[k:]) for k in range(n + 1)]
    env: dict[str, Word] = {}
    dead: set = set()

    def lower_bound(k: int) -> int:
        return sum(len(env[x]) if x in env else minlen for x in pattern[k:])

    def state(k: int, j: int):
        return k, j, tuple(sorted((x, env[x]) for x in live[k] if x in env))

    def rec(k: int, j: int) -> Iterator[dict[str, Word]]:
        if k == n:
            if j == m:
                yield dict(env)
            return
        if lower_bound(k) > m - j:
            return
        key = state(k, j)
        if key in dead:
            return
        found = False
        x = pattern[k]
        if x in env:
            u = env[x]
            if target[j:j + len(u)] == u:
                for sol in rec(k + 1, j + len(u)):
                    found = True
                    yield sol
        else:
            again = later[k][x]
            for length in range(minlen, m - j + 1):
                u = target[j:j + length]
                if again and length and _count_in(target, u, j + length) < again:
                    continue
                env[x] = u
                for sol in rec(k + 1, j + length):
                    found = True
                    yield sol
                del env[x]
        if not found:
            dead.add(key)

    yield from rec(0, 0)


def _count_in(target: Word, u: Word, start: int) -> int:
    """Non-overlapping occurrences of u in target[start:]."""
    n = len(u)
    c = 0
    p = start
    while p + n <= len(target):
        if target[p:p + n] == u:
            c += 1
            p += n
        else:
            p += 1
    return c


def match_factor(pattern: Sequence[str], target: Sequence[str], nonempty: bool = False) -> Iterator[Match]:
    """All (prefix, phi, suffix) with prefix + phi(pattern) + suffix == target."""
    target = tuple(target)
    m = len(target)
    for i in range(m + 1):
        for j in range(i, m + 1):
            for phi in match_whole(pattern, target[i:j], nonempty):
                yield Match(phi, target[:i], target[j:], (i, j))


def brute_force_matches(pattern: Sequence[str], target: Sequence[str]) -> set[tuple]:
    """Reference oracle: try every assignment of factors (or 1) to the variables."""
    from itertools import product

    pattern, target = tuple(pattern), tuple(target)
    names = sorted(set(pattern))
    images = sorted({target[i:j] for i in range(len(target) + 1) for j in range(i, len(target) + 1)})
    out = set()
    for combo in product(images, repeat=len(names)):
        phi = dict(zip(names, combo))
        if apply(phi, pattern) == target:
            out.add(tuple(sorted(phi.items())))
    return out


# --- block search ----------------------------------------------------------

def _first(gen: Iterator):
    try:
        return next(gen, None)
    finally:
        gen.close()


FLOAT = None  # placement of a block whose image is empty and whose position is irrelevant


@dataclass
class Solution:
    """A match in block form: images of all non-gap variables plus block spans."""

    env: dict[str, Word]
    spans: dict[int, Span | None]
    marks: tuple[int, ...]
    search: "BlockSearch" = field(repr=False)

    def substitution(self) -> dict[str, Word]:
        return self.search.full_substitution(self)


class BlockSearch:
    """Structured enumeration of matches of ``pattern`` onto the whole ``target``.

    keep   -- variables whose images must be reported (never treated as gap fillers)
    marks  -- pattern boundary indices whose target positions must be reported
    env    -- initial bindings (pins)
    reject -- called with the environment once every ``keep`` variable is bound;
              returning True discards the branch
    multiplicity -- lower bounds on occurrence counts used for image pruning,
              for searches on a piece of a larger pattern
    """

    cap = 64

    def __init__(self, pattern: Sequence[str], target: Sequence[str], *, keep: Iterable[str] = (),
                 marks: Sequence[int] = (), env: Mapping[str, Word] | None = None,
                 reject: Callable[[Mapping[str, Word]], bool] | None = None,
                 nonempty: bool = False, multiplicity: Mapping[str, int] | None = None):
        self.P = P = tuple(pattern)
        self.T = tuple(target)
        self.keep = frozenset(keep)
        self.mark_idx = tuple(marks)
        self.env0 = dict(env or {})
        self.reject = reject
        self.nonempty = nonempty
        self.counts = Counter(P)
        # occurrence counts used to prune images; may come from a larger pattern
        self.mult = dict(self.counts)
        if multiplicity:
            for x, k in multiplicity.items():
                if x in self.mult:
                    self.mult[x] = max(self.mult[x], k)
        self.counter = FactorCounter(self.T)
        self._start_cache: dict[Word, frozenset] = {}

        adjacent = set()
        for k in self.mark_idx:
            if not 0 <= k <= len(P):
                raise ValueError(f"mark {k} outside pattern")
            if k > 0:
                adjacent.add(P[k - 1])
            if k < len(P):
                adjacent.add(P[k])
        self.nonfree = {x for x in self.counts
                        if self.counts[x] > 1 or x in self.keep or x in self.env0 or x in adjacent}
        self.keep_vars = self.keep & set(P) | (self.keep & set(self.env0))

        # blocks as [start, end) ranges of pattern positions
        self.bstart: list[int] = []
        self.bend: list[int] = []
        p = 0
        while p < len(P):
            if P[p] in self.nonfree:
                q = p
                while q < len(P) and P[q] in self.nonfree:
                    q += 1
                self.bstart.append(p)
                self.bend.append(q)
                p = q
            else:
                p += 1
        self.nblocks = len(self.bstart)
        self.members = [P[s:e] for s, e in zip(self.bstart, self.bend)]
        self.var_blocks: dict[str, list[int]] = {}
        for b, mem in enumerate(self.members):
            for x in dict.fromkeys(mem):
                self.var_blocks.setdefault(x, []).append(b)
        free_prefix = [0]
        for x in P:
            free_prefix.append(free_prefix[-1] + (x not in self.nonfree))
        self.free_prefix = free_prefix
        self.block_marks: list[list[tuple[int, int]]] = [[] for _ in range(self.nblocks)]
        self.mark_block: list[int] = []
        for mi, k in enumerate(self.mark_idx):
            b = next((b for b in range(self.nblocks) if self.bstart[b] <= k <= self.bend[b]), None)
            self.mark_block.append(-1 if b is None else b)
            if b is not None:
                self.block_marks[b].append((mi, k - self.bstart[b]))
        self.anchored_start = [s == 0 for s in self.bstart]
        self.anchored_end = [e == len(P) for e in self.bend]

    # -- helpers --------------------------------------------------------

    def _gap(self, i: int, j: int) -> int:
        """Minimum target distance between the end of block i and start of block j (i<j)."""
        if not self.nonempty:
            return 0
        lo = self.bend[i] if i >= 0 else 0
        hi = self.bstart[j] if j < self.nblocks else len(self.P)
        return self.free_prefix[hi] - self.free_prefix[lo]

    def _window(self, b: int, spans: dict) -> tuple[int, int]:
        lo, hi = self._gap(-1, b), len(self.T) - self._gap(b, self.nblocks)
        for i in range(b - 1, -1, -1):
            sp = spans.get(i, FLOAT)
            if sp is not FLOAT:
                lo = sp[1] + self._gap(i, b)
                break
        for j in range(b + 1, self.nblocks):
            sp = spans.get(j, FLOAT)
            if sp is not FLOAT:
                hi = sp[0] - self._gap(b, j)
                break
        return lo, hi

    def _ok_image(self, x: str, u: Word) -> bool:
        if not u:
            return not self.nonempty
        k = self.mult[x]
        return k < 2 or self.counter.count(u) >= k

    def _limit(self, x: str) -> int:
        return self.counter.max_len(self.mult[x])

    def _images(self, x: str, cur: int, lo: int, hi: int, dom: Mapping[str, frozenset], forward: bool) -> list[Word]:
        """Candidate images of unbound x starting (forward) or ending (backward) at cur."""
        T = self.T
        allowed = dom.get(x)
        if allowed is not None:
            if forward:
                return [u for u in allowed if cur + len(u) <= hi and T[cur:cur + len(u)] == u]
            return [u for u in allowed if cur - len(u) >= lo and T[cur - len(u):cur] == u]
        top = min((hi - cur) if forward else (cur - lo), self._limit(x))
        out = []
        for length in range(1 if self.nonempty else 0, top + 1):
            u = T[cur:cur + length] if forward else T[cur - length:cur]
            if self._ok_image(x, u):
                out.append(u)
        return out

    def _bounds(self, b: int, spans: dict) -> tuple[int, int] | None:
        lo, hi = self._window(b, spans)
        if lo > hi:
            return None
        if self.anchored_start[b] and lo > 0:
            return None
        if self.anchored_end[b] and hi < len(self.T):
            return None
        return lo, hi

    def _starts(self, u: Word) -> frozenset:
        """Target positions where u occurs (every position for the empty word)."""
        got = self._start_cache.get(u)
        if got is None:
            T, n = self.T, len(u)
            if n == 0:
                got = frozenset(range(len(T) + 1))
            else:
                got = frozenset(c for c in range(len(T) - n + 1) if T[c:c + n] == u)
            self._start_cache[u] = got
        return got

    def feasible_images(self, b: int, env: Mapping[str, Word], spans: dict,
                        dom: Mapping[str, frozenset]) -> dict[str, set] | None:
        """Images each unbound member of block b can take in some placement (None: no placement).

        Forward/backward reachability over (member index, target position);
        repeated variables inside the block are not cross-checked, so this
        over-approximates and is only used for pruning.
        """
        bounds = self._bounds(b, spans)
        if bounds is None:
            return None
        lo, hi = bounds
        mem = self.members[b]
        reach = {0} if self.anchored_start[b] else set(range(lo, hi + 1))
        steps: list[list[tuple[int, int, Word | None]]] = []
        for x in mem:
            u = env.get(x)
            moves: list[tuple[int, int, Word | None]] = []
            if u is not None:
                n = len(u)
                moves = [(c, c + n, None) for c in reach & self._starts(u) if c + n <= hi]
            elif x in dom:
                for v in dom[x]:
                    n = len(v)
                    moves.extend((c, c + n, v) for c in reach & self._starts(v) if c + n <= hi)
            else:
                for c in reach:
                    moves.extend((c, c + len(v), v) for v in self._images(x, c, lo, hi, dom, True))
            steps.append(moves)
            reach = {c2 for _, c2, _ in moves}
            if not reach:
                return None
        live = {len(self.T)} & reach if self.anchored_end[b] else reach
        if not live:
            return None
        feas: dict[str, set] = {}
        for i in range(len(mem) - 1, -1, -1):
            x = mem[i]
            back = set()
            here = set()
            for c, c2, v in steps[i]:
                if c2 in live:
                    back.add(c)
                    if v is not None:
                        here.add(v)
            if x not in env:
                feas[x] = here if x not in feas else feas[x] & here
            live = back
        return feas

    def propagate(self, env: Mapping[str, Word], spans: dict, unplaced: Iterable[int],
                  dom: Mapping[str, frozenset], dirty: Iterable[int] | None = None) -> dict[str, frozenset] | None:
        """Shrink image domains to a fixpoint over the unplaced blocks; None on a wipe-out.

        Only blocks in ``dirty`` (default: all unplaced) are examined at
        first; a block is re-examined when the domain of one of its
        variables shrinks.
        """
        dom = dict(dom)
        unplaced = set(unplaced)
        work = sorted(unplaced if dirty is None else set(dirty) & unplaced)
        queued = set(work)
        while work:
            b = work.pop()
            queued.discard(b)
            feas = self.feasible_images(b, env, spans, dom)
            if feas is None:
                return None
            for x, imgs in feas.items():
                old = dom.get(x)
                if old is None or len(imgs) < len(old):
                    new = frozenset(imgs) if old is None else old & imgs
                    if not new:
                        return None
                    dom[x] = new
                    for c in self.var_blocks.get(x, ()):
                        if c != b and c in unplaced and c not in queued:
                            queued.add(c)
                            work.append(c)
        return dom

    def placements(self, b: int, env: Mapping[str, Word], spans: dict,
                   dom: Mapping[str, frozenset] | None = None) -> Iterator[tuple]:
        """Yield (span or FLOAT, new bindings) for block b consistent with env and spans."""
        dom = dom or {}
        bounds = self._bounds(b, spans)
        if bounds is None:
            return
        lo, hi = bounds
        mem = self.members[b]
        T = self.T
        anchored_s, anchored_e = self.anchored_start[b], self.anchored_end[b]
        loc: dict[str, Word] = {}

        def img(x: str) -> Word | None:
            u = env.get(x)
            return loc.get(x) if u is None else u

        def fwd(i: int, cur: int) -> Iterator[int]:
            if i == len(mem):
                yield cur
                return
            x = mem[i]
            u = img(x)
            if u is not None:
                if cur + len(u) <= hi and T[cur:cur + len(u)] == u:
                    yield from fwd(i + 1, cur + len(u))
                return
            for u in self._images(x, cur, lo, hi, dom, True):
                loc[x] = u
                yield from fwd(i + 1, cur + len(u))
                del loc[x]

        def bwd(i: int, cur: int) -> Iterator[int]:
            if i < 0:
                yield cur
                return
            x = mem[i]
            u = img(x)
            if u is not None:
                if cur - len(u) >= lo and T[cur - len(u):cur] == u:
                    yield from bwd(i - 1, cur - len(u))
                return
            for u in self._images(x, cur, lo, hi, dom, False):
                loc[x] = u
                yield from bwd(i - 1, cur - len(u))
                del loc[x]

        def accept(s: int, e: int) -> bool:
            return (not anchored_s or s == 0) and (not anchored_e or e == len(T))

        anchor = next((i for i, x in enumerate(mem) if env.get(x)), None)
        if anchor is not None:
            u = env[mem[anchor]]
            n = len(u)
            for o in range(lo, hi - n + 1):
                if T[o:o + n] != u:
                    continue
                for s in bwd(anchor - 1, o):
                    for e in fwd(anchor + 1, o + n):
                        if accept(s, e):
                            yield (s, e), dict(loc)
            return

        floating = not (anchored_s or anchored_e or self.block_marks[b])
        if floating:
            can_vanish = not self.nonempty and all(
                env[x] == () if x in env else (x not in dom or () in dom[x]) for x in mem)
            if can_vanish:
                yield FLOAT, {x: () for x in mem if x not in env}
            starts = range(lo, hi + 1)
        else:
            starts = [0] if anchored_s else range(lo, hi + 1)
        for s in starts:
            for e in fwd(0, s):
                if floating and e == s:
                    continue
                if accept(s, e):
                    yield (s, e), dict(loc)

    # -- search ---------------------------------------------------------

    def _mark_positions(self, env: Mapping[str, Word], spans: dict) -> tuple[int, ...]:
        out = []
        for mi, k in enumerate(self.mark_idx):
            b = self.mark_block[mi]
            if b < 0:
                out.append(0 if k == 0 else len(self.T))
                continue
            s = spans[b][0]
            s += sum(len(env[x]) for x in self.members[b][:k - self.bstart[b]])
            out.append(s)
        return tuple(out)

    def _trivial_pattern(self) -> Iterator[Solution]:
        # every variable is a gap filler
        free_count = len(self.P)
        if free_count == 0 and self.T:
            return
        if self.nonempty and len(self.T) < free_count:
            return
        marks = tuple(0 if k == 0 else len(self.T) for k in self.mark_idx)
        yield Solution({}, {}, marks, self)

    def solutions(self, project: bool = False) -> Iterator[Solution]:
        """Enumerate solutions; with ``project`` only one per distinct (keep images, marks)."""
        if self.nblocks == 0:
            yield from self._trivial_pattern()
            return
        env = dict(self.env0)
        for x, u in self.env0.items():
            if x in self.counts and not self._ok_image(x, u):
                return
        spans: dict[int, Span | None] = {}
        unplaced = set(range(self.nblocks))
        seen: set = set()
        marked = {b for b in range(self.nblocks) if self.block_marks[b]}
        keep = self.keep_vars

        def keep_ready() -> bool:
            return all(x in env for x in keep)

        def key() -> tuple:
            return (tuple(sorted((x, env[x]) for x in keep)), self._mark_positions(env, spans))

        def affected(b: int, new: Mapping[str, Word]) -> set[int]:
            """Unplaced blocks whose window or variables change when b is placed."""
            out = {c for x in new for c in self.var_blocks.get(x, ())}
            for c in range(b - 1, -1, -1):
                if c not in unplaced:
                    break
                out.add(c)
            for c in range(b + 1, self.nblocks):
                if c not in unplaced:
                    break
                out.add(c)
            return out

        def rec(dom: Mapping[str, frozenset], dirty: set[int] | None) -> Iterator[Solution]:
            if not unplaced:
                yield Solution(dict(env), dict(spans), self._mark_positions(env, spans), self)
                return
            dom = self.propagate(env, spans, unplaced, dom, dirty)
            if dom is None:
                return
            best = None
            for b in sorted(unplaced):
                free = {x for x in self.members[b] if x not in env}
                est = 1
                for x in free:
                    est *= len(dom[x]) if x in dom else len(self.T) + 1
                score = math.log(est) / max(1, len(free))
                if best is None or score < best[0]:
                    best = (score, b)
            b = best[1]
            got = list(islice(self.placements(b, env, spans, dom), self.cap + 1))
            if not got:
                return
            options: Iterable = got if len(got) <= self.cap else self.placements(b, env, spans, dom)
            for span, new in options:
                env.update(new)
                spans[b] = span
                unplaced.discard(b)
                try:
                    if self.reject is not None and keep_ready() and self.reject(env):
                        continue
                    nxt = affected(b, new)
                    if project and keep_ready() and not (marked & unplaced):
                        k = key()
                        if k not in seen:
                            first = _first(rec(dom, nxt))
                            if first is not None:
                                seen.add(k)
                                yield first
                    else:
                        yield from rec(dom, nxt)
                finally:
                    unplaced.add(b)
                    del spans[b]
                    for x in new:
                        del env[x]

        if self.reject is not None and keep_ready() and self.reject(env):
            return
        if project and keep_ready() and not marked:
            first = _first(rec({}, None))
            if first is not None:
                yield first
            return
        yield from rec({}, None)

    def full_substitution(self, sol: Solution) -> dict[str, Word]:
        """Complete a solution to a substitution on content(pattern) by filling gaps."""
        P, T = self.P, self.T
        phi = {x: sol.env[x] for x in self.nonfree if x in sol.env}
        placed = sorted((self.bstart[b], self.bend[b], sp) for b, sp in sol.spans.items() if sp is not FLOAT)
        bounds = [(0, 0, (0, 0))] + placed + [(len(P), len(P), (len(T), len(T)))]
        for (_, pe, (_, te)), (ps, _, (ts, _)) in zip(bounds, bounds[1:]):
            gap_vars = [P[p] for p in range(pe, ps) if P[p] not in self.nonfree]
            text = T[te:ts]
            if not gap_vars:
                if text:
                    raise AssertionError("gap without filler")
                continue
            if self.nonempty:
                head = gap_vars[:-1]
                for i, x in enumerate(head):
                    phi[x] = text[i:i + 1]
                phi[gap_vars[-1]] = text[len(head):]
            else:
                phi[gap_vars[0]] = text
                for x in gap_vars[1:]:
                    phi[x] = ()
        return phi


# --- rewrite sites -----------------------------------------------------------

def split_difference(s: Sequence[str], t: Sequence[str]) -> tuple[int, Word, Word]:
    """Strip the longest common prefix and suffix: returns (prefix length, D_s, D_t)."""
    s, t = tuple(s), tuple(t)
    a = 0
    while a < min(len(s), len(t)) and s[a] == t[a]:
        a += 1
    b = 0
    while b < min(len(s), len(t)) - a and s[len(s) - 1 - b] == t[len(t) - 1 - b]:
        b += 1
    return a, s[a:len(s) - b], t[a:len(t) - b]


def fresh_names(used: Iterable[str], k: int) -> list[str]:
    used = set(used)
    out = []
    i = 0
    while len(out) < k:
        name = f"_g{i}"
        if name not in used:
            out.append(name)
        i += 1
    return out


@dataclass(frozen=True)
class Site:
    """target[start:end] is phi(D_s) for a match target = a phi(s) b.

    ``env`` holds the images of the variables of D_s and D_t that occur
    in s (plus any extra variables the caller asked for).
    """

    start: int
    end: int
    env: Mapping[str, Word]
    solution: Solution = field(repr=False, compare=False)


def skeleton(s: Word, keep: set[str], fillers: Iterator[str]) -> Word:
    """s restricted to ``keep``, with a fresh filler wherever letters were skipped."""
    out: list[str] = []
    skipped = True
    for x in s:
        if x in keep:
            if skipped:
                out.append(next(fillers))
            out.append(x)
            skipped = False
        else:
            skipped = True
    out.append(next(fillers))
    return tuple(out)


def _pins(s: Word, ds: Word, dt: Word, target: Word,
          reject: Callable[[Mapping[str, Word]], bool] | None) -> list[dict[str, Word]]:
    """Candidate images of the variables of D_s, from a relaxed match of s."""
    vars_ds = set(ds)
    names = iter(fresh_names(set(s) | set(dt), len(s) + 2))
    relaxed = skeleton(s, vars_ds, names)
    search = BlockSearch(relaxed, target, keep=vars_ds, multiplicity=Counter(s), reject=reject)
    pins = []
    seen = set()
    for sol in search.solutions(project=True):
        pin = {x: sol.env[x] for x in vars_ds}
        k = tuple(sorted(pin.items()))
        if k not in seen:
            seen.add(k)
            pins.append(pin)
    return pins


def rewrite_sites(s: Sequence[str], t: Sequence[str], target: Sequence[str], *,
                  extra_keep: Iterable[str] = (),
                  wrap: tuple[str, str] | None = None) -> Iterator[Site]:
    """Distinct ways to see target as a phi(s) b with phi(D_s) != phi(D_t).

    Two sites are the same when they agree on the replaced range and on the
    images of the differing parts, so each distinct rewrite result appears
    once.  When t has variables outside s the inequality cannot be decided
    here and is left to the caller.

    The search first pins the images of D_s by matching it alone (with
    occurrence counts taken from the whole of s), then completes each pin
    against the full pattern.
    """
    s, t, target = tuple(s), tuple(t), tuple(target)
    a, ds, dt = split_difference(s, t)
    if s == t:
        return
    alpha, beta = wrap or fresh_names(set(s) | set(t), 2)
    pattern = (alpha,) + s + (beta,)
    marks = [1 + a, 1 + a + len(ds)]
    con_s = set(s)
    decidable = set(dt) <= con_s
    keep = (set(ds) | set(dt)) & con_s | set(extra_keep)

    def same(e: Mapping[str, Word]) -> bool:
        return apply(e, ds) == apply(e, dt)

    reject = same if decidable else None
    pins: list[dict[str, Word]]
    if ds:
        pins = _pins(s, ds, dt, target, same if set(dt) <= set(ds) else None)
    else:
        pins = [{}]
    emitted = set()
    for pin in pins:
        search = BlockSearch(pattern, target, keep=keep, marks=marks, env=pin,
                             reject=reject)
        for sol in search.solutions(project=True):
            env = {x: sol.env[x] for x in keep if x in sol.env}
            start, end = sol.marks
            k = (start, end, tuple(sorted(env.items())))
            if k in emitted:
                continue
            emitted.add(k)
            yield Site(start, end, env, sol)
