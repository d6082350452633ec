"""Words over a variable alphabet, identities, and combinatorial predicates.

A word is a plain tuple of variable tokens; the empty tuple is the empty
word.  Everything in this module is a pure function of its arguments.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Word = tuple[str, ...]
EMPTY: Word = ()

_TOKEN = re.compile(r"^[A-Za-z0-9_']+$")


class WordError(ValueError):
    pass


class OccursMoreThanTwice(WordError):
    def __init__(self, variable: str, count: int):
        super().__init__(f"variable {variable!r} occurs {count} times")
        self.variable = variable
        self.count = count


class OccurrenceOutOfRange(WordError):
    pass


def word(tokens: str | Iterable[str]) -> Word:
    """Build a word from whitespace-separated text or an iterable of tokens."""
    if isinstance(tokens, str):
        return parse_word(tokens)
    out = tuple(tokens)
    for tok in out:
        if not _TOKEN.match(tok):
            raise WordError(f"bad variable token {tok!r}")
    return out


def letters(text: str) -> Word:
    """Single-character shorthand: ``letters("xzy")`` is ``("x", "z", "y")``."""
    return tuple(text)


def parse_word(text: str) -> Word:
    toks = text.split()
    if toks == ["1"]:
        return EMPTY
    if not toks:
        raise WordError("empty word must be written as 1")
    for tok in toks:
        if tok == "1" or not _TOKEN.match(tok):
            raise WordError(f"bad variable token {tok!r}")
    return tuple(toks)


def format_word(w: Sequence[str]) -> str:
    return " ".join(w) if w else "1"


@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word

    @property
    def nontrivial(self) -> bool:
        return self.lhs != self.rhs

    def reversed(self) -> "Identity":
        return Identity(self.rhs, self.lhs)

    def content(self) -> set[str]:
        return content(self.lhs) | content(self.rhs)

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"


def parse_identity(text: str) -> Identity:
    if text.count("=") != 1:
        raise WordError(f"identity needs exactly one '=': {text!r}")
    left, right = text.split("=")
    return Identity(parse_word(left), parse_word(right))


def ident(lhs: str, rhs: str) -> Identity:
    """Identity from two single-character-letter strings (test/demo shorthand)."""
    return Identity(letters(lhs), letters(rhs))


# --- substitutions -------------------------------------------------------

Substitution = Mapping[str, Word]


def apply(phi: Substitution, w: Sequence[str]) -> Word:
    out: list[str] = []
    for x in w:
        img = phi.get(x)
        if img is None:
            out.append(x)
        else:
            out.extend(img)
    return tuple(out)


# --- basic predicates ----------------------------------------------------

def content(w: Sequence[str]) -> set[str]:
    return set(w)


def occ(w: Sequence[str], x: str) -> int:
    return sum(1 for y in w if y == x)


def simple_vars(w: Sequence[str]) -> set[str]:
    return {x for x, c in Counter(w).items() if c == 1}


def multiple_vars(w: Sequence[str]) -> set[str]:
    return {x for x, c in Counter(w).items() if c > 1}


def is_linear(w: Sequence[str]) -> bool:
    return len(set(w)) == len(w)


def project(w: Sequence[str], keep: Iterable[str]) -> Word:
    keep = set(keep)
    return tuple(x for x in w if x in keep)


def delete(w: Sequence[str], drop: Iterable[str]) -> Word:
    drop = set(drop)
    return tuple(x for x in w if x not in drop)


def occurrence_positions(w: Sequence[str], x: str) -> list[int]:
    return [p for p, y in enumerate(w) if y == x]


def occurrence_position(w: Sequence[str], x: str, i: int) -> int:
    pos = occurrence_positions(w, x)
    if not 1 <= i <= len(pos):
        raise OccurrenceOutOfRange(f"{x!r} has {len(pos)} occurrences, asked for #{i}")
    return pos[i - 1]


def occurrence_order(w: Sequence[str], first: tuple[str, int], second: tuple[str, int]) -> bool:
    """True iff the i-th occurrence of x precedes the j-th occurrence of y."""
    return occurrence_position(w, *first) < occurrence_position(w, *second)


def occurrence_indices(w: Sequence[str]) -> list[int]:
    """For each position, which occurrence (1-based) of its letter sits there."""
    seen: Counter[str] = Counter()
    out = []
    for x in w:
        seen[x] += 1
        out.append(seen[x])
    return out


def factors(w: Sequence[str]) -> set[Word]:
    """All nonempty factors of w."""
    w = tuple(w)
    return {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}


def is_factor(u: Sequence[str], w: Sequence[str]) -> bool:
    u, w = tuple(u), tuple(w)
    if not u:
        return True
    n = len(u)
    return any(w[i:i + n] == u for i in range(len(w) - n + 1))


def is_square_free(w: Sequence[str]) -> bool:
    w = tuple(w)
    n = len(w)
    for i in range(n):
        for half in range(1, (n - i) // 2 + 1):
            if w[i:i + half] == w[i + half:i + 2 * half]:
                return False
    return True


# --- blocks and islands --------------------------------------------------

Span = tuple[int, int]


def _segments(w: Sequence[str]) -> list[tuple[Word, Span]]:
    """Maximal simple-free segments, including empty ones (one per gap)."""
    w = tuple(w)
    sim = simple_vars(w)
    segs = []
    start = 0
    for p, x in enumerate(w):
        if x in sim:
            segs.append((w[start:p], (start, p)))
            start = p + 1
    segs.append((w[start:], (start, len(w))))
    return segs


def blocks(w: Sequence[str]) -> list[tuple[Word, Span]]:
    return [(seg, span) for seg, span in _segments(w) if seg]


def block_index(w: Sequence[str]) -> list[int | None]:
    """Block number of each position (None for simple letters)."""
    out: list[int | None] = [None] * len(w)
    for b, (_, (s, e)) in enumerate(blocks(w)):
        for p in range(s, e):
            out[p] = b
    return out


def islands(w: Sequence[str]) -> list[tuple[Word, Span]]:
    w = tuple(w)
    for x, c in Counter(w).items():
        if c > 2:
            raise OccursMoreThanTwice(x, c)
    bidx = block_index(w)
    first_block: dict[str, int | None] = {}
    found: list[tuple[Word, Span]] = []
    run_start = None
    run_key = None

    def close(end: int) -> None:
        if run_start is not None:
            found.append((w[run_start:end], (run_start, end)))

    for p, x in enumerate(w):
        second = x in first_block
        key = (bidx[p], first_block[x]) if second else None
        if second and run_start is not None and key == run_key:
            continue
        close(p)
        run_start, run_key = (p, key) if second else (None, None)
        if not second:
            first_block[x] = bidx[p]
    close(len(w))
    return found


def is_block_linear(w: Sequence[str]) -> bool:
    return all(is_linear(b) for b, _ in blocks(w))


# --- identity classification ---------------------------------------------

@dataclass(frozen=True)
class IdentityClass:
    trivial: bool
    linear_balanced: bool
    reduced: bool


def _skeleton(w: Word) -> tuple[tuple[str, ...], list[Word]]:
    sim = simple_vars(w)
    return tuple(x for x in w if x in sim), [seg for seg, _ in _segments(w)]


def _first_second_split(w: Word, span: Span) -> tuple[Word, Word] | None:
    """Split the segment at span into (first occurrences, second occurrences)."""
    idx = occurrence_indices(w)
    s, e = span
    p = s
    while p < e and idx[p] == 1:
        p += 1
    if any(idx[q] != 2 for q in range(p, e)):
        return None
    return w[s:p], w[p:e]


def classify_identity(identity: Identity) -> IdentityClass:
    u, v = identity.lhs, identity.rhs
    lb = is_linear_balanced(u, v)
    return IdentityClass(u == v, lb, lb and is_reduced_word_pair(u, v))


def is_linear_balanced(u: Word, v: Word) -> bool:
    su, segs_u = _skeleton(u)
    sv, segs_v = _skeleton(v)
    if su != sv:
        return False
    return all(is_linear(a) and is_linear(b) and set(a) == set(b)
               for a, b in zip(segs_u, segs_v))


def is_reduced_word_pair(u: Word, v: Word) -> bool:
    if not is_linear_balanced(u, v):
        return False
    if any(c > 2 for c in Counter(u).values()) or any(c > 2 for c in Counter(v).values()):
        return False
    for (_, span_u), (_, span_v) in zip(_segments(u), _segments(v)):
        su = _first_second_split(u, span_u)
        sv = _first_second_split(v, span_v)
        if su is None or sv is None or su[1] != sv[1]:
            return False
    return True


def is_reduced(identity: Identity) -> bool:
    return classify_identity(identity).reduced


# --- invertibility -------------------------------------------------------

def one_invertible_neighbours(w: Word) -> list[Word]:
    """Words obtained by one swap of adjacent distinct letters that both occur elsewhere."""
    counts = Counter(w)
    out = []
    for p in range(len(w) - 1):
        x, y = w[p], w[p + 1]
        if x != y and counts[x] > 1 and counts[y] > 1:
            out.append(w[:p] + (y, x) + w[p + 2:])
    return out


class SearchLimit(RuntimeError):
    pass


def invertibility_degree(identity: Identity, max_states: int = 2_000_000) -> int | None:
    """Least k such that the identity is k-invertible, or None when unreachable.

    Bidirectional breadth-first search over single 1-invertible swaps.
    Swaps never move simple letters, so the words must share their
    simple-letter skeleton and each segment must be a rearrangement of
    its partner; otherwise the answer is None without searching.
    """
    u, v = identity.lhs, identity.rhs
    if u == v:
        return 0
    su, segs_u = _skeleton(u)
    sv, segs_v = _skeleton(v)
    if su != sv or any(Counter(a) != Counter(b) for a, b in zip(segs_u, segs_v)):
        return None
    dist_u = {u: 0}
    dist_v = {v: 0}
    front_u, front_v = [u], [v]
    while front_u and front_v:
        # expand the smaller side
        if len(front_u) > len(front_v):
            front_u, front_v = front_v, front_u
            dist_u, dist_v = dist_v, dist_u
        nxt = []
        best = None
        for w in front_u:
            d = dist_u[w] + 1
            for nb in one_invertible_neighbours(w):
                if nb in dist_v:
                    total = d + dist_v[nb]
                    best = total if best is None else min(best, total)
                if nb not in dist_u:
                    dist_u[nb] = d
                    nxt.append(nb)
        if best is not None:
            return best
        if len(dist_u) + len(dist_v) > max_states:
            raise SearchLimit(f"more than {max_states} states")
        front_u = nxt
    return None
