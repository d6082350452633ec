"""Partition lattices Eq(n), small test lattices, and embeddings between them.

Also the word-level check that distinct equivalence relations on the
family W_2 give distinct systems of deduction classes, in reversed order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .family import build_family
from .rewrite import IdentitySet, closure
from .words import Identity, format_word

MAX_PARTITION_N = 8
MAX_EMBED_SIZE = 8
MAX_EMBED_N = 5


class TooLarge(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class NotALattice(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """An equivalence relation on {0..n-1}, labelled in first-occurrence order."""

    block_id: tuple[int, ...]

    def __post_init__(self) -> None:
        seen: dict[int, int] = {}
        canon = tuple(seen.setdefault(b, len(seen)) for b in self.block_id)
        object.__setattr__(self, "block_id", canon)

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "Partition":
        label = [-1] * n
        for k, blk in enumerate(blocks):
            for i in blk:
                if label[i] != -1:
                    raise ValueError(f"element {i} listed twice")
                label[i] = k
        for i in range(n):
            if label[i] == -1:
                label[i] = len(blocks) + i
        return cls(tuple(label))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Bar-separated blocks of 0-based elements, e.g. ``"01|2"``."""
        blocks = [[int(c) for c in part] for part in text.split("|")]
        return cls.from_blocks(sum(map(len, blocks)), blocks)

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def universal(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def ground_size(self) -> int:
        return len(self.block_id)

    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, b in enumerate(self.block_id):
            out.setdefault(b, []).append(i)
        return [tuple(v) for v in out.values()]

    def related(self, i: int, j: int) -> bool:
        return self.block_id[i] == self.block_id[j]

    def pairs(self) -> list[tuple[int, int]]:
        """Related pairs i < j."""
        return [(i, j) for i, j in combinations(range(self.ground_size), 2) if self.related(i, j)]

    def __le__(self, other: "Partition") -> bool:
        _same_size(self, other)
        return all(other.related(i, j) for i, j in self.pairs())

    def __str__(self) -> str:
        return "|".join("".join(map(str, b)) if self.ground_size <= 10 else ",".join(map(str, b))
                        for b in self.blocks())


def _same_size(p: Partition, q: Partition) -> None:
    if p.ground_size != q.ground_size:
        raise SizeMismatch(f"ground sizes {p.ground_size} and {q.ground_size} differ")


def meet(p: Partition, q: Partition) -> Partition:
    _same_size(p, q)
    return Partition(tuple(zip(p.block_id, q.block_id)))  # type: ignore[arg-type]


def join(p: Partition, q: Partition) -> Partition:
    _same_size(p, q)
    parent = list(range(p.ground_size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for part in (p, q):
        first: dict[int, int] = {}
        for i, b in enumerate(part.block_id):
            j = first.setdefault(b, i)
            parent[find(i)] = find(j)
    return Partition(tuple(find(i) for i in range(p.ground_size)))


def _restricted_growth(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return

    def rec(prefix: list[int], top: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()
    yield from rec([0], 0)


def all_partitions(n: int) -> list[Partition]:
    if n > MAX_PARTITION_N:
        raise TooLarge(f"n={n} exceeds {MAX_PARTITION_N}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(rg) for rg in _restricted_growth(n)]


# --- finite lattices ----------------------------------------------------------

@dataclass
class FiniteLattice:
    """A lattice on {0..size-1} given by its order; meet/join tables are derived."""

    leq: np.ndarray
    names: list[str] = field(default_factory=list)
    meet: np.ndarray = field(init=False)
    join: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.leq = np.asarray(self.leq, dtype=bool)
        n = self.leq.shape[0]
        if not self.names:
            self.names = [str(i) for i in range(n)]
        if not self.leq.diagonal().all():
            raise NotALattice("order is not reflexive")
        if (self.leq & self.leq.T & ~np.eye(n, dtype=bool)).any():
            raise NotALattice("order is not antisymmetric")
        if ((self.leq.astype(int) @ self.leq.astype(int) > 0) & ~self.leq).any():
            raise NotALattice("order is not transitive")
        self.meet = np.zeros((n, n), dtype=np.int64)
        self.join = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                self.meet[a, b] = self._extreme(self.leq[:, a] & self.leq[:, b], greatest=True, a=a, b=b)
                self.join[a, b] = self._extreme(self.leq[a, :] & self.leq[b, :], greatest=False, a=a, b=b)

    def _extreme(self, cand: np.ndarray, greatest: bool, a: int, b: int) -> int:
        idx = np.flatnonzero(cand)
        for c in idx:
            if greatest and self.leq[idx, c].all():
                return int(c)
            if not greatest and self.leq[c, idx].all():
                return int(c)
        raise NotALattice(f"{self.names[a]} and {self.names[b]} have no {'meet' if greatest else 'join'}")

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    @classmethod
    def from_covers(cls, names: Sequence[str], covers: Sequence[tuple[str, str]]) -> "FiniteLattice":
        """Build from the Hasse diagram: each pair (a, b) means a is below b."""
        index = {x: i for i, x in enumerate(names)}
        n = len(names)
        leq = np.eye(n, dtype=bool)
        for a, b in covers:
            leq[index[a], index[b]] = True
        for k in range(n):
            leq |= leq[:, [k]] & leq[[k], :]
        return cls(leq, list(names))

    def axiom_failures(self) -> list[str]:
        """Idempotence, commutativity, associativity and absorption, checked exhaustively."""
        m, j = self.meet, self.join
        r = np.arange(self.size)
        bad = []
        if not ((m[r, r] == r).all() and (j[r, r] == r).all()):
            bad.append("idempotence")
        if not ((m == m.T).all() and (j == j.T).all()):
            bad.append("commutativity")
        a, b, c = np.meshgrid(r, r, r, indexing="ij")
        if not ((m[m[a, b], c] == m[a, m[b, c]]).all() and (j[j[a, b], c] == j[a, j[b, c]]).all()):
            bad.append("associativity")
        a, b = np.meshgrid(r, r, indexing="ij")
        if not ((m[a, j[a, b]] == a).all() and (j[a, m[a, b]] == a).all()):
            bad.append("absorption")
        return bad


def chain(k: int) -> FiniteLattice:
    if k < 1:
        raise ValueError("a chain needs at least one element")
    names = [str(i) for i in range(k)]
    return FiniteLattice.from_covers(names, [(names[i], names[i + 1]) for i in range(k - 1)])


def m3() -> FiniteLattice:
    return FiniteLattice.from_covers(["0", "a", "b", "c", "1"],
                                     [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])


def n5() -> FiniteLattice:
    return FiniteLattice.from_covers(["0", "a", "b", "c", "1"],
                                     [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def boolean(k: int) -> FiniteLattice:
    if not 0 <= k <= 3:
        raise TooLarge("boolean lattices are built for k <= 3")
    n = 1 << k
    leq = np.array([[(a & b) == a for b in range(n)] for a in range(n)])
    return FiniteLattice(leq, [format(a, f"0{k}b") if k else "0" for a in range(n)])


def eq_lattice(n: int) -> tuple[FiniteLattice, list[Partition]]:
    parts = all_partitions(n)
    leq = np.array([[p <= q for q in parts] for p in parts])
    return FiniteLattice(leq, [str(p) for p in parts]), parts


def builtin_lattice(name: str) -> FiniteLattice:
    """``m3``, ``n5``, ``chain<k>`` / ``chain(k)``, ``boolean<k>`` / ``boolean(k)``."""
    key = name.lower().replace("(", "").replace(")", "").replace("_", "")
    if key == "m3":
        return m3()
    if key == "n5":
        return n5()
    for prefix, make in (("chain", chain), ("boolean", boolean)):
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            return make(int(key[len(prefix):]))
    raise KeyError(f"unknown lattice {name!r}; use m3, n5, chain<k> or boolean<k>")


# --- embeddings ---------------------------------------------------------------

@dataclass(frozen=True)
class NotFound:
    n: int
    nodes: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Embedding:
    n: int
    mapping: tuple[Partition, ...]  # image of each lattice element

    def verify(self, lat: FiniteLattice) -> bool:
        imgs = self.mapping
        if len(set(imgs)) != lat.size:
            return False
        for a in range(lat.size):
            for b in range(lat.size):
                if meet(imgs[a], imgs[b]) != imgs[lat.meet[a, b]]:
                    return False
                if join(imgs[a], imgs[b]) != imgs[lat.join[a, b]]:
                    return False
        return True


def embed_lattice(lat: FiniteLattice, n: int) -> Embedding | NotFound:
    """Backtracking search for a meet- and join-preserving injection into Eq(n)."""
    if lat.size > MAX_EMBED_SIZE or n > MAX_EMBED_N:
        raise TooLarge(f"embedding search is limited to |L| <= {MAX_EMBED_SIZE} and n <= {MAX_EMBED_N}")
    eq, parts = eq_lattice(n)
    size = lat.size
    # place elements top-down by number of elements below them, so atoms come first
    order = sorted(range(size), key=lambda a: (int(lat.leq[:, a].sum()), a))
    nodes = 0

    def propagate(f: dict[int, int]) -> dict[int, int] | None:
        f = dict(f)
        used = {v: k for k, v in f.items()}
        changed = True
        while changed:
            changed = False
            for a in list(f):
                for b in list(f):
                    for lt, et in ((lat.meet, eq.meet), (lat.join, eq.join)):
                        c, img = int(lt[a, b]), int(et[f[a], f[b]])
                        if c in f:
                            if f[c] != img:
                                return None
                        elif img in used:
                            return None
                        else:
                            f[c] = img
                            used[img] = c
                            changed = True
        return f

    def rec(f: dict[int, int]) -> dict[int, int] | None:
        nonlocal nodes
        nodes += 1
        todo = [a for a in order if a not in f]
        if not todo:
            return f
        a = todo[0]
        taken = set(f.values())
        for img in range(eq.size):
            if img in taken:
                continue
            # respect order against already placed elements
            if any(lat.leq[a, b] != eq.leq[img, f[b]] or lat.leq[b, a] != eq.leq[f[b], img] for b in f):
                continue
            g = propagate({**f, a: img})
            if g is not None:
                got = rec(g)
                if got is not None:
                    return got
        return None

    found = rec({})
    if found is None:
        return NotFound(n, nodes)
    return Embedding(n, tuple(parts[found[a]] for a in range(size)))


def smallest_embedding(lat: FiniteLattice, max_n: int = MAX_EMBED_N) -> Embedding | NotFound:
    last: NotFound | Embedding = NotFound(0, 0)
    for n in range(1, max_n + 1):
        last = embed_lattice(lat, n)
        if last:
            return last
    return last


# --- identity sets over the family --------------------------------------------

def id_set(pi: Partition, n: int) -> IdentitySet:
    """Id(pi): one identity w_i = w_j per related pair i < j of W_n (symmetric)."""
    family = build_family(n)
    if pi.ground_size != len(family):
        raise SizeMismatch(f"partition on {pi.ground_size} points, but W_{n} has {len(family)} words")
    return IdentitySet([Identity(family[i], family[j]) for i, j in pi.pairs()], closed_under_symmetry=True)


@dataclass
class ProxyReport:
    n: int
    partitions: list[Partition]
    class_systems: list[Partition]
    classes_match: bool
    injective: bool
    order_reversing: bool
    exhausted: bool
    mismatches: list[str]
    elapsed: float

    @property
    def ok(self) -> bool:
        return self.classes_match and self.injective and self.order_reversing and self.exhausted

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "partitions": [str(p) for p in self.partitions],
            "class_systems": [str(p) for p in self.class_systems],
            "classes_match": self.classes_match,
            "injective": self.injective,
            "order_reversing": self.order_reversing,
            "exhausted": self.exhausted,
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def deduction_classes(pi: Partition, n: int) -> tuple[Partition, bool]:
    """Partition of W_n by deduction closure under Id(pi), and whether every closure was exhausted."""
    family = build_family(n)
    index = {w: i for i, w in enumerate(family)}
    sigma = id_set(pi, n)
    first: dict[frozenset, int] = {}
    labels = []
    exhausted = True
    for w in family:
        res = closure(w, sigma)
        exhausted &= res.exhausted
        outside = [u for u in res.words if u not in index]
        if outside:
            raise AssertionError(f"closure of {format_word(w)} reached {format_word(outside[0])}")
        labels.append(first.setdefault(frozenset(index[u] for u in res.words), len(first)))
    return Partition(tuple(labels)), exhausted


def check_antiisomorphism_proxy(n: int = 2) -> ProxyReport:
    """Injectivity and order reversal of pi -> {deduction classes of Id(pi)} on Eq(W_n)."""
    t0 = time.perf_counter()
    m = len(build_family(n))
    parts = all_partitions(m)
    systems: list[Partition] = []
    exhausted = True
    mismatches: list[str] = []
    for p in parts:
        cls, ex = deduction_classes(p, n)
        exhausted &= ex
        systems.append(cls)
        if cls != p:
            mismatches.append(f"classes of Id({p}) are {cls}")
    injective = len(set(systems)) == len(parts)
    order_ok = True
    for (p, cp), (q, cq) in ((a, b) for a in zip(parts, systems) for b in zip(parts, systems)):
        # pi <= rho  iff  Id(pi)-classes refine Id(rho)-classes  iff  every Id(pi) identity is an Id(rho) consequence
        consequence = all(cq.related(i, j) for i, j in p.pairs())
        if not ((p <= q) == (cp <= cq) == consequence):
            order_ok = False
            mismatches.append(f"order fails for {p} vs {q}")
    return ProxyReport(n, parts, systems, not any("classes of" in s for s in mismatches), injective,
                       order_ok, exhausted, mismatches, time.perf_counter() - t0)
