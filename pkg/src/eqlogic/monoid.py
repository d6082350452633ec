"""Finite monoids given by Cayley tables, and brute-force identity checking."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from math import isqrt
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .words import Identity, Word


class MonoidError(ValueError):
    pass


class NotAssociative(MonoidError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
        self.triple = (i, j, k)


class NoIdentity(MonoidError):
    pass


class UnboundVariable(MonoidError):
    pass


class TooManyVariables(MonoidError):
    pass


class BadParam(MonoidError):
    pass


DEFAULT_MAX_VARS = 8


@dataclass(frozen=True)
class IsotermUpTo:
    bound: int


@dataclass(frozen=True)
class Counterexample:
    word: Word


@dataclass(frozen=True)
class Satisfaction:
    holds: bool
    witness: dict[str, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


class FiniteMonoid:
    """Monoid on {0..size-1} with a validated multiplication table."""

    def __init__(self, table, identity: int, names: Sequence[str] | None = None, *,
                 check: bool = True, generators: Mapping[str, int] | None = None,
                 relations: Sequence[tuple[str, str]] = ()):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise MonoidError("table must be a nonempty square array")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise MonoidError("table entries out of range")
        if not 0 <= identity < n:
            raise NoIdentity(f"identity index {identity} out of range")
        self.table = t
        self.table.setflags(write=False)
        self.size = n
        self.identity = identity
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        if len(self.names) != n:
            raise MonoidError("one name per element required")
        self.generators = dict(generators or {})
        self.relations = list(relations)
        if check:
            self.validate()
        self.zero = self._find_zero()

    def validate(self) -> None:
        """Raise NoIdentity or NotAssociative if the table is not a monoid."""
        t, e = self.table, self.identity
        idx = np.arange(self.size)
        if not (np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)):
            raise NoIdentity(f"element {self.names[e]} is not a two-sided identity")
        # (ab)c vs a(bc) for all triples at once
        left = t[t[:, :, None], idx[None, None, :]]
        right = t[idx[:, None, None], t[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            raise NotAssociative(*map(int, bad[0]))

    def _find_zero(self) -> int | None:
        for z in range(self.size):
            if np.all(self.table[z] == z) and np.all(self.table[:, z] == z):
                return z
        return None

    # -- element helpers ----------------------------------------------------

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteMonoid(size={self.size})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def element(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise MonoidError(f"no element named {name!r}") from None

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def product_of(self, gens: str | Sequence[str]) -> int:
        """Value of a word over generator names ('1' and '0' allowed)."""
        out = self.identity
        for g in gens:
            if g == "1":
                continue
            if g == "0":
                if self.zero is None:
                    raise MonoidError("monoid has no zero")
                v = self.zero
            else:
                v = self.generators[g] if g in self.generators else self.element(g)
            out = self.mul(out, v)
        return out

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_group(self) -> bool:
        return all((self.table[a] == self.identity).any() for a in range(self.size))

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, w: Sequence[str], asg: Mapping[str, int]) -> int:
        out = self.identity
        for x in w:
            if x not in asg:
                raise UnboundVariable(x)
            out = int(self.table[out, asg[x]])
        return out

    def _grid(self, names: Sequence[str]) -> dict[str, np.ndarray]:
        k = len(names)
        if k == 0:
            return {}
        grids = np.indices((self.size,) * k).reshape(k, -1)
        return dict(zip(names, grids))

    def _values(self, w: Sequence[str], grid: Mapping[str, np.ndarray], count: int) -> np.ndarray:
        acc = np.full(count, self.identity, dtype=np.int64)
        for x in w:
            acc = self.table[acc, grid[x]]
        return acc

    def satisfies(self, identity: Identity, max_vars: int = DEFAULT_MAX_VARS) -> Satisfaction:
        names = sorted(identity.content())
        if len(names) > max_vars:
            raise TooManyVariables(f"{len(names)} variables exceed the cap of {max_vars}")
        grid = self._grid(names)
        count = self.size ** len(names)
        lhs = self._values(identity.lhs, grid, count)
        rhs = self._values(identity.rhs, grid, count)
        bad = np.flatnonzero(lhs != rhs)
        if len(bad) == 0:
            return Satisfaction(True)
        i = int(bad[0])
        return Satisfaction(False, {x: int(grid[x][i]) for x in names})

    def index_and_period(self) -> tuple[int, int]:
        """Least (m, k), m first, with x^(m+k) = x^m for every element x."""
        n = self.size
        powers = [np.arange(n)]  # powers[j] = x^(j+1)
        while True:
            for m in range(1, len(powers) + 1):
                for k in range(1, len(powers) - m + 1):
                    if np.array_equal(powers[m + k - 1], powers[m - 1]):
                        return m, k
            powers.append(self.table[powers[-1], np.arange(n)])

    def bounded_isoterm(self, w: Sequence[str], bound: int | None = None,
                        max_vars: int = DEFAULT_MAX_VARS) -> IsotermUpTo | Counterexample:
        """Check every w' != w over content(w) with |w'| <= bound, shortest first."""
        w = tuple(w)
        bound = len(w) + 2 if bound is None else bound
        names = sorted(set(w))
        if len(names) > max_vars:
            raise TooManyVariables(f"{len(names)} variables exceed the cap of {max_vars}")
        grid = self._grid(names)
        count = self.size ** len(names)
        target = self._values(w, grid, count)
        level = [((), np.full(count, self.identity, dtype=np.int64))]
        for length in range(bound + 1):
            for word, vals in level:
                if word != w and np.array_equal(vals, target):
                    return Counterexample(word)
            if length == bound:
                break
            level = [(word + (x,), self.table[vals, grid[x]]) for word, vals in level for x in names]
        return IsotermUpTo(bound)

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {"names": self.names, "table": self.table.tolist(), "identity": self.identity}

    @classmethod
    def from_json(cls, data: Mapping | str, check: bool = True) -> "FiniteMonoid":
        if isinstance(data, str):
            data = json.loads(data)
        table = data["table"]
        if table and not isinstance(table[0], list):
            n = isqrt(len(table))
            table = [table[i * n:(i + 1) * n] for i in range(n)]
        return cls(table, data["identity"], data.get("names"), check=check)

    def cayley_text(self) -> str:
        width = max(len(s) for s in self.names)
        head = " " * width + " | " + " ".join(s.rjust(width) for s in self.names)
        rows = [head, "-" * len(head)]
        for a in range(self.size):
            rows.append(self.names[a].rjust(width) + " | "
                        + " ".join(self.names[b].rjust(width) for b in self.table[a]))
        return "\n".join(rows)


def build(table, identity: int, names: Sequence[str] | None = None) -> FiniteMonoid:
    return FiniteMonoid(table, identity, names)


# --- built-in monoids ------------------------------------------------------

def from_generators(gens: Mapping[str, Hashable], mul: Callable, one: Hashable,
                    relations: Sequence[tuple[str, str]] = (), limit: int = 10_000) -> FiniteMonoid:
    """Close concrete generators under multiplication; names are shortlex-least words."""
    elems = [one]
    names = ["1"]
    index = {one: 0}
    frontier = 0
    while frontier < len(elems):
        e, en = elems[frontier], names[frontier]
        frontier += 1
        for g, gv in gens.items():
            f = mul(e, gv)
            if f not in index:
                index[f] = len(elems)
                elems.append(f)
                names.append(g if en == "1" else en + g)
                if len(elems) > limit:
                    raise BadParam("generated monoid exceeds the size limit")
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    m = FiniteMonoid(table, 0, names, generators={g: index[v] for g, v in gens.items()})
    if m.zero is not None:
        m.names[m.zero] = "0"
    m.relations = list(relations)
    for lhs, rhs in m.relations:
        if m.product_of(lhs) != m.product_of(rhs):
            raise MonoidError(f"relation {lhs} = {rhs} fails in the generated table")
    return m


def _matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


_I2 = ((1, 0), (0, 1))


def brandt() -> FiniteMonoid:
    """B2^1 = <a, b | aba = a, bab = b, aa = bb = 0> with an identity adjoined."""
    return from_generators({"a": ((0, 1), (0, 0)), "b": ((0, 0), (1, 0))}, _matmul, _I2,
                           [("aba", "a"), ("bab", "b"), ("aa", "0"), ("bb", "0")])


def a21() -> FiniteMonoid:
    """A2^1 = <a, b | aba = a, bab = b, aa = 0, bb = b> with an identity adjoined."""
    return from_generators({"a": ((0, 1), (0, 0)), "b": ((1, 0), (1, 0))}, _matmul, _I2,
                           [("aba", "a"), ("bab", "b"), ("aa", "0"), ("bb", "b")])


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


def _compose(f, g):
    return tuple(g[i] for i in f)


def dihedral(p: int) -> FiniteMonoid:
    """D_p = <a, b | a^p = b^2 = (ab)^2 = 1> for an odd prime p."""
    if not isinstance(p, int) or p <= 2 or not _is_prime(p):
        raise BadParam(f"dihedral group needs an odd prime, got {p!r}")
    rot = tuple((i + 1) % p for i in range(p))
    ref = tuple((-i) % p for i in range(p))
    return from_generators({"a": rot, "b": ref}, _compose, tuple(range(p)),
                           [("a" * p, "1"), ("bb", "1"), ("abab", "1")])


def _qmul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion() -> FiniteMonoid:
    """Q8 = <i, j, k | i^2 = j^2 = k^2 = ijk>, realised by unit quaternions."""
    return from_generators({"i": (0, 1, 0, 0), "j": (0, 0, 1, 0), "k": (0, 0, 0, 1)}, _qmul, (1, 0, 0, 0),
                           [("ii", "jj"), ("jj", "kk"), ("kk", "ijk")])


def cyclic(k: int) -> FiniteMonoid:
    if not isinstance(k, int) or k < 1:
        raise BadParam(f"cyclic group order must be >= 1, got {k!r}")
    m = from_generators({"a": 1 % k}, lambda x, y: (x + y) % k, 0, [("a" * k, "1")])
    return m


def trivial() -> FiniteMonoid:
    return FiniteMonoid([[0]], 0, ["1"])


def direct_product(m: FiniteMonoid, n: FiniteMonoid) -> FiniteMonoid:
    pairs = list(product(range(m.size), range(n.size)))
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(m.mul(a, c), n.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({m.names[a]},{n.names[b]})" for a, b in pairs]
    return FiniteMonoid(table, index[(m.identity, n.identity)], names)


def builtin(name: str, **params) -> FiniteMonoid:
    """Look up a built-in monoid: b21, a21, dihedral(p), quaternion, cyclic(k), trivial."""
    key = name.lower()
    if key in ("b21", "brandt"):
        return brandt()
    if key == "a21":
        return a21()
    if key in ("dihedral", "d"):
        return dihedral(params.get("p", 3))
    if key.startswith("d") and key[1:].isdigit():
        return dihedral(int(key[1:]))
    if key in ("quaternion", "q8"):
        return quaternion()
    if key in ("cyclic", "z"):
        return cyclic(params.get("k", 2))
    if key.startswith("z") and key[1:].isdigit():
        return cyclic(int(key[1:]))
    if key == "trivial":
        return trivial()
    raise BadParam(f"unknown built-in monoid {name!r}")


BUILTIN_NAMES = ("b21", "a21", "d3", "d5", "q8", "z2", "trivial")
