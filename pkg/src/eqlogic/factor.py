"""Factor monoids M(W) and an exact identity decision procedure for them.

Nonzero elements of M(W) are words, and a product is nonzero exactly when
the concatenation is a factor of some member of W.  So an identity u = v
fails under phi iff (a) the sides have different content and some
variable goes to 0, or (b) phi(u) is a factor of some w in W while
phi(v) differs from it as a word (or the same with u and v swapped).
Case (b) is a rewrite-site search of u inside w with the extra condition
phi(D_u) != phi(D_v), where D_u, D_v are what remains after stripping the
common prefix and suffix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .matching import rewrite_sites
from .monoid import Counterexample, FiniteMonoid, IsotermUpTo
from .words import Identity, Word, format_word


class _Zero:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "0"


ZERO = _Zero()
Element = "Word | _Zero"

DEFAULT_TABLE_CAP = 20_000


class TableTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    holds: bool
    witness: dict | None = None  # variable -> Word or ZERO

    def __bool__(self) -> bool:
        return self.holds


def _witness_text(witness: Mapping) -> str:
    return ", ".join(f"{x}->{'0' if u is ZERO else format_word(u)}" for x, u in sorted(witness.items()))


class FactorMonoid:
    def __init__(self, words: Iterable[Sequence[str]]):
        ws = []
        for w in words:
            w = tuple(w)
            if not w:
                raise ValueError("factor monoids are built from nonempty words")
            if w not in ws:
                ws.append(w)
        if not ws:
            raise ValueError("need at least one word")
        self.words: tuple[Word, ...] = tuple(ws)
        facs = {w[i:j] for w in ws for i in range(len(w)) for j in range(i + 1, len(w) + 1)}
        self.factors: list[Word] = sorted(facs, key=lambda u: (len(u), u))
        self._factor_set = facs

    @property
    def size(self) -> int:
        return len(self.factors) + 2

    def __len__(self) -> int:
        return self.size

    def elements(self) -> list:
        return [()] + self.factors + [ZERO]

    def is_element(self, u) -> bool:
        return u is ZERO or u == () or u in self._factor_set

    def multiply(self, u, v):
        if u is ZERO or v is ZERO:
            return ZERO
        uv = u + v
        return uv if (not uv or uv in self._factor_set) else ZERO

    def evaluate(self, w: Sequence[str], phi: Mapping[str, object]):
        out: object = ()
        for x in w:
            out = self.multiply(out, phi[x])
            if out is ZERO:
                return ZERO
        return out

    def to_finite_monoid(self, cap: int = DEFAULT_TABLE_CAP) -> FiniteMonoid:
        elems = self.elements()
        if len(elems) > cap:
            raise TableTooLarge(f"{len(elems)} elements exceed the table cap of {cap}")
        index = {e: i for i, e in enumerate(elems)}
        table = [[index[self.multiply(a, b)] for b in elems] for a in elems]
        names = ["1"] + [format_word(u) for u in self.factors] + ["0"]
        return FiniteMonoid(table, 0, names, check=False)

    # -- decision -----------------------------------------------------------

    def decide(self, identity: Identity) -> Decision:
        return decide_identity(self, identity)

    def find_violation(self, u: Word, v: Word) -> dict | None:
        """A substitution with phi(u) a factor of W and phi(v) != phi(u), if any."""
        for w in self.words:
            for site in rewrite_sites(u, v, w):
                phi = site.solution.substitution()
                phi = {x: phi[x] for x in set(u)}
                return phi
        return None


def decide_identity(fm: FactorMonoid, identity: Identity) -> Decision:
    u, v = identity.lhs, identity.rhs
    if u == v:
        return Decision(True)
    cu, cv = set(u), set(v)
    if cu != cv:
        x = min(cu ^ cv)
        witness = {y: () for y in cu | cv}
        witness[x] = ZERO
        return Decision(False, witness)
    for a, b in ((u, v), (v, u)):
        phi = fm.find_violation(a, b)
        if phi is not None:
            assert fm.evaluate(a, phi) != fm.evaluate(b, phi)
            return Decision(False, phi)
    return Decision(True)


def brute_force_decide(fm: FactorMonoid, identity: Identity) -> Decision:
    """Reference answer by evaluating every assignment on the materialised table."""
    m = fm.to_finite_monoid()
    res = m.satisfies(identity)
    if res.holds:
        return Decision(True)
    elems = fm.elements()
    return Decision(False, {x: elems[i] for x, i in res.witness.items()})


def isoterm_certificate(fm: FactorMonoid, w: Sequence[str]) -> dict[str, Word] | None:
    """An injective letter-to-letter substitution sending w onto a factor of W.

    Its existence proves w is an isoterm: phi(w) is nonzero and phi is
    injective on words, so phi(w') != phi(w) for every w' != w.
    """
    w = tuple(w)
    names = sorted(set(w))
    for target in fm.words:
        for i in range(len(target) - len(w) + 1):
            phi: dict[str, Word] = {}
            used: dict[str, str] = {}
            ok = True
            for x, c in zip(w, target[i:i + len(w)]):
                if x in phi:
                    ok = phi[x] == (c,)
                elif c in used:
                    ok = False
                else:
                    phi[x] = (c,)
                    used[c] = x
                if not ok:
                    break
            if ok and len(phi) == len(names):
                return phi
    return None


def is_isoterm_for_factor_monoid(fm: FactorMonoid, w: Sequence[str], bound: int | None = None,
                                 use_certificate: bool = True) -> IsotermUpTo | Counterexample:
    """Bounded isoterm check via decide_identity, shortest candidates first."""
    w = tuple(w)
    bound = len(w) + 2 if bound is None else bound
    if use_certificate and isoterm_certificate(fm, w) is not None:
        return IsotermUpTo(bound)
    names = sorted(set(w))
    level: list[Word] = [()]
    for length in range(bound + 1):
        for cand in level:
            if cand != w and fm.decide(Identity(w, cand)).holds:
                return Counterexample(cand)
        if length < bound:
            level = [c + (x,) for c in level for x in names]
    return IsotermUpTo(bound)
