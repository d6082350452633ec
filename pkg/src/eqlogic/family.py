"""The named word families: p, q, r, w_xi, the identity lists and c-words.

Variable tokens: z_i -> ``z{i}``, z'_i -> ``zp{i}``, z''_i -> ``zpp{i}``
(same for t), s_i -> ``s{i}``, y_i -> ``y{i}``, a_i -> ``a{i}``,
b_i -> ``b{i}``, x_j^(i) -> ``x{j}_{i}``, plus bare ``a``, ``b``, ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .words import Identity, Word, ident


class BadN(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise BadN(f"n must be an integer >= 2, got {n!r}")


@dataclass(frozen=True)
class SignVector:
    """An element of S_2^n stored as swap flags; component i is ``swaps[i-1]``."""

    swaps: tuple[bool, ...]

    @property
    def n(self) -> int:
        return len(self.swaps)

    @classmethod
    def parse(cls, bits: str) -> "SignVector":
        if not bits or set(bits) - {"0", "1"}:
            raise BadN(f"sign vector must be a nonempty 0/1 string, got {bits!r}")
        return cls(tuple(c == "1" for c in bits))

    @classmethod
    def identity(cls, n: int) -> "SignVector":
        return cls((False,) * n)

    @property
    def bits(self) -> str:
        return "".join("1" if s else "0" for s in self.swaps)

    @property
    def index(self) -> int:
        """Position in the fixed enumeration of W_n (binary, first component most significant)."""
        return int(self.bits, 2)

    def hamming(self, other: "SignVector") -> int:
        return sum(a != b for a, b in zip(self.swaps, other.swaps))


def sign_vectors(n: int) -> list[SignVector]:
    _check_n(n)
    return [SignVector(bits) for bits in product((False, True), repeat=n)]


def build_p(n: int) -> Word:
    _check_n(n)
    out: list[str] = []
    for prime in ("", "p", "pp"):
        for i in range(1, n + 1):
            out += [f"z{prime}{i}", f"t{prime}{i}"]
    return tuple(out)


def build_q(n: int) -> Word:
    _check_n(n)
    out: list[str] = []
    for i in range(n + 1):
        out += [f"s{i}", f"y{i}"]
    return tuple(out) + ("t",)


def build_r(n: int) -> Word:
    _check_n(n)
    out = ["b", "y0"]
    for i in range(1, n + 1):
        out += [f"x1_{i}", f"z{i}", f"a{i}", f"zp{i}", f"b{i}", f"zpp{i}", f"x2_{i}", f"y{i}"]
    out.append("a")
    return tuple(out)


def middle(n: int, xi: SignVector) -> Word:
    """The section a_1..a_n a (x pairs) b b_1..b_n between p and q."""
    _check_n(n)
    if xi.n != n:
        raise BadN(f"sign vector has {xi.n} components, expected {n}")
    out = [f"a{i}" for i in range(1, n + 1)] + ["a"]
    for i, swap in enumerate(xi.swaps, start=1):
        pair = [f"x1_{i}", f"x2_{i}"]
        out += pair[::-1] if swap else pair
    out += ["b"] + [f"b{i}" for i in range(1, n + 1)]
    return tuple(out)


def build_w(n: int, xi: SignVector | str) -> Word:
    if isinstance(xi, str):
        xi = SignVector.parse(xi)
    return build_p(n) + middle(n, xi) + build_q(n) + build_r(n)


def build_family(n: int) -> list[Word]:
    """W_n in the fixed order: index of w_xi is xi read as a binary number."""
    return [build_w(n, xi) for xi in sign_vectors(n)]


def expected_simple_vars(n: int) -> set[str]:
    names = {"t"} | {f"s{i}" for i in range(n + 1)}
    for prime in ("", "p", "pp"):
        names |= {f"t{prime}{i}" for i in range(1, n + 1)}
    return names


def five_identities() -> list[Identity]:
    return [
        ident("xx", "xxx"),
        ident("xxy", "yxx"),
        ident("xyxzx", "xxyz"),
        ident("xzxyty", "xzyxty"),
        ident("xzytxy", "xzytyx"),
    ]


def two_identities() -> list[Identity]:
    return [ident("xyzxy", "yxzyx"), ident("xyzyx", "yxzxy")]


@dataclass(frozen=True)
class Permutation:
    """Bijection on 1..d; ``images[i-1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]


def c_words(n: int, m: int, k: int, rho: Permutation | Sequence[int]) -> tuple[Word, Word]:
    if min(n, m, k) < 1:
        raise BadN("n, m, k must all be >= 1")
    if not isinstance(rho, Permutation):
        rho = Permutation(tuple(rho))
    if rho.degree != n + m + k:
        raise DegreeMismatch(f"permutation degree {rho.degree} != {n + m + k}")

    def zt(lo: int, hi: int) -> list[str]:
        return [v for i in range(lo, hi + 1) for v in (f"z{i}", f"t{i}")]

    head = zt(1, n)
    mid = zt(n + 1, n + m) + ["x"] + [f"z{rho(i)}" for i in range(1, n + m + k + 1)] + ["y"]
    tail = [v for i in range(n + m + 1, n + m + k + 1) for v in (f"t{i}", f"z{i}")]
    c = tuple(head + ["x", "y", "t"] + mid + tail)
    c_prime = tuple(head + ["y", "x", "t"] + mid + tail)
    return c, c_prime


def square_pullout_words(n: int, m: int, rho: Permutation | Sequence[int]) -> tuple[Word, Word]:
    """Both sides of the square-pullout schema used when normalising identities.

    prod_{i<=n}(z_i t_i) x prod_{i<=n+m} z_{i rho} x prod_{n<i<=n+m}(t_i z_i)
    against the same word with the second x moved next to the first.
    """
    if not isinstance(rho, Permutation):
        rho = Permutation(tuple(rho))
    if rho.degree != n + m:
        raise DegreeMismatch(f"permutation degree {rho.degree} != {n + m}")
    head = [v for i in range(1, n + 1) for v in (f"z{i}", f"t{i}")]
    zs = [f"z{rho(i)}" for i in range(1, n + m + 1)]
    tail = [v for i in range(n + 1, n + m + 1) for v in (f"t{i}", f"z{i}")]
    return tuple(head + ["x"] + zs + ["x"] + tail), tuple(head + ["x", "x"] + zs + tail)


def embedding_substitution(n: int) -> dict[str, Word]:
    """Substitution sending x y t z s x z y onto a factor of w_epsilon."""
    _check_n(n)
    t_img = ["x2_2"]
    for i in range(3, n + 1):
        t_img += [f"x1_{i}", f"x2_{i}"]
    t_img += ["b"] + [f"b{i}" for i in range(1, n + 1)] + ["s0", "y0", "s1"]
    s_img: list[str] = []
    for i in range(2, n + 1):
        s_img += [f"s{i}", f"y{i}"]
    s_img += ["t", "b", "y0", "x1_1", "z1", "a1", "zp1", "b1", "zpp1"]
    return {
        "x": ("x2_1",),
        "y": ("x1_2",),
        "z": ("y1",),
        "t": tuple(t_img),
        "s": tuple(s_img),
    }
