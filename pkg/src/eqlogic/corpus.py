"""Hand-built identities that hold in M(xzytxy), covering every reduction step kind."""

from .words import Identity, parse_identity

REDUCTION_CORPUS_TEXT = (
    "x y t y x = y x t x y",
    "x y t x s y = y x t x s y",
    "y t x y z s z x = y t y x z s x z",
    "x t y x s y = x t x y s y",
    "x x y = y x x",
    "x y x y = y x y x",
    "x x x t y y = y y t x x x",
    "x y t x y = x y t x y",
    "x y z t z y x = z y x t x y z",
    "x y z t x y z = z y x t z y x",
    "x y t y x s z x z = y x t x y s x z z",
    "x y z t z x y = y z x t y z x",
    "x t y x s z y u z = x t x y s y z u z",
    "t t x y s y x = x y s y x t t",
    "x z t y z x s y = z x t z y x s y",
    "a b b a t x y t y x = t t x y y x b a a b",
    "x y z t y x s z = y x z t x y s z",
    "x t y z x s z y = x t y z x s y z",
    "x y t x z y s z = y x t x y z s z",
    "s x t t x s = s t t x x s",
)


def reduction_corpus() -> list[Identity]:
    return [parse_identity(t) for t in REDUCTION_CORPUS_TEXT]
