"""Bounded isoterm search for small words in the built-in monoids.

Prints, for every word of the given length over x, y, z (up to renaming
by first occurrence), whether it is an isoterm up to the bound.
"""

import argparse
import itertools

from eqlogic.monoid import IsotermUpTo, builtin
from eqlogic.words import format_word


def canonical_words(length: int, letters: str = "xyz"):
    for w in itertools.product(letters, repeat=length):
        order = list(dict.fromkeys(w))
        if order == list(letters[:len(order)]):
            yield w


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--monoid", default="b21")
    ap.add_argument("--length", type=int, default=4)
    ap.add_argument("--bound", type=int, help="default: length + 2")
    args = ap.parse_args(argv)
    m = builtin(args.monoid)
    bound = args.bound or args.length + 2
    iso = 0
    for w in canonical_words(args.length):
        res = m.bounded_isoterm(w, bound)
        ok = isinstance(res, IsotermUpTo)
        iso += ok
        print(f"{format_word(w):<16} {'isoterm' if ok else 'collapses to ' + format_word(res.word)}")
    print(f"{iso} isoterms up to length {bound} in {args.monoid}")


if __name__ == "__main__":
    main()
