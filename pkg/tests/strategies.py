"""Shared hypothesis strategies for words over small alphabets."""

from hypothesis import strategies as st


def words(alphabet: str = "xyzt", min_size: int = 0, max_size: int = 8):
    return st.lists(st.sampled_from(alphabet), min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def twice_words(draw, pairs: str = "xyzu", simples: str = "st", max_pairs: int = 4):
    """Words where every multiple letter occurs exactly twice."""
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_pairs))
    singles = draw(st.lists(st.sampled_from(simples), unique=True))
    letters = [c for c in chosen for _ in range(2)] + singles
    return tuple(draw(st.permutations(letters)))
