import pytest

from eqlogic.family import build_w
from eqlogic.monitors import (MONITORS, GeneratorOverflow, Instance, UnknownMonitor, check_instance, insert,
                              monitor_lemma, select)
from eqlogic.words import letters

# instance counts of the bounded generators at n = 2, frozen from a full generation run
GENERATED_AT_2 = {
    "u_C": 3196, "u_ch": 1836, "adj_2x2c2y": 1728, "adj_1x1c1y": 792, "cor_ix1hiy": 108,
    "adj_2c1c2": 1584, "adj_1c1c2": 144, "fic_class": 4, "three_isoterms": 9288,
}


def test_direct_rewrites_of_family_members_are_whole_word_identity_matches():
    rep = monitor_lemma("directly", 2)
    assert rep.exhaustive and rep.instances == rep.generated == 48
    assert rep.ok, rep.violations


def test_family_classes_are_closed():
    rep = monitor_lemma("fic_class", 2)
    assert rep.exhaustive and rep.ok


@pytest.mark.parametrize("name", [m for m in MONITORS if m not in ("directly", "fic_class")])
def test_monitor_samples_pass(name):
    rep = monitor_lemma(name, 2, limit=3)
    assert rep.generated == GENERATED_AT_2[name]
    assert rep.instances == 3 and not rep.exhaustive
    assert rep.ok, rep.violations
    assert set(rep.to_json()) >= {"name", "instances", "generated", "violations", "elapsed", "exhaustive"}


def test_checks_detect_a_broken_conclusion():
    # a family member itself is not a proper factor, so it does admit rewrites
    w = build_w(2, "00")
    assert len(check_instance("three_isoterms", 2, Instance("00", w, frozenset()))) == 3
    swapped = build_w(2, "11")
    assert check_instance("u_C", 2, Instance("00", swapped, frozenset()))


def test_errors():
    with pytest.raises(UnknownMonitor):
        monitor_lemma("nope")
    with pytest.raises(GeneratorOverflow):
        monitor_lemma("u_C", 2, max_instances=10)


def test_helpers():
    assert insert(letters("xy"), [(1, "h"), (1, "k"), (2, "z")]) == letters("xhkyz")
    items = list(range(10))
    assert select(items, None) == items and select(items, 20) == items
    assert select(items, 5) == [0, 2, 4, 6, 8]
