import json
import subprocess
import sys

import pytest

from eqlogic.cli import main
from eqlogic.monoid import brandt


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in ("elapsed_ms", "elapsed")}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@pytest.fixture
def files(tmp_path):
    (tmp_path / "pair.txt").write_text("# two words\nxyzxy\n\nxyzyx\n")
    (tmp_path / "family.txt").write_text("w_00\nw_01\nw_10\nw_11\n")
    (tmp_path / "square.txt").write_text("x x = x x x\n")
    (tmp_path / "fam01.txt").write_text("w_00 = w_01\n")
    bad = brandt().to_json()
    bad["table"][1][2] = 1
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    (tmp_path / "garbage.json").write_text("{}")
    return tmp_path


def test_check_in_builtin_monoids(capsys):
    code, rep = run_json(capsys, "check", "x y z x y = y x z y x", "--monoid", "q8")
    assert code == 0 and rep["data"]["verdict"] == "satisfied" and rep["overall"] == "pass"
    code, rep = run_json(capsys, "check", "x y z x y = y x z y x", "--monoid", "d3")
    assert code == 1 and rep["data"]["verdict"] == "violated"
    assert set(rep["checks"][0]["witness"]) == {"x", "y", "z"}


def test_check_in_factor_monoid(capsys):
    code, rep = run_json(capsys, "check", "x y = y x", "--words", "xy")
    assert code == 1 and rep["checks"][0]["witness"] == {"x": "x", "y": "y"}
    code, rep = run_json(capsys, "check", "w_00 = w_11", "--words", "x y t z s x z y")
    assert code == 0


def test_monoid_show(capsys):
    code, rep = run_json(capsys, "monoid", "show", "b21")
    assert code == 0 and rep["data"]["size"] == 6 and (rep["data"]["index"], rep["data"]["period"]) == (2, 1)
    code, text, _ = run(capsys, "monoid", "show", "b21")
    assert "6 elements" in text


def test_factor_monoid_commands(capsys, files):
    code, rep = run_json(capsys, "factor-monoid", "build", str(files / "pair.txt"))
    assert code == 0 and rep["data"]["words"] == ["x y z x y", "x y z y x"]
    code, rep = run_json(capsys, "factor-monoid", "build", str(files / "family.txt"))
    assert rep["data"]["size"] == 2830
    code, rep = run_json(capsys, "factor-monoid", "check", str(files / "pair.txt"), "x z y t x y = x z y t y x")
    assert code == 1 and rep["data"]["verdict"] == "violated"
    code, rep = run_json(capsys, "factor-monoid", "check", str(files / "pair.txt"), "x x = x x x")
    assert code == 0


def test_family_gen(capsys):
    code, rep = run_json(capsys, "family", "gen", "--n", "2", "--xi", "01")
    assert code == 0 and rep["data"]["length"] == 48
    code, rep = run_json(capsys, "family", "gen", "--n", "3")
    assert sorted(rep["data"]["words"]) == [format(k, "03b") for k in range(8)]


def test_rewrite_commands(capsys, files):
    sq = str(files / "square.txt")
    code, rep = run_json(capsys, "rewrite", "step", "x x", "--sigma", sq, "--maxlen", "4")
    assert code == 0 and rep["data"]["results"] == ["x x x"]
    code, rep = run_json(capsys, "rewrite", "closure", "x x", "--sigma", sq, "--maxlen", "5")
    assert rep["data"]["exhausted"] and len(rep["data"]["words"]) == 4
    code, rep = run_json(capsys, "rewrite", "closure", "x x", "--sigma", sq, "--maxlen", "9", "--depth", "2")
    assert code == 0 and rep["checks"][0]["status"] == "no-within-caps"
    code, rep = run_json(capsys, "rewrite", "derivable", "w_00", "w_01", "--sigma", str(files / "fam01.txt"),
                         "--maxlen", "48")
    assert code == 0 and rep["data"]["derivable"] and len(rep["data"]["path"]) == 2
    code, rep = run_json(capsys, "rewrite", "derivable", "w_00", "w_10", "--sigma", str(files / "fam01.txt"),
                         "--maxlen", "48")
    assert code == 0 and not rep["data"]["derivable"] and rep["checks"][0]["status"] == "no-within-caps"


def test_lattice_commands(capsys):
    code, rep = run_json(capsys, "lattice", "eq", "--n", "4")
    assert code == 0 and rep["data"]["count"] == 15
    code, rep = run_json(capsys, "lattice", "embed", "--lattice", "n5", "--n", "4")
    assert code == 0 and rep["data"]["found"]
    code, rep = run_json(capsys, "lattice", "embed", "--lattice", "n5", "--n", "3")
    assert code == 1 and not rep["data"]["found"]
    code, rep = run_json(capsys, "lattice", "proxy")
    assert code == 0 and rep["data"]["ok"]


def test_verify_lemma(capsys):
    code, rep = run_json(capsys, "verify", "lemma", "directly")
    assert code == 0 and rep["data"]["exhaustive"] and rep["data"]["instances"] == 48
    code, rep = run_json(capsys, "verify", "lemma", "u_C", "--limit", "2", "--zeta", "01")
    assert code == 0 and rep["data"]["instances"] == 2 and not rep["data"]["exhaustive"]


def test_verify_all_and_fault_injection(capsys, files):
    code, first = run_json(capsys, "verify", "all")
    assert code == 0 and first["overall"] == "pass"
    _, second = run_json(capsys, "verify", "all")
    assert strip_timing(first) == strip_timing(second)
    code, rep = run_json(capsys, "verify", "all", "--override", f"b21={files / 'bad.json'}")
    assert code == 1
    failed = [c["name"] for c in rep["checks"] if c["status"] == "fail"]
    assert failed == ["builtin_monoids"]


def test_usage_errors(capsys, files):
    cases = [
        ("check", "x = y = z", "--monoid", "b21"),
        ("check", "x y = y x", "--monoid", "nosuch"),
        ("check", "x y = y x"),
        ("factor-monoid", "build", str(files / "missing.txt")),
        ("check", "x y = y x", "--monoid", str(files / "garbage.json")),
        ("family", "gen", "--n", "1"),
        ("family", "gen", "--n", "2", "--xi", "0"),
        ("lattice", "eq", "--n", "12"),
        ("lattice", "embed", "--lattice", "square"),
        ("verify", "all", "--override", "b21"),
    ]
    for argv in cases:
        code, _, err = run(capsys, *argv)
        assert code == 2, argv
        assert "error" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "eqlogic", "family", "gen", "--xi", "00"],
                         capture_output=True, text=True, check=True)
    toks = out.stdout.split()
    assert len(toks) == 48 and toks[:3] == ["z1", "t1", "z2"] and toks[-1] == "a"
