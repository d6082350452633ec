"""Command-line entry point: ad-hoc queries and the verification suites.

Exit codes: 0 when every check passes, 1 when some check fails, 2 on a
usage error (bad word syntax, unknown monoid, missing file, ...).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .factor import ZERO, FactorMonoid, TableTooLarge, decide_identity
from .family import BadN, build_family, build_w, sign_vectors
from .lattice import (SizeMismatch, TooLarge, all_partitions, builtin_lattice, check_antiisomorphism_proxy,
                      embed_lattice)
from .monitors import MONITORS, GeneratorOverflow, UnknownMonitor, monitor_lemma
from .monoid import FiniteMonoid, MonoidError, builtin
from .rewrite import CapExceeded, IdentitySet, closure, derivable, direct_deductions
from .suite import FAIL, OPEN, PASS, CheckRecord, run_plan, verification_plan
from .words import Identity, Word, WordError, format_word, letters, parse_word

_SHORTHAND = re.compile(r"^w_([01]+)$")


class UsageError(Exception):
    pass


# --- reports -----------------------------------------------------------------

@dataclass
class Report:
    command: str
    parameters: dict
    checks: list[CheckRecord] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    def to_json(self) -> dict:
        return {"command": self.command, "parameters": self.parameters,
                "checks": [c.to_json() for c in self.checks], "data": self.data, "overall": self.overall}

    def render(self) -> str:
        lines = list(self.text)
        for c in self.checks:
            extra = f"  witness: {c.witness}" if c.witness not in (None, [], {}) else ""
            lines.append(f"[{c.status}] {c.name} {json.dumps(c.counts, sort_keys=True)}{extra}")
        if self.checks:
            lines.append(f"overall: {self.overall}")
        return "\n".join(lines)


# --- input parsing -----------------------------------------------------------

def expand_tokens(text: str) -> Word:
    """Word text with ``w_<bits>`` tokens replaced by the family word for those bits."""
    toks = text.split()
    if any(_SHORTHAND.match(t) for t in toks):
        out: list[str] = []
        for t in toks:
            m = _SHORTHAND.match(t)
            out += build_w(len(m.group(1)), m.group(1)) if m else [t]
        return tuple(out)
    return parse_word(text)


def parse_identity_arg(text: str) -> Identity:
    if text.count("=") != 1:
        raise UsageError(f"identity needs exactly one '=': {text!r}")
    left, right = text.split("=")
    return Identity(expand_tokens(left), expand_tokens(right))


def parse_word_entry(text: str) -> Word:
    """One member of a word set: spaced tokens, a ``w_<bits>`` name, or unspaced single letters."""
    text = text.strip()
    if _SHORTHAND.match(text) or " " in text or text == "1":
        return expand_tokens(text)
    return letters(text)


def read_lines(path: str) -> list[str]:
    try:
        raw = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return [ln.strip() for ln in raw if ln.strip() and not ln.lstrip().startswith("#")]


def load_words(path: str) -> list[Word]:
    words = [parse_word_entry(ln) for ln in read_lines(path)]
    if not words:
        raise UsageError(f"{path} contains no words")
    return words


def load_sigma(path: str) -> IdentitySet:
    return IdentitySet([parse_identity_arg(ln) for ln in read_lines(path)])


def load_monoid(spec: str, check: bool = True) -> FiniteMonoid:
    if Path(spec).is_file():
        try:
            return FiniteMonoid.from_json(Path(spec).read_text(), check=check)
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"{spec} is not a monoid file: {exc}") from exc
    return builtin(spec)


def _element_text(u) -> str:
    return "0" if u is ZERO else format_word(u)


# --- commands ----------------------------------------------------------------

def cmd_check(identity: str, monoid: str | None = None, words: Sequence[str] | None = None) -> Report:
    idn = parse_identity_arg(identity)
    if (monoid is None) == (not words):
        raise UsageError("give exactly one of --monoid or --words")
    if monoid is not None:
        m = load_monoid(monoid)
        res = m.satisfies(idn)
        witness = None if res.holds else {x: m.names[i] for x, i in sorted(res.witness.items())}
        target = {"monoid": monoid}
    else:
        ws = [parse_word_entry(e) for group in words for e in group.split(",") if e.strip()]
        res = decide_identity(FactorMonoid(ws), idn)
        witness = None if res.holds else {x: _element_text(u) for x, u in sorted(res.witness.items())}
        target = {"words": [format_word(w) for w in ws]}
    verdict = "satisfied" if res.holds else "violated"
    rec = CheckRecord("identity", PASS if res.holds else FAIL, {"variables": len(idn.content())}, witness)
    rep = Report("check", {**target, "identity": str(idn)}, [rec], {"verdict": verdict})
    rep.text.append(verdict if res.holds else f"violated; witness {witness}")
    return rep


def cmd_monoid_show(name: str) -> Report:
    m = load_monoid(name)
    index, period = m.index_and_period()
    data = {**m.to_json(), "size": m.size, "zero": m.zero, "index": index, "period": period,
            "commutative": m.is_commutative(), "group": m.is_group()}
    rep = Report("monoid show", {"monoid": name}, data=data)
    rep.text += [f"{name}: {m.size} elements, index {index}, period {period}", m.cayley_text()]
    return rep


def cmd_factor_build(wordfile: str, table: bool = False) -> Report:
    fm = FactorMonoid(load_words(wordfile))
    data = {"words": [format_word(w) for w in fm.words], "size": fm.size}
    rep = Report("factor-monoid build", {"wordfile": wordfile}, data=data)
    rep.text.append(f"size {fm.size}")
    if table:
        try:
            rep.text.append(fm.to_finite_monoid().cayley_text())
        except TableTooLarge as exc:
            rep.text.append(str(exc))
    return rep


def cmd_factor_check(wordfile: str, identity: str) -> Report:
    fm = FactorMonoid(load_words(wordfile))
    idn = parse_identity_arg(identity)
    res = decide_identity(fm, idn)
    witness = None if res.holds else {x: _element_text(u) for x, u in sorted(res.witness.items())}
    rec = CheckRecord("identity", PASS if res.holds else FAIL, {"size": fm.size}, witness)
    verdict = "satisfied" if res.holds else "violated"
    rep = Report("factor-monoid check", {"wordfile": wordfile, "identity": str(idn)}, [rec], {"verdict": verdict})
    rep.text.append(verdict if res.holds else f"violated; witness {witness}")
    return rep


def cmd_family(n: int, xi: str | None = None) -> Report:
    if xi is not None:
        if len(xi) != n:
            raise UsageError(f"--xi needs {n} bits")
        w = build_w(n, xi)
        rep = Report("family gen", {"n": n, "xi": xi}, data={"word": format_word(w), "length": len(w)})
        rep.text.append(format_word(w))
        return rep
    fam = build_family(n)
    words = {xi.bits: format_word(w) for xi, w in zip(sign_vectors(n), fam)}
    rep = Report("family gen", {"n": n}, data={"words": words, "length": len(fam[0])})
    rep.text += [f"w_{b}: {w}" for b, w in words.items()]
    return rep


def cmd_rewrite(action: str, word: str, sigma: str, target: str | None = None, depth: int | None = None,
                maxlen: int | None = None, maxstates: int = 100_000) -> Report:
    w = expand_tokens(word)
    sig = load_sigma(sigma)
    params = {"word": format_word(w), "sigma": sigma, "depth": depth, "maxlen": maxlen, "maxstates": maxstates}
    if action == "step":
        steps = direct_deductions(w, sig, maxlen)
        results = [format_word(s.result) for s in steps]
        rep = Report("rewrite step", params, data={"results": results})
        rep.text += results or ["(no nontrivial step)"]
        return rep
    if action == "closure":
        try:
            res = closure(w, sig, depth_cap=depth, size_cap=maxstates, length_cap=maxlen)
            words, exhausted = sorted(res.words, key=lambda u: (len(u), u)), res.exhausted
        except CapExceeded as exc:
            words, exhausted = sorted(exc.partial, key=lambda u: (len(u), u)), False
        status = PASS if exhausted else OPEN
        rec = CheckRecord("closure", status, {"words": len(words)})
        rep = Report("rewrite closure", params, [rec],
                     {"words": [format_word(u) for u in words], "exhausted": exhausted})
        rep.text += [format_word(u) for u in words] + [f"exhausted: {exhausted}"]
        return rep
    v = expand_tokens(target)
    params["target"] = format_word(v)
    res = derivable(w, v, sig, depth_cap=6 if depth is None else depth, length_cap=maxlen, max_states=maxstates)
    if res:
        path = [format_word(w)] + [format_word(s.result) for s in res.path]
        rec = CheckRecord("derivable", PASS, {"length": len(res.path)})
        rep = Report("rewrite derivable", params, [rec], {"derivable": True, "path": path})
        rep.text += path
    else:
        rec = CheckRecord("derivable", OPEN, {"explored": res.explored, "exhausted": res.exhausted})
        rep = Report("rewrite derivable", params, [rec], {"derivable": False, "exhausted": res.exhausted})
        rep.text.append("not derivable" if res.exhausted else "not found within caps")
    return rep


def cmd_lattice(action: str, n: int, lattice: str | None = None) -> Report:
    if action == "eq":
        parts = all_partitions(n)
        rep = Report("lattice eq", {"n": n}, data={"count": len(parts), "partitions": [str(p) for p in parts]})
        rep.text += [str(p) for p in parts] + [f"{len(parts)} partitions"]
        return rep
    if action == "embed":
        if lattice is None:
            raise UsageError("--lattice is required")
        lat = builtin_lattice(lattice)
        res = embed_lattice(lat, n)
        if res:
            mapping = {lat.names[i]: str(p) for i, p in enumerate(res.mapping)}
            rec = CheckRecord("embedding", PASS if res.verify(lat) else FAIL, {"size": lat.size}, mapping)
            text = [f"{k} -> {v}" for k, v in mapping.items()]
        else:
            mapping, text = None, [f"no embedding into Eq({n})"]
            rec = CheckRecord("embedding", FAIL, {"size": lat.size, "nodes": res.nodes})
        rep = Report("lattice embed", {"lattice": lattice, "n": n}, [rec], {"found": bool(res), "mapping": mapping})
        rep.text += text
        return rep
    r = check_antiisomorphism_proxy(n)
    rec = CheckRecord("class_systems", PASS if r.ok else FAIL,
                      {"partitions": len(r.partitions), "distinct": len(set(r.class_systems))},
                      r.mismatches[:5] or None, r.elapsed * 1000)
    return Report("lattice proxy", {"n": n}, [rec], r.to_json())


def cmd_verify_lemma(name: str, n: int = 2, limit: int | None = None, zetas: Sequence[str] | None = None) -> Report:
    rep = monitor_lemma(name, n, zetas=zetas, limit=limit)
    rec = CheckRecord(name, PASS if rep.ok else FAIL, {"instances": rep.instances, "generated": rep.generated},
                      rep.violations[:5] or None, rep.elapsed * 1000)
    data = {"instances": rep.instances, "generated": rep.generated, "violations": rep.violations,
            "exhaustive": rep.exhaustive, "elapsed_ms": round(rep.elapsed * 1000, 1)}
    return Report("verify lemma", {"name": name, "n": n, "limit": limit, "zetas": list(zetas or [])}, [rec], data)


def cmd_verify_all(n: int = 2, profile: str = "fast", monoids: dict | None = None) -> Report:
    if profile not in ("fast", "full"):
        raise UsageError("profile must be fast or full")
    checks = run_plan(verification_plan(n, profile, monoids))
    params = {"n": n, "profile": profile, "overrides": sorted(monoids or {})}
    return Report("verify all", params, checks)


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")

    p = argparse.ArgumentParser(prog="eqlogic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", parents=[common], help="decide an identity in a monoid or factor monoid")
    c.add_argument("identity", help='e.g. "x y z x y = y x z y x" or "w_00 = w_01"')
    c.add_argument("--monoid", help="built-in name or JSON file")
    c.add_argument("--words", action="append", help="comma-separated words; unspaced entries are single letters")

    m = sub.add_parser("monoid", help="inspect monoids").add_subparsers(dest="action", required=True)
    ms = m.add_parser("show", parents=[common])
    ms.add_argument("name")

    f = sub.add_parser("factor-monoid", help="factor monoids of word files").add_subparsers(dest="action",
                                                                                          required=True)
    fb = f.add_parser("build", parents=[common])
    fb.add_argument("wordfile")
    fb.add_argument("--table", action="store_true", help="also print the Cayley table when small")
    fc = f.add_parser("check", parents=[common])
    fc.add_argument("wordfile")
    fc.add_argument("identity")

    fam = sub.add_parser("family", help="the words w_xi").add_subparsers(dest="action", required=True)
    fg = fam.add_parser("gen", parents=[common])
    fg.add_argument("--n", type=int, default=2)
    fg.add_argument("--xi", help="bit string, 0 = id, 1 = swap")

    r = sub.add_parser("rewrite", help="deductions from an identity file").add_subparsers(dest="action",
                                                                                         required=True)
    for name in ("step", "closure", "derivable"):
        rp = r.add_parser(name, parents=[common])
        rp.add_argument("word")
        if name == "derivable":
            rp.add_argument("target")
        rp.add_argument("--sigma", required=True, help="file with one identity per line")
        rp.add_argument("--maxlen", type=int)
        if name != "step":
            rp.add_argument("--depth", type=int)
            rp.add_argument("--maxstates", type=int, default=100_000)

    lat = sub.add_parser("lattice", help="partition lattices").add_subparsers(dest="action", required=True)
    le = lat.add_parser("eq", parents=[common])
    le.add_argument("--n", type=int, default=3)
    lm = lat.add_parser("embed", parents=[common])
    lm.add_argument("--lattice", required=True, help="m3, n5, chain<k>, boolean<k>")
    lm.add_argument("--n", type=int, default=3)
    lp = lat.add_parser("proxy", parents=[common])
    lp.add_argument("--n", type=int, default=2)

    v = sub.add_parser("verify", help="verification suites").add_subparsers(dest="action", required=True)
    vl = v.add_parser("lemma", parents=[common])
    vl.add_argument("name", choices=MONITORS)
    vl.add_argument("--n", type=int, default=2)
    vl.add_argument("--limit", type=int, help="check an evenly spaced sample of this many instances")
    vl.add_argument("--zeta", action="append", help="restrict to these sign vectors")
    va = v.add_parser("all", parents=[common])
    va.add_argument("--n", type=int, default=2)
    va.add_argument("--profile", choices=("fast", "full"), default="fast")
    va.add_argument("--override", action="append", default=[], metavar="NAME=FILE",
                    help="replace a built-in monoid by a JSON table (fault injection)")
    return p


def dispatch(args: argparse.Namespace) -> Report:
    if args.cmd == "check":
        return cmd_check(args.identity, args.monoid, args.words)
    if args.cmd == "monoid":
        return cmd_monoid_show(args.name)
    if args.cmd == "factor-monoid":
        if args.action == "build":
            return cmd_factor_build(args.wordfile, args.table)
        return cmd_factor_check(args.wordfile, args.identity)
    if args.cmd == "family":
        return cmd_family(args.n, args.xi)
    if args.cmd == "rewrite":
        return cmd_rewrite(args.action, args.word, args.sigma, getattr(args, "target", None),
                           getattr(args, "depth", None), args.maxlen, getattr(args, "maxstates", 100_000))
    if args.cmd == "lattice":
        return cmd_lattice(args.action, args.n, getattr(args, "lattice", None))
    if args.action == "lemma":
        return cmd_verify_lemma(args.name, args.n, args.limit, args.zeta)
    overrides = {}
    for item in args.override:
        name, sep, path = item.partition("=")
        if not sep:
            raise UsageError(f"--override expects NAME=FILE, got {item!r}")
        overrides[name] = load_monoid(path, check=False)  # the suite reports a broken table by name
    return cmd_verify_all(args.n, args.profile, overrides)


USAGE_ERRORS = (UsageError, WordError, MonoidError, BadN, TooLarge, SizeMismatch, KeyError, UnknownMonitor,
                GeneratorOverflow, ValueError)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = dispatch(args)
    except USAGE_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"eqlogic {args.cmd}: error: {msg}", file=sys.stderr)
        print(f"run 'eqlogic {args.cmd} --help' for usage", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(rep.to_json(), sort_keys=True))
    else:
        print(rep.render())
    return 1 if rep.overall == FAIL else 0


if __name__ == "__main__":
    sys.exit(main())
