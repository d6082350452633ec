"""Deduction classes of Id(pi) for every partition pi of the family, as JSON."""

import argparse
import json
import sys
from pathlib import Path

from eqlogic.lattice import check_antiisomorphism_proxy


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2, help="family parameter; n = 3 means 4140 partitions")
    ap.add_argument("--out", type=Path, default=Path("classes.json"))
    args = ap.parse_args(argv)
    rep = check_antiisomorphism_proxy(args.n)
    data = rep.to_json()
    data["elapsed_s"] = round(rep.elapsed, 2)
    args.out.write_text(json.dumps(data, indent=2))
    print(f"{len(rep.partitions)} partitions, {len(set(rep.class_systems))} distinct class systems, "
          f"ok={rep.ok}, {rep.elapsed:.1f} s -> {args.out}")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
