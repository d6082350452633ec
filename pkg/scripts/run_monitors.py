"""Run the rewrite-step monitors and write a JSON report.

Exhaustive runs over every generated instance take on the order of two
hours at n = 2; pass --limit for an evenly spaced sample.  Set
WORKBENCH_THREADS to spread instances over worker processes.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from eqlogic.monitors import MONITORS, monitor_lemma

log = logging.getLogger("run_monitors")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", default=list(MONITORS), help="monitors to run (default: all)")
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--limit", type=int, help="instances per monitor (default: all)")
    ap.add_argument("--out", type=Path, default=Path("monitors.json"))
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    reports = []
    for name in args.names:
        rep = monitor_lemma(name, args.n, limit=args.limit)
        log.info("%-14s %5d/%-5d instances  %d violations  %.1f s", name, rep.instances, rep.generated,
                 len(rep.violations), rep.elapsed)
        reports.append(rep.to_json())
    args.out.write_text(json.dumps({"n": args.n, "limit": args.limit, "reports": reports}, indent=2))
    log.info("wrote %s", args.out)
    return 0 if all(not r["violations"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
