#!/usr/bin/env python3
"""Build and verify the double of every desk-scale suite group.

Prints one row per group (orders of the structural subgroups, check count)
and optionally dumps the full JSON reports.

    python scripts/run_structure_suite.py [--json-dir DIR]
"""

import argparse
import json
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from weakcomm import sidki
from weakcomm.presentations import parse_presentation

SUITE = {
    "C2": "< a | a^2 >",
    "C3": "< a | a^3 >",
    "C2xC2": "< a, b | a^2, b^2, [a, b] >",
    "C4": "< a | a^4 >",
    "S3": "< a, b | a^2, b^2, (a*b)^3 >",
    "D4": "< r, s | r^4, s^2, (r*s)^2 >",
    "Q8": "< a, b | a^4, b^2*a^-2, b^-1*a*b*a >",
}


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--json-dir", help="write one JSON report per group")
    parser.add_argument("--engel", action="store_true",
                        help="include Engel certificates (nilpotent bases only)")
    args = parser.parse_args()

    header = f"{'group':7s} {'|G|':>4s} {'|X|':>5s} {'|D|':>4s} {'|L|':>4s} " \
             f"{'|W|':>4s} {'|imr|':>6s} {'checks':>7s} {'time':>7s}"
    print(header)
    print("-" * len(header))
    for name, text in SUITE.items():
        t0 = time.time()
        x = sidki.build(parse_presentation(text))
        dt = time.time() - t0
        o = x.orders()
        n_checks = len(x.checks)
        print(f"{name:7s} {o['G']:4d} {o['X']:5d} {o['D']:4d} {o['L']:4d} "
              f"{o['W']:4d} {o['im_rho']:6d} {n_checks:4d} ok {dt:6.2f}s")
        if args.json_dir:
            report = sidki.verification_report(x, include_engel=args.engel)
            path = pathlib.Path(args.json_dir) / f"{name}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
