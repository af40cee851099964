#!/usr/bin/env python3
"""Verify every corpus entry and print a timing table.

    python3 scripts/verify_corpus.py [--mode symbolic|point|both] [--jobs N]
"""

import argparse
import time

from qtheta.cli import emit_report
from qtheta.corpus import Corpus, verify_all


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--mode", default="symbolic", choices=["symbolic", "point", "both"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corpus")
    args = p.parse_args()
    t0 = time.perf_counter()
    reports = verify_all(args.mode, seed=args.seed, corpus=Corpus(args.corpus), jobs=args.jobs)
    print(emit_report(reports))
    passed = sum(r.ok for r in reports)
    print(f"\n{passed}/{len(reports)} PASS in {time.perf_counter() - t0:.1f}s")
    return 0 if passed == len(reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
