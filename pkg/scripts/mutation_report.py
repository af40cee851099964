#!/usr/bin/env python3
"""Run every single-site mutation of the designated entries (or of the ids
given on the command line) and report any mutant that does not FAIL."""

import sys
import time

from qtheta.corpus import FAIL, Corpus, mutations, verify_decls


def main(ids):
    corpus = Corpus()
    ids = ids or [i for i in corpus.ids if corpus.entry(i).mutation]
    survivors = 0
    for ident in ids:
        e = corpus.entry(ident)
        t0 = time.perf_counter()
        n, bad = 0, []
        for d in e.decls:
            for kind, md in mutations(d):
                n += 1
                r = verify_decls(ident, [md], "symbolic", e.order, e.window)
                if r.verdict != FAIL:
                    bad.append(f"{md.name} ({kind}): {r.verdict} {r.error or ''}".rstrip())
        survivors += len(bad)
        print(f"{ident:20s} {n:3d} mutants  {len(bad)} not failing  {time.perf_counter() - t0:6.1f}s")
        for b in bad:
            print("   ", b)
    return 1 if survivors else 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
