#!/usr/bin/env python3
"""Gram table of the big q-Jacobi polynomials: for 0 <= m, n <= 3 report
whether the q-integral against the weight matches delta_mn times the norm."""

import time

from qtheta.corpus import Corpus, verify_decls

entry = Corpus().entry("ortho")
for d in entry.decls:
    t0 = time.perf_counter()
    r = verify_decls(d.name, [d], "symbolic", entry.order, entry.window)
    print(f"{d.name:12s} {r.verdict}  {time.perf_counter() - t0:5.1f}s")
