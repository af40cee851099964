#!/usr/bin/env python3
"""Print the coefficients of (q;q)_oo up to q^N and mark the generalized
pentagonal numbers; a quick look at the kernel on a classical product."""

import sys

from qtheta import SeriesSpace, poch_inf

n = int(sys.argv[1]) if len(sys.argv) > 1 else 50
space = SeriesSpace.make((), 0, order=n + 1)
f = poch_inf(space, space.qmono(1, 1))
pent = {k * (3 * k - 1) // 2 for k in range(-n, n + 1)}
for k in range(n + 1):
    c = f[k].constant_term() if k in f.coeffs else 0
    if c or k in pent:
        print(f"q^{k:<3d} {c:+d}{'  pentagonal' if k in pent else ''}")
