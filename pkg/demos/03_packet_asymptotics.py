"""
Wave packet norms
=================

A bump of width n^delta carrying cos(n x). Normalized by n^(-delta/2 - s),
its H^s norm tends to ||PLATEAU||_{L2} / sqrt(2) as n grows.
"""
import math

from gdplab import PLATEAU, bump_norm, lemma_ratio

phi2 = bump_norm(PLATEAU)
limit = phi2 / math.sqrt(2)
print("||PLATEAU||_L2 = %.15f" % phi2)
print("limit          = %.15f" % limit)

delta = 0.5
for s in (0.0, 2.0):
    print("\ns = %g" % s)
    for n in (16, 32, 64, 128):
        r = lemma_ratio(n, delta, s)
        print("  n = %4d   ratio = %.10f   |ratio - limit| = %.2e" % (n, r, abs(r - limit)))
