"""
Conditions imposed by a fat flat
================================

A ``delta``-dimensional flat ``L`` in ``P^n`` taken with multiplicity ``m``
imposes a closed-form number of conditions on degree-``t`` forms.  Here we
compare that count with the rank of the actual condition matrix on random
flats, and with the Hilbert polynomial that takes over once ``t >= m``.
"""

from __future__ import annotations

from fatflats.combinatorics import conditions_count, fat_flat_hilbert_poly
from fatflats.fflinalg import rank
from fatflats.geometry import RandomSource, random_flat
from fatflats.interpolation import condition_rows_fat_flat

# a triple line in P^3 and a triple plane in P^4
for n, delta, m in [(3, 1, 3), (4, 2, 3), (5, 3, 4)]:
    hp = fat_flat_hilbert_poly(n, delta, m)
    print(f"P^{n}, flat of dim {delta}, multiplicity {m}: Hilbert polynomial {hp}")
    for t in range(m, m + 4):
        flat = random_flat(n, delta, RandomSource(t))
        rows = condition_rows_fat_flat(flat, m, t)
        print(f"  t={t:2d}  formula {conditions_count(n, delta, m, t):5d}"
              f"  rank {rank(rows):5d}  polynomial {hp.value(t):5d}")
