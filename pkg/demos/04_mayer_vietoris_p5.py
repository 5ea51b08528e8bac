"""
Counting conditions for fat flats that meet
===========================================

Two general codimension-2 flats of ``P^5`` meet in a line, so the conditions
imposed by their union are not simply additive.  The overlap is measured by
the h-vector of ``I^a + J^b`` integrated twice, and the union count follows
by inclusion and exclusion over pairs.
"""

from __future__ import annotations

from fatflats.combinatorics import (
    binomial,
    generic_flats,
    hvector_convolve,
    hvector_integrate,
    mayer_vietoris_poly,
    power_ideal_hvector,
)

# the overlap of two fourth powers
h = hvector_convolve(power_ideal_hvector(2, 4), power_ideal_hvector(2, 4))
overlap = hvector_integrate(h, 2)
print("h-vector:", tuple(h))
print("overlap, t = 0..9:", overlap.values(10))
print("overlap polynomial:", overlap.tail, f"(valid from t = {overlap.valid_from})")

# six quadruple flats in P^5
union = mayer_vietoris_poly(5, generic_flats(5, 3, [4] * 6))
print("union polynomial:", union)
t = 21
print(f"t={t}: {union.value(t)} conditions, vdim {binomial(t + 5, 5) - union.value(t)}")
