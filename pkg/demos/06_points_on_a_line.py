"""
Trading a fat line for fat points
=================================

A degree-``t`` form vanishing to order ``m`` at enough points of a line must
vanish to order ``m`` along the whole line.  Watch the rank of ``s`` collinear
``m``-fold points climb and then settle on the rank of the fat line once
``s`` reaches ``t - m + 2``.
"""

from __future__ import annotations

from fatflats.analysis import collinear_rank_profile
from fatflats.geometry import FatFlatScheme, RandomSource, random_flat
from fatflats.interpolation import adim

m, t = 3, 8
line = random_flat(3, 1, RandomSource(0))
target = adim(FatFlatScheme(3, [(line, m)]), t).rank
print(f"fat line of multiplicity {m}, degree {t}: rank {target}")
profile = collinear_rank_profile(line, m, t, range(1, t - m + 4), RandomSource(1))
for s, r in profile.items():
    mark = "  <- threshold" if s == t - m + 2 else ""
    print(f"  {s:2d} points: rank {r}{mark}")
