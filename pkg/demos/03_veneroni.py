"""
The Veneroni transformation
===========================

The Veneroni map of ``P^n`` is given by the ``n+1`` forms of degree ``n``
through ``n+1`` general codimension-2 flats.  It sends a system of degree
``d`` with multiplicities ``m_i`` along those flats to another system, and it
is an involution.  Dimensions of the two systems agree, which lets a small
rank computation stand in for a much larger one.
"""

from __future__ import annotations

from fatflats.cremona import VirtualSystem, check_dimension_invariance, veneroni_map_basis, veneroni_transform
from fatflats.geometry import RandomSource

# the map itself: n+1 forms of degree n
for n in (3, 4, 5):
    forms, _ = veneroni_map_basis(n, RandomSource(0))
    print(f"P^{n}: {len(forms)} forms of degree {forms[0].t} through {n + 1} codimension-2 flats")

# transforming systems and coming back
for src in [VirtualSystem(3, 7, (1,) * 4), VirtualSystem(4, 7, (1,) * 5), VirtualSystem(5, 9, (1,) * 6)]:
    img = veneroni_transform(src)
    print(f"P^{src.n}: {src} -> {img} -> {veneroni_transform(img)}")

# both sides have the same dimension on a random instance
inv = check_dimension_invariance(VirtualSystem(3, 7, (1,) * 4), RandomSource(1))
print(f"adim {inv.source} = {inv.source_adim}, adim {inv.target} = {inv.target_adim}")
