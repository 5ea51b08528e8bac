"""
The cone over a rational normal curve
=====================================

Joining a general ``(n-3)``-flat to a rational normal curve of ``P^n`` gives
a hypersurface of degree ``n`` with multiplicity ``n`` along the flat.  The
count of conditions says no such hypersurface should exist when ``n > 3``.
We find the unique one, check its order along the flat, and sample the cone
lines to confirm it vanishes there.
"""

from __future__ import annotations

from fatflats.analysis import cone_verify
from fatflats.geometry import RandomSource, rational_normal_curve

for n in (3, 4):
    curve = rational_normal_curve(n, RandomSource(0))
    cert = cone_verify(curve, RandomSource(1))
    r = cert.report
    print(f"P^{n}: adim {r.adim}, vdim {r.vdim}, u {r.u}, "
          f"order along apex {cert.details['order_along_apex']}, "
          f"{cert.details['points_checked']} cone points checked, {len(cert.form.terms())} terms")
