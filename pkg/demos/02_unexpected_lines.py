"""
Unexpected surfaces through fat lines in P^3
============================================

Four triple lines and five simple lines in ``P^3`` should admit no degree-10
surface: the virtual dimension is -1.  Yet one exists.  ``certify`` recomputes
the rank over several seeds and two primes before calling it generic.
"""

from __future__ import annotations

from fatflats.analysis import certify
from fatflats.geometry import general_scheme

CASES = [
    ([3] * 4 + [1] * 5, 10),
    ([4] + [3] * 5, 12),
    ([3] * 6 + [2], 12),
]

for mults, t in CASES:
    def build(rng, fld, mults=mults):
        return general_scheme(3, [(1, mults)], rng, fld), None

    cert = certify(build, t)
    r = cert.report
    print(f"lines {mults}, t={t}: adim {r.adim}, vdim {r.vdim}, u {r.u}"
          f"  -> {cert.verdict} ({cert.confidence})")
