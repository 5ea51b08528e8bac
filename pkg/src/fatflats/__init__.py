"""Unexpected hypersurfaces through fat flats, computed exactly over prime fields.

The public names below are loaded on first access so that ``import fatflats``
stays cheap and the command-line front end can configure BLAS threading
before numpy is imported.
"""

from __future__ import annotations

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    "PrimeField": "fflinalg",
    "EchelonStore": "fflinalg",
    "rank": "fflinalg",
    "rank_streaming": "fflinalg",
    "kernel_basis": "fflinalg",
    "conditions_count": "combinatorics",
    "fat_flat_hilbert_poly": "combinatorics",
    "mayer_vietoris_poly": "combinatorics",
    "mayer_vietoris_value": "combinatorics",
    "hvector_convolve": "combinatorics",
    "hvector_integrate": "combinatorics",
    "power_ideal_hvector": "combinatorics",
    "pairwise_intersection_hp": "combinatorics",
    "Flat": "geometry",
    "FatFlatScheme": "geometry",
    "FatPoint": "geometry",
    "RandomSource": "geometry",
    "RationalCurve": "geometry",
    "general_scheme": "geometry",
    "rational_normal_curve": "geometry",
    "adim": "interpolation",
    "condition_rows_fat_flat": "interpolation",
    "kernel_basis_system": "interpolation",
    "VirtualSystem": "cremona",
    "veneroni_transform": "cremona",
    "veneroni_map_basis": "cremona",
    "check_dimension_invariance": "cremona",
    "unexpectedness": "analysis",
    "virtual_dimension": "analysis",
    "certify": "analysis",
    "replacement_check": "analysis",
    "replace_line_with_fat_points": "analysis",
    "cone_verify": "analysis",
    "SchemeSpec": "schemespec",
}

__all__ = ["__version__", *_EXPORTS]


def __getattr__(name: str):
    module = _EXPORTS.get(name)
    if module is None:
        raise AttributeError(f"module 'fatflats' has no attribute {name!r}")
    value = getattr(importlib.import_module(f".{module}", __name__), name)
    globals()[name] = value
    return value
