from __future__ import annotations

import numpy as np
import pytest

from fatflats.errors import DomainError, GenericityError, HypothesisError
from fatflats.fflinalg import DEFAULT_PRIME, PrimeField, mulmod
from fatflats.geometry import (
    FatFlatScheme,
    FatPoint,
    Flat,
    RandomSource,
    RationalCurve,
    general_flats,
    general_scheme,
    generic_meet_dim,
    meet_dim,
    random_flat,
    rational_normal_curve,
    sample_fat_points_on_line,
    standard_frame,
    validate_general_position,
)


def test_random_source_is_reproducible_and_spawns_independent_streams():
    a = RandomSource(5).residues((4,), PrimeField())
    b = RandomSource(5).residues((4,), PrimeField())
    c = RandomSource(5).spawn(1).residues((4,), PrimeField())
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all(RandomSource(1).nonzero_residues((50,), PrimeField(3)) > 0)


@pytest.mark.parametrize(
    "n,dims,expected",
    [(3, (1, 1), -1), (4, (2, 2), 0), (5, (3, 3), 1), (4, (1, 2), -1), (5, (3, 3, 3), -1)],
)
def test_generic_meet_dimensions(n, dims, expected):
    rng = RandomSource(0)
    flats = [random_flat(n, d, rng.spawn(i)) for i, d in enumerate(dims)]
    assert meet_dim(*flats) == expected == generic_meet_dim(n, *dims)


def test_identical_and_special_flats():
    line = random_flat(3, 1, RandomSource(1))
    assert meet_dim(line, line) == 1
    e = np.eye(4, dtype=np.int64)
    assert meet_dim(Flat(e[[0, 1]]), Flat(e[[1, 2]])) == 0
    with pytest.raises(GenericityError):
        validate_general_position([Flat(e[[0, 1]]), Flat(e[[1, 2]])])


def test_flat_membership_and_points():
    fld = PrimeField()
    line = random_flat(4, 1, RandomSource(2), fld)
    pt = line.point([3, 7])
    assert line.contains(pt)
    assert line.contains(line.random_point(RandomSource(3)))
    assert not line.contains(RandomSource(4).residues((5,), fld))


def test_flat_rejects_dependent_basis():
    with pytest.raises(DomainError):
        Flat(np.array([[1, 2, 3, 4], [2, 4, 6, 8]]))


def test_standard_frame_sends_flat_to_coordinate_flat():
    fld = PrimeField()
    plane = random_flat(5, 2, RandomSource(6), fld)
    A = standard_frame(plane)
    # first dim+1 columns of A span the flat
    assert np.array_equal(A[:, :3].T % DEFAULT_PRIME, plane.basis)
    assert not np.any(mulmod(plane.duals, A[:, :3], DEFAULT_PRIME))


def test_rational_curves():
    fld = PrimeField()
    rnc = rational_normal_curve(3, RandomSource(0), fld)
    assert rnc.degree == 3 and rnc.is_nondegenerate() and not rnc.has_common_factor()
    # plane conic sitting in P^3 is degenerate
    conic = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert not RationalCurve(conic, fld).is_nondegenerate()
    with pytest.raises(HypothesisError):
        RationalCurve(conic, fld, require_nondegenerate=True)
    # (s^2, s u, 0, 0) shares the factor s
    with pytest.raises(DomainError):
        RationalCurve([[1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 0]], fld)


def test_fat_points_on_line():
    line = random_flat(3, 1, RandomSource(9))
    pts = sample_fat_points_on_line(line, 6, 2, RandomSource(10))
    assert len({tuple(p.point) for p in pts}) == 6
    assert all(line.contains(p.point) and p.multiplicity == 2 for p in pts)
    other = random_flat(3, 1, RandomSource(11))
    with pytest.raises(DomainError):
        FatPoint(pts[0].point, 1, other)


def test_general_flats_are_reproducible_and_avoid_existing():
    fld = PrimeField()
    a = general_flats(3, 1, [3, 3, 1], RandomSource(4), fld)
    b = general_flats(3, 1, [3, 3, 1], RandomSource(4), fld)
    assert all(np.array_equal(f.basis, g.basis) for (f, _), (g, _) in zip(a, b))
    more = general_flats(3, 1, [1], RandomSource(5), fld, avoid=[f for f, _ in a])
    validate_general_position([f for f, _ in a + more])


def test_scheme_signature_and_sum():
    X = general_scheme(3, [(1, [3, 1, 3])], RandomSource(0))
    assert X.signature() == {"n": 3, "flats": {"1": [3, 3, 1]}, "fat_points": [], "curves": []}
    assert X.max_multiplicity == 3
    Y = FatFlatScheme(3)
    assert Y.is_empty and not (X + Y).is_empty
    with pytest.raises(DomainError):
        X + FatFlatScheme(4)
    with pytest.raises(DomainError):
        FatFlatScheme(3, [(X.components[0][0], 0)])
