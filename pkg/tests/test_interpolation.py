from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatflats.combinatorics import binomial, conditions_count
from fatflats.errors import CapExceededError, DomainError
from fatflats.fflinalg import DEFAULT_PRIME, PrimeField, mulmod, rank
from fatflats.geometry import (
    FatFlatScheme,
    FatPoint,
    Flat,
    RandomSource,
    general_scheme,
    random_flat,
    rational_normal_curve,
    sample_fat_points_on_line,
)
from fatflats.interpolation import (
    FormVector,
    adim,
    condition_matrix,
    condition_rows_curve,
    condition_rows_fat_flat,
    condition_rows_fat_point,
    kernel_basis_system,
    monomial_index,
    vanishing_order_along_flat,
)


@given(st.integers(0, 6), st.integers(0, 10), st.data())
def test_monomial_index_round_trip(n, t, data):
    idx = monomial_index(n, t)
    assert len(idx) == binomial(t + n, n)
    i = data.draw(st.integers(0, len(idx) - 1))
    e = idx.exponents(i)
    assert sum(e) == t and idx.index(e) == i


def test_graded_lex_order_starts_with_first_variable():
    idx = monomial_index(2, 2)
    assert [idx.exponents(i) for i in range(len(idx))] == [
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)
    ]


def evaluation_row(point, t, p):
    idx = monomial_index(len(point) - 1, t)
    return [
        int(np.prod([pow(int(x), int(a), p) for x, a in zip(point, idx.exponents(i))], dtype=object) % p)
        for i in range(len(idx))
    ]


def test_simple_point_row_is_evaluation():
    fld = PrimeField()
    pt = RandomSource(1).residues((4,), fld)
    rows = condition_rows_fat_point(pt, 1, 3, fld)
    ev = np.array([evaluation_row(pt, 3, DEFAULT_PRIME)], dtype=np.int64)
    assert rows.shape[0] == 1
    assert rank(np.vstack([rows, ev])) == 1


@pytest.mark.parametrize("n,delta,m,t", [(3, 1, 1, 7), (4, 2, 3, 13), (3, 1, 3, 10), (2, 0, 3, 4), (5, 3, 2, 6)])
def test_fat_flat_rank_equals_condition_count(n, delta, m, t):
    flat = random_flat(n, delta, RandomSource(n * 100 + t))
    rows = condition_rows_fat_flat(flat, m, t)
    assert rows.shape == (conditions_count(n, delta, m, t), binomial(t + n, n))
    assert rank(rows) == conditions_count(n, delta, m, t)


def test_multiplicity_above_degree_imposes_everything():
    flat = random_flat(3, 1, RandomSource(0))
    assert rank(condition_rows_fat_flat(flat, 5, 3)) == 20


@pytest.mark.parametrize("n,t,expected", [(3, 3, 10), (4, 4, 17)])
def test_curve_condition_rows(n, t, expected):
    curve = rational_normal_curve(n, RandomSource(2))
    rows = condition_rows_curve(curve, t)
    assert rows.shape[0] == expected
    assert rank(rows) == expected


def test_kernel_forms_vanish_to_the_required_order():
    S = general_scheme(3, [(1, [3, 3, 1])], RandomSource(3))
    forms = kernel_basis_system(S, 7)
    assert len(forms) == adim(S, 7).value > 0
    M = condition_matrix(S, 7).rows
    K = np.array([f.coeffs for f in forms])
    assert not np.any(mulmod(M, K.T, DEFAULT_PRIME))
    for f in forms:
        for flat, m in S.components:
            assert vanishing_order_along_flat(f, flat) >= m
            assert f.evaluate(flat.random_point(RandomSource(4))) == 0


def test_vanishing_order_of_a_power_of_linear_form():
    # x0^2 x1 has order 3 along {x0 = x1 = 0} and order 2 along {x0 = x3 = 0}
    from fatflats.geometry import Flat

    idx = monomial_index(3, 3)
    c = np.zeros(len(idx), dtype=np.int64)
    c[idx.index((2, 1, 0, 0))] = 1
    form = FormVector(3, 3, c)
    assert vanishing_order_along_flat(form, Flat.coordinate(3, [2, 3])) == 3
    assert vanishing_order_along_flat(form, Flat.coordinate(3, [1, 2])) == 2


def test_form_vector_rejects_zero_and_bad_length():
    with pytest.raises(DomainError):
        FormVector(2, 1, np.zeros(3, dtype=np.int64))
    with pytest.raises(DomainError):
        FormVector(2, 1, np.ones(4, dtype=np.int64))


def test_adim_manifest_and_cap():
    S = general_scheme(3, [(1, [3] * 4 + [1] * 5)], RandomSource(0))
    res = adim(S, 10)
    assert res.value == 1
    assert res.manifest["monomials"] == 286
    assert sum(c["rank_gain"] for c in res.manifest["components"]) == res.rank == 285
    with pytest.raises(CapExceededError):
        adim(S, 10, cap=100)


def test_empty_scheme_and_small_prime_guard():
    assert adim(FatFlatScheme(3), 4).value == 35
    fld = PrimeField(7)
    S = general_scheme(3, [(1, [3])], RandomSource(0), fld)
    with pytest.raises(DomainError):
        adim(S, 4)


def test_triple_point_in_the_plane():
    # a triple point in P^2 imposes 6 conditions on quartics
    fld = PrimeField()
    pt = RandomSource(8).residues((3,), fld)
    S = FatFlatScheme(2, fat_points=[FatPoint(pt, 3)])
    assert adim(S, 4).value == 15 - 6


def test_coordinate_frame_reproduces_plain_elimination():
    from fatflats.interpolation import solve_system

    e = np.eye(4, dtype=np.int64)
    meeting = FatFlatScheme(3, [(Flat(e[[0, 1]]), 2), (Flat(e[[1, 2]]), 2), (random_flat(3, 1, RandomSource(4)), 1)])
    line = random_flat(3, 1, RandomSource(5))
    mixed = FatFlatScheme(
        3,
        [(random_flat(3, 1, RandomSource(7)), 2)],
        [FatPoint(p.point, 2, line) for p in sample_fat_points_on_line(line, 4, 2, RandomSource(6))],
        [rational_normal_curve(3, RandomSource(8))],
    )
    cases = [
        (general_scheme(3, [(1, [3] * 4 + [1] * 5)], RandomSource(1)), 10),
        (general_scheme(4, [(1, [2, 1, 1])], RandomSource(2)), 2),
        (general_scheme(4, [(1, [2]), (2, [2, 1])], RandomSource(3)), 4),
        (general_scheme(5, [(3, [1] * 6)], RandomSource(4)), 8),
        (general_scheme(3, [(1, [5, 1])], RandomSource(5)), 3),
        (meeting, 5),
        (mixed, 5),
    ]
    for S, t in cases:
        fast, plain = adim(S, t), solve_system(S, t)
        assert fast.value == plain.value
        assert fast.manifest["components"] == plain.manifest["components"]
