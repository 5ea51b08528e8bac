from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatflats import fflinalg
from fatflats.errors import DimensionMismatchError, DomainError
from fatflats.fflinalg import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    EchelonStore,
    PrimeField,
    inverse,
    is_prime,
    kernel_basis,
    mulmod,
    rank,
    rank_streaming,
)

SMALL = PrimeField(101)


def oracle_rank(rows, p):
    """Schoolbook elimination on Python ints."""
    M = [[int(x) % p for x in r] for r in rows]
    r = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def low_rank(rng, rows, cols, k, p):
    A = rng.integers(0, p, (rows, k))
    B = rng.integers(0, p, (k, cols))
    return mulmod(A, B, p)


matrices = st.tuples(
    st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1), st.sampled_from([101, DEFAULT_PRIME])
)


@given(matrices)
def test_rank_matches_oracle_and_streaming(case):
    rows, cols, seed, p = case
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, min(rows, cols) + 1))
    M = low_rank(rng, rows, cols, k, p) if k else np.zeros((rows, cols), dtype=np.int64)
    fld = PrimeField(p)
    r = rank(M, fld)
    assert r == oracle_rank(M.tolist(), p)
    assert r == rank_streaming(iter(M), cols, fld)
    K = kernel_basis(M, fld)
    assert len(K) == cols - r
    for v in K:
        assert not np.any(mulmod(M, np.asarray(v).reshape(-1, 1), p))


@given(matrices)
def test_rank_invariant_under_row_operations(case):
    rows, cols, seed, p = case
    rng = np.random.default_rng(seed)
    M = rng.integers(0, p, (rows, cols))
    M[rng.integers(0, rows)] = 0
    fld = PrimeField(p)
    perm = rng.permutation(rows)
    scale = rng.integers(1, p, rows).reshape(-1, 1)
    assert rank(M, fld) == rank(M[perm], fld) == rank(M * scale % p, fld)


def test_mulmod_exact_on_split_path(monkeypatch):
    rng = np.random.default_rng(3)
    p = DEFAULT_PRIME
    A = rng.integers(0, p, (7, 300))
    B = rng.integers(0, p, (300, 11))
    want = [[sum(int(a) * int(b) for a, b in zip(row, col)) % p for col in B.T] for row in A]
    assert mulmod(A, B, p).tolist() == want
    # column-split branch for large right operands
    monkeypatch.setattr(fflinalg, "_SPLIT_ELEMENTS", 600)
    assert mulmod(A, B, p).tolist() == want


def test_mulmod_direct_path_small_prime():
    rng = np.random.default_rng(4)
    A = rng.integers(0, 101, (5, 9))
    B = rng.integers(0, 101, (9, 4))
    assert np.array_equal(mulmod(A, B, 101), (A @ B) % 101)


def test_mulmod_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        mulmod(np.zeros((2, 3), dtype=np.int64), np.zeros((2, 3), dtype=np.int64), 101)


def test_rank_of_product_is_bounded_by_inner_dimension():
    rng = np.random.default_rng(0)
    assert rank(low_rank(rng, 5, 7, 2, DEFAULT_PRIME)) == 2


def test_large_rank_spans_several_panels():
    rng = np.random.default_rng(1)
    M = low_rank(rng, 1300, 900, 700, DEFAULT_PRIME)
    assert rank(M) == 700


def test_echelon_store_incremental_equals_batch():
    rng = np.random.default_rng(2)
    p = SECOND_PRIME
    fld = PrimeField(p)
    M = low_rank(rng, 40, 30, 17, p)
    store = EchelonStore(30, fld)
    gains = [store.add_rows(M[i : i + 7]) for i in range(0, 40, 7)]
    assert sum(gains) == store.rank == 17
    E = store.echelon_rows()
    assert list(np.sort(store.pivots)) == [int(np.flatnonzero(r)[0]) for r in E]
    assert rank(np.vstack([E, M]), fld) == 17
    assert not np.any(store.reduce(M))
    assert store.reduce(rng.integers(0, p, (1, 30))).any()


def test_store_rejects_wrong_width():
    with pytest.raises(DimensionMismatchError):
        EchelonStore(4).add_rows(np.zeros((2, 5), dtype=np.int64))
    with pytest.raises(DimensionMismatchError):
        rank_streaming(iter([np.zeros(3)]), 4)


def test_rank_edge_cases():
    assert rank(np.zeros((0, 5), dtype=np.int64)) == 0
    assert rank(np.zeros((3, 4), dtype=np.int64)) == 0
    with pytest.raises(DomainError):
        rank(np.array([[DEFAULT_PRIME]]))
    with pytest.raises(DomainError):
        rank(np.array([[-1]]))


def test_inverse_round_trip():
    rng = np.random.default_rng(5)
    M = rng.integers(0, DEFAULT_PRIME, (6, 6))
    Minv = inverse(M)
    assert np.array_equal(mulmod(M, Minv, DEFAULT_PRIME), np.eye(6, dtype=np.int64))


def test_prime_field_validation():
    assert is_prime(DEFAULT_PRIME) and is_prime(SECOND_PRIME)
    assert [q for q in range(50) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    with pytest.raises(DomainError):
        PrimeField(2**31 + 11)
    with pytest.raises(DomainError):
        PrimeField(100)
    with pytest.raises(DomainError):
        PrimeField(7).check_admissible(2, 3)
    assert PrimeField(101).inverse(3) * 3 % 101 == 1
    with pytest.raises(ZeroDivisionError):
        SMALL.inverse(0)
