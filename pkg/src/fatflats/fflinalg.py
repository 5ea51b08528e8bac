"""Dense linear algebra over a prime field.

Matrices are plain ``numpy`` int64 arrays whose entries are residues in
``[0, p)``.  The primes used here are below ``2**31`` so a single product of
two residues fits in an int64, but sums of products do not.  Matrix products
are therefore computed in float64 through BLAS after splitting each residue
into two 16-bit halves; every partial sum stays below ``2**53`` and is exact.

Elimination is organised around :class:`EchelonStore`, which keeps the
reduced row echelon form of everything fed to it so far.  Only the non-pivot
columns of that form are stored (the pivot columns are an identity block), so
the memory footprint is ``rank * (cols - rank)`` residues and the cost of
absorbing a new row block shrinks as the rank approaches the column count.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError

DEFAULT_PRIME = 2147483629
SECOND_PRIME = 2147483587

_PANEL_ROWS = 512
_LEAF_ROWS = 24
_CHUNK_ELEMENTS = 1 << 22
# Right operands larger than this are split by columns so the float copies stay small.
_SPLIT_ELEMENTS = 1 << 24


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``n < 3.3e24``."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of residues modulo a word-sized prime."""

    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.prime, (int, np.integer)) or not 2 <= self.prime < 2**31:
            raise DomainError(f"prime must be an integer in [2, 2**31), got {self.prime!r}")
        if not is_prime(int(self.prime)):
            raise DomainError(f"{self.prime} is not prime")
        object.__setattr__(self, "prime", int(self.prime))

    def check_admissible(self, max_multiplicity: int, max_degree: int) -> None:
        """Reject primes too small for the multiplicities and degrees in play."""
        bound = 2 * (max_multiplicity + max_degree)
        if self.prime <= bound:
            raise DomainError(
                f"prime {self.prime} must exceed 2*(max multiplicity + max degree) = {bound}"
            )

    def reduce(self, values) -> np.ndarray:
        return np.mod(np.asarray(values, dtype=np.int64), self.prime)

    def inverse(self, a: int) -> int:
        a = int(a) % self.prime
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.prime)


DEFAULT_FIELD = PrimeField(DEFAULT_PRIME)


def mulmod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Return ``A @ B mod p`` exactly for residue matrices ``A`` and ``B``."""
    m, k = A.shape
    k2, w = B.shape
    if k != k2:
        raise DimensionMismatchError(f"cannot multiply {A.shape} by {B.shape}")
    out = np.zeros((m, w), dtype=np.int64)
    if m == 0 or w == 0 or k == 0:
        return out
    if k >= 1 << 19:
        # Keep the mixed-half sums below 2**53.
        step = 1 << 18
        for s in range(0, k, step):
            out += mulmod(A[:, s : s + step], B[s : s + step], p)
            out %= p
        return out
    if k * w > _SPLIT_ELEMENTS and w > 1:
        step = max(1, _SPLIT_ELEMENTS // k)
        for s in range(0, w, step):
            out[:, s : s + step] = mulmod(A, B[:, s : s + step], p)
        return out

    direct = k * (p - 1) ** 2 < 2**53
    if direct:
        Bf = B.astype(np.float64)
    else:
        Bh = (B >> 16).astype(np.float64)
        Bl = (B & 0xFFFF).astype(np.float64)
        Bs = Bh + Bl
        c16 = (1 << 16) % p
        c32 = (1 << 32) % p
    rows = max(1, _CHUNK_ELEMENTS // max(w, 1))
    for s in range(0, m, rows):
        a = A[s : s + rows]
        if direct:
            out[s : s + rows] = np.mod((a.astype(np.float64) @ Bf).astype(np.int64), p)
            continue
        ah = (a >> 16).astype(np.float64)
        al = (a & 0xFFFF).astype(np.float64)
        hh = ah @ Bh
        ll = al @ Bl
        mid = (ah + al) @ Bs
        mid -= hh
        mid -= ll
        r = np.mod(hh.astype(np.int64), p) * c32 % p
        r += np.mod(mid.astype(np.int64), p) * c16 % p
        r += np.mod(ll.astype(np.int64), p)
        out[s : s + rows] = r % p
    return out


def _rref_leaf(P: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-by-row reduction of a small block; see :func:`_rref`."""
    w = P.shape[1]
    pivots: list[int] = []
    basis: list[np.ndarray] = []
    for row in P:
        v = row.copy()
        for c, b in zip(pivots, basis):
            f = v[c]
            if f:
                v = (v - f * b) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, p) % p
        for i, b in enumerate(basis):
            f = b[c]
            if f:
                basis[i] = (b - f * v) % p
        pivots.append(c)
        basis.append(v)
    if not basis:
        return np.zeros(0, dtype=np.int64), np.zeros((0, w), dtype=np.int64)
    return np.array(pivots, dtype=np.int64), np.array(basis, dtype=np.int64)


def _rref(P: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``P`` by recursive halving.

    Returns ``(pivots, N)`` where ``N`` has one row per pivot, ``N[:, pivots]``
    is the identity and the row space of ``N`` equals that of ``P``.  Row order
    follows discovery order, not pivot order.
    """
    b = P.shape[0]
    if b <= _LEAF_ROWS:
        return _rref_leaf(P, p)
    h = b // 2
    piv1, N1 = _rref(P[:h], p)
    bottom = P[h:]
    if piv1.size:
        bottom = (bottom - mulmod(bottom[:, piv1], N1, p)) % p
    piv2, N2 = _rref(bottom, p)
    if piv2.size and piv1.size:
        N1 = (N1 - mulmod(N1[:, piv2], N2, p)) % p
    return np.concatenate([piv1, piv2]), np.vstack([N1, N2])


class EchelonStore:
    """Incrementally maintained reduced row echelon form over ``GF(p)``.

    Only independent rows are kept.  ``pivots[i]`` is the pivot column of the
    i-th stored row and ``reduced[i]`` holds that row restricted to the current
    free (non-pivot) columns ``free``.

    Example:
        >>> store = EchelonStore(3)
        >>> store.add_rows(np.array([[1, 2, 3], [2, 4, 6]]))
        >>> store.rank
        1
    """

    def __init__(self, cols: int, field: PrimeField = DEFAULT_FIELD):
        self.cols = int(cols)
        self.field = field
        self.pivots = np.zeros(0, dtype=np.int64)
        self.free = np.arange(self.cols, dtype=np.int64)
        self.reduced = np.zeros((0, self.cols), dtype=np.int64)

    @property
    def rank(self) -> int:
        return int(self.pivots.size)

    @property
    def full(self) -> bool:
        return self.free.size == 0

    def _check(self, block) -> np.ndarray:
        block = np.asarray(block, dtype=np.int64)
        if block.ndim == 1:
            block = block.reshape(1, -1)
        if block.ndim != 2 or block.shape[1] != self.cols:
            raise DimensionMismatchError(
                f"rows must have length {self.cols}, got shape {block.shape}"
            )
        return block

    def add_rows(self, block, reduced: bool = False) -> int:
        """Absorb a block of rows and return the rank increase.

        ``reduced`` promises the entries already lie in ``[0, p)``.
        """
        block = self._check(block)
        if not reduced:
            block = np.mod(block, self.field.prime)
        gained = 0
        for s in range(0, block.shape[0], _PANEL_ROWS):
            if self.full:
                break
            gained += self._add_panel(block[s : s + _PANEL_ROWS])
        return gained

    def _add_panel(self, P: np.ndarray) -> int:
        p = self.field.prime
        Pf = P[:, self.free]
        if self.rank:
            Pf = (Pf - mulmod(P[:, self.pivots], self.reduced, p)) % p
        Pf = Pf[np.any(Pf != 0, axis=1)]
        if Pf.shape[0] == 0:
            return 0
        local, N = _rref(Pf, p)
        if local.size == 0:
            return 0
        keep = np.ones(self.free.size, dtype=bool)
        keep[local] = False
        r = self.rank
        new = np.empty((r + N.shape[0], int(keep.sum())), dtype=np.int64)
        # back-substitute and drop the new pivot columns slab by slab
        step = max(1, _CHUNK_ELEMENTS // max(self.free.size, 1))
        for s in range(0, r, step):
            e = min(s + step, r)
            slab = self.reduced[s:e]
            slab = (slab - mulmod(slab[:, local], N, p)) % p
            new[s:e] = slab[:, keep]
        new[r:] = N[:, keep]
        self.reduced = new
        self.pivots = np.concatenate([self.pivots, self.free[local]])
        self.free = self.free[keep]
        return int(local.size)

    def reduce(self, vectors) -> np.ndarray:
        """Remainders of ``vectors`` modulo the stored row space.

        The result is expressed on the free columns only; it is zero exactly
        when the vector lies in the row space.
        """
        V = np.mod(self._check(vectors), self.field.prime)
        out = V[:, self.free]
        if self.rank:
            out = (out - mulmod(V[:, self.pivots], self.reduced, self.field.prime)) % self.field.prime
        return out

    def echelon_rows(self) -> np.ndarray:
        """Full-width reduced row echelon rows, sorted by pivot column."""
        order = np.argsort(self.pivots, kind="stable")
        R = np.zeros((self.rank, self.cols), dtype=np.int64)
        R[np.arange(self.rank), self.pivots[order]] = 1
        if self.free.size:
            R[:, self.free] = self.reduced[order]
        return R

    def kernel_basis(self) -> np.ndarray:
        """Right-kernel basis, one row per free column, in canonical form.

        Row ``j`` has a 1 at free column ``free[j]``, zeros at every other
        free column and ``-reduced[:, j]`` at the pivot columns.
        """
        p = self.field.prime
        K = np.zeros((self.free.size, self.cols), dtype=np.int64)
        K[np.arange(self.free.size), self.free] = 1
        if self.rank:
            K[:, self.pivots] = (-self.reduced.T) % p
        return K


def _as_matrix(matrix, field: PrimeField) -> np.ndarray:
    M = np.asarray(matrix, dtype=np.int64)
    if M.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {M.shape}")
    if M.size and (M.min() < 0 or M.max() >= field.prime):
        raise DomainError("matrix entries must be reduced into [0, p)")
    return M


def rank(matrix, field: PrimeField = DEFAULT_FIELD) -> int:
    """Rank of a residue matrix over the prime field.

    >>> rank(np.eye(3, dtype=np.int64))
    3
    """
    M = _as_matrix(matrix, field)
    if M.size == 0:
        return 0
    store = EchelonStore(M.shape[1], field)
    store.add_rows(M, reduced=True)
    return store.rank


def rank_streaming(rows: Iterable, cols: int, field: PrimeField = DEFAULT_FIELD) -> int:
    """Rank of the matrix whose rows are produced one at a time by ``rows``.

    Rows are buffered into panels; at no point are dependent rows retained.
    """
    store = EchelonStore(cols, field)
    buf: list = []
    for row in rows:
        row = np.asarray(row, dtype=np.int64)
        if row.shape != (cols,):
            raise DimensionMismatchError(f"row of shape {row.shape}, expected ({cols},)")
        buf.append(row)
        if len(buf) == _PANEL_ROWS:
            store.add_rows(np.array(buf))
            buf.clear()
    if buf:
        store.add_rows(np.array(buf))
    return store.rank


def kernel_basis(matrix, field: PrimeField = DEFAULT_FIELD) -> list[np.ndarray]:
    """Basis of the right kernel ``{v : M v = 0}`` as a list of vectors."""
    M = _as_matrix(matrix, field)
    store = EchelonStore(M.shape[1], field)
    if M.shape[0]:
        store.add_rows(M, reduced=True)
    return list(store.kernel_basis())


def inverse(matrix, field: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Inverse of a square residue matrix; raises ``DomainError`` if singular."""
    M = _as_matrix(matrix, field)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatchError(f"inverse of non-square matrix {M.shape}")
    store = EchelonStore(2 * n, field)
    store.add_rows(np.hstack([M, np.eye(n, dtype=np.int64)]), reduced=True)
    R = store.echelon_rows()
    if store.rank < n or not np.array_equal(np.sort(store.pivots)[:n], np.arange(n)):
        raise DomainError("matrix is singular")
    return R[:n, n:]
