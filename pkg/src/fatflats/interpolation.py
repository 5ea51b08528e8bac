"""Linear conditions on degree-``t`` forms and the resulting dimensions.

A form ``F`` of degree ``t`` in ``x_0..x_n`` is a coefficient vector indexed by
the degree-``t`` monomials in graded-lex order (``x_0^t`` first).

Vanishing to order ``m`` along a flat is expressed by changing coordinates
``x = A y`` so that the flat becomes ``{y_{delta+1} = ... = y_n = 0}`` and
asking that every monomial of ``F(A y)`` with transverse degree below ``m``
has zero coefficient.  The substitution is built one degree at a time: each
monomial ``x^a`` is ``x_k * x^(a - e_k)`` and the product with the linear form
``x_k(y)`` is applied to the whole table at once, discarding ``y``-monomials
whose transverse degree already reaches ``m``.  Curve containment uses the
same recursion with binary forms in place of linear forms.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .combinatorics import binomial
from .errors import CapExceededError, DomainError
from .fflinalg import DEFAULT_FIELD, EchelonStore, PrimeField, inverse, kernel_basis, mulmod, rank
from .geometry import FatFlatScheme, FatPoint, Flat, RationalCurve, standard_frame


def _graded_lex(n: int, t: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [(t,)]
    out = []
    for a in range(t, -1, -1):
        out.extend((a,) + rest for rest in _graded_lex(n - 1, t - a))
    return out


class MonomialIndex:
    """Bijection between degree-``t`` exponent vectors in ``n+1`` variables and
    ``range(C(t+n, n))`` in graded-lex order."""

    def __init__(self, n: int, t: int):
        if n < 0 or t < 0:
            raise DomainError("n and t must be nonnegative")
        self.n = n
        self.t = t
        self._exps = _graded_lex(n, t)
        self._index = {e: i for i, e in enumerate(self._exps)}
        self.array = np.array(self._exps, dtype=np.int64).reshape(len(self._exps), n + 1)
        self.array.setflags(write=False)

    def __len__(self) -> int:
        return len(self._exps)

    def index(self, exponents) -> int:
        return self._index[tuple(int(e) for e in exponents)]

    def exponents(self, i: int) -> tuple[int, ...]:
        return self._exps[i]


@lru_cache(maxsize=None)
def monomial_index(n: int, t: int) -> MonomialIndex:
    return MonomialIndex(n, t)


@lru_cache(maxsize=None)
def _mult_table(n: int, d: int) -> np.ndarray:
    """``table[j, i]`` = index at degree ``d`` of (monomial ``j`` of degree ``d-1``) * ``x_i``."""
    prev, cur = monomial_index(n, d - 1), monomial_index(n, d)
    table = np.empty((len(prev), n + 1), dtype=np.int64)
    for j, e in enumerate(prev._exps):
        for i in range(n + 1):
            f = list(e)
            f[i] += 1
            table[j, i] = cur._index[tuple(f)]
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _parents(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """For each degree-``d`` monomial: (index of it divided by its first variable, that variable)."""
    prev, cur = monomial_index(n, d - 1), monomial_index(n, d)
    parent = np.empty(len(cur), dtype=np.int64)
    var = np.empty(len(cur), dtype=np.int64)
    for j, e in enumerate(cur._exps):
        k = next(i for i, a in enumerate(e) if a)
        f = list(e)
        f[k] -= 1
        parent[j] = prev._index[tuple(f)]
        var[j] = k
    parent.setflags(write=False)
    var.setflags(write=False)
    return parent, var


def _accumulate(V, rows, tgt, coef, src, p):
    if rows is None:
        V[:, tgt] = (V[:, tgt] + coef[:, None] * src) % p
    else:
        ix = np.ix_(rows, tgt)
        V[ix] = (V[ix] + coef[rows, None] * src[rows]) % p


_SUBST_CHUNK = 1 << 22


def flat_substitution(A: np.ndarray, delta: int, m: int, t: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of ``x^a(A y)`` on ``y``-monomials of transverse degree ``< m``.

    Returns ``(V, kept)`` with ``V[a, b]`` the coefficient of the ``b``-th kept
    ``y``-monomial in the substituted ``a``-th ``x``-monomial, and ``kept`` the
    graded-lex indices of the kept ``y``-monomials.
    """
    n = A.shape[0] - 1
    V = np.ones((1, 1), dtype=np.int64)
    basis = np.zeros(1, dtype=np.int64)
    for d in range(1, t + 1):
        exps = monomial_index(n, d).array
        keep = exps[:, delta + 1 :].sum(axis=1) < m
        local = np.full(len(exps), -1, dtype=np.int64)
        local[keep] = np.arange(int(keep.sum()))
        table = _mult_table(n, d)
        parent, var = _parents(n, d)
        new = np.zeros((len(exps), int(keep.sum())), dtype=np.int64)
        targets = []
        for i in range(n + 1):
            tgt = local[table[basis, i]]
            valid = tgt >= 0
            if valid.any():
                targets.append((i, tgt[valid], valid))
        # x-monomials are handled in slabs to bound the temporaries
        step = max(1, _SUBST_CHUNK // max(V.shape[1], 1))
        for s in range(0, len(exps), step):
            src_all = V[parent[s : s + step]]
            block = new[s : s + step]
            for i, tgt, valid in targets:
                coef = A[var[s : s + step], i]
                nz = np.flatnonzero(coef)
                if nz.size == 0:
                    continue
                rows = None if nz.size == len(coef) else nz
                _accumulate(block, rows, tgt, coef, src_all[:, valid], p)
        V = new
        basis = np.flatnonzero(keep)
    return V, basis


def curve_substitution(C: np.ndarray, t: int, p: int) -> np.ndarray:
    """``V[a, j]`` = coefficient of ``s^(e t - j) u^j`` in ``x^a`` composed with the curve."""
    n = C.shape[0] - 1
    e = C.shape[1] - 1
    V = np.ones((1, 1), dtype=np.int64)
    for d in range(1, t + 1):
        parent, var = _parents(n, d)
        src = V[parent]
        width = src.shape[1]
        new = np.zeros((len(parent), e * d + 1), dtype=np.int64)
        for l in range(e + 1):
            coef = C[var, l]
            new[:, l : l + width] = (new[:, l : l + width] + coef[:, None] * src) % p
        V = new
    return V


def condition_rows_fat_flat(flat: Flat, m: int, t: int) -> np.ndarray:
    """Rows (over degree-``t`` monomials) expressing vanishing to order ``m`` on ``flat``."""
    if m < 1 or t < 0:
        raise DomainError("need m >= 1 and t >= 0")
    A = standard_frame(flat)
    V, _ = flat_substitution(A, flat.dim, m, t, flat.field.prime)
    return np.ascontiguousarray(V.T)


def condition_rows_fat_point(point, m: int, t: int, field: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Vanishing to order ``m`` at a point: the zero-dimensional case of a fat flat."""
    return condition_rows_fat_flat(Flat(point, field), m, t)


def condition_rows_curve(curve: RationalCurve, t: int) -> np.ndarray:
    """``t*e + 1`` rows asking that the form vanish identically on the curve."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    return np.ascontiguousarray(curve_substitution(curve.coeffs, t, curve.field.prime).T)


@dataclass
class ConditionMatrix:
    """Stacked condition rows with a provenance tag per block."""

    cols: int
    blocks: list[tuple[str, np.ndarray]] = field(default_factory=list)

    def add(self, tag: str, rows: np.ndarray) -> None:
        if rows.ndim != 2 or rows.shape[1] != self.cols:
            raise DomainError(f"block {tag!r} has shape {rows.shape}, expected width {self.cols}")
        self.blocks.append((tag, rows))

    @property
    def rows(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros((0, self.cols), dtype=np.int64)
        return np.vstack([b for _, b in self.blocks])

    @property
    def row_count(self) -> int:
        return sum(b.shape[0] for _, b in self.blocks)


@dataclass
class FormVector:
    """Nonzero form of degree ``t`` in ``n+1`` variables over ``GF(p)``."""

    n: int
    t: int
    coeffs: np.ndarray
    field: PrimeField = DEFAULT_FIELD

    def __post_init__(self):
        self.coeffs = self.field.reduce(self.coeffs)
        if self.coeffs.shape != (binomial(self.t + self.n, self.n),):
            raise DomainError("coefficient vector has the wrong length")
        if not np.any(self.coeffs):
            raise DomainError("the zero form is not a FormVector")

    def evaluate(self, point) -> int:
        p = self.field.prime
        x = [int(v) % p for v in point]
        exps = monomial_index(self.n, self.t).array
        vals = np.ones(len(exps), dtype=np.int64)
        for k in range(self.n + 1):
            powers = np.array([pow(x[k], a, p) for a in range(self.t + 1)], dtype=np.int64)
            vals = vals * powers[exps[:, k]] % p
        return int((vals * self.coeffs % p).sum() % p)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        idx = monomial_index(self.n, self.t)
        return [(idx.exponents(i), int(c)) for i, c in enumerate(self.coeffs) if c]


def _tag(kind: str, i: int, dim: int, m: int) -> str:
    return f"{kind}[{i}] dim={dim} m={m}"


def condition_blocks(scheme: FatFlatScheme, t: int, skip_flats: int = 0) -> Iterator[tuple[str, np.ndarray]]:
    """Lazily generate the condition blocks of every component of ``scheme``.

    The first ``skip_flats`` flat components are left out.
    """
    for i, (f, m) in enumerate(scheme.components):
        if i < skip_flats:
            continue
        yield _tag("flat", i, f.dim, m), condition_rows_fat_flat(f, m, t)
    for i, fp in enumerate(scheme.fat_points):
        fld = fp.host.field if fp.host is not None else scheme.field
        yield _tag("point", i, 0, fp.multiplicity), condition_rows_fat_point(fp.point, fp.multiplicity, t, fld)
    for i, c in enumerate(scheme.curves):
        yield f"curve[{i}] degree={c.degree}", condition_rows_curve(c, t)


def condition_matrix(scheme: FatFlatScheme, t: int) -> ConditionMatrix:
    cm = ConditionMatrix(binomial(t + scheme.n, scheme.n))
    for tag, rows in condition_blocks(scheme, t):
        cm.add(tag, rows)
    return cm


@dataclass
class AdimResult:
    """Actual dimension of a scheme's degree-``t`` system at one instance."""

    value: int
    monomials: int
    rank: int
    manifest: dict
    store: Optional[EchelonStore] = field(default=None, repr=False)

    def __int__(self) -> int:
        return self.value


DEFAULT_CAP = 25_000


def _check_size(scheme: FatFlatScheme, t: int, cap: Optional[int]) -> int:
    if t < 0:
        raise DomainError("t must be nonnegative")
    n = scheme.n
    cols = binomial(t + n, n)
    if cap is not None and cols > cap:
        raise CapExceededError(f"C({t}+{n},{n}) = {cols} monomials exceeds the cap {cap}")
    if not scheme.is_empty:
        scheme.field.check_admissible(scheme.max_multiplicity, t)
    return cols


def solve_system(scheme: FatFlatScheme, t: int, cap: Optional[int] = DEFAULT_CAP) -> AdimResult:
    """Stream every condition block into an echelon store and summarise."""
    cols = _check_size(scheme, t, cap)
    n = scheme.n
    fld = scheme.field
    store = EchelonStore(cols, fld)
    per_component = []
    for tag, rows in condition_blocks(scheme, t):
        gained = store.add_rows(rows, reduced=True)
        per_component.append({"component": tag, "rows": int(rows.shape[0]), "rank_gain": gained})
    manifest = {
        "seed": scheme.seed,
        "prime": fld.prime,
        "n": n,
        "t": t,
        "monomials": cols,
        "components": per_component,
    }
    return AdimResult(cols - store.rank, cols, store.rank, manifest, store)


def _extend(start: np.ndarray, candidates: np.ndarray, fld: PrimeField) -> np.ndarray:
    """Rows of ``candidates`` that extend the span of ``start``, chosen greedily."""
    store = EchelonStore(candidates.shape[1], fld)
    store.add_rows(start)
    picked = [row for row in candidates if store.add_rows(row.reshape(1, -1))]
    return np.array(picked, dtype=np.int64).reshape(-1, candidates.shape[1])


def monomial_frame(scheme: FatFlatScheme) -> Optional[tuple[np.ndarray, list[tuple[list[int], int]]]]:
    """Coordinates ``x = P y`` in which the leading flats are cut out by variables.

    Two flats that together span ``P^n`` (the general case) are both made
    coordinate: with ``P``'s columns a basis of their meet, then a completion
    inside the first flat, then one inside the second.  Otherwise only the
    first flat is.  Returns ``P`` and, per flat, the cutting variables and
    the multiplicity, or ``None`` when the scheme has no flats.
    """
    comps = scheme.components
    if not comps:
        return None
    fld = scheme.field
    n1 = scheme.n + 1
    f0, m0 = comps[0]
    if len(comps) > 1:
        f1, m1 = comps[1]
        meet = np.array(kernel_basis(np.vstack([f0.duals, f1.duals]), fld), dtype=np.int64).reshape(-1, n1)
        a = _extend(meet, f0.basis, fld)
        b = _extend(meet, f1.basis, fld)
        rows = np.vstack([meet, a, b])
        if rows.shape[0] == n1 and rank(rows, fld) == n1:
            c, k = len(meet), len(a)
            return rows.T.copy(), [(list(range(c + k, n1)), m0), (list(range(c, c + k)), m1)]
    return standard_frame(f0), [(list(range(f0.dim + 1, n1)), m0)]


def _transform(scheme: FatFlatScheme, Q: np.ndarray) -> FatFlatScheme:
    """Image of ``scheme`` under the coordinate change ``y = Q x``."""
    fld = scheme.field
    p = fld.prime

    def move(flat: Flat) -> Flat:
        return Flat(mulmod(flat.basis, Q.T, p), flat.field)

    def point(v) -> np.ndarray:
        return mulmod(Q, np.asarray(v, dtype=np.int64).reshape(-1, 1) % p, p)[:, 0]

    comps = [(move(f), m) for f, m in scheme.components]
    pts = [FatPoint(point(fp.point), fp.multiplicity, move(fp.host) if fp.host is not None else None)
           for fp in scheme.fat_points]
    curves = [RationalCurve(mulmod(Q, c.coeffs, p), c.field) for c in scheme.curves]
    return FatFlatScheme(scheme.n, comps, pts, curves, scheme.seed, scheme.label)


def adim(scheme: FatFlatScheme, t: int, cap: Optional[int] = DEFAULT_CAP) -> AdimResult:
    """Actual dimension ``dim [I_scheme]_t`` at the sampled instance.

    The value is computed in coordinates from :func:`monomial_frame`, where
    the leading flats only ask for certain coefficients to vanish.  Their
    columns are dropped instead of eliminated; the remaining components are
    ranked on the surviving columns.  Dimensions and per-component rank gains
    are unchanged by an invertible change of coordinates.
    """
    cols = _check_size(scheme, t, cap)
    frame = monomial_frame(scheme)
    if frame is None:
        result = solve_system(scheme, t, cap)
        result.store = None
        return result
    P, coordinate_flats = frame
    fld = scheme.field
    exps = monomial_index(scheme.n, t).array
    killed = np.zeros(cols, dtype=bool)
    per_component = []
    for i, (variables, m) in enumerate(coordinate_flats):
        mask = exps[:, variables].sum(axis=1) < m
        gained = int((mask & ~killed).sum())
        killed |= mask
        f = scheme.components[i][0]
        per_component.append({"component": _tag("flat", i, f.dim, m), "rows": int(mask.sum()), "rank_gain": gained})
    keep = np.flatnonzero(~killed)
    store = EchelonStore(len(keep), fld) if len(keep) else None
    moved = _transform(scheme, inverse(P, fld))
    for tag, rows in condition_blocks(moved, t, skip_flats=len(coordinate_flats)):
        gained = store.add_rows(np.ascontiguousarray(rows[:, keep]), reduced=True) if store else 0
        per_component.append({"component": tag, "rows": int(rows.shape[0]), "rank_gain": gained})
    total = int(killed.sum()) + (store.rank if store else 0)
    manifest = {
        "seed": scheme.seed,
        "prime": fld.prime,
        "n": scheme.n,
        "t": t,
        "monomials": cols,
        "components": per_component,
    }
    return AdimResult(cols - total, cols, total, manifest, None)


def kernel_basis_system(scheme: FatFlatScheme, t: int, cap: Optional[int] = DEFAULT_CAP) -> list[FormVector]:
    """Independent forms spanning the degree-``t`` part of the scheme's ideal."""
    res = solve_system(scheme, t, cap)
    fld = scheme.field
    return [FormVector(scheme.n, t, v, fld) for v in res.store.kernel_basis()]


def vanishing_order_along_flat(form: FormVector, flat: Flat) -> int:
    """Largest ``m`` such that ``form`` vanishes to order ``m`` along ``flat``."""
    if flat.n != form.n:
        raise DomainError("form and flat live in different spaces")
    p = form.field.prime
    A = standard_frame(flat)
    V, kept = flat_substitution(A, flat.dim, form.t + 1, form.t, p)
    G = mulmod(form.coeffs.reshape(1, -1), V, p)[0]
    trans = monomial_index(form.n, form.t).array[kept][:, flat.dim + 1 :].sum(axis=1)
    return int(trans[G != 0].min())


def fat_points_scheme(n: int, points: list[FatPoint], seed: Optional[int] = None) -> FatFlatScheme:
    return FatFlatScheme(n, fat_points=list(points), seed=seed)
