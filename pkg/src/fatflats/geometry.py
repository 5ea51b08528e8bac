"""Projective flats, rational curves and fat schemes over a prime field.

Points of ``P^n`` are length ``n+1`` residue vectors.  A :class:`Flat` is
stored both by spanning points and by the linear forms cutting it out, so
incidence and intersection questions reduce to ranks.

Randomness comes from :class:`RandomSource`, a thin wrapper over
``numpy.random.Generator`` whose child streams are derived deterministically
from ``(seed, key)`` so that every component of a configuration can be
regenerated independently.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import DomainError, GenericityError, HypothesisError
from .fflinalg import DEFAULT_FIELD, EchelonStore, PrimeField, inverse, kernel_basis, mulmod, rank

MAX_ATTEMPTS = 16


class RandomSource:
    """Seeded generator of field elements.

    ``spawn(key)`` returns an independent child source determined only by the
    parent seed and the key, never by how much the parent has been used.
    """

    def __init__(self, seed: int = 0, _path: tuple[int, ...] = ()):
        self.seed = int(seed) & (2**64 - 1)
        self.path = tuple(_path)
        self._gen = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self.path))

    def spawn(self, key: int) -> RandomSource:
        return RandomSource(self.seed, self.path + (int(key),))

    def residues(self, shape, field: PrimeField) -> np.ndarray:
        return self._gen.integers(0, field.prime, size=shape, dtype=np.int64)

    def nonzero_residues(self, shape, field: PrimeField) -> np.ndarray:
        return self._gen.integers(1, field.prime, size=shape, dtype=np.int64)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, path={self.path})"


class Flat:
    """A linear subspace of ``P^n`` of dimension ``dim``.

    Args:
        basis: ``(dim+1) x (n+1)`` array of spanning points.
        field: the prime field the coordinates live in.
    """

    def __init__(self, basis, field: PrimeField = DEFAULT_FIELD):
        B = field.reduce(np.atleast_2d(basis))
        if rank(B, field) != B.shape[0]:
            raise DomainError("basis points of a flat must be projectively independent")
        self.field = field
        self.basis = B
        self.basis.setflags(write=False)
        self.n = B.shape[1] - 1
        self.dim = B.shape[0] - 1
        if self.dim > self.n:
            raise DomainError("too many basis points for the ambient space")
        duals = np.array(kernel_basis(B, field), dtype=np.int64).reshape(-1, self.n + 1)
        self.duals = duals
        self.duals.setflags(write=False)

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int], field: PrimeField = DEFAULT_FIELD) -> Flat:
        """Flat spanned by the coordinate points ``e_i`` for ``i`` in ``indices``."""
        return cls(np.eye(n + 1, dtype=np.int64)[list(indices)], field)

    def contains(self, point) -> bool:
        v = self.field.reduce(point).reshape(-1, 1)
        return not np.any(mulmod(self.duals, v, self.field.prime))

    def point(self, coords) -> np.ndarray:
        """The point ``sum_i coords[i] * basis[i]``."""
        c = self.field.reduce(coords).reshape(1, -1)
        return mulmod(c, self.basis, self.field.prime)[0]

    def random_point(self, rng: RandomSource) -> np.ndarray:
        while True:
            v = self.point(rng.residues(self.dim + 1, self.field))
            if np.any(v):
                return v

    def __repr__(self) -> str:
        return f"Flat(n={self.n}, dim={self.dim})"


def random_flat(n: int, dim: int, rng: RandomSource, field: PrimeField = DEFAULT_FIELD) -> Flat:
    """Flat spanned by ``dim+1`` random points, resampled until independent."""
    if not 0 <= dim <= n - 1:
        raise DomainError(f"need 0 <= dim <= n-1, got dim={dim}, n={n}")
    for _ in range(MAX_ATTEMPTS):
        B = rng.residues((dim + 1, n + 1), field)
        if rank(B, field) == dim + 1:
            return Flat(B, field)
    raise GenericityError(f"no independent spanning set for a {dim}-flat in {MAX_ATTEMPTS} attempts")


def meet_dim(*flats: Flat) -> int:
    """Dimension of the common intersection, ``-1`` when empty."""
    n = flats[0].n
    if any(f.n != n for f in flats):
        raise DomainError("flats live in different ambient spaces")
    field = flats[0].field
    duals = np.vstack([f.duals for f in flats if f.duals.size] or [np.zeros((0, n + 1), dtype=np.int64)])
    return n - rank(duals, field)


def flat_meet_dim(a: Flat, b: Flat) -> int:
    return meet_dim(a, b)


def generic_meet_dim(n: int, *dims: int) -> int:
    return max(sum(dims) - (len(dims) - 1) * n, -1)


def _complement(basis: np.ndarray, field: PrimeField) -> np.ndarray:
    """Coordinate vectors completing ``basis`` to a basis, chosen greedily."""
    n1 = basis.shape[1]
    store = EchelonStore(n1, field)
    store.add_rows(basis)
    extra = []
    for i in range(n1):
        if store.full:
            break
        e = np.zeros(n1, dtype=np.int64)
        e[i] = 1
        if store.add_rows(e):
            extra.append(e)
    return np.array(extra, dtype=np.int64).reshape(-1, n1)


def standard_frame(flat: Flat) -> np.ndarray:
    """Matrix ``A`` with ``x = A y`` sending ``{y_{dim+1} = ... = y_n = 0}`` onto ``flat``.

    The first ``dim+1`` columns are the flat's basis points, the rest are
    coordinate vectors completing them.
    """
    cols = np.vstack([flat.basis, _complement(flat.basis, flat.field)])
    return cols.T.copy()


def coordinate_change_to_standard(flat: Flat) -> np.ndarray:
    """Invertible ``(n+1) x (n+1)`` matrix mapping ``flat`` onto the standard flat.

    Applying it to any point of the flat gives a vector whose coordinates
    ``dim+1 .. n`` vanish.
    """
    return inverse(standard_frame(flat), flat.field)


@dataclass(frozen=True)
class FatPoint:
    point: np.ndarray
    multiplicity: int
    host: Optional[Flat] = None

    def __post_init__(self):
        if self.multiplicity < 1:
            raise DomainError("fat point multiplicity must be positive")
        if self.host is not None and not self.host.contains(self.point):
            raise DomainError("fat point does not lie on its host line")


def _poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _poly_trim(a)
    return a


def _poly_gcd_degree(polys: Sequence[list[int]], p: int) -> int:
    """Degree of the gcd of univariate polynomials (lowest coefficient first)."""
    g: list[int] = []
    for f in polys:
        a, b = g, _poly_trim([int(c) % p for c in f])
        while b:
            a, b = b, _poly_mod(a, b, p)
        g = a
    return len(g) - 1 if g else -1


class RationalCurve:
    """Image of ``P^1`` under ``n+1`` binary forms of degree ``e``.

    ``coeffs[k, j]`` is the coefficient of ``s^(e-j) u^j`` in the k-th
    coordinate form.
    """

    def __init__(self, coeffs, field: PrimeField = DEFAULT_FIELD, require_nondegenerate: bool = False):
        C = field.reduce(np.atleast_2d(coeffs))
        self.field = field
        self.coeffs = C
        self.coeffs.setflags(write=False)
        self.n = C.shape[0] - 1
        self.degree = C.shape[1] - 1
        if self.degree < 1:
            raise DomainError("a rational curve needs degree at least 1")
        if self.has_common_factor():
            raise DomainError("the coordinate forms share a common factor")
        if require_nondegenerate and not self.is_nondegenerate():
            raise HypothesisError("curve lies in a hyperplane (degenerate)")

    def has_common_factor(self) -> bool:
        p = self.field.prime
        if not np.any(self.coeffs[:, 0]):
            return True  # u divides every form
        # dehomogenise at u = 1: coefficient of s^i is coeffs[k, e - i]
        polys = [list(row[::-1]) for row in self.coeffs]
        return _poly_gcd_degree(polys, p) >= 1

    def is_nondegenerate(self) -> bool:
        return rank(self.coeffs, self.field) == self.n + 1

    def point(self, s: int, u: int) -> np.ndarray:
        p = self.field.prime
        e = self.degree
        mons = [pow(s, e - j, p) * pow(u, j, p) % p for j in range(e + 1)]
        return np.array(
            [sum(int(c) * m for c, m in zip(row, mons)) % p for row in self.coeffs], dtype=np.int64
        )

    def random_point(self, rng: RandomSource) -> np.ndarray:
        while True:
            s, u = (int(x) for x in rng.residues(2, self.field))
            v = self.point(s, u)
            if np.any(v):
                return v

    def __repr__(self) -> str:
        return f"RationalCurve(n={self.n}, degree={self.degree})"


def rational_normal_curve(n: int, rng: RandomSource, field: PrimeField = DEFAULT_FIELD) -> RationalCurve:
    """Degree-``n`` rational normal curve in random coordinates."""
    if n < 2:
        raise DomainError("rational normal curves need n >= 2")
    for _ in range(MAX_ATTEMPTS):
        G = rng.residues((n + 1, n + 1), field)
        if rank(G, field) == n + 1:
            return RationalCurve(G, field, require_nondegenerate=True)
    raise GenericityError("no invertible coordinate change found")


def sample_fat_points_on_line(
    line: Flat, count: int, multiplicity: int, rng: RandomSource
) -> list[FatPoint]:
    """``count`` distinct random points of ``line``, each of the given multiplicity."""
    if line.dim != 1:
        raise DomainError("host must be a line")
    if count < 1:
        raise DomainError("need at least one point")
    p = line.field.prime
    if count > p + 1:
        raise DomainError(f"GF({p}) has only {p + 1} points on a line")
    params: list[int] = []
    seen: set[int] = set()
    # parameter c stands for the point basis[0] + c*basis[1]
    while len(params) < count:
        for c in rng.residues(2 * count, line.field):
            c = int(c)
            if c not in seen:
                seen.add(c)
                params.append(c)
                if len(params) == count:
                    break
    return [FatPoint(line.point([1, c]), multiplicity, line) for c in params]


@dataclass
class FatFlatScheme:
    """Formal sum of fat flats, fat points and (reduced) rational curves."""

    n: int
    components: list[tuple[Flat, int]] = field(default_factory=list)
    fat_points: list[FatPoint] = field(default_factory=list)
    curves: list[RationalCurve] = field(default_factory=list)
    seed: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        for f, m in self.components:
            if m < 1:
                raise DomainError("all multiplicities must be positive")
            if f.n != self.n:
                raise DomainError("component lives in a different ambient space")
        for fp in self.fat_points:
            if len(fp.point) != self.n + 1:
                raise DomainError("fat point lives in a different ambient space")
        for c in self.curves:
            if c.n != self.n:
                raise DomainError("curve lives in a different ambient space")

    @property
    def field(self) -> PrimeField:
        for f, _ in self.components:
            return f.field
        for fp in self.fat_points:
            if fp.host is not None:
                return fp.host.field
        for c in self.curves:
            return c.field
        return DEFAULT_FIELD

    @property
    def is_empty(self) -> bool:
        return not (self.components or self.fat_points or self.curves)

    @property
    def max_multiplicity(self) -> int:
        ms = [m for _, m in self.components] + [fp.multiplicity for fp in self.fat_points]
        return max(ms, default=1)

    def __add__(self, other: FatFlatScheme) -> FatFlatScheme:
        if other.n != self.n:
            raise DomainError("cannot add schemes in different ambient spaces")
        return FatFlatScheme(
            self.n,
            self.components + other.components,
            self.fat_points + other.fat_points,
            self.curves + other.curves,
            self.seed,
            "+".join(x for x in (self.label, other.label) if x),
        )

    def signature(self) -> dict:
        """Multiplicity data without coordinates, for reports."""
        flats: dict[str, list[int]] = {}
        for f, m in self.components:
            flats.setdefault(str(f.dim), []).append(m)
        return {
            "n": self.n,
            "flats": {k: sorted(v, reverse=True) for k, v in sorted(flats.items())},
            "fat_points": sorted((fp.multiplicity for fp in self.fat_points), reverse=True),
            "curves": [c.degree for c in self.curves],
        }


def validate_general_position(flats: Sequence[Flat]) -> None:
    """Raise ``GenericityError`` unless every pair meets in the generic dimension."""
    for a, b in combinations(flats, 2):
        expected = generic_meet_dim(a.n, a.dim, b.dim)
        if meet_dim(a, b) != expected:
            raise GenericityError(
                f"flats of dimensions {a.dim}, {b.dim} meet in dimension {meet_dim(a, b)}, "
                f"expected {expected}"
            )


def general_flats(
    n: int,
    dim: int,
    multiplicities: Sequence[int],
    rng: RandomSource,
    field: PrimeField = DEFAULT_FIELD,
    avoid: Sequence[Flat] = (),
) -> list[tuple[Flat, int]]:
    """General ``dim``-flats, one per multiplicity, in general position with ``avoid``."""
    for attempt in range(MAX_ATTEMPTS):
        child = rng.spawn(attempt)
        flats = [random_flat(n, dim, child.spawn(i), field) for i in range(len(multiplicities))]
        try:
            validate_general_position(list(avoid) + flats)
        except GenericityError:
            continue
        return list(zip(flats, multiplicities))
    raise GenericityError(f"could not place {len(multiplicities)} general {dim}-flats in P^{n}")


def general_scheme(
    n: int,
    flats: Sequence[tuple[int, Sequence[int]]],
    rng: RandomSource,
    field: PrimeField = DEFAULT_FIELD,
    label: str = "",
) -> FatFlatScheme:
    """Scheme of general fat flats; ``flats`` lists ``(dim, multiplicities)`` groups."""
    comps: list[tuple[Flat, int]] = []
    for g, (dim, mults) in enumerate(flats):
        comps += general_flats(n, dim, mults, rng.spawn(g), field, avoid=[f for f, _ in comps])
    return FatFlatScheme(n, comps, seed=rng.seed, label=label)
