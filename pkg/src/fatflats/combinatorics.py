"""Closed-form condition counts and Hilbert-polynomial arithmetic.

Everything here is exact: integers are Python ints and polynomial
coefficients are :class:`fractions.Fraction`.

The number of conditions imposed on degree-``t`` forms in ``P^n`` by vanishing
to order ``m`` along a ``delta``-dimensional linear space is::

    c(n, delta, m, t) = sum_{0 <= i < m} C(t - i + delta, delta) * C(i + n - delta - 1, n - delta - 1)

valid for ``t >= m``.  For a union of fat flats whose pairwise intersections
are linear spaces and whose triple intersections are empty, the Hilbert
polynomial is the sum of the individual ones minus one correction per
unordered pair, and each correction is obtained from an h-vector computation
(see :func:`pairwise_intersection_hp`).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Union

from .errors import DomainError, UnsupportedConfigurationError

Number = Union[int, Fraction]


def binomial(a: int, b: int) -> int:
    """Binomial coefficient, zero when ``b < 0`` or ``a < b``.

    >>> binomial(13, 3), binomial(4, 7)
    (286, 0)
    """
    if b < 0 or a < b:
        return 0
    return math.comb(a, b)


class IntegerPolynomial:
    """Univariate polynomial in ``t`` with rational coefficients.

    Coefficients are stored lowest degree first with trailing zeros stripped,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Number] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def constant(cls, value: Number) -> IntegerPolynomial:
        return cls([value])

    @classmethod
    def binomial_in_t(cls, shift: int, k: int) -> IntegerPolynomial:
        """The polynomial ``C(t + shift, k)`` (zero polynomial for ``k < 0``)."""
        if k < 0:
            return cls()
        result = cls([1])
        for j in range(k):
            result = result * cls([shift - j, 1])
        return result * Fraction(1, math.factorial(k))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def value(self, t: int) -> int:
        """Evaluate at an integer and insist on an integral result."""
        v = self(t)
        if v.denominator != 1:
            raise DomainError(f"polynomial {self} takes non-integral value {v} at t={t}")
        return int(v)

    def __add__(self, other) -> IntegerPolynomial:
        if not isinstance(other, IntegerPolynomial):
            other = IntegerPolynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return IntegerPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> IntegerPolynomial:
        return IntegerPolynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> IntegerPolynomial:
        if not isinstance(other, IntegerPolynomial):
            other = IntegerPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> IntegerPolynomial:
        return (-self) + other

    def __mul__(self, other) -> IntegerPolynomial:
        if not isinstance(other, IntegerPolynomial):
            return IntegerPolynomial([c * Fraction(other) for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return IntegerPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntegerPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = IntegerPolynomial.constant(other)
        if not isinstance(other, IntegerPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntegerPolynomial({str(self)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "t" if k == 1 else f"t^{k}"
                body = mono if a == 1 else f"{a}{mono}" if a.denominator == 1 else f"({a}){mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class HVector:
    """Finite sequence of nonnegative integers with nonzero last entry."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if any(x < 0 for x in entries):
            raise DomainError(f"h-vector entries must be nonnegative: {entries}")
        if entries and entries[-1] == 0:
            raise DomainError(f"h-vector must end in a nonzero entry: {entries}")
        object.__setattr__(self, "entries", entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, HVector):
            return self.entries == other.entries
        if isinstance(other, (tuple, list)):
            return self.entries == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.entries)

    @property
    def multiplicity(self) -> int:
        """Sum of the entries (the degree of the corresponding scheme)."""
        return sum(self.entries)


@dataclass(frozen=True)
class ConditionCountQuery:
    n: int
    delta: int
    m: int
    t: int

    def validate(self) -> None:
        if not 0 <= self.delta <= self.n - 1:
            raise DomainError(f"need 0 <= delta <= n-1, got delta={self.delta}, n={self.n}")
        if not self.t >= self.m >= 1:
            raise DomainError(f"need t >= m >= 1, got m={self.m}, t={self.t}")


def conditions_count(n: int, delta: int, m: int, t: int) -> int:
    """Independent conditions imposed on degree-``t`` forms by an ``m``-fold flat.

    >>> conditions_count(4, 2, 3, 13)
    521
    """
    ConditionCountQuery(n, delta, m, t).validate()
    k = n - delta - 1
    return sum(binomial(t - i + delta, delta) * binomial(i + k, k) for i in range(m))


def fat_flat_hilbert_poly(n: int, delta: int, m: int) -> IntegerPolynomial:
    """Hilbert polynomial of an ``m``-fold ``delta``-flat in ``P^n``.

    Agrees with :func:`conditions_count` for every ``t >= m``.
    """
    if not 0 <= delta <= n - 1:
        raise DomainError(f"need 0 <= delta <= n-1, got delta={delta}, n={n}")
    if m < 1:
        raise DomainError(f"multiplicity must be positive, got {m}")
    k = n - delta - 1
    poly = IntegerPolynomial()
    for i in range(m):
        poly = poly + IntegerPolynomial.binomial_in_t(delta - i, delta) * binomial(i + k, k)
    return poly


def power_ideal_hvector(codim: int, m: int) -> HVector:
    """h-vector of ``K[x_1..x_c] / (x_1..x_c)^m``: entry ``i`` is ``C(i+c-1, c-1)``."""
    if codim < 1 or m < 1:
        raise DomainError(f"need codim >= 1 and m >= 1, got {codim}, {m}")
    return HVector(tuple(binomial(i + codim - 1, codim - 1) for i in range(m)))


def hvector_convolve(a: HVector, b: HVector) -> HVector:
    """Product of the two generating polynomials (h-vector of a tensor product)."""
    if not len(a) or not len(b):
        return HVector(())
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return HVector(tuple(out))


@dataclass(frozen=True)
class IntegratedHilbert:
    """Hilbert function obtained by integrating an h-vector ``times`` times.

    ``value(t)`` is exact for every ``t >= 0``; ``tail`` is the Hilbert
    polynomial and coincides with ``value`` for ``t >= valid_from``.
    """

    h: HVector
    times: int
    tail: IntegerPolynomial
    valid_from: int

    def value(self, t: int) -> int:
        if t < 0:
            return 0
        if self.times == 0:
            return self.h[t] if t < len(self.h) else 0
        k = self.times - 1
        return sum(hi * binomial(t - i + k, k) for i, hi in enumerate(self.h) if t >= i)

    def __call__(self, t: int) -> int:
        return self.value(t)

    def values(self, count: int) -> list[int]:
        return [self.value(t) for t in range(count)]


def hvector_integrate(h: HVector, times: int) -> IntegratedHilbert:
    """Iterated partial sums of ``h`` together with the eventual polynomial.

    Integrating ``k >= 1`` times gives ``sum_i h_i C(t - i + k - 1, k - 1)``,
    which is a polynomial in ``t`` as soon as ``t >= len(h) - k``.
    """
    if times < 0:
        raise DomainError(f"times must be nonnegative, got {times}")
    if times == 0:
        return IntegratedHilbert(h, 0, IntegerPolynomial(), len(h))
    k = times - 1
    tail = IntegerPolynomial()
    for i, hi in enumerate(h):
        tail = tail + IntegerPolynomial.binomial_in_t(k - i, k) * hi
    return IntegratedHilbert(h, times, tail, max(0, len(h) - times))


def pairwise_intersection_hp(n: int, m1: int, m2: int, meet_dim: int) -> IntegerPolynomial:
    """Hilbert polynomial of ``I_1^m1 + I_2^m2`` for two codimension-2 flats.

    The flats must meet transversally, i.e. in a flat of dimension ``n - 4``,
    and only ``meet_dim`` in ``{0, 1}`` is supported.  In suitable coordinates
    the ideals are ``(x0, x1)^m1`` and ``(x2, x3)^m2``; the artinian reduction
    is the tensor product of two power-ideal quotients, and the remaining
    ``meet_dim + 1`` variables are restored by integration.
    """
    if meet_dim not in (0, 1):
        raise DomainError(f"meet dimension must be 0 or 1, got {meet_dim}")
    if meet_dim != n - 4:
        raise DomainError(
            f"two codimension-2 flats in P^{n} meet transversally in dimension {n - 4}, "
            f"not {meet_dim}"
        )
    if m1 < 1 or m2 < 1:
        raise DomainError("multiplicities must be positive")
    h = hvector_convolve(power_ideal_hvector(2, m1), power_ideal_hvector(2, m2))
    return hvector_integrate(h, meet_dim + 1).tail


@dataclass(frozen=True)
class FlatDescriptor:
    """Abstract stand-in for a flat: its dimension in an ambient ``P^n``.

    Components given as descriptors are taken in general position, so two of
    them meet in dimension ``max(d1 + d2 - n, -1)``.
    """

    n: int
    dim: int


def _generic_meet(n: int, dims: Sequence[int]) -> int:
    return max(sum(dims) - (len(dims) - 1) * n, -1)


def _meet_dim(n: int, flats: Sequence) -> int:
    if all(isinstance(f, FlatDescriptor) for f in flats):
        return _generic_meet(n, [f.dim for f in flats])
    from .geometry import Flat, meet_dim

    if not all(isinstance(f, Flat) for f in flats):
        raise DomainError("cannot mix flat descriptors and concrete flats")
    return meet_dim(*flats)


def _flat_dim(f) -> int:
    return f.dim


def mayer_vietoris_poly(n: int, components: Sequence[tuple], check_triples: bool = True) -> IntegerPolynomial:
    """Hilbert polynomial of a union of fat flats with empty triple intersections.

    ``components`` is a sequence of ``(flat, multiplicity)`` where ``flat`` is
    a :class:`FlatDescriptor` or a concrete :class:`~fatflats.geometry.Flat`.
    Pairs may be disjoint or be codimension-2 flats meeting transversally in a
    point or a line; the correction is summed over unordered pairs.
    """
    total = IntegerPolynomial()
    for flat, m in components:
        total = total + fat_flat_hilbert_poly(n, _flat_dim(flat), m)
    for (fa, ma), (fb, mb) in combinations(components, 2):
        d = _meet_dim(n, [fa, fb])
        if d < 0:
            continue
        if _flat_dim(fa) != n - 2 or _flat_dim(fb) != n - 2 or d != n - 4 or d not in (0, 1):
            raise UnsupportedConfigurationError(
                f"pair of flats of dimensions {_flat_dim(fa)}, {_flat_dim(fb)} meeting in "
                f"dimension {d} is not a transversal codimension-2 pair"
            )
        total = total - pairwise_intersection_hp(n, ma, mb, d)
    if check_triples:
        for trio in combinations(components, 3):
            if _meet_dim(n, [f for f, _ in trio]) >= 0:
                raise UnsupportedConfigurationError("a triple intersection is nonempty")
    return total


def mayer_vietoris_value(n: int, components: Sequence[tuple], t: int) -> int:
    """Value at ``t`` of :func:`mayer_vietoris_poly`; needs ``t >=`` every multiplicity."""
    if components and t < max(m for _, m in components):
        raise DomainError(f"t={t} is below the largest multiplicity")
    return mayer_vietoris_poly(n, components).value(t)


def generic_flats(n: int, dim: int, multiplicities: Sequence[int]) -> list[tuple[FlatDescriptor, int]]:
    """Convenience: general flats of one dimension with the given multiplicities."""
    return [(FlatDescriptor(n, dim), m) for m in multiplicities]

