"""Veneroni transformations on virtual systems, plus two recorded Todd entries.

A virtual system ``d H - m_1 P_1 - ... - m_{n+1} P_{n+1}`` in ``P^n`` is the
linear system of degree-``d`` forms vanishing to order ``m_i`` on general
codimension-2 flats ``P_i``.  Pulling back along the Veneroni map uses

    H'   = n H - (P_1 + ... + P_{n+1})
    P'_j = (n-1) H - sum_{i != j} P_i

so ``d H' - sum m_j P'_j`` expands to degree ``n d - (n-1) sum(m)`` and
multiplicities ``d - sum_{j != i} m_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .combinatorics import binomial
from .errors import CapExceededError, DomainError, GenericityError, NotEffectiveError, UnsupportedConfigurationError
from .fflinalg import DEFAULT_FIELD, PrimeField
from .geometry import FatFlatScheme, Flat, RandomSource, general_flats
from .interpolation import FormVector, adim, kernel_basis_system


@dataclass(frozen=True)
class VirtualSystem:
    n: int
    degree: int
    multiplicities: tuple[int, ...]
    extra: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        object.__setattr__(self, "extra", tuple((str(k), int(v)) for k, v in self.extra))
        if len(self.multiplicities) != self.n + 1:
            raise DomainError(f"need exactly n+1 = {self.n + 1} base multiplicities")
        if self.degree < 0 or any(m < 0 for m in self.multiplicities):
            raise NotEffectiveError(f"negative degree or multiplicity in {self}")

    def __str__(self) -> str:
        return f"({self.degree}; {', '.join(map(str, self.multiplicities))})"


def veneroni_formula(n: int, degree: int, mults) -> tuple[int, tuple[int, ...]]:
    """Closed form of the pullback, without any effectivity check."""
    total = sum(mults)
    return n * degree - (n - 1) * total, tuple(degree - (total - m) for m in mults)


def veneroni_transform(vs: VirtualSystem) -> VirtualSystem:
    """Pull ``vs`` back along the Veneroni map of ``P^n``.

    >>> str(veneroni_transform(VirtualSystem(3, 7, (1, 1, 1, 1))))
    '(13; 4, 4, 4, 4)'
    """
    if vs.extra:
        raise UnsupportedConfigurationError("only base-flat systems can be transformed")
    d, ms = veneroni_formula(vs.n, vs.degree, vs.multiplicities)
    if d < 0 or any(m < 0 for m in ms):
        raise NotEffectiveError(f"transform of {vs} is not effective: ({d}; {ms})")
    return VirtualSystem(vs.n, d, ms)


def expand_via_relations(n: int, degree: int, mults) -> tuple[int, tuple[int, ...]]:
    """Expand ``d H' - sum m_j P'_j`` by substituting the class relations.

    Classes are vectors ``[coef of H, coef of P_1, ..., coef of P_{n+1}]``.
    This route never uses the closed form and serves as its cross-check.
    """
    size = n + 2
    h_prime = np.zeros(size, dtype=object)
    h_prime[0] = n
    h_prime[1:] = -1
    total = degree * h_prime
    for j, m in enumerate(mults):
        pj = np.zeros(size, dtype=object)
        pj[0] = n - 1
        pj[1:] = -1
        pj[1 + j] = 0
        total = total - m * pj
    return int(total[0]), tuple(int(-c) for c in total[1:])


@dataclass(frozen=True)
class Signature:
    """Degree and multiplicities of a system of surfaces through lines of ``P^3``."""

    ambient: int
    degree: int
    base: tuple[int, ...]
    extra: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = ", ".join(map(str, self.base + self.extra))
        return f"(P^{self.ambient}: {self.degree}; {parts})"


@dataclass(frozen=True)
class NamedCorrespondence:
    name: str
    source: Signature
    target: Signature
    provenance: str


CORRESPONDENCES: tuple[NamedCorrespondence, ...] = (
    NamedCorrespondence(
        "todd",
        Signature(3, 8, (1, 1, 1, 1, 1), (6,)),
        Signature(3, 20, (6, 6, 6, 6, 6), (1,)),
        "Todd transformation by degree-19 surfaces through five lines with multiplicity 5",
    ),
    NamedCorrespondence(
        "todd",
        Signature(3, 20, (6, 6, 6, 6, 6)),
        Signature(3, 20, (4, 4, 4, 4, 4), (10,)),
        "Todd transformation by degree-19 surfaces through five lines with multiplicity 5",
    ),
)


def apply_named_correspondence(name: str, source: Signature) -> Signature:
    """Look up a recorded correspondence; cubo-cubic entries use the Veneroni rule.

    The actual dimension is transferred unchanged between source and target.
    """
    if name in ("cubo-cubic", "veneroni"):
        if source.extra:
            raise UnsupportedConfigurationError("the Veneroni rule needs base flats only")
        vs = veneroni_transform(VirtualSystem(source.ambient, source.degree, source.base))
        return Signature(source.ambient, vs.degree, vs.multiplicities)
    for c in CORRESPONDENCES:
        if c.name == name and c.source == source:
            return c.target
    raise UnsupportedConfigurationError(f"no recorded {name!r} correspondence for {source}")


def base_scheme(vs: VirtualSystem, rng: RandomSource, field: PrimeField = DEFAULT_FIELD) -> FatFlatScheme:
    """A random instance: ``n+1`` general codimension-2 flats with the system's multiplicities.

    Flats of multiplicity zero are still sampled (so seeds line up) but omitted.
    """
    comps = general_flats(vs.n, vs.n - 2, [max(m, 1) for m in vs.multiplicities], rng, field)
    kept = [(f, m) for (f, _), m in zip(comps, vs.multiplicities) if m > 0]
    return FatFlatScheme(vs.n, kept, seed=rng.seed, label=str(vs))


def veneroni_map_basis(
    n: int, rng: RandomSource, field: PrimeField = DEFAULT_FIELD, flats: Optional[list[Flat]] = None
) -> tuple[list[FormVector], list[Flat]]:
    """Degree-``n`` forms through ``n+1`` codimension-2 flats; must number ``n+1``."""
    if not 3 <= n <= 5:
        raise DomainError("map bases are computed for 3 <= n <= 5 only")
    if flats is None:
        flats = [f for f, _ in general_flats(n, n - 2, [1] * (n + 1), rng, field)]
    if len(flats) != n + 1:
        raise DomainError(f"need n+1 = {n + 1} base flats")
    scheme = FatFlatScheme(n, [(f, 1) for f in flats], seed=rng.seed)
    forms = kernel_basis_system(scheme, n)
    if len(forms) != n + 1:
        raise GenericityError(f"system of degree-{n} forms has dimension {len(forms)}, not {n + 1}")
    return forms, flats


@dataclass
class InvarianceReport:
    source: VirtualSystem
    target: VirtualSystem
    source_adim: Optional[int] = None
    target_adim: Optional[int] = None
    skipped: Optional[str] = None
    manifests: list = field(default_factory=list)

    @property
    def agree(self) -> Optional[bool]:
        if self.skipped:
            return None
        return self.source_adim == self.target_adim


def check_dimension_invariance(
    vs: VirtualSystem,
    rng: RandomSource,
    field: PrimeField = DEFAULT_FIELD,
    cap: int = 6000,
) -> InvarianceReport:
    """Rank both ``vs`` and its transform on independent random instances."""
    target = veneroni_transform(vs)
    report = InvarianceReport(vs, target)
    for sys_ in (vs, target):
        cols = binomial(sys_.degree + sys_.n, sys_.n)
        if cols > cap:
            report.skipped = f"{sys_} needs {cols} monomials, above the cap {cap}"
            return report
    for k, sys_ in enumerate((vs, target)):
        try:
            res = adim(base_scheme(sys_, rng.spawn(k), field), sys_.degree, cap=cap)
        except CapExceededError as exc:  # pragma: no cover - guarded above
            report.skipped = str(exc)
            return report
        report.manifests.append(res.manifest)
        if k == 0:
            report.source_adim = res.value
        else:
            report.target_adim = res.value
    return report
