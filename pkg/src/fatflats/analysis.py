"""Virtual dimension, unexpectedness and certificates.

For a triple ``(X, Z, t)``::

    adim = dim [I_X cap I_Z]_t            (rank computation on an instance)
    vdim = dim [I_Z]_t - H_X(t)           (H_X from closed forms)
    edim = max(0, vdim)
    u    = 0 if adim == 0 else adim - vdim

and the triple is unexpected when ``u > 0``.

A random instance over ``GF(p)`` only bounds the generic actual dimension
from above, so certificates repeat the computation over several seeds and two
primes before calling a verdict generic.  Values moved across a Cremona
transformation are labelled as transferred rather than computed.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

from .combinatorics import binomial, conditions_count, mayer_vietoris_value
from .errors import DomainError, GenericityError, HypothesisError, UnsupportedConfigurationError
from .fflinalg import DEFAULT_FIELD, SECOND_PRIME, PrimeField
from .geometry import FatFlatScheme, FatPoint, Flat, RandomSource, RationalCurve, random_flat, sample_fat_points_on_line
from .interpolation import DEFAULT_CAP, FormVector, adim as instance_adim, solve_system, vanishing_order_along_flat

RANK_INSTANCE = "rank-instance"
TRANSFERRED = "transferred-via-correspondence"
FORMULA_ONLY = "formula-only"

GENERICITY_CAVEAT = (
    "A random instance over a prime field bounds the generic actual dimension from above "
    "(upper semicontinuity); agreement across seeds and primes is evidence, not proof."
)


@dataclass
class DimensionReport:
    adim: Optional[int]
    vdim: int
    edim: int
    u: Optional[int]
    method: str
    manifest: dict = field(default_factory=dict)

    @classmethod
    def build(cls, adim: Optional[int], vdim: int, method: str, manifest: Optional[dict] = None) -> DimensionReport:
        if adim is None:
            u = None
        else:
            u = 0 if adim == 0 else adim - vdim
        return cls(adim, vdim, max(0, vdim), u, method, manifest or {})

    @property
    def unexpected(self) -> Optional[bool]:
        return None if self.u is None else self.u > 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class UnexpectednessCertificate:
    triple: dict
    report: DimensionReport
    verdict: str
    confidence: str
    caveat: str = GENERICITY_CAVEAT
    details: dict = field(default_factory=dict)
    form: Optional[FormVector] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "triple": self.triple,
            "report": self.report.to_dict(),
            "verdict": self.verdict,
            "confidence": self.confidence,
            "caveat": self.caveat,
            "details": self.details,
        }


def _as_flat_components(X: FatFlatScheme) -> list[tuple[Flat, int]]:
    if X.curves:
        raise UnsupportedConfigurationError("H_X is only available for fat flats and fat points")
    comps = list(X.components)
    for fp in X.fat_points:
        fld = fp.host.field if fp.host is not None else X.field
        comps.append((Flat(fp.point, fld), fp.multiplicity))
    return comps


def hilbert_value(X: FatFlatScheme, t: int) -> int:
    """``H_X(t)`` from closed forms: a plain sum when components are disjoint,
    otherwise the pairwise inclusion-exclusion for transversal codimension-2 flats."""
    comps = _as_flat_components(X)
    if not comps:
        return 0
    return mayer_vietoris_value(X.n, comps, t)


def dim_ideal(Z: FatFlatScheme, t: int, cap: Optional[int] = DEFAULT_CAP) -> tuple[int, Optional[dict]]:
    """``dim [I_Z]_t``; by rank whenever ``Z`` is nonempty."""
    if Z.is_empty:
        return binomial(t + Z.n, Z.n), None
    res = instance_adim(Z, t, cap)
    return res.value, res.manifest


def virtual_dimension(X: FatFlatScheme, Z: FatFlatScheme, t: int, dim_IZ_t: Optional[int] = None) -> int:
    if dim_IZ_t is None:
        dim_IZ_t, _ = dim_ideal(Z, t)
    return dim_IZ_t - hilbert_value(X, t)


def _empty_like(X: FatFlatScheme) -> FatFlatScheme:
    return FatFlatScheme(X.n, seed=X.seed)


def unexpectedness(
    X: FatFlatScheme,
    Z: Optional[FatFlatScheme] = None,
    t: int = 0,
    cap: Optional[int] = DEFAULT_CAP,
    transferred_adim: Optional[int] = None,
    transfer_note: str = "",
) -> DimensionReport:
    """Dimension report for ``(X, Z, t)`` at the sampled instance.

    With ``transferred_adim`` the actual dimension is taken from a Cremona
    correspondence and no rank is computed for ``X + Z``.
    """
    if Z is None:
        Z = _empty_like(X)
    if Z.n != X.n:
        raise DomainError("X and Z live in different spaces")
    hx = hilbert_value(X, t)
    dz, z_manifest = dim_ideal(Z, t, cap)
    vdim = dz - hx
    manifest = {
        "seeds": [X.seed],
        "primes": [X.field.prime if not X.is_empty else Z.field.prime],
        "n": X.n,
        "t": t,
        "H_X": hx,
        "dim_I_Z": dz,
    }
    if z_manifest:
        manifest["Z"] = z_manifest["components"]
    if transferred_adim is not None:
        manifest["transfer"] = transfer_note
        return DimensionReport.build(transferred_adim, vdim, TRANSFERRED, manifest)
    res = instance_adim(X + Z, t, cap)
    manifest["X+Z"] = res.manifest["components"]
    return DimensionReport.build(res.value, vdim, RANK_INSTANCE, manifest)


def formula_report(X: FatFlatScheme, t: int) -> DimensionReport:
    """vdim only, for ``Z`` empty and no rank computation."""
    vdim = binomial(t + X.n, X.n) - hilbert_value(X, t)
    return DimensionReport.build(None, vdim, FORMULA_ONLY, {"n": X.n, "t": t})


Builder = Callable[[RandomSource, PrimeField], tuple[FatFlatScheme, Optional[FatFlatScheme]]]


def certify(
    build: Builder,
    t: int,
    seeds: Sequence[int] = (0, 1, 2),
    primes: Sequence[int] = (DEFAULT_FIELD.prime, SECOND_PRIME),
    cap: Optional[int] = DEFAULT_CAP,
    triple: Optional[dict] = None,
) -> UnexpectednessCertificate:
    """Recompute the report for every (seed, prime) and agree on a verdict."""
    reports = []
    for prime in primes:
        fld = PrimeField(prime)
        for seed in seeds:
            X, Z = build(RandomSource(seed), fld)
            reports.append(unexpectedness(X, Z, t, cap))
    first = reports[0]
    agree = all((r.adim, r.vdim) == (first.adim, first.vdim) for r in reports)
    manifest = dict(first.manifest)
    manifest["seeds"] = list(seeds)
    manifest["primes"] = list(primes)
    manifest["instances"] = [{"adim": r.adim, "vdim": r.vdim} for r in reports]
    if not agree:
        # the smallest instance value is the best upper bound for the generic one
        best = min(reports, key=lambda r: r.adim)
        report = DimensionReport.build(best.adim, best.vdim, RANK_INSTANCE, manifest)
        return UnexpectednessCertificate(triple or {}, report, "inconclusive", "instances disagree")
    report = DimensionReport.build(first.adim, first.vdim, RANK_INSTANCE, manifest)
    generic = len(set(seeds)) >= 3 and len(set(primes)) >= 2
    confidence = "generic, high confidence" if generic else "instance"
    verdict = "unexpected" if report.u > 0 else "expected"
    return UnexpectednessCertificate(triple or {}, report, verdict, confidence)


def transferred_certificate(
    X: FatFlatScheme, t: int, adim_value: int, note: str, triple: Optional[dict] = None
) -> UnexpectednessCertificate:
    report = unexpectedness(X, None, t, transferred_adim=adim_value, transfer_note=note)
    verdict = "unexpected" if report.u > 0 else "expected"
    return UnexpectednessCertificate(triple or {}, report, verdict, "transferred")


def _require_lines_in_p3(*schemes: FatFlatScheme) -> None:
    for S in schemes:
        if S.n != 3 or any(f.dim != 1 for f, _ in S.components) or S.curves:
            raise HypothesisError("this check applies to fat lines in P^3")


def replacement_check(X: FatFlatScheme, Zprime: FatFlatScheme, t: int, cap: Optional[int] = DEFAULT_CAP) -> UnexpectednessCertificate:
    """Compare ``u(X + Z', 0, t)`` with ``u(Z', 0, t)``.

    A strict increase implies that ``(X, Z', t)`` is unexpected; the implied
    value ``u(X, Z', t)`` is computed alongside and recorded.
    """
    _require_lines_in_p3(X, Zprime)
    both = X + Zprime
    u_sum = unexpectedness(both, None, t, cap)
    u_z = unexpectedness(Zprime, None, t, cap)
    direct = DimensionReport.build(
        u_sum.adim,
        u_z.adim - hilbert_value(X, t),
        RANK_INSTANCE,
        {"seeds": [X.seed], "primes": [X.field.prime], "t": t, "dim_I_Z": u_z.adim, "H_X": hilbert_value(X, t)},
    )
    chain = {
        "u(X+Z',0,t)": u_sum.u,
        "u(Z',0,t)": u_z.u,
        "u(X,Z',t)": direct.u,
        "adim(X+Z',0,t)": u_sum.adim,
        "vdim(X+Z',0,t)": u_sum.vdim,
    }
    triple = {"X": X.signature(), "Z": Zprime.signature(), "t": t}
    if X.is_empty or not u_sum.u > u_z.u:
        return UnexpectednessCertificate(triple, direct, "inconclusive", "instance", details=chain)
    chain["implication_holds"] = bool(direct.u > 0)
    return UnexpectednessCertificate(triple, direct, "unexpected", "instance", details=chain)


def replace_line_with_fat_points(
    Z: FatFlatScheme,
    index: int,
    count: int,
    multiplicities: Union[int, Sequence[int]],
    t: int,
    rng: RandomSource,
) -> FatFlatScheme:
    """Swap the fat line ``Z.components[index]`` for fat points on it.

    At least ``t - m + 2`` of the points must carry the line's multiplicity
    ``m`` and none may exceed it; below that threshold the degree-``t`` system
    is no longer guaranteed to be unchanged.
    """
    line, m = Z.components[index]
    if line.dim != 1:
        raise DomainError("component is not a line")
    mults = [multiplicities] * count if isinstance(multiplicities, int) else list(multiplicities)
    if len(mults) != count:
        raise DomainError("need one multiplicity per point")
    if any(k > m or k < 1 for k in mults):
        raise DomainError(f"point multiplicities must lie in [1, {m}]")
    exact = sum(1 for k in mults if k == m)
    if exact < t - m + 2:
        raise DomainError(f"need at least t-m+2 = {t - m + 2} points of multiplicity {m}, got {exact}")
    pts = sample_fat_points_on_line(line, count, m, rng)
    fat = [FatPoint(fp.point, k, line) for fp, k in zip(pts, mults)]
    comps = [c for i, c in enumerate(Z.components) if i != index]
    return FatFlatScheme(Z.n, comps, Z.fat_points + fat, list(Z.curves), Z.seed, Z.label)


def _cone_lines_vanish(form: FormVector, apex: Flat, curve: RationalCurve, rng: RandomSource, lines: int, points: int) -> int:
    p = form.field.prime
    checked = 0
    for i in range(lines):
        r = rng.spawn(i)
        q = apex.random_point(r)
        c = curve.random_point(r)
        for a, b in r.residues((points, 2), form.field):
            pt = (int(a) * q.astype(object) + int(b) * c.astype(object)) % p
            if form.evaluate(pt) != 0:
                raise GenericityError("cone form does not vanish on a cone line")
            checked += 1
    return checked


def cone_verify(
    curve: RationalCurve,
    rng: RandomSource,
    lines: int = 20,
    points: int = 50,
) -> UnexpectednessCertificate:
    """Check that the cone over ``curve`` with a general apex is the unique,
    unexpected degree-``d`` hypersurface with multiplicity ``d`` along the apex."""
    n, d = curve.n, curve.degree
    if n < 3:
        raise HypothesisError("the cone construction needs n >= 3")
    if not curve.is_nondegenerate():
        raise HypothesisError("the curve must be non-degenerate")
    fld = curve.field
    apex = random_flat(n, n - 3, rng.spawn(0), fld)
    X = FatFlatScheme(n, [(apex, d)], seed=rng.seed)
    Z = FatFlatScheme(n, curves=[curve], seed=rng.seed)
    report = unexpectedness(X, Z, d)
    if report.adim != 1:
        raise GenericityError(f"expected a unique cone, found adim = {report.adim}")
    res = solve_system(X + Z, d)
    form = FormVector(n, d, res.store.kernel_basis()[0], fld)
    order = vanishing_order_along_flat(form, apex)
    if order != d:
        raise GenericityError(f"cone form has order {order} along the apex, expected {d}")
    checked = _cone_lines_vanish(form, apex, curve, rng.spawn(1), lines, points)
    expected_conditions = conditions_count(n, n - 3, d, d)
    details = {
        "order_along_apex": order,
        "cone_lines": lines,
        "points_checked": checked,
        "apex_conditions": expected_conditions,
        "form_terms": len(form.terms()),
    }
    triple = {"X": X.signature(), "Z": Z.signature(), "t": d}
    verdict = "unexpected" if report.u > 0 else "expected"
    return UnexpectednessCertificate(triple, report, verdict, "instance", details=details, form=form)


def form_coefficients(form: FormVector) -> list[list[int]]:
    """``[[exponents..., coefficient], ...]`` for JSON output."""
    return [list(e) + [c] for e, c in form.terms()]


def collinear_rank_profile(line: Flat, m: int, t: int, counts: Sequence[int], rng: RandomSource) -> dict[int, int]:
    """Rank of ``s`` collinear ``m``-fold points in degree ``t`` for each ``s`` in ``counts``.

    Observational only: nothing is asserted for ``s < t - m + 2``.
    """
    out = {}
    for s in counts:
        pts = sample_fat_points_on_line(line, s, m, rng.spawn(s))
        S = FatFlatScheme(line.n, fat_points=pts)
        out[s] = instance_adim(S, t).rank
    return out


__all__ = [
    "DimensionReport",
    "UnexpectednessCertificate",
    "certify",
    "cone_verify",
    "hilbert_value",
    "replace_line_with_fat_points",
    "replacement_check",
    "transferred_certificate",
    "unexpectedness",
    "virtual_dimension",
]
