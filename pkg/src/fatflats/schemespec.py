"""JSON scheme specifications and their conversion into random instances.

A specification describes the triple ``(n, X, Z, t)`` without coordinates::

    {
      "n": 3, "t": 10,
      "seed": 0, "prime": 2147483629,
      "components": [
        {"kind": "flat", "dim": 1, "multiplicity": 3, "count": 4},
        {"kind": "flat", "dim": 1, "multiplicity": 1, "count": 5}
      ],
      "z_components": []
    }

Component kinds:

``flat``
    ``count`` general flats of dimension ``dim`` (or one flat through explicit
    ``points``) with the given ``multiplicity``.
``fat-points-on-line``
    ``count`` points on a fresh general line, all of ``multiplicity``, or one
    multiplicity per point via ``multiplicities``.
``rational-curve``
    ``{"curve": "rnc"}`` for a rational normal curve of degree ``n`` in
    general coordinates, or explicit ``coefficients`` (``n+1`` rows of binary
    form coefficients, ``s^e`` first).
``named-base``
    The ``n+1`` general codimension-2 base flats of the Veneroni map with
    ``multiplicity`` (or per-flat ``multiplicities``).

An optional ``"transfer": {"adim": 832, "note": "..."}`` supplies an actual
dimension carried over by a Cremona correspondence instead of a rank.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import DomainError
from .fflinalg import PrimeField
from .geometry import (
    FatFlatScheme,
    FatPoint,
    Flat,
    RandomSource,
    RationalCurve,
    general_flats,
    rational_normal_curve,
    sample_fat_points_on_line,
)

KINDS = ("flat", "fat-points-on-line", "rational-curve", "named-base")


class SpecError(DomainError):
    """The specification file is malformed or inconsistent."""


@dataclass
class ComponentSpec:
    kind: str
    dim: Optional[int] = None
    multiplicity: int = 1
    count: int = 1
    multiplicities: Optional[list[int]] = None
    points: Optional[list[list[int]]] = None
    curve: Optional[str] = None
    coefficients: Optional[list[list[int]]] = None

    @classmethod
    def from_dict(cls, d: dict, n: int) -> ComponentSpec:
        if not isinstance(d, dict):
            raise SpecError(f"component must be an object, got {d!r}")
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise SpecError(f"unknown component fields {sorted(unknown)}")
        c = cls(**d)
        c.validate(n)
        return c

    def validate(self, n: int) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown component kind {self.kind!r}; expected one of {KINDS}")
        if self.multiplicity < 1:
            raise SpecError("multiplicity must be positive")
        if self.multiplicities is not None and any(int(m) < 1 for m in self.multiplicities):
            raise SpecError("multiplicities must be positive")
        if self.kind == "flat":
            if self.points is not None:
                if any(len(p) != n + 1 for p in self.points):
                    raise SpecError(f"flat points need {n + 1} coordinates")
            elif self.dim is None or not 0 <= self.dim <= n - 1:
                raise SpecError(f"flat needs 0 <= dim <= {n - 1}")
            if self.count < 1:
                raise SpecError("count must be positive")
        elif self.kind == "fat-points-on-line":
            if self.multiplicities is not None:
                self.count = len(self.multiplicities)
            if self.count < 1:
                raise SpecError("count must be positive")
        elif self.kind == "rational-curve":
            if self.coefficients is None and self.curve != "rnc":
                raise SpecError("rational-curve needs 'curve': 'rnc' or explicit 'coefficients'")
            if self.coefficients is not None and len(self.coefficients) != n + 1:
                raise SpecError(f"curve needs {n + 1} coordinate forms")
        elif self.kind == "named-base":
            if n < 2:
                raise SpecError("named-base needs n >= 2")
            if self.multiplicities is not None and len(self.multiplicities) != n + 1:
                raise SpecError(f"named-base needs exactly {n + 1} multiplicities")

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class SchemeSpec:
    n: int
    t: int
    components: list[ComponentSpec] = field(default_factory=list)
    z_components: list[ComponentSpec] = field(default_factory=list)
    prime: Optional[int] = None
    seed: Optional[int] = None
    transfer: Optional[dict] = None
    label: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> SchemeSpec:
        if not isinstance(d, dict):
            raise SpecError("specification must be a JSON object")
        unknown = set(d) - {"n", "t", "components", "z_components", "prime", "seed", "transfer", "label"}
        if unknown:
            raise SpecError(f"unknown specification fields {sorted(unknown)}")
        try:
            n, t = int(d["n"]), int(d["t"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError("specification needs integer 'n' and 't'") from exc
        if n < 1 or t < 0:
            raise SpecError("need n >= 1 and t >= 0")
        try:
            comps = [ComponentSpec.from_dict(c, n) for c in d.get("components", [])]
            zcomps = [ComponentSpec.from_dict(c, n) for c in d.get("z_components", [])]
        except TypeError as exc:
            raise SpecError(str(exc)) from exc
        if any(c.kind == "rational-curve" for c in comps):
            raise SpecError("curves belong in z_components (H_X needs fat flats)")
        prime = d.get("prime")
        if prime is not None:
            try:
                PrimeField(int(prime))
            except DomainError as exc:
                raise SpecError(str(exc)) from exc
        transfer = d.get("transfer")
        if transfer is not None and not isinstance(transfer.get("adim"), int):
            raise SpecError("transfer needs an integer 'adim'")
        return cls(n, t, comps, zcomps, prime, d.get("seed"), transfer, d.get("label", ""))

    @classmethod
    def load(cls, path) -> SchemeSpec:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read specification {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "t": self.t,
            "components": [c.to_dict() for c in self.components],
            "z_components": [c.to_dict() for c in self.z_components],
        }
        for k in ("prime", "seed", "transfer"):
            if getattr(self, k) is not None:
                d[k] = getattr(self, k)
        if self.label:
            d["label"] = self.label
        return d

    def build(self, rng: RandomSource, fld: PrimeField) -> tuple[FatFlatScheme, FatFlatScheme]:
        """Sample ``(X, Z)`` with every general flat in general position."""
        placed: list[Flat] = []
        X = _build_part(self.n, self.components, rng.spawn(0), fld, placed)
        Z = _build_part(self.n, self.z_components, rng.spawn(1), fld, placed)
        X.seed = Z.seed = rng.seed
        X.label, Z.label = "X", "Z"
        return X, Z


def _build_part(n: int, comps: list[ComponentSpec], rng: RandomSource, fld: PrimeField, placed: list[Flat]) -> FatFlatScheme:
    scheme = FatFlatScheme(n)
    for i, c in enumerate(comps):
        r = rng.spawn(i)
        if c.kind == "flat" and c.points is not None:
            f = Flat(c.points, fld)
            scheme.components.append((f, c.multiplicity))
        elif c.kind in ("flat", "named-base"):
            if c.kind == "flat":
                dim = c.dim
                mults = c.multiplicities or [c.multiplicity] * c.count
            else:
                dim = n - 2
                mults = c.multiplicities or [c.multiplicity] * (n + 1)
            new = general_flats(n, dim, [int(m) for m in mults], r, fld, avoid=placed)
            placed.extend(f for f, _ in new)
            scheme.components.extend(new)
        elif c.kind == "fat-points-on-line":
            (line, _), = general_flats(n, 1, [1], r, fld, avoid=placed)
            placed.append(line)
            mults = c.multiplicities or [c.multiplicity] * c.count
            pts = sample_fat_points_on_line(line, len(mults), 1, r.spawn(1))
            scheme.fat_points.extend(FatPoint(p.point, int(m), line) for p, m in zip(pts, mults))
        elif c.kind == "rational-curve":
            if c.coefficients is not None:
                curve = RationalCurve(c.coefficients, fld)
            else:
                curve = rational_normal_curve(n, r, fld)
            scheme.curves.append(curve)
    return scheme
