"""Command-line front end.

Subcommands::

    fatflats analyze SPEC.json
    fatflats paper-suite [--filter ID] [--extended]
    fatflats cone-verify --curve {rnc|FILE} --n N [--coefficients]
    fatflats veneroni --n N --degree D --mults M ... [--involution] [--check]

Every flag can also be set through an environment variable named
``FATFLATS_<FLAG>`` (for example ``FATFLATS_SEEDS=5``); explicit flags win.

Exit codes: 0 success, 1 invalid input, 2 genericity failure, 3 out-of-scope
or non-effective configuration, 4 a regression check did not match.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional

from . import __version__

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_GENERICITY = 2
EXIT_SCOPE = 3
EXIT_MISMATCH = 4

ENV_PREFIX = "FATFLATS_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with the genericity code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _env(name: str, cast=str, default=None):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None or raw == "":
        return default
    if cast is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    try:
        return cast(raw)
    except ValueError as exc:
        raise SystemExit(f"invalid {ENV_PREFIX}{name.upper()}={raw!r}: {exc}")


def _common(p: argparse.ArgumentParser, default_seeds: int) -> None:
    p.add_argument("--prime", type=int, default=_env("prime", int), help="field characteristic (< 2**31)")
    p.add_argument("--second-prime", type=int, default=_env("second_prime", int),
                   help="extra prime for certification; 0 disables it")
    p.add_argument("--seed", type=int, default=_env("seed", int), help="first random seed")
    p.add_argument("--seeds", type=int, default=_env("seeds", int, default_seeds), help="number of consecutive seeds")
    p.add_argument("--threads", type=int, default=_env("threads", int), help="BLAS threads")
    p.add_argument("--format", choices=("json", "csv", "md"), default=_env("format", str, "json"))
    p.add_argument("--out", default=_env("out"), help="write the report here instead of stdout")
    p.add_argument("--cap", type=int, default=_env("cap", int, 25_000), help="monomial-count ceiling; 0 for none")
    p.add_argument("--timing", action="store_true", default=_env("timing", bool, False),
                   help="record wall-clock seconds in the manifest (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fatflats", description="Unexpected hypersurfaces through fat flats.")
    parser.add_argument("--version", action="version", version=f"fatflats {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="analyse a JSON scheme specification")
    a.add_argument("spec")
    _common(a, 3)

    s = sub.add_parser("paper-suite", help="recompute the worked examples and compare")
    s.add_argument("--filter", default=_env("filter"), help="example id, e.g. ex4.6 or thm3.5")
    s.add_argument("--extended", action="store_true", default=_env("extended", bool, False),
                   help="include the heavy rank computations")
    s.add_argument("--list", action="store_true", help="list example ids and exit")
    _common(s, 1)

    c = sub.add_parser("cone-verify", help="check the cone over a rational curve")
    c.add_argument("--curve", default="rnc", help="'rnc' or a JSON file with 'coefficients'")
    c.add_argument("--n", type=int, help="ambient dimension for --curve rnc")
    c.add_argument("--coefficients", action="store_true", help="include the cone form's coefficients")
    c.add_argument("--lines", type=int, default=20)
    c.add_argument("--points", type=int, default=50)
    _common(c, 1)

    v = sub.add_parser("veneroni", help="transform a virtual system dH - sum m_i P_i")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--degree", type=int, required=True)
    v.add_argument("--mults", type=int, nargs="+", required=True)
    v.add_argument("--involution", action="store_true", help="apply the transform twice and compare")
    v.add_argument("--check", action="store_true", help="rank both systems on random instances")
    _common(v, 1)
    v.set_defaults(format=_env("format", str, None))
    return parser


# ------------------------------------------------------------------ output


def document(command: str, inputs: dict, reports: list, verdict: str, manifest: dict) -> dict:
    manifest = dict(manifest)
    manifest["tool"] = "fatflats"
    manifest["version"] = __version__
    return {"command": command, "input": inputs, "reports": reports, "verdict": verdict, "manifest": manifest}


def _table(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    for r in rows[1:]:
        keys += [k for k in r if k not in keys]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in keys})
        return buf.getvalue()
    lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(k)) for k in keys) + " |")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def render(doc: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    return _table(rows, fmt)


def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seeds(args, spec_seed=None) -> list[int]:
    first = args.seed if args.seed is not None else (spec_seed if spec_seed is not None else 0)
    if args.seeds < 1:
        raise UsageError("--seeds must be positive")
    return list(range(first, first + args.seeds))


def _primes(args, spec_prime=None, certify: bool = False) -> list[int]:
    from .fflinalg import DEFAULT_PRIME, SECOND_PRIME

    first = args.prime or spec_prime or DEFAULT_PRIME
    second = args.second_prime
    if second is None:
        second = (SECOND_PRIME if first != SECOND_PRIME else DEFAULT_PRIME) if certify else 0
    primes = [first]
    if second and second != first:
        primes.append(second)
    return primes


def _cap(args) -> Optional[int]:
    return args.cap if args.cap and args.cap > 0 else None


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    from .analysis import certify, replacement_check, unexpectedness
    from .errors import HypothesisError
    from .fflinalg import PrimeField
    from .geometry import RandomSource
    from .schemespec import SchemeSpec

    spec = SchemeSpec.load(args.spec)
    seeds = _seeds(args, spec.seed)
    primes = _primes(args, spec.prime, certify=spec.transfer is None)
    cap = _cap(args)
    triple = spec.to_dict()
    t = spec.t
    extra = {}
    if spec.transfer is not None:
        X, Z = spec.build(RandomSource(seeds[0]), PrimeField(primes[0]))
        rep = unexpectedness(X, Z, t, cap, transferred_adim=spec.transfer["adim"],
                             transfer_note=spec.transfer.get("note", ""))
        report = rep.to_dict()
        verdict = "unexpected" if rep.u > 0 else "expected"
        confidence = "transferred"
        manifest = {"seeds": seeds[:1], "primes": primes[:1]}
    else:
        cert = certify(spec.build, t, seeds, primes, cap, triple)
        report = cert.report.to_dict()
        verdict, confidence = cert.verdict, cert.confidence
        manifest = {"seeds": seeds, "primes": primes}
        if spec.z_components:
            X, Z = spec.build(RandomSource(seeds[0]), PrimeField(primes[0]))
            try:
                chain = replacement_check(X, Z, t, cap)
                extra["replacement_check"] = {"verdict": chain.verdict, **chain.details}
            except HypothesisError as exc:
                extra["replacement_check"] = {"verdict": "not applicable", "reason": str(exc)}
    report.update({"verdict": verdict, "confidence": confidence, **extra})
    if cap is not None:
        manifest["cap"] = cap
    doc = document("analyze", triple, [report], verdict, manifest)
    row = {k: report[k] for k in ("adim", "vdim", "edim", "u", "method", "verdict", "confidence")}
    row = {"label": spec.label or args.spec, **row}
    return _finish(args, doc, [row], EXIT_OK)


def cmd_paper_suite(args) -> int:
    from .suite import run_case, select

    cases = select(args.filter)
    if args.list:
        for c in cases:
            print(f"{c.id}\t{c.title}")
        return EXIT_OK
    if not cases:
        raise UsageError(f"no example matches {args.filter!r}")
    if args.extended:
        for c in cases:
            if c.heavy:
                print(f"[{c.id}] extended: {c.heavy}", file=sys.stderr)
    seeds = _seeds(args)
    primes = _primes(args)
    results = [run_case(c, seeds, primes, args.extended, _cap(args)) for c in cases]
    ok = all(r["ok"] for r in results)
    manifest = {"seeds": seeds, "primes": primes, "extended": bool(args.extended)}
    doc = document("paper-suite", {"filter": args.filter}, results, "match" if ok else "mismatch", manifest)
    rows = [
        {"id": r["id"], "check": c["name"], "expected": c["expected"], "observed": c["observed"], "ok": c["ok"]}
        for r in results
        for c in r["checks"]
    ]
    return _finish(args, doc, rows, EXIT_OK if ok else EXIT_MISMATCH)


def _load_curve(args, fld):
    from .geometry import RandomSource, RationalCurve, rational_normal_curve
    from .schemespec import SpecError

    if args.curve == "rnc":
        if args.n is None:
            raise UsageError("--curve rnc needs --n")
        if args.n < 3:
            raise UsageError(f"the cone construction needs n >= 3, got n = {args.n}")
        if args.n > 5:
            from .errors import UnsupportedConfigurationError

            raise UnsupportedConfigurationError("built-in rational normal curves cover 3 <= n <= 5")
        return rational_normal_curve(args.n, RandomSource(args.seed or 0).spawn(7), fld)
    try:
        with open(args.curve, encoding="utf-8") as fh:
            data = json.load(fh)
        coeffs = data["coefficients"]
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read curve file {args.curve}: {exc}") from exc
    curve = RationalCurve(coeffs, fld)
    if args.n is not None and args.n != curve.n:
        raise UsageError(f"--n {args.n} disagrees with the curve file (n = {curve.n})")
    if curve.n < 3:
        raise UsageError(f"the cone construction needs n >= 3, got n = {curve.n}")
    return curve


def cmd_cone_verify(args) -> int:
    from .analysis import cone_verify, form_coefficients
    from .fflinalg import PrimeField
    from .geometry import RandomSource

    seeds = _seeds(args)
    primes = _primes(args)
    reports, rows = [], []
    for prime in primes:
        fld = PrimeField(prime)
        for seed in seeds:
            args.seed = seed
            curve = _load_curve(args, fld)
            cert = cone_verify(curve, RandomSource(seed), args.lines, args.points)
            rep = cert.to_dict()
            rep["seed"], rep["prime"] = seed, prime
            if args.coefficients:
                rep["form"] = form_coefficients(cert.form)
            reports.append(rep)
            r = cert.report
            rows.append({"seed": seed, "prime": prime, "n": curve.n, "degree": curve.degree, "adim": r.adim,
                         "vdim": r.vdim, "u": r.u, "order_along_apex": cert.details["order_along_apex"],
                         "points_checked": cert.details["points_checked"], "verdict": cert.verdict})
    verdicts = {r["verdict"] for r in reports}
    verdict = verdicts.pop() if len(verdicts) == 1 else "inconclusive"
    doc = document("cone-verify", {"curve": args.curve, "n": rows[0]["n"]}, reports, verdict,
                   {"seeds": seeds, "primes": primes})
    return _finish(args, doc, rows, EXIT_OK)


def cmd_veneroni(args) -> int:
    from .cremona import VirtualSystem, check_dimension_invariance, veneroni_transform
    from .fflinalg import PrimeField
    from .geometry import RandomSource

    src = VirtualSystem(args.n, args.degree, tuple(args.mults))
    img = veneroni_transform(src)
    chain = [str(src), str(img)]
    report: dict = {"source": str(src), "target": str(img), "target_degree": img.degree,
                    "target_multiplicities": list(img.multiplicities)}
    if args.involution:
        back = veneroni_transform(img)
        chain.append(str(back))
        report["round_trip"] = str(back)
        report["involution_holds"] = back == src
    seeds, primes = _seeds(args), _primes(args)
    if args.check:
        checks = []
        for prime in primes:
            for seed in seeds:
                inv = check_dimension_invariance(src, RandomSource(seed), PrimeField(prime), cap=_cap(args) or 10**9)
                checks.append({"seed": seed, "prime": prime, "source_adim": inv.source_adim,
                               "target_adim": inv.target_adim, "agree": inv.agree, "skipped": inv.skipped})
        report["invariance"] = checks
    fmt = args.format or "text"
    if fmt == "text":
        lines = [" -> ".join(chain)]
        if args.involution:
            lines.append(f"involution: {'ok' if report['involution_holds'] else 'FAILED'}")
        for c in report.get("invariance", []):
            status = f"skipped ({c['skipped']})" if c["skipped"] else f"adim {c['source_adim']} -> {c['target_adim']}"
            lines.append(f"seed {c['seed']}, prime {c['prime']}: {status}")
        emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    args.format = fmt
    doc = document("veneroni", {"n": args.n, "degree": args.degree, "mults": args.mults}, [report],
                   "ok", {"seeds": seeds if args.check else [], "primes": primes if args.check else []})
    return _finish(args, doc, [{"source": str(src), "target": str(img)}], EXIT_OK)


def _finish(args, doc: dict, rows: list[dict], code: int) -> int:
    if getattr(args, "_started", None) is not None and args.timing:
        doc["manifest"]["wall_clock_seconds"] = round(time.perf_counter() - args._started, 3)
    emit(render(doc, rows, args.format), args.out)
    return code


COMMANDS = {
    "analyze": cmd_analyze,
    "paper-suite": cmd_paper_suite,
    "cone-verify": cmd_cone_verify,
    "veneroni": cmd_veneroni,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads:
        for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    args._started = time.perf_counter()

    from .errors import (
        CapExceededError,
        FatFlatsError,
        GenericityError,
        HypothesisError,
        NotEffectiveError,
        UnsupportedConfigurationError,
    )

    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fatflats: usage error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GenericityError as exc:
        print(f"fatflats: genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except (UnsupportedConfigurationError, NotEffectiveError, CapExceededError) as exc:
        print(f"fatflats: out of scope: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except (HypothesisError, FatFlatsError) as exc:
        print(f"fatflats: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
