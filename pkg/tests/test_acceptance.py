"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly as a script.
Recorded values are written out literally; nothing here is derived from the
code under test.  Set ``FATFLATS_EXTENDED=1`` to include the heavy rank check.
"""

from __future__ import annotations

import json
import sys
import time

import pytest

from fatflats import cli
from fatflats.analysis import cone_verify, replace_line_with_fat_points
from fatflats.combinatorics import (
    binomial,
    conditions_count,
    generic_flats,
    hvector_convolve,
    hvector_integrate,
    mayer_vietoris_poly,
    mayer_vietoris_value,
    pairwise_intersection_hp,
    power_ideal_hvector,
)
from fatflats.cremona import Signature, VirtualSystem, apply_named_correspondence, veneroni_map_basis, veneroni_transform
from fatflats.errors import NotEffectiveError
from fatflats.fflinalg import DEFAULT_PRIME, SECOND_PRIME, PrimeField, rank
from fatflats.geometry import RandomSource, general_scheme, random_flat, rational_normal_curve
from fatflats.interpolation import adim, condition_rows_fat_flat
from fatflats.suite import CASES

INSTANCES = ((0, DEFAULT_PRIME), (1, SECOND_PRIME))


def scheme(n, dim, mults, seed=0, prime=DEFAULT_PRIME):
    return general_scheme(n, [(dim, list(mults))], RandomSource(seed), PrimeField(prime))


def adim_all(n, dim, mults, t, cap=25_000):
    """Instance values of ``adim`` over both (seed, prime) pairs."""
    return {adim(scheme(n, dim, mults, s, p), t, cap).value for s, p in INSTANCES}


def vdim(n, dim, mults, t):
    return binomial(t + n, n) - mayer_vietoris_value(n, generic_flats(n, dim, mults), t)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_criterion_01_fat_flat_condition_counts(acceptance):
    bad = []
    with Timer() as clock:
        for n in range(2, 6):
            for delta in range(n - 1):
                for m in range(1, 5):
                    for t in range(m, 9):
                        flat = random_flat(n, delta, RandomSource(1000 * n + 100 * delta + 10 * m + t))
                        got = rank(condition_rows_fat_flat(flat, m, t))
                        if got != conditions_count(n, delta, m, t):
                            bad.append((n, delta, m, t, got))
    acceptance(1, "fat-flat rank equals condition count on the grid", not bad and clock.seconds < 60,
               f"{len(bad)} mismatches, {clock.seconds:.1f} s")


@pytest.mark.parametrize(
    "mults,t,a,v",
    [([3] * 4 + [1] * 5, 10, 1, -1), ([4] + [3] * 5, 12, 1, -5), ([3] * 6 + [2], 12, 1, -2), ([6] * 5 + [1], 20, 1, -105)],
)
def test_criterion_02_unexpected_line_configurations(acceptance, mults, t, a, v):
    with Timer() as clock:
        values = adim_all(3, 1, mults, t)
    vd = vdim(3, 1, mults, t)
    acceptance(2, f"adim/vdim of {mults} at t={t}", values == {a} and vd == v and clock.seconds < 60,
               f"adim {sorted(values)}, vdim {vd}, {clock.seconds:.1f} s for two instances")


def test_criterion_03_four_lines_chain(acceptance):
    a1 = adim_all(3, 1, [1] * 4, 6)
    a3 = adim_all(3, 1, [3] * 4, 10)
    vd = vdim(3, 1, [3] * 4, 10)
    ok = a1 == a3 == {56} and vd == 54 and 56 - vd == 2
    acceptance(3, "adim(1^4;6) = adim(3^4;10) = 56, vdim 54, u 2", ok, f"{a1}, {a3}, vdim {vd}")


def test_criterion_04_veneroni_p3(acceptance):
    src = VirtualSystem(3, 7, (1,) * 4)
    img = veneroni_transform(src)
    cond = mayer_vietoris_value(3, generic_flats(3, 1, [4] * 4), 13)
    a_src = adim_all(3, 1, [1] * 4, 7)
    a_img = adim_all(3, 1, [4] * 4, 13)
    u = 88 - (binomial(16, 3) - cond)
    ok = a_src == {88} and str(img) == "(13; 4, 4, 4, 4)" and cond == 480 and a_img == {88} and u == 8
    acceptance(4, "(7;1^4) -> (13;4^4), conditions 480, adim 88, u 8", ok, f"{a_src} {img} {cond} {a_img} u={u}")


def test_criterion_05_veneroni_p4_cubics(acceptance):
    with Timer() as clock:
        a7 = adim_all(4, 2, [1] * 5, 7)
        a13 = adim_all(4, 2, [3] * 5, 13)
    pair = pairwise_intersection_hp(4, 3, 3, 0).value(13)
    mv = mayer_vietoris_value(4, generic_flats(4, 2, [3] * 5), 13)
    vd_s = vdim(4, 2, [1] * 5, 7)
    u = 160 - (binomial(17, 4) - mv)
    ok = vd_s == 160 and pair == 36 and mv == 2245 and a7 == a13 == {160} and u == 25 and clock.seconds < 2 * 60
    acceptance(5, "P^4 (7;1^5) -> (13;3^5): 160, 36, 2245, u 25", ok,
               f"vdim {vd_s}, pair {pair}, MV {mv}, adim {a7}/{a13}, u {u}, {clock.seconds:.1f} s")


def test_criterion_06_veneroni_p4_quartics(acceptance):
    with Timer() as clock:
        a8 = adim(scheme(4, 2, [1] * 5), 8).value
        a17 = adim(scheme(4, 2, [4] * 5), 17).value
    pair = pairwise_intersection_hp(4, 4, 4, 0).value(17)
    mv = mayer_vietoris_value(4, generic_flats(4, 2, [4] * 5), 17)
    u = 280 - (binomial(21, 4) - mv)
    ok = pair == 100 and mv == 5825 and a8 == a17 == 280 and u == 120 and clock.seconds < 600
    acceptance(6, "P^4 (8;1^5) -> (17;4^5): 100, 5825, 280, u 120", ok,
               f"pair {pair}, MV {mv}, adim {a8}/{a17}, u {u}, {clock.seconds:.1f} s")


def test_criterion_07_veneroni_p5_cubics(acceptance):
    formula = mayer_vietoris_value(5, generic_flats(5, 3, [1] * 6), 8)
    a8 = adim_all(5, 3, [1] * 6, 8)
    pair = pairwise_intersection_hp(5, 3, 3, 1).value(16)
    mv = mayer_vietoris_value(5, generic_flats(5, 3, [3] * 6), 16)
    vd = binomial(21, 5) - mv
    ok = formula == 855 and a8 == {432} and pair == 516 and mv == 20106 and vd == 243 and 432 - vd == 189
    acceptance(7, "P^5 (8;1^6) -> (16;3^6): 855, 432, 516, 20106, 243, u 189", ok,
               f"{formula}, {a8}, {pair}, {mv}, {vd}; t=16 rank is the extended check")


@pytest.mark.extended
@pytest.mark.slow
def test_criterion_07_extended_rank_at_t16(acceptance):
    with Timer() as clock:
        value = adim(scheme(5, 3, [3] * 6), 16, cap=None).value
    acceptance(7, "extended: rank-verified adim(16;3^6) = 432", value == 432 and clock.seconds < 15 * 60,
               f"adim {value}, {clock.seconds:.0f} s")


def test_criterion_08_veneroni_p5_quartics(acceptance):
    with Timer() as clock:
        h = hvector_convolve(power_ideal_hvector(2, 4), power_ideal_hvector(2, 4))
        integ = hvector_integrate(h, 2)
        union = mayer_vietoris_poly(5, generic_flats(5, 3, [4] * 6))
        a9 = adim(scheme(5, 3, [1] * 6), 9).value
    vd = binomial(26, 5) - union.value(21)
    ok = (
        tuple(h) == (1, 4, 10, 20, 25, 24, 16)
        and str(integ.tail) == "100t - 300"
        and integ.value(21) == 1800
        and str(union) == "10t^3 - 1480t + 4506"
        and union.value(21) == 66036
        and a9 == 832
        and vd == -256
        and 832 - vd == 1088
        and clock.seconds < 120
    )
    acceptance(8, "P^5 (9;1^6) -> (21;4^6): h-vector chain, 832, vdim -256, u 1088", ok,
               f"h {tuple(h)}, tail {integ.tail}, union {union}, adim {a9}, vdim {vd}, {clock.seconds:.1f} s")


def test_criterion_09_todd_and_cubo_cubic_fixtures(acceptance):
    with Timer() as clock:
        a_a = adim_all(3, 1, [1] * 5 + [6], 8)
        a_b = adim_all(3, 1, [2] * 5 + [5], 10)
        a_c = adim_all(3, 1, [2] * 4, 12)
        bounded = adim_all(3, 1, [6] * 5, 20)
    v_a = vdim(3, 1, [1] * 5 + [6], 8)
    v_b = vdim(3, 1, [2] * 5 + [5], 10)
    v_c = vdim(3, 1, [2] * 4, 12)
    v_64 = vdim(3, 1, [6] * 4, 20)
    cubo = apply_named_correspondence("cubo-cubic", Signature(3, 12, (2,) * 4))
    ok = (
        a_a == {1} and v_a == 1
        and a_b == {6} and max(v_b, 0) == 6
        and a_c == {307} and v_c == 307
        and str(cubo) == "(P^3: 20; 6, 6, 6, 6)"
        and v_64 == 287 and 307 - v_64 == 20
        and all(6 <= v <= 16 for v in bounded)
        and clock.seconds < 300
    )
    acceptance(9, "Todd and cubo-cubic fixtures, 6 <= adim(6^5;20) <= 16", ok,
               f"{a_a}/{v_a}, {a_b}/{v_b}, {a_c}/{v_c}, vdim(6^4;20) {v_64}, bounded {sorted(bounded)}, "
               f"{clock.seconds:.1f} s")


def test_criterion_10_fat_line_replaced_by_points(acceptance):
    bad = []
    with Timer() as clock:
        for m in range(1, 7):
            for t in range(m, 13):
                Z = scheme(3, 1, [m], seed=10 * m + t)
                pts = replace_line_with_fat_points(Z, 0, t - m + 2, m, t, RandomSource(500 + 10 * m + t))
                before, after = adim(Z, t).rank, adim(pts, t).rank
                if before != after:
                    bad.append((m, t, before, after))
    acceptance(10, "t-m+2 points of multiplicity m on L impose the same rank as mL", not bad and clock.seconds < 120,
               f"{len(bad)} mismatches, {clock.seconds:.1f} s")


@pytest.mark.parametrize("n,v,u", [(3, 0, 1), (4, -2, 3)])
def test_criterion_11_cone_over_rational_normal_curve(acceptance, n, v, u):
    curve = rational_normal_curve(n, RandomSource(0))
    cert = cone_verify(curve, RandomSource(1), lines=20, points=50)
    r = cert.report
    ok = (r.adim, r.vdim, r.u) == (1, v, u) and cert.details["order_along_apex"] == n
    ok = ok and cert.details["points_checked"] == 20 * 50
    acceptance(11, f"cone over the rational normal curve in P^{n}", ok,
               f"adim {r.adim}, vdim {r.vdim}, u {r.u}, order {cert.details['order_along_apex']}, "
               f"{cert.details['points_checked']} points")


def _bounded(k, total):
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _bounded(k - 1, total - first):
            yield (first, *rest)


def test_criterion_12_involution_and_map_basis(acceptance):
    failures, pairs = [], 0
    for n in (3, 4, 5):
        for d in range(31):
            for mults in _bounded(n + 1, 10):
                src = VirtualSystem(n, d, mults)
                try:
                    img = veneroni_transform(src)
                except NotEffectiveError:
                    continue
                pairs += 1
                if veneroni_transform(img) != src:
                    failures.append(str(src))
    sizes = {(n, s): len(veneroni_map_basis(n, RandomSource(s))[0]) for n in (3, 4, 5) for s in range(5)}
    ok = not failures and pairs > 0 and all(size == n + 1 for (n, _), size in sizes.items())
    acceptance(12, "Veneroni involution and degree-n map basis of size n+1", ok,
               f"{pairs} effective pairs, {len(failures)} failures, sizes {sorted(set(sizes.values()))}")


def _bytes(tmp_path, name, argv):
    out = tmp_path / name
    code = cli.main(argv + ["--out", str(out)])
    return code, out.read_bytes()


def _replay_flags(manifest):
    seeds, primes = manifest["seeds"], manifest["primes"]
    flags = ["--seed", str(seeds[0]), "--seeds", str(len(seeds)), "--prime", str(primes[0])]
    flags += ["--second-prime", str(primes[1]) if len(primes) > 1 else "0"]
    return flags


def test_criterion_13_determinism_and_suite_time(acceptance, tmp_path):
    from pathlib import Path

    spec = str(Path(__file__).resolve().parent.parent / "docs" / "specs" / "thm3.5A.json")
    commands = {
        "analyze": ["analyze", spec],
        "cone": ["cone-verify", "--curve", "rnc", "--n", "3", "--coefficients"],
        "suite": ["paper-suite", "--filter", "ex3.8"],
    }
    identical = []
    for name, argv in commands.items():
        code, first = _bytes(tmp_path, name + "1", argv)
        replay = argv + _replay_flags(json.loads(first)["manifest"])
        code2, second = _bytes(tmp_path, name + "2", replay)
        identical.append(code == code2 == 0 and first == second)
    with Timer() as clock:
        code, full = _bytes(tmp_path, "full", ["paper-suite"])
    doc = json.loads(full)
    ids = [r["id"] for r in doc["reports"]]
    ok = all(identical) and code == 0 and doc["verdict"] == "match" and len(ids) == len(CASES) and clock.seconds < 15 * 60
    acceptance(13, "byte-identical replay from the manifest; full suite under 15 min", ok,
               f"replays {identical}, {len(ids)} cases, verdict {doc['verdict']}, {clock.seconds:.0f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s", *sys.argv[1:]]))
