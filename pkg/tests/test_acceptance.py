"""Acceptance gate: ten end-to-end criteria, one test and one verdict line each.

Every test sweeps the full configured scope, collects violations instead of
stopping at the first, and ends with a single printed pass/fail line that
carries the pinned tolerance and the measured extreme, so `pytest -v` reads
as a checklist.
"""

import math
import time

import numpy as np

from stripcomplex.arccomplex import (
    ArcComplex,
    BarycentricPoint,
    consistency_count,
    enumerate_arcs,
    is_filling,
    sphere_euler_characteristic,
    top_simplices,
)
from stripcomplex.errors import StripComplexError
from stripcomplex.killing import trace_pairing
from stripcomplex.lorentz import ProjPoint, chords_disjoint, join
from stripcomplex.models import geodesic_from_endpoints, verify_center_lemmas
from stripcomplex.polygons import enumerate_connections
from stripcomplex.sampling import random_metric, sample_rng
from stripcomplex.strips import (
    StripTemplate,
    basis_matrix,
    codim1_closed_form,
    codim1_kernel,
    finite_strip,
    infinitesimal_strip,
    length_derivative,
    length_derivative_formula,
    link_degree,
    pentagon_kernel_match,
    properness_probe,
    realize_arc,
    reported_length,
    strip_map,
)

T = StripTemplate()
TWO_PI = 2.0 * math.pi

# pinned tolerances
TOL_BASIS = 1e-8
TOL_AGREE = 1e-8
FD_H = 1e-5
FD_RTOL = 1e-6
TOL_KERNEL = 1e-9
TOL_MATCH = 1e-9
TOL_CLOSED_FORM = 1e-12
TOL_ANGLE = 1e-9
TOL_TRACE = 1e-12
PROPER_DROP = 1e-3
PROPER_NORM_FLOOR = 0.1
TOL_LEMMA = 1e-9
KMAX = 3


def _verdict(num, label, ok, detail):
    line = f"criterion {num:02d} {label}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def _adjacent_pairs(tops):
    pairs = []
    for i in range(len(tops)):
        for j in range(i + 1, len(tops)):
            if len(set(tops[i]) & set(tops[j])) == len(tops[i]) - 1:
                pairs.append((tops[i], tops[j]))
    return pairs


def _interior_point(tops, rng):
    s = tops[int(rng.integers(len(tops)))]
    return BarycentricPoint(s, tuple(rng.dirichlet(np.ones(len(s)))))


def test_criterion_01_combinatorics():
    t0 = time.perf_counter()
    bad = []
    for n in range(4, 10):
        cx = ArcComplex("ideal", n)
        if len(cx.arcs) != n * (n - 3) // 2:
            bad.append(("ideal", n, "arc count", len(cx.arcs)))
        k = n - 2
        catalan = math.comb(2 * k, k) // (k + 1)
        if len(cx.top_simplices()) != catalan:
            bad.append(("ideal", n, "top count"))
        if cx.euler_characteristic() != sphere_euler_characteristic(n - 4):
            bad.append(("ideal", n, "euler"))
    for n in range(2, 7):
        cx = ArcComplex("punctured", n)
        if cx.euler_characteristic() != sphere_euler_characteristic(n - 2):
            bad.append(("punctured", n, "euler"))
        if n == 2 and len(cx.arcs) != 2:
            bad.append(("punctured", 2, "bigon arcs", len(cx.arcs)))
    elapsed = time.perf_counter() - t0
    _verdict(
        1,
        "combinatorics",
        not bad and elapsed < 60.0,
        f"ideal n=4..9 and punctured n=2..6 counts exact, "
        f"{elapsed:.1f}s < 60s, violations={len(bad)}",
    )


def test_criterion_02_filling_links():
    bad = []
    checked = 0
    for kind, ns in (("decorated", (3, 4, 5)), ("decorated-punctured", (2, 3, 4))):
        for n in ns:
            cx = ArcComplex(kind, n)
            for size in range(1, cx.N0 + 1):
                target = sphere_euler_characteristic(cx.N0 - size - 1)
                for s in cx.simplices(size):
                    if not cx.is_filling(s):
                        continue
                    checked += 1
                    if not consistency_count(s, kind, n).passed:
                        bad.append((kind, n, "side count", s))
                    if cx.link(s).euler_characteristic() != target:
                        bad.append((kind, n, "link euler", s))
    _verdict(
        2,
        "filling links",
        not bad and checked > 0,
        f"{checked} filling simplices over decorated n=3..5 and "
        f"decorated-punctured n=2..4: link Euler characteristics spherical "
        f"and side counts 2(k+1)+2n, violations={len(bad)}",
    )


def test_criterion_03_basis():
    ranges = (
        ("ideal", (4, 5, 6, 7, 8)),
        ("punctured", (2, 3, 4, 5, 6)),
        ("decorated", (3, 4, 5)),
        ("decorated-punctured", (2, 3, 4)),
    )
    bad = []
    worst = math.inf
    metrics = {}
    for ki, (kind, ns) in enumerate(ranges):
        per_n = math.ceil(100 / len(ns))
        count = 0
        for n in ns:
            tops = top_simplices(kind, n)
            for i in range(per_n):
                m = random_metric(kind, n, sample_rng(300 + 10 * ki + n, i))
                count += 1
                for s in tops:
                    nd = abs(basis_matrix(m, s, T).normalized_determinant)
                    worst = min(worst, nd)
                    if not nd > TOL_BASIS:
                        bad.append((kind, n, i, nd))
        metrics[kind] = count
    _verdict(
        3,
        "basis determinants",
        not bad and all(c >= 100 for c in metrics.values()),
        f"{sum(metrics.values())} random metrics (>=100 per kind) x every "
        f"triangulation, min column-normalized |det| {worst:.2e} > {TOL_BASIS}",
    )


def test_criterion_04_length_derivative():
    bad = []
    # analytic vs crossing sum, on the kinds whose lengths are decorated
    cases = (
        ("decorated", 3),
        ("decorated", 4),
        ("decorated-punctured", 2),
        ("decorated-punctured", 3),
    )
    tops_cache = {c: top_simplices(*c) for c in cases}
    triples = 0
    worst_agree = 0.0
    i = 0
    while triples < 1000:
        kind, n = cases[i % len(cases)]
        rng = sample_rng(400, i)
        i += 1
        m = random_metric(kind, n, rng)
        x = _interior_point(tops_cache[(kind, n)], rng)
        v = strip_map(m, x, T)
        for c in enumerate_connections(m, 2):
            an = length_derivative(m, v, c)
            fo = length_derivative_formula(m, x, c, T)
            err = abs(an - fo)
            worst_agree = max(worst_agree, err)
            if err > TOL_AGREE:
                bad.append(("agree", kind, n, c))
            triples += 1
    # analytic vs central differences through actual finite strips
    worst_fd = 0.0
    fd_checks = 0
    for ci, (kind, ns) in enumerate((("ideal", (4, 5, 6)), ("decorated", (3, 4)))):
        for n in ns:
            tops = top_simplices(kind, n)
            for i in range(8):
                rng = sample_rng(440 + 10 * ci + n, i)
                m = random_metric(kind, n, rng)
                s = tops[int(rng.integers(len(tops)))]
                a = s[int(rng.integers(len(s)))]
                va = infinitesimal_strip(m, a, T)
                plus = finite_strip(m, a, T, FD_H)
                minus = finite_strip(m, a, T, -FD_H)
                for c in enumerate_connections(m, 0):
                    an = length_derivative(m, va, c)
                    fd = (reported_length(plus, c) - reported_length(minus, c)) / (
                        2.0 * FD_H
                    )
                    rel = abs(an - fd) / max(1.0, abs(an))
                    worst_fd = max(worst_fd, rel)
                    fd_checks += 1
                    if rel > FD_RTOL:
                        bad.append(("fd", kind, n, c))
    _verdict(
        4,
        "length derivatives",
        not bad,
        f"{triples} analytic-vs-crossing-sum triples, max error "
        f"{worst_agree:.2e} <= {TOL_AGREE}; {fd_checks} central differences at "
        f"h={FD_H}, max relative error {worst_fd:.2e} <= {FD_RTOL}",
    )


def test_criterion_05_codim1():
    bad = []
    checked = {}
    worst_res = 0.0
    plans = (
        ("ideal", (5, 6, 7)),
        ("punctured", (3, 4)),
        ("decorated", (3, 4)),
        ("decorated-punctured", (2, 3)),
    )
    for ki, (kind, ns) in enumerate(plans):
        pair_lists = {n: _adjacent_pairs(top_simplices(kind, n)) for n in ns}
        count = 0
        round_ = 0
        while count < 100:
            for n in ns:
                m = random_metric(kind, n, sample_rng(500 + ki, round_ * 10 + n))
                for s1, s2 in pair_lists[n]:
                    try:
                        rep = codim1_kernel(m, s1, s2, T)
                    except StripComplexError as exc:
                        bad.append((kind, n, "kernel", str(exc)))
                        count += 1
                        continue
                    worst_res = max(worst_res, rep.residual)
                    if rep.residual > TOL_KERNEL or not rep.sign_pattern_ok:
                        bad.append((kind, n, "pattern", rep.coefficients))
                    count += 1
            round_ += 1
        checked[kind] = count
    # pentagon closed form under the foot-of-infinity template
    pairs5 = _adjacent_pairs(top_simplices("ideal", 5))
    worst_match = 0.0
    worst_cf = 0.0
    matches = 0
    for i in range(20):
        m = random_metric("ideal", 5, sample_rng(510, i))
        for s1, s2 in pairs5:
            pm = pentagon_kernel_match(m, s1, s2)
            cf = max(abs(r) for r in codim1_closed_form(*pm.endpoints).residuals)
            worst_match = max(worst_match, pm.mismatch)
            worst_cf = max(worst_cf, cf)
            if pm.mismatch > TOL_MATCH or cf > TOL_CLOSED_FORM:
                bad.append(("pentagon", i, pm.mismatch, cf))
            matches += 1
    _verdict(
        5,
        "codim-1 kernels",
        not bad and all(c >= 100 for c in checked.values()) and matches >= 100,
        f"{sum(checked.values())} adjacent pairs (>=100 per kind): kernels "
        f"1-dimensional, signs (+,+,-,...), max residual {worst_res:.2e} <= "
        f"{TOL_KERNEL}; {matches} pentagon closed forms: max system residual "
        f"{worst_cf:.2e} <= {TOL_CLOSED_FORM}, max kernel mismatch "
        f"{worst_match:.2e} <= {TOL_MATCH}",
    )


def test_criterion_06_degree_one_links():
    bad = []
    cycle_counts = {}
    worst = 0.0
    cases = (
        ("ideal", 5),
        ("ideal", 6),
        ("ideal", 7),
        ("punctured", 3),
        ("punctured", 4),
        ("decorated", 4),
    )
    for ci, (kind, n) in enumerate(cases):
        cx = ArcComplex(kind, n)
        sims = list(cx.simplices(cx.N0 - 2))
        if kind == "decorated":
            sims = [s for s in sims if cx.is_filling(s)]
        for i in range(10):
            m = random_metric(kind, n, sample_rng(600 + ci, i))
            for s in sims:
                rep = link_degree(m, s, T)
                dev = abs(rep.angle_sum - TWO_PI)
                worst = max(worst, dev)
                cycle_counts[rep.cycle_length] = (
                    cycle_counts.get(rep.cycle_length, 0) + 1
                )
                if dev > TOL_ANGLE:
                    bad.append((kind, n, i, s, rep.angle_sum))
    shapes = {4, 5, 6} <= set(cycle_counts)
    _verdict(
        6,
        "degree-one links",
        not bad and shapes,
        f"{sum(cycle_counts.values())} codim-2 links incl. quads/pentagons/"
        f"hexagons {dict(sorted(cycle_counts.items()))}, max |angle sum - 2pi| "
        f"{worst:.2e} <= {TOL_ANGLE}",
    )


def test_criterion_07_cusp_preservation():
    holonomy = ((1.0, 1.0), (0.0, 1.0))
    cases = [("punctured", n) for n in (2, 3, 4, 5)] + [
        ("decorated-punctured", n) for n in (2, 3, 4)
    ]
    bad = []
    worst = 0.0
    fields = 0
    for i in range(100):
        kind, n = cases[i % len(cases)]
        m = random_metric(kind, n, sample_rng(700, i))
        for a in enumerate_arcs(kind, n):
            if not a.is_maximal:
                continue
            val = abs(trace_pairing(realize_arc(m, a, T).field, holonomy))
            worst = max(worst, val)
            fields += 1
            if val > TOL_TRACE:
                bad.append((kind, n, i, a, val))
    _verdict(
        7,
        "cusp preservation",
        not bad,
        f"{fields} maximal-arc strip fields over 100 random punctured metrics, "
        f"max |trace pairing| {worst:.2e} <= {TOL_TRACE}",
    )


def test_criterion_08_admissibility():
    cases = [("decorated", n) for n in (3, 4, 5)] + [
        ("decorated-punctured", n) for n in (2, 3, 4)
    ]
    tops_cache = {c: top_simplices(*c) for c in cases}
    bad = []
    worst = math.inf
    for i in range(1000):
        kind, n = cases[i % len(cases)]
        rng = sample_rng(800, i)
        m = random_metric(kind, n, rng)
        x = _interior_point(tops_cache[(kind, n)], rng)
        v = strip_map(m, x, T, pruned=True)
        low = min(length_derivative(m, v, c) for c in enumerate_connections(m, KMAX))
        worst = min(worst, low)
        if not low > 0.0:
            bad.append((kind, n, i, low))
    _verdict(
        8,
        "admissible images",
        not bad,
        f"1000 interior pruned points (decorated kinds): every connection with "
        f"|winding| <= {KMAX} (recorded truncation) lengthens, min dl {worst:.2e} > 0",
    )


def test_criterion_09_properness():
    cases = (
        ("decorated", 3),
        ("decorated", 4),
        ("decorated-punctured", 2),
        ("decorated-punctured", 3),
    )
    tops_cache = {c: top_simplices(*c) for c in cases}
    bad = []
    worst_drop = 0.0
    low_norm = math.inf
    done = 0
    i = 0
    while done < 20:
        kind, n = cases[i % len(cases)]
        rng = sample_rng(900, i)
        i += 1
        m = random_metric(kind, n, rng)
        tops = tops_cache[(kind, n)]
        rep = None
        for ti in rng.permutation(len(tops)):
            sigma = tops[int(ti)]
            for fi in rng.permutation(len(sigma)):
                tau = tuple(a for k, a in enumerate(sigma) if k != int(fi))
                if is_filling(tau, kind, n):
                    continue
                try:
                    rep = properness_probe(m, sigma, tau, T)
                except StripComplexError:
                    continue
                break
            if rep is not None:
                break
        if rep is None:
            bad.append((kind, n, i, "no usable face"))
            done += 1
            continue
        drop = rep.blocked_minima[-1] / rep.blocked_minima[0]
        norm_ratio = min(rep.image_norms) / rep.image_norms[0]
        worst_drop = max(worst_drop, drop)
        low_norm = min(low_norm, norm_ratio)
        if not (drop < PROPER_DROP and norm_ratio >= PROPER_NORM_FLOOR):
            bad.append((kind, n, i, drop, norm_ratio))
        done += 1
    _verdict(
        9,
        "properness probes",
        not bad,
        f"20 sequences toward non-filling faces: blocked dl final/initial max "
        f"{worst_drop:.2e} < {PROPER_DROP}, image norm ratio min {low_norm:.2f} "
        f">= {PROPER_NORM_FLOOR}",
    )


def _segments_intersect(a, b, c, d):
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)):
        return True
    return any(o == 0 for o in (o1, o2, o3, o4))


def test_criterion_10_geometry_lemmas():
    bad = []
    worst = 0.0
    rng = sample_rng(1000, 0)
    centers = 0
    while centers < 1000:
        vals = np.sort(rng.uniform(-8.0, 8.0, size=6))
        if np.diff(vals).min() < 0.05:
            continue
        gs = [
            geodesic_from_endpoints(float(vals[2 * k]), float(vals[2 * k + 1]))
            for k in range(3)
        ]
        rep = verify_center_lemmas(*gs, tol=TOL_LEMMA)
        worst = max(
            worst,
            abs(rep.ratio_residual),
            max(abs(r) for r in rep.center_residuals),
            max(abs(r) for r in rep.orthogonality_residuals),
        )
        if not rep.passed:
            bad.append(("center", vals.tolist()))
        centers += 1
    pairings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    chords = 0
    while chords < 1000:
        ts = np.sort(rng.uniform(0.0, TWO_PI, size=4))
        gaps = np.diff(np.concatenate([ts, [ts[0] + TWO_PI]]))
        if gaps.min() < 1e-3:
            continue
        (ia, ib), (ic, id_) = pairings[int(rng.integers(3))]
        pts = [(math.cos(v), math.sin(v)) for v in ts]
        seg = join(ProjPoint.from_affine(*pts[ia]), ProjPoint.from_affine(*pts[ib]))
        other = join(ProjPoint.from_affine(*pts[ic]), ProjPoint.from_affine(*pts[id_]))
        oracle = not _segments_intersect(pts[ia], pts[ib], pts[ic], pts[id_])
        if chords_disjoint(seg, other) != oracle or chords_disjoint(other, seg) != oracle:
            bad.append(("chords", ts.tolist()))
        chords += 1
    _verdict(
        10,
        "geometry lemmas",
        not bad,
        f"1000 center/ratio/ordering configurations (max residual {worst:.2e} "
        f"<= {TOL_LEMMA}) and 1000 chord-disjointness dualities against a "
        f"segment oracle, zero failures",
    )
