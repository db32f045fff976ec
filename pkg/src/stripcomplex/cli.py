"""Command line front end: arc-complex statistics, verification sweeps,
and one-shot strip maps over metrics read from JSON files.

Reports are JSON (schema-versioned, keys sorted, deterministic for a
fixed config and seed except for the "timings" entry); plot data for the
strip-map command is CSV.  Exit codes: 0 all checks pass, 1 a check
failed (the report carries replay data), 2 invalid configuration or
input, 3 a resource guard tripped.
"""

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .arccomplex import (
    ArcClass,
    ArcComplex,
    BarycentricPoint,
    enumerate_arcs,
    is_filling,
    sphere_euler_characteristic,
)
from .errors import InvalidInputError, ResourceGuardError, StripComplexError
from .killing import trace_pairing
from .lorentz import ProjPoint, chords_disjoint, join
from .models import INF, Vertical, geodesic_from_endpoints, verify_center_lemmas
from .polygons import (
    KINDS,
    admissible,
    enumerate_connections,
    from_json,
    is_decorated,
    is_punctured,
    min_vertices,
    to_json,
)
from .sampling import random_metric, sample_rng
from .strips import (
    StripTemplate,
    basis_matrix,
    codim1_closed_form,
    codim1_kernel,
    infinitesimal_strip,
    finite_strip,
    length_derivative,
    length_derivative_formula,
    link_degree,
    pentagon_kernel_match,
    properness_probe,
    realize_arc,
    reported_length,
    strip_map,
)

SCHEMA = "stripcomplex-report/1"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3

SUITES = (
    "basis",
    "codim1",
    "codim2",
    "length-derivative",
    "admissible",
    "proper",
    "cusp",
    "lemmas",
)

#: Per-suite default tolerance, overridable with --tol.
DEFAULT_TOL = {
    "basis": 1e-8,
    "codim1": 1e-9,
    "codim2": 1e-9,
    "length-derivative": 1e-8,
    "admissible": 0.0,
    "proper": 1e-3,
    "cusp": 1e-12,
    "lemmas": 1e-9,
}

#: Fixed inner tolerances that are part of the checked statements.
FD_STEP = 1e-5
FD_RELTOL = 1e-6
CLOSED_FORM_TOL = 1e-12

#: Largest total simplex count for which arc-complex emits the link table.
LINK_TABLE_CAP = 20_000


# ---------------------------------------------------------------------------
# plumbing


def _threads() -> int:
    raw = os.environ.get("STRIPCOMPLEX_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_samples(count: int, worker):
    """Order-preserving sample map, parallel when STRIPCOMPLEX_THREADS > 1.

    Per-sample seeds make the worker independent of execution order, so
    serial and parallel runs produce identical reports.
    """
    k = min(_threads(), count)
    if k <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(worker, range(count)))


def _clean(x):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats stringified."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        if math.isnan(x):
            return "nan"
        return "inf" if x > 0 else "-inf"
    return x


def _emit_json(report: dict, out: str | None) -> None:
    text = json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _arc_str(a: ArcClass) -> str:
    return f"{a.a}-{a.b}"


def _config_echo(args) -> dict:
    return {
        "kind": args.kind,
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "template": args.template,
        "kmax": args.kmax,
        "tol": args.tol,
        "out": args.out,
        "format": args.format,
    }


def _need_kind_n(args) -> None:
    if args.kind is None or args.n is None:
        raise InvalidInputError("this command needs --kind and --n")
    if args.n < min_vertices(args.kind):
        raise InvalidInputError(
            f"kind {args.kind!r} needs at least {min_vertices(args.kind)} vertices"
        )


def _need_json_format(args) -> None:
    if args.format != "json":
        raise InvalidInputError(
            "this command reports JSON; csv is plot data for strip-map only"
        )


def _template_of(args) -> StripTemplate:
    return StripTemplate(mode=args.template)


def _suite_tol(args) -> float:
    return DEFAULT_TOL[args.suite] if args.tol is None else args.tol


def _filling_tops(kind: str, n: int):
    cx = ArcComplex(kind, n)
    return [s for s in cx.top_simplices() if is_filling(s, kind, n)]


def _adjacent_pairs(tops):
    pairs = []
    for i in range(len(tops)):
        for j in range(i + 1, len(tops)):
            if len(set(tops[i]) & set(tops[j])) == len(tops[i]) - 1:
                pairs.append((tops[i], tops[j]))
    return pairs


# ---------------------------------------------------------------------------
# arc-complex


def _link_table(cx: ArcComplex) -> list:
    rows = []
    for size in range(1, cx.N0 + 1):
        target = sphere_euler_characteristic(cx.N0 - size - 1)
        count = 0
        chis: dict[str, int] = {}
        spherical = True
        for s in cx.simplices(size):
            if not cx.is_filling(s):
                continue
            count += 1
            chi = cx.link(s).euler_characteristic()
            key = str(chi)
            chis[key] = chis.get(key, 0) + 1
            if chi != target:
                spherical = False
        rows.append(
            {
                "simplex_size": size,
                "filling_count": count,
                "link_euler": chis,
                "target_euler": target,
                "all_spherical": spherical,
            }
        )
    return rows


def cmd_arc_complex(args) -> int:
    _need_kind_n(args)
    _need_json_format(args)
    started = time.perf_counter()
    cx = ArcComplex(args.kind, args.n)
    f = cx.f_vector()
    tops = cx.top_simplices()
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "arc-complex",
        "config": _config_echo(args),
        "arc_count": len(cx.arcs),
        "f_vector": list(f),
        "euler_characteristic": cx.euler_characteristic(),
        "top_count": len(tops),
        "N0": cx.N0,
        "pure": all(len(s) == cx.N0 for s in tops),
        "pseudo_manifold": cx.is_pseudo_manifold(),
        "pruned_interior_dimension": cx.N0 - 1,
    }
    if is_decorated(args.kind):
        if sum(f) <= LINK_TABLE_CAP:
            report["links"] = _link_table(cx)
        else:
            report["links"] = {
                "skipped": f"complex has {sum(f)} simplices, above the link-table cap"
            }
    else:
        target = sphere_euler_characteristic(cx.N0 - 1)
        report["sphere_check"] = {
            "dimension": cx.N0 - 1,
            "target_euler": target,
            "matches": cx.euler_characteristic() == target,
        }
    report["timings"] = {"seconds": round(time.perf_counter() - started, 6)}
    _emit_json(report, args.out)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verify suites


def _suite_basis(args) -> dict:
    _need_kind_n(args)
    t = _template_of(args)
    tol = _suite_tol(args)
    tops = _filling_tops(args.kind, args.n)
    if not tops:
        raise InvalidInputError("no filling top simplices at this size")

    def worker(i):
        failures = []
        try:
            m = random_metric(args.kind, args.n, sample_rng(args.seed, i))
        except StripComplexError as exc:
            return math.inf, [{"sample": i, "error": str(exc)}]
        worst = math.inf
        for s in tops:
            nd = abs(basis_matrix(m, s, t).normalized_determinant)
            worst = min(worst, nd)
            if not nd > tol:
                failures.append(
                    {
                        "sample": i,
                        "metric": to_json(m),
                        "triangulation": [_arc_str(a) for a in s],
                        "normalized_determinant": nd,
                    }
                )
        return worst, failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    return {
        "checks": {
            "triangulations": len(tops),
            "samples": args.samples,
            "tolerance": tol,
            "min_normalized_determinant": min(w for w, _ in results),
        },
        "failures": failures,
    }


def _suite_codim1(args) -> dict:
    _need_kind_n(args)
    t = _template_of(args)
    tol = _suite_tol(args)
    tops = _filling_tops(args.kind, args.n)
    pairs = _adjacent_pairs(tops)
    if not pairs:
        raise InvalidInputError("no adjacent top-simplex pairs at this size")
    pentagon = (
        args.kind == "ideal" and args.n == 5 and args.template == "foot-of-infinity"
    )

    def worker(i):
        failures = []
        try:
            m = random_metric(args.kind, args.n, sample_rng(args.seed, i))
        except StripComplexError as exc:
            return (0.0, 0.0), [{"sample": i, "error": str(exc)}]
        worst_res = 0.0
        worst_match = 0.0
        for s1, s2 in pairs:
            replay = {
                "sample": i,
                "metric": to_json(m),
                "pair": [[_arc_str(a) for a in s1], [_arc_str(a) for a in s2]],
            }
            try:
                rep = codim1_kernel(m, s1, s2, t)
            except StripComplexError as exc:
                failures.append({**replay, "error": str(exc)})
                continue
            worst_res = max(worst_res, rep.residual)
            if rep.residual > tol or not rep.sign_pattern_ok:
                failures.append(
                    {
                        **replay,
                        "residual": rep.residual,
                        "coefficients": list(rep.coefficients),
                        "sign_pattern_ok": rep.sign_pattern_ok,
                    }
                )
            if pentagon:
                try:
                    pm = pentagon_kernel_match(m, s1, s2)
                except StripComplexError as exc:
                    failures.append({**replay, "error": str(exc)})
                    continue
                cf = codim1_closed_form(*pm.endpoints)
                cf_res = max(abs(r) for r in cf.residuals)
                worst_match = max(worst_match, pm.mismatch)
                if pm.mismatch > tol or cf_res > CLOSED_FORM_TOL:
                    failures.append(
                        {
                            **replay,
                            "closed_form_mismatch": pm.mismatch,
                            "closed_form_residual": cf_res,
                        }
                    )
        return (worst_res, worst_match), failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    checks = {
        "adjacent_pairs": len(pairs),
        "samples": args.samples,
        "tolerance": tol,
        "max_kernel_residual": max(r for (r, _), _ in results),
    }
    if pentagon:
        checks["max_closed_form_mismatch"] = max(m_ for (_, m_), _ in results)
    return {"checks": checks, "failures": failures}


def _suite_codim2(args) -> dict:
    _need_kind_n(args)
    t = _template_of(args)
    tol = _suite_tol(args)
    cx = ArcComplex(args.kind, args.n)
    size = cx.N0 - 2
    if size < 0:
        raise InvalidInputError("the complex has no codimension-2 simplices")
    sims = list(cx.simplices(size))
    if is_decorated(args.kind):
        sims = [s for s in sims if cx.is_filling(s)]
    if not sims:
        raise InvalidInputError(
            "no eligible codimension-2 simplices for this kind and size"
        )

    def worker(i):
        failures = []
        try:
            m = random_metric(args.kind, args.n, sample_rng(args.seed, i))
        except StripComplexError as exc:
            return (0.0, {}), [{"sample": i, "error": str(exc)}]
        worst = 0.0
        lengths: dict[str, int] = {}
        for s in sims:
            replay = {
                "sample": i,
                "metric": to_json(m),
                "simplex": [_arc_str(a) for a in s],
            }
            try:
                rep = link_degree(m, s, t)
            except StripComplexError as exc:
                failures.append({**replay, "error": str(exc)})
                continue
            dev = abs(rep.angle_sum - 2.0 * math.pi)
            worst = max(worst, dev)
            key = str(rep.cycle_length)
            lengths[key] = lengths.get(key, 0) + 1
            if dev > tol:
                failures.append({**replay, "angle_sum": rep.angle_sum})
        return (worst, lengths), failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    cycle_lengths: dict[str, int] = {}
    for (_, lens), _ in results:
        for key, cnt in lens.items():
            cycle_lengths[key] = cycle_lengths.get(key, 0) + cnt
    return {
        "checks": {
            "codim2_simplices": len(sims),
            "samples": args.samples,
            "tolerance": tol,
            "max_angle_deviation": max(w for (w, _), _ in results),
            "cycle_lengths": cycle_lengths,
        },
        "failures": failures,
    }


def _suite_length_derivative(args) -> dict:
    _need_kind_n(args)
    if args.kind == "punctured":
        raise InvalidInputError(
            "length-derivative checks need decorations or finite strips; "
            "the punctured kind supports neither"
        )
    t = _template_of(args)
    tol = _suite_tol(args)
    decorated = is_decorated(args.kind)
    fd = not is_punctured(args.kind)
    tops = _filling_tops(args.kind, args.n)

    def worker(i):
        failures = []
        rng = sample_rng(args.seed, i)
        try:
            m = random_metric(args.kind, args.n, rng)
        except StripComplexError as exc:
            return (0.0, 0.0), [{"sample": i, "error": str(exc)}]
        s = tops[int(rng.integers(len(tops)))]
        weights = rng.dirichlet(np.ones(len(s)))
        x = BarycentricPoint(s, tuple(weights))
        conns = enumerate_connections(m, args.kmax)
        replay = {
            "sample": i,
            "metric": to_json(m),
            "support": [_arc_str(a) for a in s],
            "weights": [float(w) for w in weights],
        }
        worst_agree = 0.0
        worst_fd = 0.0
        if decorated:
            v = strip_map(m, x, t)
            for c in conns:
                an = length_derivative(m, v, c)
                fo = length_derivative_formula(m, x, c, t)
                err = abs(an - fo)
                worst_agree = max(worst_agree, err)
                if err > tol:
                    failures.append(
                        {
                            **replay,
                            "connection": [c.i, c.j, c.winding],
                            "analytic": an,
                            "crossing_sum": fo,
                        }
                    )
        if fd:
            a = s[int(rng.integers(len(s)))]
            va = infinitesimal_strip(m, a, t)
            plus = finite_strip(m, a, t, FD_STEP)
            minus = finite_strip(m, a, t, -FD_STEP)
            for c in conns:
                an = length_derivative(m, va, c)
                diff = (reported_length(plus, c) - reported_length(minus, c)) / (
                    2.0 * FD_STEP
                )
                rel = abs(an - diff) / max(1.0, abs(an))
                worst_fd = max(worst_fd, rel)
                if rel > FD_RELTOL:
                    failures.append(
                        {
                            **replay,
                            "arc": _arc_str(a),
                            "connection": [c.i, c.j, c.winding],
                            "analytic": an,
                            "finite_difference": diff,
                        }
                    )
        return (worst_agree, worst_fd), failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    checks = {"samples": args.samples, "kmax": args.kmax}
    if decorated:
        checks["tolerance"] = tol
        checks["max_agreement_error"] = max(a for (a, _), _ in results)
    if fd:
        checks["fd_step"] = FD_STEP
        checks["fd_relative_tolerance"] = FD_RELTOL
        checks["max_fd_relative_error"] = max(b for (_, b), _ in results)
    return {"checks": checks, "failures": failures}


def _suite_admissible(args) -> dict:
    _need_kind_n(args)
    if not is_decorated(args.kind):
        raise InvalidInputError("admissibility sweeps need a decorated kind")
    t = _template_of(args)
    tops = _filling_tops(args.kind, args.n)

    def worker(i):
        rng = sample_rng(args.seed, i)
        try:
            m = random_metric(args.kind, args.n, rng)
        except StripComplexError as exc:
            return math.inf, [{"sample": i, "error": str(exc)}]
        s = tops[int(rng.integers(len(tops)))]
        weights = rng.dirichlet(np.ones(len(s)))
        x = BarycentricPoint(s, tuple(weights))
        v = strip_map(m, x, t, pruned=True)
        worst = math.inf
        argmin = None
        for c in enumerate_connections(m, args.kmax):
            dl = length_derivative(m, v, c)
            if dl < worst:
                worst, argmin = dl, c
        if worst > 0.0:
            return worst, []
        return worst, [
            {
                "sample": i,
                "metric": to_json(m),
                "support": [_arc_str(a) for a in s],
                "weights": [float(w) for w in weights],
                "min_length_derivative": worst,
                "connection": [argmin.i, argmin.j, argmin.winding],
            }
        ]

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    return {
        "checks": {
            "samples": args.samples,
            "kmax": args.kmax,
            "min_length_derivative": min(w for w, _ in results),
        },
        "failures": failures,
    }


def _suite_proper(args) -> dict:
    _need_kind_n(args)
    if not is_decorated(args.kind):
        raise InvalidInputError("properness probes need a decorated kind")
    t = _template_of(args)
    tol = _suite_tol(args)
    tops = _filling_tops(args.kind, args.n)

    def worker(i):
        rng = sample_rng(args.seed, i)
        try:
            m = random_metric(args.kind, args.n, rng)
        except StripComplexError as exc:
            return (0.0, 1.0), [{"sample": i, "error": str(exc)}]
        rep = None
        sigma = tau = None
        for ti in rng.permutation(len(tops)):
            sigma = tops[int(ti)]
            for fi in rng.permutation(len(sigma)):
                tau = tuple(a for k, a in enumerate(sigma) if k != int(fi))
                if is_filling(tau, args.kind, args.n):
                    continue
                try:
                    rep = properness_probe(m, sigma, tau, t, kmax=args.kmax)
                except StripComplexError:
                    continue
                break
            if rep is not None:
                break
        if rep is None:
            return (0.0, 1.0), [
                {"sample": i, "metric": to_json(m), "error": "no usable face probe"}
            ]
        blocked_ratio = rep.blocked_minima[-1] / rep.blocked_minima[0]
        norm_ratio = min(rep.image_norms) / rep.image_norms[0]
        ok = blocked_ratio < tol and norm_ratio >= 0.1 and rep.keeps_crossing
        failures = []
        if not ok:
            failures.append(
                {
                    "sample": i,
                    "metric": to_json(m),
                    "sigma": [_arc_str(a) for a in sigma],
                    "tau": [_arc_str(a) for a in tau],
                    "blocked_ratio": blocked_ratio,
                    "norm_ratio": norm_ratio,
                    "keeps_crossing": rep.keeps_crossing,
                }
            )
        return (blocked_ratio, norm_ratio), failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    return {
        "checks": {
            "samples": args.samples,
            "tolerance": tol,
            "max_blocked_ratio": max(r for (r, _), _ in results),
            "min_norm_ratio": min(n_ for (_, n_), _ in results),
        },
        "failures": failures,
    }


def _suite_cusp(args) -> dict:
    _need_kind_n(args)
    if not is_punctured(args.kind):
        raise InvalidInputError("cusp checks need a punctured kind")
    t = _template_of(args)
    tol = _suite_tol(args)
    holonomy = ((1.0, 1.0), (0.0, 1.0))
    maximal = [a for a in enumerate_arcs(args.kind, args.n) if a.is_maximal]
    if not maximal:
        raise InvalidInputError("no maximal arcs at this size")

    def worker(i):
        failures = []
        try:
            m = random_metric(args.kind, args.n, sample_rng(args.seed, i))
        except StripComplexError as exc:
            return 0.0, [{"sample": i, "error": str(exc)}]
        worst = 0.0
        for a in maximal:
            r = realize_arc(m, a, t)
            val = abs(trace_pairing(r.field, holonomy))
            worst = max(worst, val)
            if val > tol:
                failures.append(
                    {
                        "sample": i,
                        "metric": to_json(m),
                        "arc": _arc_str(a),
                        "trace_pairing": val,
                    }
                )
        return worst, failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    return {
        "checks": {
            "samples": args.samples,
            "fields_per_sample": len(maximal),
            "tolerance": tol,
            "max_trace_pairing": max(w for w, _ in results),
        },
        "failures": failures,
    }


def _segments_intersect(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)):
        return True
    return any(o == 0 for o in (o1, o2, o3, o4))


def _suite_lemmas(args) -> dict:
    tol = _suite_tol(args)
    pairings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))

    def worker(i):
        rng = sample_rng(args.seed, i)
        failures = []
        # three disjoint, unnested semicircles from six separated reals
        while True:
            vals = np.sort(rng.uniform(-8.0, 8.0, size=6))
            if np.diff(vals).min() >= 0.05:
                break
        gs = [
            geodesic_from_endpoints(float(vals[0]), float(vals[1])),
            geodesic_from_endpoints(float(vals[2]), float(vals[3])),
            geodesic_from_endpoints(float(vals[4]), float(vals[5])),
        ]
        rep = verify_center_lemmas(*gs, tol=tol)
        worst = max(
            abs(rep.ratio_residual),
            max(abs(r) for r in rep.center_residuals),
            max(abs(r) for r in rep.orthogonality_residuals),
        )
        if not rep.passed:
            failures.append(
                {
                    "sample": i,
                    "endpoints": [float(v) for v in vals],
                    "ratio_residual": rep.ratio_residual,
                    "ordering_ok": rep.ordering_ok,
                }
            )
        # chord-disjointness against a Euclidean segment oracle
        while True:
            ts = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=4))
            gaps = np.diff(np.concatenate([ts, [ts[0] + 2.0 * math.pi]]))
            if gaps.min() >= 1e-3:
                break
        (ia, ib), (ic, id_) = pairings[int(rng.integers(3))]
        pts = [(math.cos(v), math.sin(v)) for v in ts]

        def chord(u, w):
            return join(
                ProjPoint.from_affine(*pts[u]), ProjPoint.from_affine(*pts[w])
            )

        seg, other = chord(ia, ib), chord(ic, id_)
        oracle = not _segments_intersect(pts[ia], pts[ib], pts[ic], pts[id_])
        if chords_disjoint(seg, other) != oracle or chords_disjoint(other, seg) != oracle:
            failures.append(
                {
                    "sample": i,
                    "angles": [float(v) for v in ts],
                    "pairing": [[ia, ib], [ic, id_]],
                    "oracle": oracle,
                }
            )
        return worst, failures

    results = _run_samples(args.samples, worker)
    failures = [f for _, fs in results for f in fs]
    return {
        "checks": {
            "samples": args.samples,
            "tolerance": tol,
            "max_lemma_residual": max(w for w, _ in results),
        },
        "failures": failures,
    }


_SUITE_RUNNERS = {
    "basis": _suite_basis,
    "codim1": _suite_codim1,
    "codim2": _suite_codim2,
    "length-derivative": _suite_length_derivative,
    "admissible": _suite_admissible,
    "proper": _suite_proper,
    "cusp": _suite_cusp,
    "lemmas": _suite_lemmas,
}


def cmd_verify(args) -> int:
    _need_json_format(args)
    if args.samples < 1:
        raise InvalidInputError("--samples must be at least 1")
    started = time.perf_counter()
    body = _SUITE_RUNNERS[args.suite](args)
    passed = not body["failures"]
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "verify",
        "suite": args.suite,
        "config": _config_echo(args),
        "passed": passed,
        **body,
        "timings": {"seconds": round(time.perf_counter() - started, 6)},
    }
    _emit_json(report, args.out)
    return EXIT_PASS if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# strip-map


def _parse_point(spec: str | None, kind: str, n: int) -> BarycentricPoint:
    if not spec:
        raise InvalidInputError(
            'strip-map needs --point, e.g. "0-2" or "0-2:1,1-3:2"'
        )
    arcs = []
    weights: list[float | None] = []
    for part in spec.split(","):
        part = part.strip()
        ab, _, wtext = part.partition(":")
        try:
            a_text, b_text = ab.split("-")
            a, b = int(a_text), int(b_text)
        except ValueError:
            raise InvalidInputError(
                f"bad arc {ab!r} in --point; arcs are slot pairs like 0-2"
            ) from None
        arcs.append(ArcClass(kind, n, a, b))
        if wtext:
            try:
                w = float(wtext)
            except ValueError:
                raise InvalidInputError(f"bad weight {wtext!r} in --point") from None
            weights.append(w)
        else:
            weights.append(None)
    if any(w is None for w in weights):
        if any(w is not None for w in weights):
            raise InvalidInputError("--point weights must be all present or all absent")
        weights = [1.0] * len(arcs)
    total = sum(weights)
    if total <= 0.0:
        raise InvalidInputError("--point weights must sum to something positive")
    return BarycentricPoint(tuple(arcs), tuple(w / total for w in weights))


def _boundary_cell(value) -> object:
    return "inf" if value == INF else value


def _plot_rows(m, x, t: StripTemplate) -> list[list]:
    rows = []
    for k in range(m.n):
        if is_punctured(m.kind):
            v0, v1 = m.lifted_vertex(k), m.lifted_vertex(k + 1)
        else:
            v0, v1 = m.vertex(k), m.vertex((k + 1) % m.n)
        rows.append(
            [f"edge-{k}", "edge", _boundary_cell(v0), 0.0, _boundary_cell(v1), 0.0]
        )
    for a in x.support:
        r = realize_arc(m, a, t)
        ident = f"arc-{a.a}-{a.b}"
        x0, y0 = r.foot_a.re, r.foot_a.im
        if r.foot_b is not None:
            x1, y1 = r.foot_b.re, r.foot_b.im
        elif r.vertex_end == INF:
            x1, y1 = r.carrier.foot if isinstance(r.carrier, Vertical) else x0, "inf"
        else:
            x1, y1 = r.vertex_end, 0.0
        rows.append([ident, "arc", x0, y0, x1, y1])
        if isinstance(r.waist, float):
            rows.append(
                [f"waist-{a.a}-{a.b}", "waist", _boundary_cell(r.waist), 0.0, "", ""]
            )
        else:
            rows.append([f"waist-{a.a}-{a.b}", "waist", r.waist.re, r.waist.im, "", ""])
    return rows


def _emit_csv(rows: list[list], out: str | None) -> None:
    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["object-id", "type", "x0", "y0", "x1", "y1"])
        w.writerows(rows)

    if out:
        with open(out, "w", newline="") as fh:
            write(fh)
    else:
        write(sys.stdout)


def cmd_strip_map(args) -> int:
    started = time.perf_counter()
    try:
        with open(args.metric) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read metric file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"metric file is not JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from None
    m = from_json(doc)
    if args.kind is not None and args.kind != m.kind:
        raise InvalidInputError(
            f"--kind {args.kind} does not match the metric file ({m.kind})"
        )
    if args.n is not None and args.n != m.n:
        raise InvalidInputError(f"--n {args.n} does not match the metric file ({m.n})")
    x = _parse_point(args.point, m.kind, m.n)
    t = _template_of(args)
    v = strip_map(m, x, t, pruned=False)
    if args.format == "csv":
        _emit_csv(_plot_rows(m, x, t), args.out)
        return EXIT_PASS
    conns = enumerate_connections(m, args.kmax)
    rows = []
    for c in conns:
        rows.append(
            {
                "connection": [c.i, c.j, c.winding],
                "length": reported_length(m, c),
                "dl": length_derivative(m, v, c),
                "dl_crossing_sum": length_derivative_formula(m, x, c, t),
            }
        )
    verdict = admissible(m, v, args.kmax) if is_decorated(m.kind) else None
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "strip-map",
        "config": {**_config_echo(args), "metric_file": args.metric, "point": args.point},
        "metric": to_json(m),
        "point": {
            "arcs": [_arc_str(a) for a in x.support],
            "weights": list(x.weights),
            "filling": is_filling(x.support, m.kind, m.n),
        },
        "tangent": {
            "coords": list(v.coords),
            "vertex_dots": list(v.vertex_dots),
            "size_dots": None if v.size_dots is None else list(v.size_dots),
        },
        "admissible": verdict,
        "kmax": args.kmax,
        "connections": rows,
        "timings": {"seconds": round(time.perf_counter() - started, 6)},
    }
    _emit_json(report, args.out)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--kind", choices=KINDS, help="polygon kind")
    sp.add_argument("--n", type=int, help="number of vertices")
    sp.add_argument("--samples", type=int, default=25, help="random samples (default 25)")
    sp.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sp.add_argument(
        "--template",
        choices=("intrinsic", "foot-of-infinity"),
        default="intrinsic",
        help="strip template (default intrinsic)",
    )
    sp.add_argument(
        "--kmax", type=int, default=3, help="winding cutoff for connections (default 3)"
    )
    sp.add_argument("--tol", type=float, default=None, help="tolerance override")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="json for reports, csv for strip-map plot data",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stripcomplex",
        description="arc complexes and strip deformations of hyperbolic polygons",
    )
    p.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "arc-complex", help="combinatorial statistics of one arc complex"
    )
    _add_common(sp)
    sp.set_defaults(func=cmd_arc_complex)

    sp = sub.add_parser("verify", help="run one verification suite")
    sp.add_argument("suite", choices=SUITES, help="which invariant sweep to run")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser(
        "strip-map", help="apply the strip map to a point over a metric file"
    )
    sp.add_argument("metric", help="path to a metric JSON file")
    sp.add_argument(
        "--point",
        help='weighted arc system, e.g. "0-2:1,1-3:2" (weights optional)',
    )
    _add_common(sp)
    sp.set_defaults(func=cmd_strip_map)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"stripcomplex: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except StripComplexError as exc:
        print(f"stripcomplex: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
