"""Minkowski algebra and the projective chord duality."""

import math

import numpy as np
import pytest

from stripcomplex.errors import InvalidInputError
from stripcomplex.lorentz import (
    EPS_CLASS,
    MinVector,
    ProjLine,
    ProjPoint,
    causal_character,
    chord_endpoints,
    chords_disjoint,
    dual,
    incident,
    join,
    meet,
    min_cross,
    min_inner,
    min_norm2,
)


def rnd_vec(rng):
    return MinVector(*rng.uniform(-3, 3, size=3))


def test_min_inner_basis():
    ex = MinVector(1, 0, 0)
    ey = MinVector(0, 1, 0)
    ez = MinVector(0, 0, 1)
    assert min_inner(ex, ex) == 1
    assert min_inner(ey, ey) == 1
    assert min_inner(ez, ez) == -1
    assert min_inner(ex, ey) == 0
    assert min_inner(ex, ez) == 0


def test_cross_orthogonality_and_lagrange():
    rng = np.random.default_rng(7)
    for _ in range(200):
        u, v = rnd_vec(rng), rnd_vec(rng)
        w = min_cross(u, v)
        assert abs(min_inner(w, u)) < 1e-12 * 100
        assert abs(min_inner(w, v)) < 1e-12 * 100
        lhs = min_norm2(w)
        rhs = min_inner(u, v) ** 2 - min_norm2(u) * min_norm2(v)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


def test_cross_of_standard_pair():
    assert min_cross(MinVector(1, 0, 0), MinVector(0, 1, 0)) == MinVector(0, 0, 1)


def test_classification():
    assert causal_character(MinVector(1, 0, 0)) == "spacelike"
    assert causal_character(MinVector(0, 0, 1)) == "timelike"
    assert causal_character(MinVector(1, 0, 1)) == "lightlike"
    assert causal_character(MinVector(3, 4, 5)) == "lightlike"
    # just under the relative threshold still counts as lightlike
    eps = 0.4 * EPS_CLASS
    assert causal_character(MinVector(1.0, 0.0, 1.0 + eps)) == "lightlike"
    with pytest.raises(InvalidInputError):
        causal_character(MinVector(0, 0, 0))


def test_normalized_storage():
    p = ProjPoint.from_triple(-2.0, 0.0, -2.0)
    assert p.x == pytest.approx(1 / math.sqrt(2))
    assert p.z == pytest.approx(1 / math.sqrt(2))
    q = ProjPoint.from_triple(0.0, -5.0, 1.0)
    assert q.y > 0  # first nonzero coordinate flipped positive
    assert q.z < 0
    with pytest.raises(InvalidInputError):
        ProjPoint.from_triple(0, 0, 0)


def test_dual_examples():
    line_at_inf = ProjLine.from_triple(0, 0, 1)
    assert dual(line_at_inf) == ProjPoint.from_triple(0, 0, 1)
    # dual line of the point (a, 0, 1) is the vertical chord through 1/a
    a = 2.0
    l = dual(ProjPoint.from_triple(a, 0, 1))
    p1, p2 = chord_endpoints(l)
    assert p1.x / p1.z == pytest.approx(0.5)
    assert p2.x / p2.z == pytest.approx(0.5)
    assert dual(dual(line_at_inf)) == line_at_inf


def test_join_meet_incidence():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = ProjPoint.from_affine(*rng.uniform(-2, 2, size=2))
        b = ProjPoint.from_affine(*rng.uniform(-2, 2, size=2))
        if a == b:
            continue
        l = join(a, b)
        assert incident(a, l, tol=1e-9)
        assert incident(b, l, tol=1e-9)


def _chord_from_angles(t1, t2):
    p = ProjPoint.from_affine(math.cos(t1), math.sin(t1))
    q = ProjPoint.from_affine(math.cos(t2), math.sin(t2))
    return join(p, q)


def _segments_intersect(a, b, c, d):
    """Closed Euclidean segment intersection via orientation predicates."""

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)):
        return True
    return any(o == 0 for o in (o1, o2, o3, o4))


def test_chords_disjoint_against_segment_oracle():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 10_000:
        ts = np.sort(rng.uniform(0, 2 * math.pi, size=4))
        gaps = np.diff(np.concatenate([ts, [ts[0] + 2 * math.pi]]))
        if gaps.min() < 1e-3:
            continue
        # random pairing of the four circle points into two chords
        pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
        (i, j), (k, l) = pairings[rng.integers(3)]
        seg = _chord_from_angles(ts[i], ts[j])
        other = _chord_from_angles(ts[k], ts[l])
        pts = [(math.cos(t), math.sin(t)) for t in ts]
        oracle = not _segments_intersect(pts[i], pts[j], pts[k], pts[l])
        assert chords_disjoint(seg, other) == oracle
        assert chords_disjoint(other, seg) == oracle
        checked += 1


def test_chords_same_carrier_not_disjoint():
    l = _chord_from_angles(0.3, 2.0)
    assert chords_disjoint(l, l) is False


def test_chords_shared_endpoint_not_disjoint():
    a = _chord_from_angles(0.5, 2.0)
    b = _chord_from_angles(0.5, 4.0)
    assert chords_disjoint(a, b) is False


def test_chords_require_disk_crossing():
    outside = ProjLine.from_triple(1.0, 0.0, 2.0)  # x = 2, misses the disk
    inside = _chord_from_angles(0.1, 1.1)
    with pytest.raises(InvalidInputError):
        chords_disjoint(outside, inside)
    with pytest.raises(InvalidInputError):
        chords_disjoint(inside, outside)


def test_meet_of_chords_inside_disk_iff_crossing():
    a = _chord_from_angles(0.0, math.pi)  # horizontal diameter
    b = _chord_from_angles(math.pi / 2, 3 * math.pi / 2)  # vertical diameter
    p = meet(a, b)
    assert causal_character(p.vector()) == "timelike"
    assert not chords_disjoint(a, b)
