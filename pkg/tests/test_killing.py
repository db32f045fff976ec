"""Killing fields: pictures, flows, velocities, pairings."""

import math

import numpy as np
import pytest

from stripcomplex.decorations import Horoball, UhpHoroball, horoball_from_uhp, transform
from stripcomplex.errors import InvalidInputError
from stripcomplex.killing import (
    KillingField,
    axis,
    boundary_velocity,
    bracket,
    character,
    disc,
    fixed_points,
    flow,
    from_matrix,
    from_minvector,
    horoball_velocity,
    norm_at,
    parabolic_at,
    perpendicular_hyperbolic,
    repelling_fixed_point,
    to_matrix,
    to_minvector,
    trace_pairing,
    translate,
    translation_speed,
    transport,
)
from stripcomplex.lorentz import MinVector, min_inner, min_norm2
from stripcomplex.models import (
    INF,
    Semicircle,
    UhpPoint,
    Vertical,
    crossing_angle,
    distance,
    geodesics_intersection,
    mobius_apply,
    mobius_apply_interior,
    orthogonal,
    point_on_geodesic,
)

T_CUSP = [[1.0, 1.0], [0.0, 1.0]]


def rnd_field(rng) -> KillingField:
    return KillingField(*rng.uniform(-2, 2, size=3))


def test_picture_roundtrips():
    rng = np.random.default_rng(31)
    for _ in range(100):
        k = rnd_field(rng)
        k2 = from_matrix(to_matrix(k))
        assert (k2.a, k2.b, k2.c) == pytest.approx((k.a, k.b, k.c))
        k3 = from_minvector(to_minvector(k))
        assert (k3.a, k3.b, k3.c) == pytest.approx((k.a, k.b, k.c))


def test_disc_is_four_times_minkowski_norm():
    rng = np.random.default_rng(32)
    for _ in range(100):
        k = KillingField(*rng.integers(-9, 10, size=3).astype(float))
        assert disc(k) == 4.0 * min_norm2(to_minvector(k))  # exact in floats


def test_character_examples():
    assert character(KillingField(0, 1, 0)) == "hyperbolic"  # P = z
    assert character(KillingField(0, 0, 1)) == "parabolic"  # P = 1
    assert character(KillingField(1, 0, 1)) == "elliptic"  # P = z^2 + 1


def test_boundary_velocity_finite_difference():
    rng = np.random.default_rng(33)
    for _ in range(100):
        k = rnd_field(rng)
        x = rng.uniform(-4, 4)
        t = 1e-7
        fd = (mobius_apply(flow(k, t), x) - x) / t
        assert boundary_velocity(k, x) == pytest.approx(fd, rel=1e-5, abs=1e-5)


def test_boundary_velocity_at_infinity():
    """In the chart w = -1/z the velocity at infinity is the leading
    coefficient."""
    rng = np.random.default_rng(34)
    for _ in range(50):
        k = rnd_field(rng)
        t = 1e-7
        z_img = mobius_apply(flow(k, t), INF)
        w_img = 0.0 if z_img == INF else -1.0 / z_img
        assert boundary_velocity(k, INF) == pytest.approx(w_img / t, rel=1e-5, abs=1e-5)
    assert boundary_velocity(KillingField(2.5, 0, 1), INF) == 2.5


def test_flow_group_law_and_expm_oracle():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    rng = np.random.default_rng(35)
    for _ in range(50):
        k = rnd_field(rng)
        t, s = rng.uniform(-2, 2, size=2)
        gt = np.array(flow(k, t))
        gs = np.array(flow(k, s))
        gts = np.array(flow(k, t + s))
        assert np.allclose(gt @ gs, gts, atol=1e-10)
        oracle = scipy_linalg.expm(t * np.array(to_matrix(k)))
        assert np.allclose(gt, oracle, atol=1e-10)
    assert np.allclose(np.array(flow(KillingField(1, 0, 0), 0.0)), np.eye(2))


def test_bracket_antisymmetry_and_vector_compatibility():
    """[U, V] in the matrix picture corresponds to -2 u x v in Minkowski
    coordinates; the tests only rely on the bracket itself, but the scale
    relation is pinned here so nobody moves it accidentally."""
    from stripcomplex.lorentz import min_cross

    rng = np.random.default_rng(36)
    for _ in range(50):
        k1, k2 = rnd_field(rng), rnd_field(rng)
        br = bracket(k1, k2)
        neg = bracket(k2, k1)
        assert (br.a, br.b, br.c) == pytest.approx((-neg.a, -neg.b, -neg.c))
        v = to_minvector(br)
        w = min_cross(to_minvector(k1), to_minvector(k2)) * (-2.0)
        assert (v.x, v.y, v.z) == pytest.approx((w.x, w.y, w.z), abs=1e-12)


def test_horoball_velocity_parallel_is_zero():
    k = parabolic_at(0.7, 1.3, 1)
    h = horoball_from_uhp(UhpHoroball(0.7, 0.4))
    v = horoball_velocity(k, h)
    assert (v.x, v.y, v.z) == pytest.approx((0, 0, 0), abs=1e-12)


def test_horoball_velocity_tangency():
    rng = np.random.default_rng(37)
    for _ in range(100):
        k = rnd_field(rng)
        h = horoball_from_uhp(UhpHoroball(rng.uniform(-3, 3), math.exp(rng.uniform(-2, 1))))
        v = horoball_velocity(k, h)
        assert min_inner(v, h.v) == pytest.approx(0.0, abs=1e-10)


def test_horoball_velocity_finite_difference():
    """The spec-level oracle: exp(t K) at t = 1e-6 against the analytic
    velocity at 1e-5 relative tolerance."""
    rng = np.random.default_rng(38)
    for _ in range(100):
        k = rnd_field(rng)
        base = rng.uniform(-3, 3)
        h = horoball_from_uhp(UhpHoroball(base, math.exp(rng.uniform(-2, 1))))
        an = horoball_velocity(k, h)
        t = 1e-6
        moved = transform(h, flow(k, t))
        fd = (moved.v - h.v) * (1.0 / t)
        scale = max(1.0, an.euclidean_norm())
        assert fd.x == pytest.approx(an.x, abs=1e-5 * scale)
        assert fd.y == pytest.approx(an.y, abs=1e-5 * scale)
        assert fd.z == pytest.approx(an.z, abs=1e-5 * scale)


def test_trace_pairing_with_cusp_holonomy():
    rng = np.random.default_rng(39)
    for _ in range(50):
        k = rnd_field(rng)
        assert trace_pairing(k, T_CUSP) == pytest.approx(-k.a)
    # pairing vanishes exactly for cusp-compatible (affine) fields
    assert trace_pairing(KillingField(0.0, 1.7, -0.3), T_CUSP) == 0.0


def test_perpendicular_hyperbolic_frozen_example():
    """Axis through the apex of the unit semicircle, upward, speed 1 is
    the field P(z) = z."""
    k = perpendicular_hyperbolic(Semicircle(0.0, 1.0), UhpPoint(0.0, 1.0), 1.0, 1)
    assert (k.a, k.b, k.c) == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)
    k_down = perpendicular_hyperbolic(Semicircle(0.0, 1.0), UhpPoint(0.0, 1.0), 1.0, -1)
    assert (k_down.a, k_down.b, k_down.c) == pytest.approx((0.0, -1.0, 0.0), abs=1e-12)


def test_perpendicular_hyperbolic_properties():
    rng = np.random.default_rng(40)
    for _ in range(100):
        c = rng.uniform(-3, 3)
        r = math.exp(rng.uniform(-1, 1))
        alpha = Semicircle(c, r)
        t = rng.uniform(0.3, math.pi - 0.3)
        p = UhpPoint(c + r * math.cos(t), r * math.sin(t))
        speed = math.exp(rng.uniform(-1, 1))
        side = 1 if rng.uniform() < 0.5 else -1
        k = perpendicular_hyperbolic(alpha, p, speed, side)
        assert character(k) == "hyperbolic"
        assert translation_speed(k) == pytest.approx(speed, rel=1e-9)
        assert norm_at(k, p) == pytest.approx(speed, rel=1e-9)
        ax = axis(k)
        assert point_on_geodesic(ax, p, tol=1e-7)
        assert orthogonal(ax, alpha)
        # velocity at p is normal to alpha, oriented by side
        vel = k(p.as_complex())
        nx, ny = (p.re - c) / r, p.im / r
        dot = vel.real * nx + vel.imag * ny
        assert dot * side > 0
        assert abs(dot) == pytest.approx(abs(vel), rel=1e-9)  # purely normal


def test_perpendicular_hyperbolic_vertical_axis():
    # perpendicular at the apex is the vertical axis through the center
    alpha = Semicircle(2.0, 1.5)
    p = UhpPoint(2.0, 1.5)
    k = perpendicular_hyperbolic(alpha, p, 2.0, 1)
    ax = axis(k)
    assert isinstance(ax, Vertical)
    assert ax.foot == pytest.approx(2.0)
    assert repelling_fixed_point(k) == pytest.approx(2.0)  # pushes upward, away from foot


def test_perpendicular_hyperbolic_on_vertical_arc():
    alpha = Vertical(1.0)
    p = UhpPoint(1.0, 2.0)
    k = perpendicular_hyperbolic(alpha, p, 1.0, 1)
    vel = k(p.as_complex())
    assert vel.real > 0  # +1 points toward +x for vertical arcs
    assert vel.imag == pytest.approx(0.0, abs=1e-12)
    ax = axis(k)
    assert point_on_geodesic(ax, p)
    assert orthogonal(ax, alpha)


def test_parabolic_at_norm_on_unit_horocycle():
    rng = np.random.default_rng(41)
    # base at infinity: the unit horocycle is the height-1 line
    k = parabolic_at(INF, 1.7, 1)
    for x in rng.uniform(-5, 5, size=10):
        assert norm_at(k, UhpPoint(x, 1.0)) == pytest.approx(1.7)
    # finite base: the unit horocycle is the circle of diameter 1 at q
    q = 0.8
    k2 = parabolic_at(q, 0.6, -1)
    for t in rng.uniform(0.1, 2 * math.pi - 0.1, size=10):
        # circle of diameter 1 tangent at q: center q + i/2, radius 1/2
        p = UhpPoint(q + 0.5 * math.sin(t), 0.5 + 0.5 * math.cos(t))
        assert norm_at(k2, p) == pytest.approx(0.6, rel=1e-9)
    assert character(k2) == "parabolic"
    assert fixed_points(k2) == pytest.approx((q,))


def test_axis_and_repelling_fixed_point():
    k = KillingField(1.0, 0.0, -1.0)  # P = z^2 - 1, roots -1 and 1
    ax = axis(k)
    assert isinstance(ax, Semicircle)
    assert ax.center == pytest.approx(0.0)
    assert ax.radius == pytest.approx(1.0)
    assert repelling_fixed_point(k) == pytest.approx(1.0)  # P' (1) = 2 > 0
    k_neg = KillingField(0.0, -1.0, 0.0)  # P = -z pushes toward 0
    assert repelling_fixed_point(k_neg) == INF


def test_translation_along_axis():
    rng = np.random.default_rng(42)
    for _ in range(50):
        speed = math.exp(rng.uniform(-1, 1))
        k = KillingField(0.0, speed, 0.0)  # axis is the imaginary ray
        t = rng.uniform(0.1, 2.0)
        p = UhpPoint(0.0, math.exp(rng.uniform(-1, 1)))
        q = mobius_apply_interior(flow(k, t), p)
        assert distance(p, q) == pytest.approx(t * speed, rel=1e-9)


def test_norm_invariance_under_transport():
    rng = np.random.default_rng(43)
    for _ in range(50):
        k = rnd_field(rng)
        g = rng.uniform(-2, 2, size=(2, 2))
        det = np.linalg.det(g)
        if abs(det) < 0.2:
            continue
        if det < 0:
            g = g[::-1]
        p = UhpPoint(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1)))
        lhs = norm_at(transport(k, g), mobius_apply_interior(g, p))
        assert lhs == pytest.approx(norm_at(k, p), rel=1e-8)


def test_translate_is_polynomial_shift():
    k = KillingField(1.0, 2.0, 3.0)
    k2 = translate(k, 1.5)
    z = 0.37
    assert k2(z) == pytest.approx(k(z - 1.5))


def test_field_velocity_agrees_with_interior_flow():
    """P(z) is the velocity of interior points too, since the field is the
    holomorphic extension."""
    rng = np.random.default_rng(44)
    for _ in range(50):
        k = rnd_field(rng)
        p = UhpPoint(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1)))
        t = 1e-7
        q = mobius_apply_interior(flow(k, t), p)
        fd = complex((q.re - p.re) / t, (q.im - p.im) / t)
        assert abs(fd - k(p.as_complex())) < 1e-5 * max(1.0, abs(k(p.as_complex())))


def test_invalid_inputs():
    with pytest.raises(InvalidInputError):
        perpendicular_hyperbolic(Semicircle(0, 1), UhpPoint(5, 5), 1.0, 1)  # p not on alpha
    with pytest.raises(InvalidInputError):
        perpendicular_hyperbolic(Semicircle(0, 1), UhpPoint(0, 1), -1.0, 1)
    with pytest.raises(InvalidInputError):
        parabolic_at(0.0, 1.0, 2)
    with pytest.raises(InvalidInputError):
        axis(parabolic_at(0.0, 1.0, 1))
    with pytest.raises(InvalidInputError):
        from_matrix([[1.0, 0.0], [0.0, 1.0]])  # not traceless
