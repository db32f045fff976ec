"""Hyperboloid, projective disk and upper half plane models.

Conventions that everything downstream relies on:

* the hyperboloid sheet is {<v,v> = -1, z > 0} with cosh(dist) = -<u,v>;
* the disk model is the z=1 affine chart of the projective plane, so its
  metric is the Hilbert metric of the unit disk and is not conformal;
* angles are only ever computed in the upper half plane, which is the
  conformal chart;
* the chart UHP -> hyperboloid is the equivariant one,
  u + iv -> ((u^2+v^2-1)/(2v), -u/v, (u^2+v^2+1)/(2v)),
  whose minus sign on the middle coordinate is forced by compatibility
  with the matrix action used in the killing module;
* the boundary point b of the real line gets the lightlike ray
  ((b^2-1)/2, -b, (b^2+1)/2), and infinity gets (1/2, 0, 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateConfigurationError,
    InvalidInputError,
    NoCommonPerpendicularError,
)
from .lorentz import MinVector, causal_character, min_cross, min_inner

INF = math.inf


@dataclass(frozen=True)
class UhpPoint:
    """Point of the open upper half plane."""

    re: float
    im: float

    def __post_init__(self):
        if not (self.im > 0) or not math.isfinite(self.re) or not math.isfinite(self.im):
            raise InvalidInputError(f"not an upper half plane point: {self.re}+{self.im}i")

    def as_complex(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class Semicircle:
    """Geodesic of the UHP with two finite endpoints."""

    center: float
    radius: float

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidInputError("semicircle radius must be positive")

    def endpoints(self) -> tuple[float, float]:
        return (self.center - self.radius, self.center + self.radius)


@dataclass(frozen=True)
class Vertical:
    """Geodesic of the UHP through the point at infinity."""

    foot: float

    def endpoints(self) -> tuple[float, float]:
        return (self.foot, INF)


Geodesic = Semicircle | Vertical


def is_boundary_point(b: float) -> bool:
    return b == INF or math.isfinite(b)


# ---------------------------------------------------------------------------
# model charts


def boundary_ray(b: float) -> MinVector:
    """Lightlike ray of a boundary point of the UHP (b may be INF)."""
    if b == INF:
        return MinVector(0.5, 0.0, 0.5)
    if not math.isfinite(b):
        raise InvalidInputError(f"bad boundary point {b!r}")
    return MinVector((b * b - 1.0) / 2.0, -b, (b * b + 1.0) / 2.0)


def boundary_point_of_ray(v: MinVector, tol: float = 1e-12) -> float:
    """Inverse of boundary_ray up to positive scale."""
    if causal_character(v) != "lightlike":
        raise InvalidInputError("not a lightlike vector")
    if v.z <= 0:
        raise InvalidInputError("lightlike vector must be future pointing")
    if abs(v.x - v.z) <= tol * abs(v.z):
        return INF
    return v.y / (v.x - v.z)


def uhp_to_hyperboloid(p: UhpPoint) -> MinVector:
    u, v = p.re, p.im
    s = u * u + v * v
    return MinVector((s - 1.0) / (2.0 * v), -u / v, (s + 1.0) / (2.0 * v))


def hyperboloid_to_uhp(w: MinVector) -> UhpPoint:
    if causal_character(w) != "timelike" or w.z <= 0:
        raise InvalidInputError("not a point of the upper sheet")
    scale = math.sqrt(-min_inner(w, w))
    x, y, z = w.x / scale, w.y / scale, w.z / scale
    return UhpPoint(-y / (z - x), 1.0 / (z - x))


def hyperboloid_to_klein(w: MinVector) -> tuple[float, float]:
    if w.z <= 0:
        raise InvalidInputError("not on the upper sheet")
    return (w.x / w.z, w.y / w.z)


def klein_to_hyperboloid(k: tuple[float, float]) -> MinVector:
    u, v = k
    s = 1.0 - u * u - v * v
    if s <= 0:
        raise InvalidInputError("not inside the unit disk")
    r = 1.0 / math.sqrt(s)
    return MinVector(u * r, v * r, r)


def convert(point, source: str, target: str):
    """Convert an interior point between "hyperboloid", "klein", "uhp".

    Representations are MinVector, (u, v) pair, UhpPoint respectively.
    """
    reps = {"hyperboloid", "klein", "uhp"}
    if source not in reps or target not in reps:
        raise InvalidInputError(f"unknown model in {source!r} -> {target!r}")
    if source == target:
        return point
    if source == "uhp":
        w = uhp_to_hyperboloid(point)
    elif source == "klein":
        w = klein_to_hyperboloid(point)
    else:
        w = point
        if causal_character(w) != "timelike" or w.z <= 0:
            raise InvalidInputError("not a point of the upper sheet")
    if target == "hyperboloid":
        return w
    if target == "klein":
        return hyperboloid_to_klein(w)
    return hyperboloid_to_uhp(w)


# ---------------------------------------------------------------------------
# geodesics and poles


def geodesic_from_endpoints(a: float, b: float) -> Geodesic:
    """Geodesic with the two given distinct boundary endpoints."""
    if a == b:
        raise InvalidInputError("geodesic needs two distinct endpoints")
    if a == INF:
        return Vertical(b)
    if b == INF:
        return Vertical(a)
    lo, hi = min(a, b), max(a, b)
    return Semicircle((lo + hi) / 2.0, (hi - lo) / 2.0)


def geodesic_through_points(p: UhpPoint, q: UhpPoint) -> Geodesic:
    """The geodesic through two distinct interior points."""
    if p.re == q.re:
        if p.im == q.im:
            raise InvalidInputError("geodesic needs two distinct points")
        return Vertical(p.re)
    c = (q.re * q.re + q.im * q.im - p.re * p.re - p.im * p.im) / (2.0 * (q.re - p.re))
    return Semicircle(c, math.hypot(p.re - c, p.im))


def pole(g: Geodesic) -> MinVector:
    """Spacelike pole of a geodesic; dual to it under the polarity.

    For endpoints a < b the pole is (ab-1, -(a+b), ab+1) up to scale, and
    (f, -1, f) for the vertical at f.
    """
    if isinstance(g, Vertical):
        return MinVector(g.foot, -1.0, g.foot)
    a, b = g.endpoints()
    return MinVector(a * b - 1.0, -(a + b), a * b + 1.0)


def geodesic_from_pole(q: MinVector) -> Geodesic:
    """Geodesic whose pole is the given spacelike vector."""
    if causal_character(q) != "spacelike":
        raise InvalidInputError("pole of a geodesic must be spacelike")
    lead = q.x - q.z
    scale = q.euclidean_norm()
    if abs(lead) <= 1e-13 * scale:
        # One endpoint at infinity.
        return Vertical(-(q.x + q.z) / (2.0 * q.y))
    disc = math.sqrt(min_inner(q, q))
    center = q.y / lead
    radius = abs(disc / lead)
    return Semicircle(center, radius)


def orthogonal(g1: Geodesic, g2: Geodesic, tol: float = 1e-9) -> bool:
    """Whether two geodesics meet at a right angle (pole pairing zero)."""
    p1, p2 = pole(g1), pole(g2)
    s = p1.euclidean_norm() * p2.euclidean_norm()
    return abs(min_inner(p1, p2)) <= tol * s


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> Geodesic:
    """The unique geodesic orthogonal to two ultraparallel geodesics.

    Raises NoCommonPerpendicularError when the geodesics cross or are
    asymptotic.
    """
    q = min_cross(pole(g1), pole(g2))
    kind = causal_character(q)
    if kind == "timelike":
        raise NoCommonPerpendicularError("geodesics cross; no common perpendicular")
    if kind == "lightlike":
        raise NoCommonPerpendicularError("geodesics are asymptotic; no common perpendicular")
    return geodesic_from_pole(q)


def geodesics_intersection(g1: Geodesic, g2: Geodesic) -> UhpPoint | None:
    """Intersection point of two geodesics in the open UHP, if any."""
    if isinstance(g1, Vertical) and isinstance(g2, Vertical):
        return None
    if isinstance(g1, Vertical):
        g1, g2 = g2, g1
    # g1 is a semicircle now.
    if isinstance(g2, Vertical):
        x = g2.foot
        y2 = g1.radius**2 - (x - g1.center) ** 2
    else:
        c1, r1, c2, r2 = g1.center, g1.radius, g2.center, g2.radius
        if c1 == c2:
            return None
        x = (c1 * c1 - c2 * c2 - r1 * r1 + r2 * r2) / (2.0 * (c1 - c2))
        y2 = r1 * r1 - (x - c1) ** 2
    if y2 <= 0:
        return None
    return UhpPoint(x, math.sqrt(y2))


def tangent_direction(g: Geodesic, p: UhpPoint) -> tuple[float, float]:
    """Euclidean unit tangent of a geodesic at a point on it."""
    if isinstance(g, Vertical):
        return (0.0, 1.0)
    dx, dy = p.re - g.center, p.im
    r = math.hypot(dx, dy)
    return (-dy / r, dx / r)


def crossing_angle(g1: Geodesic, g2: Geodesic, p: UhpPoint) -> float:
    """Unsigned angle in (0, pi/2] between two geodesics through p.

    UHP is conformal, so the Euclidean angle of the tangents is the
    hyperbolic angle.
    """
    t1 = tangent_direction(g1, p)
    t2 = tangent_direction(g2, p)
    dot = abs(t1[0] * t2[0] + t1[1] * t2[1])
    return math.acos(min(1.0, dot))


def point_on_geodesic(g: Geodesic, p: UhpPoint, tol: float = 1e-9) -> bool:
    if isinstance(g, Vertical):
        return abs(p.re - g.foot) <= tol * max(1.0, abs(g.foot), p.im)
    return abs(math.hypot(p.re - g.center, p.im) - g.radius) <= tol * g.radius


def perpendicular_through(p: UhpPoint, g: Geodesic) -> Geodesic:
    """Geodesic through the interior point p orthogonal to g.

    A circle centered at t on the real axis is orthogonal to the
    semicircle (c, r) iff (t-c)^2 = R^2 + r^2, which solved for t avoids
    the nearly lightlike cross product one gets when p sits close to the
    apex and the answer degenerates toward a vertical.
    """
    if isinstance(g, Vertical):
        return Semicircle(g.foot, math.hypot(p.re - g.foot, p.im))
    if p.re == g.center:
        return Vertical(g.center)
    pp = p.re * p.re + p.im * p.im
    t = (pp + g.radius * g.radius - g.center * g.center) / (2.0 * (p.re - g.center))
    return Semicircle(t, math.hypot(p.re - t, p.im))


def perpendicular_from_boundary(b: float, g: Geodesic) -> Geodesic:
    """Geodesic from the boundary point b meeting g orthogonally.

    Exists iff b is not an endpoint of g.  Same orthogonality algebra as
    perpendicular_through, with the through-point on the real axis.
    """
    if isinstance(g, Vertical):
        if b == INF or b == g.foot:
            raise DegenerateConfigurationError(
                "boundary point is an endpoint of the geodesic; no perpendicular from it"
            )
        return Semicircle(g.foot, abs(b - g.foot))
    if b == INF:
        return Vertical(g.center)
    if abs(b - g.center) == g.radius:
        raise DegenerateConfigurationError(
            "boundary point is an endpoint of the geodesic; no perpendicular from it"
        )
    if b == g.center:
        return Vertical(g.center)
    t = (b * b + g.radius * g.radius - g.center * g.center) / (2.0 * (b - g.center))
    return Semicircle(t, abs(b - t))


def foot_of_boundary(b: float, g: Geodesic) -> UhpPoint:
    """Orthogonal projection of the boundary point b onto g.

    Computed in closed form: for a semicircle of center c and radius r
    the foot of b sits at angle theta with cos(theta) = 2ur/(u^2+r^2),
    u = b-c, which stays accurate even when b is very close to c and the
    cross-product route would cancel catastrophically.
    """
    if isinstance(g, Vertical):
        if b == INF:
            raise DegenerateConfigurationError(
                "boundary point is an endpoint of the geodesic; no perpendicular from it"
            )
        u = b - g.foot
        if u == 0.0:
            raise DegenerateConfigurationError(
                "boundary point is the foot of the vertical; no perpendicular from it"
            )
        return UhpPoint(g.foot, abs(u))
    if b == INF:
        return UhpPoint(g.center, g.radius)
    u = b - g.center
    r = g.radius
    if abs(u) == r:
        raise DegenerateConfigurationError(
            "boundary point is an endpoint of the geodesic; no perpendicular from it"
        )
    den = u * u + r * r
    return UhpPoint(g.center + 2.0 * u * r * r / den, r * abs(u * u - r * r) / den)


def geodesic_midpoint(g: Geodesic, p: UhpPoint, q: UhpPoint) -> UhpPoint:
    """Hyperbolic midpoint of two points lying on the geodesic g."""
    if isinstance(g, Vertical):
        return UhpPoint(g.foot, math.sqrt(p.im * q.im))
    tp = math.atan2(p.im, p.re - g.center)
    tq = math.atan2(q.im, q.re - g.center)
    # arclength parameter along the semicircle is log tan(theta/2)
    tm = 2.0 * math.atan(math.sqrt(math.tan(tp / 2.0) * math.tan(tq / 2.0)))
    return UhpPoint(g.center + g.radius * math.cos(tm), g.radius * math.sin(tm))


def distance(p: UhpPoint, q: UhpPoint) -> float:
    """Hyperbolic distance in the UHP."""
    d2 = (p.re - q.re) ** 2 + (p.im - q.im) ** 2
    return math.acosh(1.0 + d2 / (2.0 * p.im * q.im))


def hyperboloid_distance(u: MinVector, v: MinVector) -> float:
    return math.acosh(max(1.0, -min_inner(u, v)))


# ---------------------------------------------------------------------------
# cross-ratio and the Hilbert metric


def cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """[a,b;c,d] = ((c-a)(d-b)) / ((b-a)(d-c)) on R plus infinity.

    At most one argument may be infinite; the two factors containing it
    cancel in the limit.
    """
    pts = [a, b, c, d]
    n_inf = sum(1 for t in pts if t == INF)
    if n_inf > 1:
        raise InvalidInputError("at most one cross-ratio argument may be infinite")
    if a == INF:
        return (d - b) / (d - c)
    if b == INF:
        return (c - a) / (c - d)
    if c == INF:
        return (d - b) / (a - b)
    if d == INF:
        return (c - a) / (b - a)
    num = (c - a) * (d - b)
    den = (b - a) * (d - c)
    if den == 0.0:
        raise InvalidInputError("cross-ratio undefined for coincident points")
    return num / den


def hilbert_distance(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Hilbert metric of the unit disk: half the log of the cross ratio
    along the chord through the two points."""
    if p == q:
        return 0.0
    px, py = p
    qx, qy = q
    for u, v in (p, q):
        if u * u + v * v >= 1.0:
            raise InvalidInputError("Hilbert distance needs interior points")
    dx, dy = qx - px, qy - py
    # Solve |p + t d| = 1; roots t_minus < 0 < 1 < t_plus.
    aa = dx * dx + dy * dy
    bb = 2.0 * (px * dx + py * dy)
    cc = px * px + py * py - 1.0
    disc = math.sqrt(bb * bb - 4.0 * aa * cc)
    t_plus = (-bb + disc) / (2.0 * aa)
    t_minus = (-bb - disc) / (2.0 * aa)
    # Parameters along the line: p -> 0, q -> 1, ends -> t_minus, t_plus.
    cr = cross_ratio(0.0, t_minus, t_plus, 1.0)
    return 0.5 * abs(math.log(cr))


# ---------------------------------------------------------------------------
# Mobius action


def mobius_apply(m, z: float) -> float:
    """Apply a real 2x2 matrix to a boundary point (may be INF)."""
    a, b, c, d = float(m[0][0]), float(m[0][1]), float(m[1][0]), float(m[1][1])
    if z == INF:
        if c == 0.0:
            return INF
        return a / c
    den = c * z + d
    if den == 0.0:
        return INF
    return (a * z + b) / den


def mobius_apply_interior(m, p: UhpPoint) -> UhpPoint:
    """Apply a real 2x2 matrix with positive determinant to a UHP point."""
    a, b, c, d = float(m[0][0]), float(m[0][1]), float(m[1][0]), float(m[1][1])
    det = a * d - b * c
    if det <= 0:
        raise InvalidInputError("matrix must have positive determinant")
    z = p.as_complex()
    w = (a * z + b) / (c * z + d)
    return UhpPoint(w.real, w.imag)


def mobius_to_standard_triple(p: float, q: float, r: float):
    """Matrix of the Mobius map sending (p, q, r) to (inf, 0, 1).

    All of p, q, r are boundary points, at most one infinite.
    """
    # h(z) = ((z - q)(r - p)) / ((z - p)(r - q)) as a matrix product.
    if p == INF:
        # z -> (z - q) / (r - q)
        return [[1.0, -q], [0.0, r - q]]
    if q == INF:
        # z -> (r - p) / (z - p)
        return [[0.0, r - p], [1.0, -p]]
    if r == INF:
        # z -> (z - q) / (z - p)
        return [[1.0, -q], [1.0, -p]]
    return [
        [r - p, -q * (r - p)],
        [r - q, -p * (r - q)],
    ]


# ---------------------------------------------------------------------------
# the two centre lemmas


@dataclass(frozen=True)
class CenterLemmaReport:
    """Numerical check of the centre and ratio lemmas on three geodesics."""

    x: tuple[float, float, float]
    y: tuple[float, float, float]
    ratio_lhs: float
    ratio_rhs: float
    ratio_residual: float
    center_residuals: tuple[float, float, float]
    orthogonality_residuals: tuple[float, float, float]
    ordering_ok: bool
    passed: bool


def _pair_center(a: float, b: float, c: float, d: float) -> float:
    """Centre of the common perpendicular of semicircles (a,b), (c,d),
    degenerating to the shared endpoint when b == c."""
    den = c + d - a - b
    if den == 0.0:
        raise DegenerateConfigurationError("pair of geodesics with equal half-sums")
    return (c * d - a * b) / den


def verify_center_lemmas(
    g1: Geodesic, g2: Geodesic, g3: Geodesic, tol: float = 1e-9
) -> CenterLemmaReport:
    """Check the centre lemma and the ratio lemma on three semicircles.

    The three geodesics must be semicircles that are pairwise disjoint or
    asymptotic, with none separating the others (their endpoint intervals
    are pairwise disjoint up to touching).
    """
    gs = [g1, g2, g3]
    for g in gs:
        if not isinstance(g, Semicircle):
            raise InvalidInputError("centre lemmas are about semicircular geodesics")
    gs.sort(key=lambda g: g.center)
    ends = [g.endpoints() for g in gs]
    a, b = ends[0]
    c, d = ends[1]
    e, f = ends[2]
    if not (b <= c and d <= e):
        raise InvalidInputError("geodesics must be pairwise disjoint and unnested")

    x = ((a + b) / 2.0, (c + d) / 2.0, (e + f) / 2.0)
    # y_i is the centre of the common perpendicular of the pair skipping
    # geodesic i (or their shared endpoint when asymptotic).
    y1 = _pair_center(c, d, e, f)
    y2 = _pair_center(a, b, e, f)
    y3 = _pair_center(a, b, c, d)
    y = (y1, y2, y3)

    center_res = []
    orth_res = []
    pairs = [((c, d), (e, f), y1), ((a, b), (e, f), y2), ((a, b), (c, d), y3)]
    for (p1, q1), (p2, q2), y_val in pairs:
        ga = geodesic_from_endpoints(p1, q1)
        gb = geodesic_from_endpoints(p2, q2)
        if q1 == p2:  # asymptotic pair: perpendicular degenerates to the point
            center_res.append(0.0)
            orth_res.append(0.0)
            continue
        perp = common_perpendicular(ga, gb)
        assert isinstance(perp, Semicircle)
        center_res.append(abs(perp.center - y_val))
        sa = abs(min_inner(pole(perp), pole(ga)))
        sb = abs(min_inner(pole(perp), pole(gb)))
        scale_a = pole(perp).euclidean_norm() * pole(ga).euclidean_norm()
        scale_b = pole(perp).euclidean_norm() * pole(gb).euclidean_norm()
        orth_res.append(max(sa / scale_a, sb / scale_b))

    lhs = (x[0] - x[1]) / (x[1] - x[2])
    rhs = (y1 - y2) / (y2 - y3)
    residual = abs(lhs - rhs)
    ordering_ok = y3 < y2 < y1
    scale = max(1.0, abs(f - a))
    passed = (
        residual <= tol * max(1.0, abs(lhs))
        and ordering_ok
        and all(r <= tol * scale for r in center_res)
        and all(r <= tol for r in orth_res)
    )
    return CenterLemmaReport(
        x=x,
        y=y,
        ratio_lhs=lhs,
        ratio_rhs=rhs,
        ratio_residual=residual,
        center_residuals=tuple(center_res),
        orthogonality_residuals=tuple(orth_res),
        ordering_ok=ordering_ok,
        passed=passed,
    )
