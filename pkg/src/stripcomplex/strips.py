"""Strip deformations along arcs of a polygon.

A strip template fixes, for every permitted arc, a geodesic realization,
a waist point on it, and a width scale.  Cutting the polygon along the
realized arc and gluing in a hyperbolic (or, at a decorated vertex,
parabolic) strip deforms the metric; the derivative of that operation at
width zero is a tangent vector to the deformation space.  This module
computes both the finite and the infinitesimal versions, the width and
length-derivative formulas that control them, and the linear-algebra
probes (basis determinants, codimension-1 kernels, codimension-2 link
angles, properness sweeps) used to verify the parametrisation statements
numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arccomplex import ArcClass, BarycentricPoint, enumerate_arcs, is_filling, is_simplex
from .decorations import chart_velocity, horoball_from_uhp, horoball_to_uhp, signed_distance, transform
from .errors import (
    DegenerateConfigurationError,
    InvalidInputError,
    RankDeficiencyError,
    UnsupportedOperationError,
    WrongCodimensionError,
)
from .killing import (
    KillingField,
    boundary_velocity,
    flow,
    horoball_velocity,
    norm_at,
    parabolic_at,
    perpendicular_hyperbolic,
    translate,
)
from .lorentz import MinVector
from .models import (
    INF,
    Geodesic,
    Semicircle,
    UhpPoint,
    Vertical,
    common_perpendicular,
    crossing_angle,
    distance,
    foot_of_boundary,
    geodesic_midpoint,
    geodesic_through_points,
    geodesics_intersection,
    mobius_apply,
    mobius_to_standard_triple,
    perpendicular_from_boundary,
    point_on_geodesic,
)
from .polygons import (
    Connection,
    PolygonMetric,
    TangentVector,
    _check_connection,
    connection_geodesic,
    enumerate_connections,
    is_decorated,
    is_punctured,
)

_GAUGE_COND_LIMIT = 1e12
_ZERO3 = MinVector(0.0, 0.0, 0.0)

TEMPLATE_MODES = ("intrinsic", "foot-of-infinity")


@dataclass(frozen=True)
class StripTemplate:
    """Waist and width conventions for realizing arcs.

    ``mode`` places the waist of a finite arc either at the hyperbolic
    midpoint of the realized segment ("intrinsic") or at the orthogonal
    projection of ``viewpoint`` onto it ("foot-of-infinity").  Maximal
    arcs of punctured kinds always project the cusp's lift, which sits at
    infinity in the normalized chart, so that the construction descends
    to the quotient.  ``widths`` is either the literal width scale w > 0
    shared by all arcs, or "normalized", which picks w per arc so that
    the widths measured at the points where the arc meets the boundary
    sum to 1.

    ``viewpoint`` is the boundary point projected in foot-of-infinity
    mode.  The default is the chart's point at infinity; moving it lets
    callers reproduce the same template in a chart where infinity is not
    a polygon vertex.
    """

    mode: str = "intrinsic"
    widths: float | str = "normalized"
    viewpoint: float = INF

    def __post_init__(self):
        if self.mode not in TEMPLATE_MODES:
            raise InvalidInputError(f"unknown template mode {self.mode!r}")
        if isinstance(self.widths, str):
            if self.widths != "normalized":
                raise InvalidInputError(f"unknown width rule {self.widths!r}")
        else:
            w = float(self.widths)
            if not (w >= 0.0) or math.isinf(w) or math.isnan(w):
                raise InvalidInputError("width scale must be a finite nonnegative number")
            object.__setattr__(self, "widths", w)


@dataclass(frozen=True)
class ArcRealization:
    """Geometric data of one realized arc.

    ``carrier`` holds the full geodesic; the segment runs from ``foot_a``
    to ``foot_b`` (both orthogonal feet on boundary carriers) for finite
    arcs, or from ``foot_a`` out to the ideal point ``vertex_end`` for
    edge-to-vertex arcs.  ``field`` is the strip Killing field already
    scaled by the template width and directed toward the side of the arc
    that moves.
    """

    arc: ArcClass
    carrier: Geodesic
    foot_a: UhpPoint
    foot_b: UhpPoint | None
    vertex_end: float | None
    waist: UhpPoint | float
    field: KillingField
    width: float
    parabolic: bool


# ---------------------------------------------------------------------------
# slot bookkeeping


def _edge_index_of_slot(kind: str, slot: int) -> int:
    if is_decorated(kind):
        return slot // 2
    return slot


def _vertex_cover_index_of_slot(slot: int) -> int:
    # odd slot 2t+1 sits at the vertex between edges t and t+1
    return (slot + 1) // 2


def _slot_is_vertex(kind: str, slot: int) -> bool:
    return is_decorated(kind) and slot % 2 == 1


def _moving_side(m: PolygonMetric, a: ArcClass) -> tuple[dict[int, int], float]:
    """Vertex classes moved by the strip, with lift shifts and a side reference.

    The side cut off by the arc moves: classes at covers t in (a, b] for
    undecorated kinds, odd covers in [a, b] for decorated ones (endpoint
    vertices of an edge-to-vertex arc are included; the parabolic field
    fixes them, so they contribute zero velocity).  When that side
    contains the vertex pinned at infinity the complementary side moves
    instead; modulo the normalization gauge both choices give the same
    deformation, so the tie-break only makes outputs reproducible.  The
    reference is a finite boundary position strictly inside the moving
    side, used to orient the strip field.
    """
    n = m.n
    if is_decorated(m.kind):
        covers = [(t + 1) // 2 for t in range(a.a, a.b + 1) if t % 2 == 1]
        interior = [(t + 1) // 2 for t in range(a.a + 1, a.b) if t % 2 == 1]
    else:
        covers = list(range(a.a + 1, a.b + 1))
        interior = covers
    items: dict[int, int] = {}
    for t in covers:
        cls = t % n
        if cls in items:
            raise DegenerateConfigurationError("arc cuts off two lifts of one vertex class")
        items[cls] = t // n if is_punctured(m.kind) else 0
    if not is_punctured(m.kind) and 0 in items:
        items = {j: 0 for j in range(n) if j not in items}
        for j in sorted(items):
            return items, m.vertex(j)
        raise DegenerateConfigurationError("no finite vertex on the moving side")
    for t in interior:
        pos = m.lifted_vertex(t) if is_punctured(m.kind) else m.vertex(t % n)
        if pos != INF:
            return items, pos
    raise DegenerateConfigurationError("no finite vertex on the moving side")


def _side_toward(carrier: Geodesic, ref: float) -> int:
    """+1 when ref lies on the outward side of the carrier, else -1."""
    if ref == INF:
        raise DegenerateConfigurationError("side reference at infinity")
    if isinstance(carrier, Vertical):
        return 1 if ref > carrier.foot else -1
    return 1 if abs(ref - carrier.center) > carrier.radius else -1


def _normal_toward(carrier: Geodesic, p: UhpPoint, ref: float) -> complex:
    """Euclidean unit normal of the carrier at p pointing toward ref's side."""
    side = _side_toward(carrier, ref)
    if isinstance(carrier, Vertical):
        return complex(side, 0.0)
    nx = (p.re - carrier.center) / carrier.radius
    ny = p.im / carrier.radius
    return complex(side * nx, side * ny)


# ---------------------------------------------------------------------------
# realization


def _width_scale(t: StripTemplate, boundary_sum: float) -> float:
    if t.widths == "normalized":
        return 1.0 / boundary_sum
    return float(t.widths)


def _corner_vertex_cover(m: PolygonMetric, a: ArcClass) -> int | None:
    """Cover index of the vertex shared by the arc's two edges, if any.

    Edge covers e1 < e2 carry adjacent edges exactly when they are
    consecutive (shared vertex e2), or, on non-punctured kinds, when they
    wrap around (e2 - e1 = n - 1, shared vertex e1 mod n).  Undecorated
    arcs keep two vertices on each side, so their edges never touch.
    """
    if not is_decorated(m.kind):
        return None
    e1, e2 = a.a // 2, a.b // 2
    if e2 - e1 == 1:
        return e2
    if not is_punctured(m.kind) and e2 - e1 == m.n - 1:
        return e1 + m.n
    return None


def _horocycle_foot(base: float, size: float, g: Geodesic) -> UhpPoint:
    """Crossing of a horocycle with a geodesic ending at its base point."""
    if base == INF:
        if not isinstance(g, Vertical):
            raise DegenerateConfigurationError("geodesic does not end at the horoball base")
        return UhpPoint(g.foot, size)
    if isinstance(g, Vertical):
        return UhpPoint(base, size)
    r = g.radius
    e = base - g.center
    y = 4.0 * r * r * size / (4.0 * r * r + size * size)
    return UhpPoint(base - size * y / (2.0 * e), y)


def realize_arc(m: PolygonMetric, a: ArcClass, t: StripTemplate) -> ArcRealization:
    """Realize an arc class as a geodesic segment with its strip field.

    Edge-to-edge arcs run along the common perpendicular of their carrier
    geodesics.  When the two edges share an ideal vertex (a corner arc of
    a decorated kind) no common perpendicular exists and the arc is
    realized instead as the chord of that vertex's decoration horocycle,
    between its crossings with the two edges.
    """
    if not isinstance(a, ArcClass):
        raise InvalidInputError("expected an ArcClass")
    if a.kind != m.kind or a.n != m.n:
        raise InvalidInputError("arc does not belong to this metric's complex")
    _, ref = _moving_side(m, a)
    u_vert = _slot_is_vertex(m.kind, a.a)
    v_vert = _slot_is_vertex(m.kind, a.b)
    if u_vert or v_vert:
        return _realize_vertex_arc(m, a, t, ref, vertex_slot=a.a if u_vert else a.b)
    g1 = m.edge_geodesic(_edge_index_of_slot(m.kind, a.a))
    g2 = m.edge_geodesic(_edge_index_of_slot(m.kind, a.b))
    corner = _corner_vertex_cover(m, a)
    if corner is None:
        carrier = common_perpendicular(g1, g2)
        foot_a = geodesics_intersection(carrier, g1)
        foot_b = geodesics_intersection(carrier, g2)
    else:
        if not is_decorated(m.kind):
            raise DegenerateConfigurationError("adjacent edges on an undecorated kind")
        cls = corner % m.n
        shift = corner // m.n if is_punctured(m.kind) else 0
        ball = m.lifted_decoration(cls, shift)
        foot_a = _horocycle_foot(ball.base, ball.size, g1)
        foot_b = _horocycle_foot(ball.base, ball.size, g2)
        carrier = geodesic_through_points(foot_a, foot_b)
    if foot_a is None or foot_b is None:
        raise DegenerateConfigurationError("perpendicular does not meet its boundary carriers")
    if is_punctured(m.kind) and a.is_maximal:
        waist = foot_of_boundary(INF, carrier)
    elif t.mode == "foot-of-infinity":
        waist = foot_of_boundary(t.viewpoint, carrier)
    else:
        waist = geodesic_midpoint(carrier, foot_a, foot_b)
    boundary_sum = math.cosh(distance(foot_a, waist)) + math.cosh(distance(foot_b, waist))
    w = _width_scale(t, boundary_sum)
    if w == 0.0:
        field = KillingField(0.0, 0.0, 0.0)
    else:
        field = perpendicular_hyperbolic(carrier, waist, w, _side_toward(carrier, ref))
    return ArcRealization(
        arc=a,
        carrier=carrier,
        foot_a=foot_a,
        foot_b=foot_b,
        vertex_end=None,
        waist=waist,
        field=field,
        width=w,
        parabolic=False,
    )


def _realize_vertex_arc(
    m: PolygonMetric, a: ArcClass, t: StripTemplate, ref: float, vertex_slot: int
) -> ArcRealization:
    edge_slot = a.b if vertex_slot == a.a else a.a
    g = m.edge_geodesic(_edge_index_of_slot(m.kind, edge_slot))
    cover = _vertex_cover_index_of_slot(vertex_slot)
    if is_punctured(m.kind):
        q = m.lifted_vertex(cover)
        cls, shift = cover % m.n, cover // m.n
    else:
        cls, shift = cover % m.n, 0
        q = m.vertex(cls)
    carrier = perpendicular_from_boundary(q, g)
    foot = geodesics_intersection(carrier, g)
    if foot is None:
        raise DegenerateConfigurationError("perpendicular does not meet the edge carrier")
    size = m.sizes[cls]
    level = signed_distance(m.lifted_decoration(cls, shift), foot)
    w = _width_scale(t, math.exp(level))
    if w == 0.0:
        field = KillingField(0.0, 0.0, 0.0)
    else:
        # normalize so the pointwise width on the decoration horocycle is w
        speed = w * size if q == INF else w / size
        field = parabolic_at(q, speed, 1)
        vel = field(foot.as_complex())
        normal = _normal_toward(carrier, foot, ref)
        if vel.real * normal.real + vel.imag * normal.imag < 0.0:
            field = parabolic_at(q, speed, -1)
    return ArcRealization(
        arc=a,
        carrier=carrier,
        foot_a=foot,
        foot_b=None,
        vertex_end=q,
        waist=q,
        field=field,
        width=w,
        parabolic=True,
    )


# ---------------------------------------------------------------------------
# points on the realized segment


def _carrier_coord(g: Geodesic, p: UhpPoint) -> float:
    if isinstance(g, Vertical):
        return math.log(p.im)
    return math.atan2(p.im, p.re - g.center)


def _boundary_coord(g: Geodesic, b: float) -> float:
    if isinstance(g, Vertical):
        return math.inf if b == INF else -math.inf
    return 0.0 if b > g.center else math.pi


def _segment_coord_range(r: ArcRealization) -> tuple[float, float]:
    lo = _carrier_coord(r.carrier, r.foot_a)
    if r.foot_b is not None:
        hi = _carrier_coord(r.carrier, r.foot_b)
    else:
        hi = _boundary_coord(r.carrier, r.vertex_end)
    return (lo, hi) if lo <= hi else (hi, lo)


def _shift_carrier(g: Geodesic, k: float) -> Geodesic:
    if k == 0:
        return g
    if isinstance(g, Vertical):
        return Vertical(g.foot + k)
    return Semicircle(g.center + k, g.radius)


def strip_width_at(r: ArcRealization, p: UhpPoint) -> float:
    """Width of the strip at a point of the realized arc.

    Equals w cosh d(p, waist) on hyperbolic arcs and w e^L on parabolic
    ones, with L the signed distance from the vertex decoration; both are
    just the pointwise norm of the strip field.
    """
    if not point_on_geodesic(r.carrier, p):
        raise InvalidInputError("point does not lie on the realized arc")
    lo, hi = _segment_coord_range(r)
    c = _carrier_coord(r.carrier, p)
    tol = 1e-9 * max(1.0, abs(lo) if math.isfinite(lo) else 1.0, abs(hi) if math.isfinite(hi) else 1.0)
    if c < lo - tol or c > hi + tol:
        raise InvalidInputError("point lies on the carrier but outside the segment")
    return norm_at(r.field, p)


# ---------------------------------------------------------------------------
# infinitesimal strips


def _gauge_field(m: PolygonMetric, raw_at_pins: tuple[float, float, float]) -> KillingField:
    """Global field matching the raw velocities at the normalization pins.

    Non-punctured kinds pin infinity (chart coefficient a), 0 and 1;
    punctured kinds pin the first vertex only, and cusp equivariance
    forces the quadratic and linear coefficients to vanish.
    """
    if is_punctured(m.kind):
        mat = np.eye(3)
        rhs = np.array([0.0, 0.0, raw_at_pins[0]])
    else:
        mat = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]])
        rhs = np.array(raw_at_pins)
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > _GAUGE_COND_LIMIT:
        raise DegenerateConfigurationError(
            "gauge system is numerically singular", condition_number=float(cond)
        )
    qa, qb, qc = np.linalg.solve(mat, rhs)
    return KillingField(float(qa), float(qb), float(qc))


def infinitesimal_strip(m: PolygonMetric, a: ArcClass, t: StripTemplate) -> TangentVector:
    """Derivative of the strip deformation along one arc, in slice coordinates.

    Builds the two-tile map (zero on the side of the cusp or of the
    vertex at infinity, the strip field on the other), reads off raw
    vertex and horoball velocities, and subtracts the unique global
    Killing field that restores the normalization.
    """
    r = realize_arc(m, a, t)
    items, _ = _moving_side(m, a)
    vel: dict[int, float] = {}
    for cls, shift in items.items():
        pos = m.lifted_vertex(cls + shift * m.n) if is_punctured(m.kind) else m.vertex(cls)
        vel[cls] = boundary_velocity(r.field, pos)
    if is_punctured(m.kind):
        pins = (vel.get(0, 0.0), 0.0, 0.0)
    else:
        at_inf = r.field.a if 0 in items else 0.0
        pins = (at_inf, vel.get(1, 0.0), vel.get(2, 0.0))
    q = _gauge_field(m, pins)
    dots = [0.0] * m.n
    for j in m.free_vertex_indices():
        dots[j] = vel.get(j, 0.0) - boundary_velocity(q, m.vertex(j))
    size_dots = None
    if is_decorated(m.kind):
        size_dots = []
        for j in range(m.n):
            shift = items.get(j, 0)
            ball = m.lifted_decoration(j, shift)
            vec = horoball_from_uhp(ball)
            moved = horoball_velocity(r.field, vec) if j in items else _ZERO3
            rate = chart_velocity(ball, moved - horoball_velocity(q, vec))
            size_dots.append(rate.size_dot)
    return TangentVector(m, tuple(dots), None if size_dots is None else tuple(size_dots))


def finite_strip(m: PolygonMetric, a: ArcClass, t: StripTemplate, width: float) -> PolygonMetric:
    """Metric obtained by gluing a strip of the given flow time along an arc.

    Only the side of the arc away from the vertex pinned at infinity
    moves; the result is renormalized back to the standard slice.  Signed
    widths are accepted so finite differences can straddle zero.
    Punctured kinds are rejected: a finite strip breaks the parabolic
    holonomy at second order, leaving the deformation space.
    """
    if is_punctured(m.kind):
        raise UnsupportedOperationError("finite strips are defined for non-punctured kinds only")
    width = float(width)
    if width == 0.0:
        return m
    r = realize_arc(m, a, t)
    items, _ = _moving_side(m, a)
    g = flow(r.field, width)
    moved_vertices = [
        mobius_apply(g, m.vertex(j)) if j in items else m.vertex(j) for j in range(m.n)
    ]
    h = mobius_to_standard_triple(moved_vertices[0], moved_vertices[1], moved_vertices[2])
    new_vertices = [mobius_apply(h, v) for v in moved_vertices]
    new_sizes = None
    if is_decorated(m.kind):
        new_sizes = []
        for j in range(m.n):
            ball = m.decoration_vector(j)
            if j in items:
                ball = transform(ball, g)
            ball = transform(ball, h)
            new_sizes.append(horoball_to_uhp(ball).size)
    from .polygons import make_metric

    return make_metric(m.kind, m.n, new_vertices[3:], new_sizes)


# ---------------------------------------------------------------------------
# length derivatives


def _endpoint_light_data(m: PolygonMetric, idx: int, winding: int, v: TangentVector):
    """Light vector of a (possibly auxiliary) decoration and its derivative."""
    base = m.vertex(idx)
    size = m.sizes[idx] if m.sizes is not None else 1.0
    qdot = v.vertex_dots[idx]
    sdot = v.size_dots[idx] if v.size_dots is not None else 0.0
    if base == INF:
        u = MinVector(size, 0.0, size)
        du = MinVector(sdot, 0.0, sdot)
        return u, du
    qq = base + winding
    u = MinVector((qq * qq - 1.0) / size, -2.0 * qq / size, (qq * qq + 1.0) / size)
    du = MinVector(2.0 * qq / size, -2.0 / size, 2.0 * qq / size) * qdot + u * (-sdot / size)
    return u, du


def reported_length(m: PolygonMetric, c: Connection) -> float:
    """Truncated length of a connection, with the reporting convention.

    Decorated kinds measure between the actual decoration horoballs;
    undecorated kinds fall back to the fixed unit-size horoballs that
    length_derivative differentiates, so finite differences of this
    quantity converge to the analytic derivative for every kind.
    """
    from .lorentz import min_inner

    _check_connection(m, c, None)
    zero = TangentVector(
        m, (0.0,) * m.n, None if m.sizes is None else (0.0,) * m.n
    )
    u1, _ = _endpoint_light_data(m, c.i, 0, zero)
    u2, _ = _endpoint_light_data(m, c.j, c.winding, zero)
    return math.log(-min_inner(u1, u2) / 2.0)


def length_derivative(m: PolygonMetric, v: TangentVector, c: Connection) -> float:
    """Derivative of a connection's truncated length along a tangent vector.

    Lengths are measured between the decoration horoballs; undecorated
    kinds use fixed unit-size horoballs at every vertex, which only shifts
    lengths by a constant and so does not change derivatives.
    """
    if v.metric != m:
        raise InvalidInputError("tangent vector belongs to a different metric")
    _check_connection(m, c, None)
    from .lorentz import min_inner

    u1, du1 = _endpoint_light_data(m, c.i, 0, v)
    u2, du2 = _endpoint_light_data(m, c.j, c.winding, v)
    inner = min_inner(u1, u2)
    return (min_inner(du1, u2) + min_inner(u1, du2)) / inner


def _arc_crossings(m, r: ArcRealization, conn: Geodesic, span: tuple[float, float]):
    """Crossings of a connection geodesic with lifts of one realized arc.

    Yields (point, carrier lift) pairs; for punctured kinds every integer
    translate of the arc whose shadow can reach the connection's span is
    tested, for the others only the arc itself.
    """
    lo, hi = _segment_coord_range(r)
    if is_punctured(m.kind):
        if isinstance(r.carrier, Vertical):
            c_lo = c_hi = r.carrier.foot
        else:
            c_lo, c_hi = r.carrier.center - r.carrier.radius, r.carrier.center + r.carrier.radius
        first = math.floor(span[0] - c_hi) - 1
        last = math.ceil(span[1] - c_lo) + 1
        shifts = range(int(first), int(last) + 1)
    else:
        shifts = (0,)
    for k in shifts:
        carrier = _shift_carrier(r.carrier, k)
        p = geodesics_intersection(conn, carrier)
        if p is None:
            continue
        coord = _carrier_coord(carrier, p)
        tol = 1e-9 * max(1.0, abs(coord))
        if coord < lo - tol or (math.isfinite(hi) and coord > hi + tol):
            continue
        yield p, carrier, k


def _connection_span(m: PolygonMetric, c: Connection) -> tuple[float, float]:
    p1 = m.vertex(c.i)
    p2 = m.vertex(c.j) + c.winding
    return (p1, p2) if p1 <= p2 else (p2, p1)


def length_derivative_formula(
    m: PolygonMetric, x: BarycentricPoint, c: Connection, t: StripTemplate | None = None
) -> float:
    """Crossing sum for the length derivative of a connection.

    Adds the strip width times the sine of the crossing angle over every
    point where the connection meets the support of x; an empty sum is 0.
    """
    if t is None:
        t = StripTemplate()
    _check_connection(m, c, None)
    conn = connection_geodesic(m, c)
    span = _connection_span(m, c) if is_punctured(m.kind) else (0.0, 0.0)
    total = 0.0
    for arc, weight in zip(x.arcs, x.weights):
        r = realize_arc(m, arc, t)
        for p, carrier, k in _arc_crossings(m, r, conn, span):
            field = translate(r.field, k) if k else r.field
            angle = crossing_angle(conn, carrier, p)
            total += weight * norm_at(field, p) * math.sin(angle)
    return total


# ---------------------------------------------------------------------------
# the strip map and its linear algebra


def strip_map(
    m: PolygonMetric, x: BarycentricPoint, t: StripTemplate | None = None, pruned: bool = True
) -> TangentVector:
    """Weighted sum of infinitesimal strips over a barycentric point."""
    if t is None:
        t = StripTemplate()
    if pruned and is_decorated(m.kind) and not is_filling(x.arcs, m.kind, m.n):
        raise InvalidInputError("support does not fill; point lies outside the pruned complex")
    total = None
    for arc, weight in zip(x.arcs, x.weights):
        piece = infinitesimal_strip(m, arc, t) * weight
        total = piece if total is None else total + piece
    return total


def _coords_matrix(m: PolygonMetric, arcs, t: StripTemplate) -> np.ndarray:
    cols = [infinitesimal_strip(m, a, t).coords for a in arcs]
    return np.array(cols, dtype=float).T


@dataclass(frozen=True)
class BasisReport:
    arcs: tuple
    matrix: np.ndarray
    determinant: float
    normalized_determinant: float


def basis_matrix(m: PolygonMetric, triangulation, t: StripTemplate | None = None) -> BasisReport:
    """Matrix of strip vectors of a top simplex, with determinants.

    The normalized determinant rescales every column to unit length
    first, giving a scale-invariant measure of how far the vectors are
    from degenerating.
    """
    if t is None:
        t = StripTemplate()
    arcs = tuple(sorted(set(triangulation)))
    if len(arcs) != len(tuple(triangulation)):
        raise InvalidInputError("triangulation contains repeated arcs")
    if not is_simplex(arcs):
        raise InvalidInputError("triangulation is not a simplex")
    if len(arcs) != m.N0:
        raise InvalidInputError(
            f"expected a top simplex of size {m.N0}, got {len(arcs)} arcs"
        )
    mat = _coords_matrix(m, arcs, t)
    det = float(np.linalg.det(mat))
    norms = np.linalg.norm(mat, axis=0)
    if np.any(norms == 0.0):
        normalized = 0.0
    else:
        normalized = float(np.linalg.det(mat / norms))
    return BasisReport(arcs=arcs, matrix=mat, determinant=det, normalized_determinant=normalized)


@dataclass(frozen=True)
class KernelReport:
    arcs: tuple
    coefficients: tuple
    residual: float
    singular_values: tuple

    @property
    def sign_pattern_ok(self) -> bool:
        c = self.coefficients
        scale = max(abs(v) for v in c)
        return c[0] > 0.0 and c[1] > 0.0 and all(v <= 1e-9 * scale for v in c[2:])


def codim1_kernel(
    m: PolygonMetric, s1, s2, t: StripTemplate | None = None
) -> KernelReport:
    """Kernel of the strip vectors of two adjacent top simplices.

    The union of two tops sharing a codimension-1 face carries N0+1 strip
    vectors in an N0-dimensional space; the kernel of that matrix is the
    unique linear relation between them.  Coefficients are ordered with
    the two exclusive arcs first, then the shared ones sorted, and scaled
    to unit norm with the first coefficient positive.
    """
    if t is None:
        t = StripTemplate()
    set1, set2 = set(s1), set(s2)
    if len(set1) != m.N0 or len(set2) != m.N0:
        raise WrongCodimensionError("both simplices must be top-dimensional")
    if not is_simplex(sorted(set1)) or not is_simplex(sorted(set2)):
        raise InvalidInputError("inputs are not simplices")
    shared = set1 & set2
    if len(shared) != m.N0 - 1:
        raise WrongCodimensionError("simplices do not share a codimension-1 face")
    only1 = (set1 - shared).pop()
    only2 = (set2 - shared).pop()
    arcs = (only1, only2) + tuple(sorted(shared))
    mat = _coords_matrix(m, arcs, t)
    u, sv, vt = np.linalg.svd(mat)
    if sv[0] == 0.0 or sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficiencyError("strip vectors drop rank; kernel is not one-dimensional")
    kern = vt[-1]
    if kern[0] < 0.0:
        kern = -kern
    kern = kern / np.linalg.norm(kern)
    residual = float(np.linalg.norm(mat @ kern))
    return KernelReport(
        arcs=arcs,
        coefficients=tuple(float(v) for v in kern),
        residual=residual,
        singular_values=tuple(float(s) for s in sv),
    )


@dataclass(frozen=True)
class ClosedFormCoefficients:
    """Tile coefficients of the crossing-pair relation, from eight endpoints."""

    a1: float
    a2: float
    a3: float
    a4: float
    x1: float
    x2: float
    y1: float
    y2: float
    y3: float
    y4: float

    @property
    def residuals(self) -> tuple:
        r1 = self.a1 - self.a2 + self.a3 - self.a4
        r2 = self.a1 * self.y1 - self.a2 * self.y2 + self.a3 * self.y3 - self.a4 * self.y4
        r3 = self.a1 * (self.x1 - self.y1) - self.a4 * (self.x1 - self.y4)
        r4 = self.a3 * (self.x2 - self.y3) - self.a4 * (self.x2 - self.y4)
        return (r1, r2, r3, r4)


def _pair_center(a: float, b: float, c: float, d: float) -> float:
    den = c + d - a - b
    if den == 0.0:
        raise DegenerateConfigurationError("perpendicular center degenerates")
    return (c * d - a * b) / den


def codim1_closed_form(
    a: float, b: float, c: float, d: float, e: float, f: float, g: float, h: float
) -> ClosedFormCoefficients:
    """Closed-form relation coefficients for two crossing arcs.

    The eight reals are the boundary endpoints of the four edge carriers
    involved, in the order a<b<=c<d<=e<f<=g<h; the two crossing arcs join
    the first carrier to the third and the second to the fourth.  The
    returned a1..a4 solve the four-equation linear system tying together
    the centers of the four side perpendiculars.
    """
    vals = (a, b, c, d, e, f, g, h)
    for lo, hi in zip(vals, vals[1:]):
        if not (lo <= hi):
            raise InvalidInputError("endpoints must be sorted")
    for i in (0, 2, 4, 6):
        if not (vals[i] < vals[i + 1]):
            raise InvalidInputError("carrier endpoints must be distinct")
    x1 = _pair_center(a, b, e, f)
    x2 = _pair_center(c, d, g, h)
    y1 = _pair_center(a, b, c, d)
    y2 = _pair_center(c, d, e, f)
    y3 = _pair_center(e, f, g, h)
    y4 = _pair_center(a, b, g, h)
    if x1 == y1 or x2 == y3:
        raise DegenerateConfigurationError("coefficient denominators vanish")
    a1 = (x1 - y4) / (x1 - y1)
    a2 = ((x1 - y4) * (x2 - y4) - (y4 - y1) * (y4 - y3)) / ((x1 - y1) * (x2 - y3))
    a3 = (x2 - y4) / (x2 - y3)
    a4 = 1.0
    return ClosedFormCoefficients(a1=a1, a2=a2, a3=a3, a4=a4, x1=x1, x2=x2, y1=y1, y2=y2, y3=y3, y4=y4)


@dataclass(frozen=True)
class LinkReport:
    cycle: tuple
    cycle_length: int
    angle_sum: float


def link_degree(m: PolygonMetric, s, t: StripTemplate | None = None) -> LinkReport:
    """Angle sum of the strip vectors around a codimension-2 simplex.

    The arcs compatible with s form a cycle; projecting their strip
    vectors to the plane complementary to the span of s's own vectors
    and accumulating consecutive angles measures the degree of the loop,
    with 2 pi meaning the link winds exactly once.
    """
    if t is None:
        t = StripTemplate()
    arcs = tuple(sorted(set(s)))
    if arcs and not is_simplex(arcs):
        raise InvalidInputError("s is not a simplex")
    if len(arcs) != m.N0 - 2:
        raise WrongCodimensionError(
            f"expected a codimension-2 simplex of size {m.N0 - 2}, got {len(arcs)}"
        )
    candidates = [
        g for g in enumerate_arcs(m.kind, m.n)
        if g not in arcs and is_simplex(arcs + (g,))
    ]
    adj = {g: [d for d in candidates if d != g and is_simplex((g, d))] for g in candidates}
    if len(candidates) < 3 or any(len(v) != 2 for v in adj.values()):
        raise InvalidInputError("link of the simplex is not a single cycle")
    cycle = [candidates[0]]
    prev = None
    while True:
        nxt = [g for g in adj[cycle[-1]] if g != prev]
        prev = cycle[-1]
        cycle.append(nxt[0])
        if cycle[-1] == cycle[0]:
            cycle.pop()
            break
    if len(cycle) != len(candidates):
        raise InvalidInputError("link of the simplex is not a single cycle")
    if arcs:
        base = _coords_matrix(m, arcs, t)
        qmat, rmat = np.linalg.qr(base, mode="complete")
        diag = np.abs(np.diag(rmat[: len(arcs), : len(arcs)]))
        if np.any(diag <= 1e-12):
            raise DegenerateConfigurationError("strip vectors of s are dependent")
        plane = qmat[:, len(arcs):]
    else:
        plane = np.eye(m.N0)
    vecs = []
    for g in cycle:
        v = plane.T @ np.array(infinitesimal_strip(m, g, t).coords)
        norm = np.linalg.norm(v)
        if norm <= 1e-13:
            raise DegenerateConfigurationError("projected strip vector vanishes")
        vecs.append(v / norm)
    total = 0.0
    for i, v in enumerate(vecs):
        w = vecs[(i + 1) % len(vecs)]
        total += math.acos(min(1.0, max(-1.0, float(np.dot(v, w)))))
    return LinkReport(cycle=tuple(cycle), cycle_length=len(cycle), angle_sum=total)


# ---------------------------------------------------------------------------
# properness probe


@dataclass(frozen=True)
class ProbeReport:
    epsilons: tuple
    blocked_minima: tuple
    kept_values: tuple
    image_norms: tuple
    blocked_count: int
    kept_connection: Connection

    @property
    def degenerates(self) -> bool:
        """Blocked derivatives collapse while the image keeps its size."""
        return (
            self.blocked_minima[-1] < 1e-3 * self.blocked_minima[0]
            and min(self.image_norms) >= 0.1 * self.image_norms[0]
        )

    @property
    def keeps_crossing(self) -> bool:
        """The connection crossing tau stays uniformly lengthened."""
        return min(self.kept_values) >= 0.1 * self.kept_values[0]


def properness_probe(
    m: PolygonMetric,
    sigma,
    tau,
    t: StripTemplate | None = None,
    kmax: int = 3,
    steps: int = 13,
) -> ProbeReport:
    """Push a barycentric point toward a non-filling face and watch dl.

    Weights concentrate on tau along a geometric sequence; connections
    crossing sigma but missing tau stop being lengthened (their minimum
    derivative collapses), while any connection crossing tau keeps a
    derivative bounded away from zero.  That contrast is the numerical
    shadow of properness.
    """
    if t is None:
        t = StripTemplate()
    sigma = tuple(sorted(set(sigma)))
    tau_set = set(tau)
    if not tau_set or not tau_set < set(sigma):
        raise InvalidInputError("tau must be a nonempty proper subset of sigma")
    if len(sigma) != m.N0 or not is_simplex(sigma):
        raise InvalidInputError("sigma must be a top simplex")
    if not is_filling(sigma, m.kind, m.n):
        raise InvalidInputError("sigma does not fill")
    if is_filling(sorted(tau_set), m.kind, m.n):
        raise InvalidInputError("tau fills; nothing degenerates along it")
    crossings: dict[ArcClass, set[int]] = {}
    conns = enumerate_connections(m, kmax)
    for arc in sigma:
        r = realize_arc(m, arc, t)
        hit = set()
        for idx, c in enumerate(conns):
            conn_geo = connection_geodesic(m, c)
            span = _connection_span(m, c) if is_punctured(m.kind) else (0.0, 0.0)
            if any(True for _ in _arc_crossings(m, r, conn_geo, span)):
                hit.add(idx)
        crossings[arc] = hit
    tau_hits = set().union(*(crossings[a] for a in tau_set))
    sigma_hits = set().union(*(crossings[a] for a in sigma))
    blocked = sorted(sigma_hits - tau_hits)
    kept = sorted(tau_hits)
    if not blocked:
        raise InvalidInputError("no connection is blocked by tau")
    if not kept:
        raise InvalidInputError("no connection crosses tau")
    gamma = conns[kept[0]]
    rest = [a for a in sigma if a not in tau_set]
    eps_list, blocked_min, kept_vals, norms = [], [], [], []
    for k in range(steps):
        eps = 0.5 * 2.0 ** (-k)
        weights = []
        for a in sigma:
            if a in tau_set:
                weights.append((1.0 - eps) / len(tau_set))
            else:
                weights.append(eps / len(rest))
        x = BarycentricPoint(sigma, tuple(weights))
        v = strip_map(m, x, t)
        blocked_min.append(min(length_derivative(m, v, conns[i]) for i in blocked))
        kept_vals.append(length_derivative(m, v, gamma))
        norms.append(float(np.linalg.norm(v.coords)))
        eps_list.append(eps)
    return ProbeReport(
        epsilons=tuple(eps_list),
        blocked_minima=tuple(blocked_min),
        kept_values=tuple(kept_vals),
        image_norms=tuple(norms),
        blocked_count=len(blocked),
        kept_connection=gamma,
    )


# ---------------------------------------------------------------------------
# closed-form cross-check for ideal pentagons


@dataclass(frozen=True)
class PentagonMatchReport:
    arcs: tuple
    coefficients: tuple
    predicted: tuple
    mismatch: float
    endpoints: tuple


def pentagon_kernel_match(
    m: PolygonMetric, s1, s2, viewpoint: float | None = None
) -> PentagonMatchReport:
    """Compare a pentagon's numeric kernel with the closed-form relation.

    The closed form lives in a chart where no vertex sits at infinity, so
    the polygon is moved there by z -> -1/(z - viewpoint) to read off the
    eight boundary endpoints, while the kernel itself is computed in the
    normalized chart with the template projecting the same viewpoint.
    Both coefficient vectors are scaled to unit norm before comparing.
    """
    if m.kind != "ideal" or m.n != 5:
        raise InvalidInputError("the closed-form comparison is for ideal pentagons")
    if viewpoint is None:
        used = {slot for arc in set(s1) | set(s2) for slot in (arc.a, arc.b)}
        free_edges = sorted(set(range(m.n)) - used)
        if not free_edges:
            raise DegenerateConfigurationError("no edge is free of the arc pair")
        u = free_edges[0]
        vu, vn = m.vertex(u), m.vertex((u + 1) % m.n)
        if vu == INF:
            viewpoint = vn - 1.0
        elif vn == INF:
            viewpoint = vu + 1.0
        else:
            viewpoint = 0.5 * (vu + vn)
    if viewpoint == INF or any(viewpoint == m.vertex(i) for i in range(m.n)):
        raise InvalidInputError("viewpoint must be a boundary point away from the vertices")
    t = StripTemplate(mode="foot-of-infinity", widths=1.0, viewpoint=viewpoint)
    rep = codim1_kernel(m, s1, s2, t)

    def send(z: float) -> float:
        return 0.0 if z == INF else -1.0 / (z - viewpoint)

    def interval(edge: int) -> tuple[float, float]:
        lo, hi = send(m.vertex(edge)), send(m.vertex((edge + 1) % m.n))
        return (lo, hi) if lo <= hi else (hi, lo)

    edges = sorted({slot for arc in rep.arcs for slot in (arc.a, arc.b)}, key=lambda e: interval(e)[0])
    if len(edges) != 4:
        raise DegenerateConfigurationError("adjacent pair does not span four distinct edges")
    rank = {e: i for i, e in enumerate(edges)}
    flat = []
    for e in edges:
        flat.extend(interval(e))
    cf = codim1_closed_form(*flat)
    crossing_coeff = {
        frozenset((0, 2)): cf.a4 - cf.a1,
        frozenset((1, 3)): cf.a4 - cf.a3,
    }
    shared_coeff = {
        frozenset((0, 1)): cf.a1,
        frozenset((1, 2)): cf.a2,
        frozenset((2, 3)): cf.a3,
        frozenset((0, 3)): -cf.a4,
    }
    predicted = []
    for pos, arc in enumerate(rep.arcs):
        key = frozenset((rank[arc.a], rank[arc.b]))
        table = crossing_coeff if pos < 2 else shared_coeff
        if key not in table:
            raise DegenerateConfigurationError("arc endpoints do not fit the crossing pattern")
        predicted.append(table[key])
    pred = np.array(predicted)
    pred = pred / np.linalg.norm(pred)
    if pred[0] < 0.0:
        pred = -pred
    got = np.array(rep.coefficients)
    mismatch = float(np.max(np.abs(got - pred)))
    return PentagonMatchReport(
        arcs=rep.arcs,
        coefficients=rep.coefficients,
        predicted=tuple(float(v) for v in pred),
        mismatch=mismatch,
        endpoints=tuple(flat),
    )
