"""Killing fields of the hyperbolic plane in three equivalent pictures.

A field is stored by its boundary polynomial P(z) = a z^2 + b z + c, the
restriction of the holomorphic vector field to the real line. The matrix
picture is M = [[b/2, c], [-a, -b/2]] with flow g_t = exp(t M) acting by
Mobius maps, and the Minkowski picture is ((c-a)/2, b/2, (c+a)/2) under the
isomorphism of the lorentz module. With these scalings together,
disc(P) = b^2 - 4ac equals 4 <v, v> exactly, the translation speed of a
hyperbolic field is sqrt(disc), and horoball velocities are literal
derivatives of the exp(t M) flow, so finite differences of the flow match
the analytic formulas with no stray constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .decorations import Horoball
from .errors import InvalidInputError
from .lorentz import MinVector, minvector_to_sl2, sl2_to_minvector
from .models import (
    INF,
    Geodesic,
    Semicircle,
    UhpPoint,
    Vertical,
    perpendicular_through,
    point_on_geodesic,
)

Matrix = list[list[float]]


@dataclass(frozen=True)
class KillingField:
    """Killing field with boundary polynomial a z^2 + b z + c."""

    a: float
    b: float
    c: float

    def __add__(self, other: "KillingField") -> "KillingField":
        return KillingField(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "KillingField") -> "KillingField":
        return KillingField(self.a - other.a, self.b - other.b, self.c - other.c)

    def __mul__(self, t: float) -> "KillingField":
        return KillingField(self.a * t, self.b * t, self.c * t)

    __rmul__ = __mul__

    def __neg__(self) -> "KillingField":
        return KillingField(-self.a, -self.b, -self.c)

    def __call__(self, z):
        """Value of the holomorphic extension at z (complex or real)."""
        return (self.a * z + self.b) * z + self.c

    def coeff_scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c))


ZERO = KillingField(0.0, 0.0, 0.0)


def to_matrix(k: KillingField) -> Matrix:
    return [[k.b / 2.0, k.c], [-k.a, -k.b / 2.0]]


def from_matrix(m) -> KillingField:
    a, b = float(m[0][0]), float(m[0][1])
    c, d = float(m[1][0]), float(m[1][1])
    if abs(a + d) > 1e-9 * max(1.0, abs(a), abs(b), abs(c), abs(d)):
        raise InvalidInputError("Killing field matrix must be traceless")
    return KillingField(-c, a - d, b)


def to_minvector(k: KillingField) -> MinVector:
    return MinVector((k.c - k.a) / 2.0, k.b / 2.0, (k.c + k.a) / 2.0)


def from_minvector(v: MinVector) -> KillingField:
    return KillingField(v.z - v.x, 2.0 * v.y, v.z + v.x)


def disc(k: KillingField) -> float:
    """Discriminant of the boundary polynomial; 4 <v,v> in Minkowski terms."""
    return k.b * k.b - 4.0 * k.a * k.c


def character(k: KillingField, tol: float = 1e-9) -> str:
    """"hyperbolic", "parabolic" or "elliptic" by the sign of disc."""
    scale = k.coeff_scale()
    if scale == 0.0:
        raise InvalidInputError("zero field has no character")
    d = disc(k)
    if abs(d) <= tol * scale * scale:
        return "parabolic"
    return "hyperbolic" if d > 0 else "elliptic"


def translation_speed(k: KillingField) -> float:
    d = disc(k)
    if d <= 0:
        raise InvalidInputError("translation speed needs a hyperbolic field")
    return math.sqrt(d)


def norm_at(k: KillingField, p: UhpPoint) -> float:
    """Hyperbolic norm |P(z)| / Im z of the field at an interior point."""
    return abs(k(p.as_complex())) / p.im


def boundary_velocity(k: KillingField, x: float) -> float:
    """Velocity of a boundary point under the flow.

    At infinity the velocity is reported in the chart w = -1/z, where it
    equals the leading coefficient a.
    """
    if x == INF:
        return k.a
    return k(x)


def fixed_points(k: KillingField, tol: float = 1e-12) -> tuple[float, ...]:
    """Boundary fixed points (roots of P, with infinity when deg < 2)."""
    scale = k.coeff_scale()
    if scale == 0.0:
        raise InvalidInputError("zero field fixes everything")
    if abs(k.a) <= tol * scale:
        if abs(k.b) <= tol * scale:
            return (INF,)
        return (-k.c / k.b, INF)
    d = disc(k)
    if d < 0:
        return ()
    if d == 0:
        return (-k.b / (2.0 * k.a),)
    r = math.sqrt(d)
    return ((-k.b - r) / (2.0 * k.a), (-k.b + r) / (2.0 * k.a))


def axis(k: KillingField) -> Geodesic:
    """Axis of a hyperbolic field, oriented data via repelling_fixed_point."""
    if character(k) != "hyperbolic":
        raise InvalidInputError("only hyperbolic fields have an axis")
    pts = fixed_points(k)
    if INF in pts:
        return Vertical(min(pts))
    return Semicircle((pts[0] + pts[1]) / 2.0, abs(pts[1] - pts[0]) / 2.0)


def repelling_fixed_point(k: KillingField) -> float:
    """Fixed point with P' > 0 (flow pushes away from it)."""
    if character(k) != "hyperbolic":
        raise InvalidInputError("only hyperbolic fields have a repelling point")
    pts = fixed_points(k)
    if INF in pts:
        u = min(pts)
        # P = b z + c with root u and the other fixed point at infinity;
        # u is repelling iff P'(u) = b > 0.
        return u if k.b > 0 else INF
    u1, u2 = pts
    return u1 if 2.0 * k.a * u1 + k.b > 0 else u2


def flow(k: KillingField, t: float) -> Matrix:
    """exp(t M) in closed form for the traceless 2x2 matrix M of the field."""
    m = to_matrix(k)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]  # equals -disc/4
    scale = max(abs(m[0][0]), abs(m[0][1]), abs(m[1][0]), abs(m[1][1]), 1e-300)
    if abs(det) <= 1e-14 * scale * scale:
        ch, sh = 1.0, t
    elif det < 0:
        mu = math.sqrt(-det)
        ch, sh = math.cosh(t * mu), math.sinh(t * mu) / mu
    else:
        om = math.sqrt(det)
        ch, sh = math.cos(t * om), math.sin(t * om) / om
    return [
        [ch + sh * m[0][0], sh * m[0][1]],
        [sh * m[1][0], ch + sh * m[1][1]],
    ]


def bracket(k1: KillingField, k2: KillingField) -> KillingField:
    """Lie bracket in the matrix picture."""
    m1, m2 = to_matrix(k1), to_matrix(k2)
    p = _matmul(m1, m2)
    q = _matmul(m2, m1)
    return from_matrix([[p[0][0] - q[0][0], p[0][1] - q[0][1]], [p[1][0] - q[1][0], p[1][1] - q[1][1]]])


def horoball_velocity(k: KillingField, h: Horoball) -> MinVector:
    """Derivative of the light vector of h along the flow of k.

    Computed as the bracket [M, V] in the matrix picture, which is the
    literal t-derivative of exp(tM) V exp(-tM) at t = 0. The result is
    Minkowski-orthogonal to the horoball vector (horoballs stay horoballs).
    """
    m = to_matrix(k)
    v = minvector_to_sl2(h.v)
    p = _matmul(m, v)
    q = _matmul(v, m)
    return sl2_to_minvector(
        [[p[0][0] - q[0][0], p[0][1] - q[0][1]], [p[1][0] - q[1][0], p[1][1] - q[1][1]]]
    )


def transport(k: KillingField, m) -> KillingField:
    """Push the field forward along the Mobius map of the matrix m."""
    a, b = float(m[0][0]), float(m[0][1])
    c, d = float(m[1][0]), float(m[1][1])
    det = a * d - b * c
    if det == 0.0:
        raise InvalidInputError("singular matrix cannot act")
    mk = to_matrix(k)
    inv = [[d / det, -b / det], [-c / det, a / det]]
    return from_matrix(_matmul(_matmul([[a, b], [c, d]], mk), inv))


def translate(k: KillingField, step: float) -> KillingField:
    """Transport along z -> z + step; the polynomial becomes P(z - step)."""
    return transport(k, [[1.0, step], [0.0, 1.0]])


def trace_pairing(k: KillingField, g) -> float:
    """tr(M g): first-order change of tr along exp(tM) g.

    Pairing with the cusp holonomy T = [[1,1],[0,1]] gives -a, so it
    vanishes exactly when the field is cusp-compatible (affine P).
    """
    m = to_matrix(k)
    return (
        m[0][0] * float(g[0][0])
        + m[0][1] * float(g[1][0])
        + m[1][0] * float(g[0][1])
        + m[1][1] * float(g[1][1])
    )


def perpendicular_hyperbolic(
    alpha: Geodesic, p: UhpPoint, speed: float, side: int
) -> KillingField:
    """Hyperbolic field whose axis runs through p orthogonally to alpha.

    ``side`` picks the direction of the field vector at p: +1 points along
    the outward normal of alpha at p (radially away from the center for a
    semicircle, toward +x for a vertical), -1 the other way.
    """
    if speed <= 0:
        raise InvalidInputError("speed must be positive")
    if side not in (-1, 1):
        raise InvalidInputError("side must be +1 or -1")
    if not point_on_geodesic(alpha, p):
        raise InvalidInputError("p must lie on alpha")
    ax = perpendicular_through(p, alpha)
    if isinstance(ax, Vertical):
        k = KillingField(0.0, speed, -speed * ax.foot)  # speed * (z - foot)
    else:
        # The axis passes through p, so its feet multiply to
        # t^2 - R^2 = 2 t p.re - |p|^2 exactly; building the coefficients
        # from these products keeps them accurate even when the axis is
        # nearly vertical and the feet themselves are huge.
        t, rr = ax.center, ax.radius
        amp = speed / (2.0 * rr)
        k = KillingField(
            amp, -2.0 * t * amp, amp * (2.0 * t * p.re - (p.re * p.re + p.im * p.im))
        )
    # Outward normal of alpha at p in Euclidean terms.
    if isinstance(alpha, Vertical):
        nx, ny = 1.0, 0.0
    else:
        nx, ny = (p.re - alpha.center) / alpha.radius, p.im / alpha.radius
    vel = k(p.as_complex())
    if (vel.real * nx + vel.imag * ny) * side < 0:
        k = -k
    return k


def parabolic_at(q: float, speed: float, direction: int = 1) -> KillingField:
    """Parabolic field fixing the boundary point q.

    ``speed`` is the field's norm on the horocycle of unit size at q
    (height 1 when q is infinity, Euclidean diameter 1 otherwise);
    ``direction`` +1 moves boundary points toward +x.
    """
    if speed <= 0:
        raise InvalidInputError("speed must be positive")
    if direction not in (-1, 1):
        raise InvalidInputError("direction must be +1 or -1")
    if q == INF:
        return KillingField(0.0, 0.0, direction * speed)
    return KillingField(direction * speed, -2.0 * direction * speed * q, direction * speed * q * q)


def _matmul(m1, m2):
    return [
        [
            m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0],
            m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1],
        ],
        [
            m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0],
            m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1],
        ],
    ]
