"""Decorating horoballs and the lambda-length calculus.

A horoball is stored as a future-pointing lightlike vector v; the affine
height function <., v> cuts the horoball out of the hyperboloid. The chart
to the upper half plane identifies the vector ((q^2-1)/s, -2q/s, (q^2+1)/s)
with the horoball of Euclidean diameter s based at the finite point q, and
(h, 0, h) with the one of height h based at infinity. Two horoballs are
tangent iff <v1, v2> = -2, and the length of the geodesic connection
between their horocycles is log(-<v1,v2>/2), negative when they overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError
from .lorentz import MinVector, causal_character, min_inner, sl2_conjugate
from .models import INF, UhpPoint


@dataclass(frozen=True)
class Horoball:
    """Horoball as a future-pointing lightlike vector."""

    v: MinVector

    def __post_init__(self):
        if causal_character(self.v) != "lightlike" or self.v.z <= 0:
            raise InvalidInputError("horoball vector must be lightlike and future pointing")


@dataclass(frozen=True)
class UhpHoroball:
    """Horoball in upper half plane terms.

    ``size`` is the Euclidean diameter for a finite base and the height of
    the bounding horizontal line when the base is infinity.
    """

    base: float
    size: float

    def __post_init__(self):
        if not (self.size > 0) or not math.isfinite(self.size):
            raise InvalidInputError("horoball size must be positive and finite")
        if self.base != INF and not math.isfinite(self.base):
            raise InvalidInputError(f"bad horoball base {self.base!r}")


def horoball_from_uhp(h: UhpHoroball) -> Horoball:
    """Light vector of a horoball given in upper half plane terms."""
    if h.base == INF:
        return Horoball(MinVector(h.size, 0.0, h.size))
    q, s = h.base, h.size
    return Horoball(MinVector((q * q - 1.0) / s, -2.0 * q / s, (q * q + 1.0) / s))


def horoball_to_uhp(h: Horoball, tol: float = 1e-12) -> UhpHoroball:
    """Inverse chart of horoball_from_uhp."""
    v = h.v
    if abs(v.x - v.z) <= tol * v.z:
        return UhpHoroball(INF, (v.x + v.z) / 2.0)
    lead = v.z - v.x
    if lead < 0:
        # z < x cannot happen for a future lightlike vector with finite base
        # unless the tolerance above misjudged; treat as at infinity.
        return UhpHoroball(INF, (v.x + v.z) / 2.0)
    return UhpHoroball(-v.y / lead, 2.0 / lead)


def transform(h: Horoball, m) -> Horoball:
    """Push a horoball forward along the isometry of a 2x2 matrix."""
    return Horoball(sl2_conjugate(m, h.v))


def connection_length(h1: Horoball, h2: Horoball) -> float:
    """Signed length of the geodesic arc between the two horocycles.

    Positive when the horoballs are disjoint, zero at tangency, negative
    when they overlap. The horoballs must have distinct base points.
    """
    pairing = -min_inner(h1.v, h2.v)
    if pairing <= 0:
        raise InvalidInputError("horoballs share their base point")
    return math.log(pairing / 2.0)


def lambda_length(h1: Horoball, h2: Horoball) -> float:
    """lambda = sqrt(-<v1, v2>) = sqrt(2 exp(connection length))."""
    pairing = -min_inner(h1.v, h2.v)
    if pairing <= 0:
        raise InvalidInputError("horoballs share their base point")
    return math.sqrt(pairing)


def disjoint(h1: Horoball, h2: Horoball, tol: float = 1e-12) -> bool:
    """Disjointness (tangency allowed) of two horoballs."""
    return -min_inner(h1.v, h2.v) >= 2.0 - tol


def signed_distance(h: UhpHoroball, p: UhpPoint) -> float:
    """Signed distance from p to the horocycle, positive away from the cusp."""
    if h.base == INF:
        return math.log(h.size / p.im)
    d2 = (p.re - h.base) ** 2 + p.im**2
    return math.log(d2 / (h.size * p.im))


@dataclass(frozen=True)
class DecorationVelocity:
    """First-order motion of a horoball in upper half plane terms."""

    base_dot: float
    size_dot: float


def chart_velocity(h: UhpHoroball, vdot: MinVector, tol: float = 1e-8) -> DecorationVelocity:
    """Convert a light-vector velocity into (base_dot, size_dot).

    For a horoball based at infinity the base must not move to first
    order (the light vector stays on the x = z locus); violating that is
    reported as invalid input because it means the caller forgot to gauge.
    """
    v = horoball_from_uhp(h).v
    scale = max(1.0, vdot.euclidean_norm(), v.euclidean_norm())
    if h.base == INF:
        if abs(vdot.y) > tol * scale or abs(vdot.z - vdot.x) > tol * scale:
            raise InvalidInputError("horoball at infinity acquired a moving base")
        return DecorationVelocity(0.0, (vdot.x + vdot.z) / 2.0)
    lead = v.z - v.x
    lead_dot = vdot.z - vdot.x
    # s = 2/(z-x), q = -y/(z-x)
    s_dot = -2.0 * lead_dot / lead**2
    q_dot = (-vdot.y * lead + v.y * lead_dot) / lead**2
    return DecorationVelocity(q_dot, s_dot)
