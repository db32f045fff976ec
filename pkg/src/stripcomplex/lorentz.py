"""Minkowski 3-space R^{2,1} and the projective disk model's duality.

The quadratic form is x^2 + y^2 - z^2. Spacelike rays are poles of
geodesics, lightlike rays are boundary points, timelike rays are interior
points of the hyperbolic plane sitting inside the projective plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError

#: Relative tolerance for deciding the causal character of a vector.
EPS_CLASS = 1e-9


@dataclass(frozen=True)
class MinVector:
    """A vector of R^{2,1} with the form x^2 + y^2 - z^2."""

    x: float
    y: float
    z: float

    def __add__(self, other: "MinVector") -> "MinVector":
        return MinVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "MinVector") -> "MinVector":
        return MinVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, t: float) -> "MinVector":
        return MinVector(self.x * t, self.y * t, self.z * t)

    __rmul__ = __mul__

    def __neg__(self) -> "MinVector":
        return MinVector(-self.x, -self.y, -self.z)

    def euclidean_norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)


def min_inner(u: MinVector, v: MinVector) -> float:
    """Minkowski pairing <u, v> = u.x v.x + u.y v.y - u.z v.z."""
    return u.x * v.x + u.y * v.y - u.z * v.z


def min_norm2(v: MinVector) -> float:
    """Minkowski square <v, v>."""
    return min_inner(v, v)


def min_cross(u: MinVector, v: MinVector) -> MinVector:
    """Minkowski cross product, the Lorentzian analogue of the wedge.

    It is Minkowski-orthogonal to both factors and satisfies the Lagrange
    identity <uxv, uxv> = <u,v>^2 - <u,u><v,v>.
    """
    return MinVector(
        -u.y * v.z + u.z * v.y,
        -u.z * v.x + u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def minvector_to_sl2(v: MinVector) -> list[list[float]]:
    """The equivariant isomorphism R^{2,1} -> sl2(R).

    (x, y, z) goes to [[y, x+z], [x-z, -y]]; the Minkowski form becomes the
    determinant up to sign (det = -<v,v>), and the linear isometry action
    becomes conjugation.
    """
    return [[v.y, v.x + v.z], [v.x - v.z, -v.y]]


def sl2_to_minvector(m) -> MinVector:
    """Inverse of minvector_to_sl2; symmetrizes the diagonal."""
    a, b = float(m[0][0]), float(m[0][1])
    c, d = float(m[1][0]), float(m[1][1])
    y = (a - d) / 2.0
    return MinVector((b + c) / 2.0, y, (b - c) / 2.0)


def sl2_conjugate(m, v: MinVector) -> MinVector:
    """Isometry action of an invertible 2x2 matrix on R^{2,1}.

    Computed as conjugation in the matrix picture; scaling m does not
    change the result, so m need not be unimodular.
    """
    a, b = float(m[0][0]), float(m[0][1])
    c, d = float(m[1][0]), float(m[1][1])
    det = a * d - b * c
    if det == 0.0:
        raise InvalidInputError("singular matrix cannot act")
    V = minvector_to_sl2(v)
    # m V adj(m) / det
    p00 = a * V[0][0] + b * V[1][0]
    p01 = a * V[0][1] + b * V[1][1]
    p10 = c * V[0][0] + d * V[1][0]
    p11 = c * V[0][1] + d * V[1][1]
    q00 = (p00 * d + p01 * (-c)) / det
    q01 = (p00 * (-b) + p01 * a) / det
    q10 = (p10 * d + p11 * (-c)) / det
    q11 = (p10 * (-b) + p11 * a) / det
    return sl2_to_minvector([[q00, q01], [q10, q11]])


def causal_character(v: MinVector) -> str:
    """Classify v as "spacelike", "timelike" or "lightlike".

    The comparison is relative to the Euclidean magnitude so the answer is
    scale invariant. The zero vector is rejected.
    """
    e2 = v.x * v.x + v.y * v.y + v.z * v.z
    if e2 == 0.0:
        raise InvalidInputError("cannot classify the zero vector")
    q = min_norm2(v)
    if abs(q) <= EPS_CLASS * e2:
        return "lightlike"
    return "spacelike" if q > 0 else "timelike"


def is_spacelike(v: MinVector) -> bool:
    return causal_character(v) == "spacelike"


def is_timelike(v: MinVector) -> bool:
    return causal_character(v) == "timelike"


def is_lightlike(v: MinVector) -> bool:
    return causal_character(v) == "lightlike"


def _normalized_triple(x: float, y: float, z: float) -> tuple[float, float, float]:
    mag = math.hypot(x, y, z)
    if mag == 0.0:
        raise InvalidInputError("homogeneous triple must be nonzero")
    x, y, z = x / mag, y / mag, z / mag
    for c in (x, y, z):
        if abs(c) > 1e-14:
            if c < 0:
                x, y, z = -x, -y, -z
            break
    return x, y, z


@dataclass(frozen=True)
class ProjPoint:
    """Point of the projective plane, stored as a normalized triple.

    Normalization: unit Euclidean magnitude, first nonzero coordinate
    positive, so equal points compare equal up to float noise.
    """

    x: float
    y: float
    z: float

    @staticmethod
    def from_triple(x: float, y: float, z: float) -> "ProjPoint":
        return ProjPoint(*_normalized_triple(x, y, z))

    @staticmethod
    def from_affine(u: float, v: float) -> "ProjPoint":
        return ProjPoint.from_triple(u, v, 1.0)

    def vector(self) -> MinVector:
        return MinVector(self.x, self.y, self.z)


@dataclass(frozen=True)
class ProjLine:
    """Line of the projective plane, stored like ProjPoint.

    Incidence is through the Minkowski pairing: X lies on L iff
    <X, L> = 0. With that convention duality w.r.t. the unit circle is the
    identity on coordinates.
    """

    x: float
    y: float
    z: float

    @staticmethod
    def from_triple(x: float, y: float, z: float) -> "ProjLine":
        return ProjLine(*_normalized_triple(x, y, z))

    def vector(self) -> MinVector:
        return MinVector(self.x, self.y, self.z)


def dual(obj: ProjPoint | ProjLine) -> ProjLine | ProjPoint:
    """Polarity in the unit circle: swaps ProjPoint and ProjLine.

    The coordinates are untouched; only the incidence role changes. The
    polar line of a point p is {X : <X, p> = 0}.
    """
    if isinstance(obj, ProjPoint):
        return ProjLine(obj.x, obj.y, obj.z)
    if isinstance(obj, ProjLine):
        return ProjPoint(obj.x, obj.y, obj.z)
    raise InvalidInputError(f"dual expects ProjPoint or ProjLine, got {type(obj)!r}")


def incident(p: ProjPoint, line: ProjLine, tol: float = 1e-12) -> bool:
    return abs(min_inner(p.vector(), line.vector())) <= tol


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """Line through two distinct projective points."""
    w = min_cross(p.vector(), q.vector())
    return ProjLine.from_triple(w.x, w.y, w.z)


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """Intersection point of two distinct projective lines."""
    w = min_cross(l1.vector(), l2.vector())
    return ProjPoint.from_triple(w.x, w.y, w.z)


def chord_endpoints(line: ProjLine) -> tuple[MinVector, MinVector]:
    """Lightlike rays where the line crosses the unit circle.

    Raises if the line misses the open disk (equivalently, its pole is not
    spacelike).
    """
    v = line.vector()
    if causal_character(v) != "spacelike":
        raise InvalidInputError("line does not meet the open unit disk")
    a, b, c = v.x, v.y, v.z
    n2 = a * a + b * b
    # Closest point of the affine line ax + by = c to the origin, then walk
    # along the direction (-b, a) until the unit circle.
    px, py = a * c / n2, b * c / n2
    t = math.sqrt(max(0.0, (n2 - c * c) / n2)) / math.sqrt(n2)
    dx, dy = -b, a
    q1 = MinVector(px + t * dx, py + t * dy, 1.0)
    q2 = MinVector(px - t * dx, py - t * dy, 1.0)
    return q1, q2


def chords_disjoint(seg: ProjLine, l: ProjLine, tol: float = 1e-12) -> bool:
    """Whether the closed chords cut out by two lines are disjoint.

    Goes through the polarity: the chords are disjoint exactly when the
    spacelike dual point of ``l`` lies strictly inside the bigon of the two
    projective triangles based at ``seg``'s chord, which in coordinates says
    the pairings of dual(l) with seg's two lightlike endpoints have the same
    strict sign. Touching chords (shared endpoint, or one line through the
    other's chord endpoint) count as not disjoint.
    """
    p1, p2 = chord_endpoints(seg)
    d = dual(l)
    if causal_character(d.vector()) != "spacelike":
        raise InvalidInputError("line does not meet the open unit disk")
    s1 = min_inner(p1, d.vector())
    s2 = min_inner(p2, d.vector())
    return s1 * s2 > tol
