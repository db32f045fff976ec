"""Normalized metric data for ideal and punctured polygons.

Four kinds of surface are supported:

* ``ideal``: an ideal n-gon, vertices on the boundary circle;
* ``decorated``: an ideal n-gon with a horoball at every vertex;
* ``punctured``: an ideal n-gon with one interior puncture, no decoration;
* ``decorated-punctured``: the punctured polygon with decorated vertices
  (the puncture itself is never decorated).

Normalization pins down all isometry freedom so that metrics are tuples of
numbers. Non-punctured kinds place the first three vertices at infinity, 0
and 1; free coordinates are the remaining vertices (increasing, > 1) plus
all decoration sizes. Punctured kinds live on the cyclic cover with cusp
holonomy z -> z + 1: the first vertex sits at 0 and the rest increase
inside (0, 1); every vertex lifts to x + k for integers k.

Deformation space dimensions: n-3, 2n-3, n-1, 2n-1 respectively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .decorations import Horoball, UhpHoroball, horoball_from_uhp
from .errors import (
    ArityError,
    DecorationOverlapError,
    InvalidInputError,
    OrderingError,
    UnsupportedOperationError,
)
from .models import INF, Geodesic, geodesic_from_endpoints

KINDS = ("ideal", "punctured", "decorated", "decorated-punctured")

#: Default truncation for winding numbers of connections on punctured kinds.
DEFAULT_KMAX = 3


def is_punctured(kind: str) -> bool:
    return kind in ("punctured", "decorated-punctured")


def is_decorated(kind: str) -> bool:
    return kind in ("decorated", "decorated-punctured")


def check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise InvalidInputError(f"unknown polygon kind {kind!r}")


def min_vertices(kind: str) -> int:
    return 2 if is_punctured(kind) else 3


def deformation_dimension(kind: str, n: int) -> int:
    """Dimension of the deformation space (N0 in the reports)."""
    check_kind(kind)
    base = n - 1 if is_punctured(kind) else n - 3
    return base + (n if is_decorated(kind) else 0)


@dataclass(frozen=True)
class PolygonMetric:
    """Normalized metric on a polygon of the given kind.

    ``vertices`` has length n; for non-punctured kinds it starts with
    (inf, 0, 1), for punctured kinds with 0. ``sizes`` holds the n
    decoration sizes for decorated kinds (height at infinity, Euclidean
    diameter elsewhere) and is None otherwise.
    """

    kind: str
    n: int
    vertices: tuple[float, ...]
    sizes: tuple[float, ...] | None = None

    @property
    def N0(self) -> int:
        return deformation_dimension(self.kind, self.n)

    def vertex(self, i: int) -> float:
        return self.vertices[i]

    def lifted_vertex(self, t: int) -> float:
        """Vertex lift on the cyclic cover (punctured kinds).

        Index t = q n + r lifts vertex r by q periods. For non-punctured
        kinds only 0 <= t < n is meaningful.
        """
        if not is_punctured(self.kind):
            return self.vertices[t]
        q, r = divmod(t, self.n)
        return self.vertices[r] + q

    def edge_geodesic(self, i: int) -> Geodesic:
        """Carrier of boundary edge i (from vertex i to the next one).

        For punctured kinds i may be any integer and indexes edge lifts on
        the cover; edge i runs from lifted vertex i to lifted vertex i+1.
        """
        if is_punctured(self.kind):
            return geodesic_from_endpoints(self.lifted_vertex(i), self.lifted_vertex(i + 1))
        return geodesic_from_endpoints(
            self.vertices[i % self.n], self.vertices[(i + 1) % self.n]
        )

    def decoration(self, i: int) -> UhpHoroball:
        if self.sizes is None:
            raise UnsupportedOperationError(f"kind {self.kind!r} carries no decorations")
        return UhpHoroball(self.vertices[i], self.sizes[i])

    def lifted_decoration(self, i: int, k: int) -> UhpHoroball:
        if self.sizes is None:
            raise UnsupportedOperationError(f"kind {self.kind!r} carries no decorations")
        if k != 0 and not is_punctured(self.kind):
            raise InvalidInputError("nonzero winding on a non-punctured kind")
        base = self.vertices[i] + k if self.vertices[i] != INF else INF
        return UhpHoroball(base, self.sizes[i])

    def decoration_vector(self, i: int, k: int = 0) -> Horoball:
        return horoball_from_uhp(self.lifted_decoration(i, k))

    def free_vertex_indices(self) -> range:
        return range(1, self.n) if is_punctured(self.kind) else range(3, self.n)


def make_metric(
    kind: str,
    n: int,
    free_vertices,
    sizes=None,
) -> PolygonMetric:
    """Build and validate a PolygonMetric from its free coordinates.

    ``free_vertices`` carries the movable vertex positions (n-3 values
    above 1 for non-punctured kinds, n-1 values inside (0,1) for punctured
    kinds); ``sizes`` the n decoration sizes for decorated kinds.
    """
    check_kind(kind)
    if n < min_vertices(kind):
        raise ArityError(f"kind {kind!r} needs at least {min_vertices(kind)} vertices")
    free_vertices = tuple(float(v) for v in free_vertices)
    punctured = is_punctured(kind)
    want = n - 1 if punctured else n - 3
    if len(free_vertices) != want:
        raise ArityError(
            f"kind {kind!r} with n={n} takes {want} free vertices, got {len(free_vertices)}"
        )
    if punctured:
        vertices = (0.0,) + free_vertices
        last_bound = 1.0
    else:
        vertices = (INF, 0.0, 1.0) + free_vertices
        last_bound = INF
    finite = vertices[1:] if not punctured else vertices
    for a, b in zip(finite, finite[1:]):
        if not (b > a):
            raise OrderingError(f"vertex coordinates must increase strictly: {a} !< {b}")
    if punctured and not (vertices[-1] < last_bound):
        raise OrderingError("punctured vertices must stay below 1")

    if is_decorated(kind):
        if sizes is None:
            raise ArityError(f"kind {kind!r} needs {n} decoration sizes")
        sizes = tuple(float(s) for s in sizes)
        if len(sizes) != n:
            raise ArityError(f"expected {n} decoration sizes, got {len(sizes)}")
        for s in sizes:
            if not (s > 0) or not math.isfinite(s):
                raise DecorationOverlapError(f"decoration sizes must be positive, got {s}")
    else:
        if sizes is not None:
            raise ArityError(f"kind {kind!r} carries no decorations")

    m = PolygonMetric(kind, n, vertices, sizes)
    if sizes is not None:
        _check_decorations_disjoint(m)
    return m


def _check_decorations_disjoint(m: PolygonMetric, tol: float = 1e-12) -> None:
    n = m.n
    for i in range(n):
        for j in range(i, n):
            si, sj = m.sizes[i], m.sizes[j]
            prod = si * sj
            if is_punctured(m.kind):
                d0 = m.vertices[j] - m.vertices[i]
                bound = int(math.ceil(1.0 + math.sqrt(prod))) + 1
                for k in range(-bound, bound + 1):
                    if i == j and k == 0:
                        continue
                    gap2 = (d0 + k) ** 2
                    if gap2 < prod - tol * max(1.0, prod):
                        raise DecorationOverlapError(
                            f"decorations {i} and {j} overlap on the cover (winding {k})"
                        )
            else:
                if i == j:
                    continue
                if m.vertices[i] == INF:
                    # height h at infinity vs diameter s: disjoint iff s <= h
                    if sj > si + tol * max(1.0, si):
                        raise DecorationOverlapError(
                            f"decoration {j} pokes through the one at infinity"
                        )
                    continue
                gap2 = (m.vertices[j] - m.vertices[i]) ** 2
                if gap2 < prod - tol * max(1.0, prod):
                    raise DecorationOverlapError(f"decorations {i} and {j} overlap")


# ---------------------------------------------------------------------------
# connections


@dataclass(frozen=True)
class Connection:
    """Homotopy class of a path between two (lifts of) vertices.

    ``i`` and ``j`` are vertex indices; ``winding`` shifts the second
    endpoint by that many periods on the cover (punctured kinds only).
    Classes are stored canonically: i < j with any winding, or i == j with
    positive winding.
    """

    i: int
    j: int
    winding: int = 0

    @staticmethod
    def canonical(i: int, j: int, winding: int = 0) -> "Connection":
        if i > j or (i == j and winding < 0):
            i, j, winding = j, i, -winding
        return Connection(i, j, winding)


def _check_connection(m: PolygonMetric, c: Connection, kmax: int | None = None) -> None:
    if not (0 <= c.i < m.n and 0 <= c.j < m.n):
        raise InvalidInputError(f"connection endpoints out of range: {c}")
    if not is_punctured(m.kind):
        if c.winding != 0:
            raise InvalidInputError("winding is only meaningful on punctured kinds")
        if c.i == c.j:
            raise InvalidInputError("connection endpoints must be distinct")
    else:
        if c.i == c.j and c.winding == 0:
            raise InvalidInputError("connection endpoints must be distinct on the cover")
        if kmax is not None and abs(c.winding) > kmax:
            raise InvalidInputError(f"winding {c.winding} exceeds the configured bound {kmax}")


def enumerate_connections(m: PolygonMetric, kmax: int = DEFAULT_KMAX) -> list[Connection]:
    """All connection classes, truncated at |winding| <= kmax."""
    out = []
    if is_punctured(m.kind):
        for i in range(m.n):
            for j in range(i, m.n):
                ks = range(1, kmax + 1) if i == j else range(-kmax, kmax + 1)
                for k in ks:
                    out.append(Connection(i, j, k))
    else:
        out = [Connection(i, j) for i in range(m.n) for j in range(i + 1, m.n)]
    return out


def connection_geodesic(m: PolygonMetric, c: Connection, kmax: int | None = None) -> Geodesic:
    """Geodesic carrier of a connection (one lift on punctured kinds)."""
    _check_connection(m, c, kmax)
    p = m.vertices[c.i]
    if is_punctured(m.kind):
        q = m.vertices[c.j] + c.winding
    else:
        q = m.vertices[c.j]
    return geodesic_from_endpoints(p, q)


def connection_length(m: PolygonMetric, c: Connection, kmax: int | None = None) -> float:
    """Length of the connection truncated at the two decorations."""
    if not is_decorated(m.kind):
        raise UnsupportedOperationError("connection lengths need decorations; kind "
                                        f"{m.kind!r} has none")
    _check_connection(m, c, kmax)
    from .decorations import connection_length as horoball_gap

    u = m.decoration_vector(c.i)
    v = m.decoration_vector(c.j, c.winding)
    return horoball_gap(u, v)


# ---------------------------------------------------------------------------
# tangent vectors


@dataclass(frozen=True)
class TangentVector:
    """Velocity of the free coordinates of a PolygonMetric.

    ``vertex_dots`` always has length n with zeros at pinned vertices;
    ``size_dots`` has length n for decorated kinds and is None otherwise.
    The flat coordinate order is movable vertices first, then sizes.
    """

    metric: PolygonMetric
    vertex_dots: tuple[float, ...]
    size_dots: tuple[float, ...] | None = None

    def __post_init__(self):
        m = self.metric
        if len(self.vertex_dots) != m.n:
            raise ArityError("vertex_dots must have one entry per vertex")
        pinned = 1 if is_punctured(m.kind) else 3
        for i in range(pinned):
            if self.vertex_dots[i] != 0.0:
                raise InvalidInputError(f"pinned vertex {i} cannot move")
        if is_decorated(m.kind):
            if self.size_dots is None or len(self.size_dots) != m.n:
                raise ArityError("size_dots must have one entry per decoration")
        elif self.size_dots is not None:
            raise ArityError(f"kind {m.kind!r} carries no decorations")

    @property
    def coords(self) -> tuple[float, ...]:
        m = self.metric
        vs = tuple(self.vertex_dots[i] for i in m.free_vertex_indices())
        if is_decorated(m.kind):
            return vs + tuple(self.size_dots)
        return vs

    @staticmethod
    def from_coords(m: PolygonMetric, coords) -> "TangentVector":
        coords = tuple(float(c) for c in coords)
        if len(coords) != m.N0:
            raise ArityError(f"expected {m.N0} coordinates, got {len(coords)}")
        pinned = 1 if is_punctured(m.kind) else 3
        n_free = m.n - pinned
        vdots = (0.0,) * pinned + coords[:n_free]
        sdots = coords[n_free:] if is_decorated(m.kind) else None
        return TangentVector(m, vdots, sdots)

    def __add__(self, other: "TangentVector") -> "TangentVector":
        if other.metric != self.metric:
            raise InvalidInputError("tangent vectors live at different metrics")
        vd = tuple(a + b for a, b in zip(self.vertex_dots, other.vertex_dots))
        sd = None
        if self.size_dots is not None:
            sd = tuple(a + b for a, b in zip(self.size_dots, other.size_dots))
        return TangentVector(self.metric, vd, sd)

    def __mul__(self, t: float) -> "TangentVector":
        vd = tuple(a * t for a in self.vertex_dots)
        sd = tuple(a * t for a in self.size_dots) if self.size_dots is not None else None
        return TangentVector(self.metric, vd, sd)

    __rmul__ = __mul__

    def __neg__(self) -> "TangentVector":
        return self * -1.0


def metric_coords(m: PolygonMetric) -> tuple[float, ...]:
    """Free coordinates of a metric: movable vertices, then sizes."""
    vs = tuple(m.vertex(i) for i in m.free_vertex_indices())
    if is_decorated(m.kind):
        return vs + tuple(m.sizes)
    return vs


def admissible(m: PolygonMetric, v: TangentVector, kmax: int = DEFAULT_KMAX) -> bool:
    """Whether v lengthens every connection to first order.

    Uses the analytic length derivative of the strips module; for
    undecorated kinds the auxiliary unit decorations are used, which makes
    the predicate a reporting tool rather than part of the theory there.
    """
    from .strips import length_derivative

    if v.metric != m:
        raise InvalidInputError("tangent vector does not live at this metric")
    for c in enumerate_connections(m, kmax):
        if length_derivative(m, v, c) <= 0.0:
            return False
    return True


# ---------------------------------------------------------------------------
# JSON schema


def to_json(m: PolygonMetric) -> dict:
    """JSON-friendly dict; infinity is encoded as None in vertices and as
    "inf" in decoration bases."""
    verts = [None if x == INF else x for x in m.vertices]
    doc: dict = {"kind": m.kind, "n": m.n, "vertices": verts}
    if m.sizes is not None:
        doc["decorations"] = [
            {"base": "inf" if m.vertices[i] == INF else m.vertices[i], "size": m.sizes[i]}
            for i in range(m.n)
        ]
    else:
        doc["decorations"] = None
    return doc


def _parse_boundary(value) -> float:
    if value is None or (isinstance(value, str) and value.lower() in ("inf", "infinity")):
        return INF
    if isinstance(value, (int, float)) and math.isfinite(value):
        return float(value)
    raise InvalidInputError(f"bad boundary coordinate {value!r}")


def from_json(doc) -> PolygonMetric:
    """Parse and validate the metric JSON schema."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise InvalidInputError("metric document must be a JSON object")
    for key in ("kind", "n", "vertices"):
        if key not in doc:
            raise InvalidInputError(f"metric document lacks {key!r}")
    kind = doc["kind"]
    check_kind(kind)
    n = doc["n"]
    if not isinstance(n, int):
        raise InvalidInputError("n must be an integer")
    verts = doc["vertices"]
    if not isinstance(verts, list) or len(verts) != n:
        raise ArityError(f"vertices must be a list of length {n}")
    coords = [_parse_boundary(v) for v in verts]
    punctured = is_punctured(kind)
    pinned = [0.0] if punctured else [INF, 0.0, 1.0]
    for i, want in enumerate(pinned):
        if i >= n:
            break
        got = coords[i]
        ok = got == want if want == INF else (got != INF and abs(got - want) <= 1e-9)
        if not ok:
            raise InvalidInputError(
                f"vertex {i} must equal the normalized value {want}, got {got}"
            )
    frees = coords[len(pinned):]

    sizes = None
    decs = doc.get("decorations")
    if is_decorated(kind):
        if not isinstance(decs, list) or len(decs) != n:
            raise ArityError(f"decorations must be a list of length {n}")
        sizes = []
        for i, d in enumerate(decs):
            if not isinstance(d, dict) or "base" not in d or "size" not in d:
                raise InvalidInputError(f"decoration {i} must carry base and size")
            base = _parse_boundary(d["base"])
            want = coords[i]
            ok = base == want if want == INF else (base != INF and abs(base - want) <= 1e-9)
            if not ok:
                raise InvalidInputError(
                    f"decoration {i} base {base} does not sit at vertex {want}"
                )
            sizes.append(d["size"])
    elif decs not in (None, []):
        raise InvalidInputError(f"kind {kind!r} carries no decorations")

    return make_metric(kind, n, frees, sizes)
