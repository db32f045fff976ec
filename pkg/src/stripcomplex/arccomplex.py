"""Arc complexes of ideal and punctured polygons.

Arcs are encoded combinatorially:

* ideal: a pair {i, j} of non-adjacent boundary-edge indices, equivalently
  a diagonal of the Euclidean n-gon whose vertices are the edges;
* decorated: a diagonal {u, v} of the 2n-gon whose even vertices are the
  polygon edges (G) and odd vertices the decorated vertices (R), with at
  most one endpoint in R;
* punctured kinds: the same data on the Z-cover. A class is a pair (a, b)
  of cover indices with 2 <= b - a <= period, up to translation by the
  period (n for plain punctured, 2n for decorated-punctured); b - a equal
  to the period is the maximal loop encircling the puncture.

Compatibility of two classes means some pair of representatives is
disjoint; combinatorially, no pair of lifts strictly interleaves (shared
endpoints are allowed). The complex is flag: simplices are exactly the
cliques of the compatibility graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError, ResourceGuardError, UnsupportedOperationError
from .polygons import deformation_dimension, is_decorated, is_punctured, check_kind, min_vertices

#: enumeration guards (clique searches are exponential)
MAX_N_PLAIN = 12
MAX_N_PUNCTURED = 8


def period_of(kind: str, n: int) -> int:
    """Number of combinatorial slots around the boundary (per period)."""
    return 2 * n if is_decorated(kind) else n


@dataclass(frozen=True, order=True)
class ArcClass:
    """Isotopy class of a permitted arc, canonically encoded.

    For non-punctured kinds 0 <= a < b < M with 2 <= b-a <= M-2; for
    punctured kinds 0 <= a < M and 2 <= b-a <= M where M is the period.
    Decorated kinds forbid both endpoints odd (no R-to-R arcs).
    """

    kind: str
    n: int
    a: int
    b: int

    def __post_init__(self):
        check_kind(self.kind)
        if self.n < min_vertices(self.kind):
            raise InvalidInputError(f"kind {self.kind!r} needs n >= {min_vertices(self.kind)}")
        M = period_of(self.kind, self.n)
        a, b = self.a, self.b
        if is_punctured(self.kind):
            if b < a:
                a, b = b, a
            shift = a % M - a
            a, b = a + shift, b + shift
            if not (2 <= b - a <= M):
                raise InvalidInputError(
                    f"cover gap {b - a} outside [2, {M}] for kind {self.kind!r}"
                )
        else:
            if b < a:
                a, b = b, a
            if not (0 <= a and b < M):
                raise InvalidInputError(f"endpoints ({a},{b}) outside the boundary cycle")
            if not (2 <= b - a <= M - 2):
                raise InvalidInputError(f"({a},{b}) is not a non-trivial diagonal")
        if is_decorated(self.kind) and (a % 2 == 1 and b % 2 == 1):
            raise InvalidInputError("arcs cannot join two decorated vertices")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def period(self) -> int:
        return period_of(self.kind, self.n)

    @property
    def is_maximal(self) -> bool:
        """Loop encircling the puncture, both endpoints on one edge."""
        return is_punctured(self.kind) and self.b - self.a == self.period

    @property
    def has_vertex_endpoint(self) -> bool:
        """Edge-to-vertex arc of a decorated kind."""
        return is_decorated(self.kind) and (self.a % 2 == 1 or self.b % 2 == 1)

    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b)


def enumerate_arcs(kind: str, n: int, guard: bool = True) -> list[ArcClass]:
    """Complete duplicate-free list of permitted arc classes."""
    check_kind(kind)
    if n < min_vertices(kind):
        raise InvalidInputError(f"kind {kind!r} needs n >= {min_vertices(kind)}")
    if guard:
        _check_guard(kind, n)
    M = period_of(kind, n)
    out = []
    if is_punctured(kind):
        for a in range(M):
            for b in range(a + 2, a + M + 1):
                if is_decorated(kind) and a % 2 == 1 and b % 2 == 1:
                    continue
                out.append(ArcClass(kind, n, a, b))
    else:
        for a in range(M):
            for b in range(a + 2, min(a + M - 1, M)):
                if is_decorated(kind) and a % 2 == 1 and b % 2 == 1:
                    continue
                out.append(ArcClass(kind, n, a, b))
    return out


def _check_guard(kind: str, n: int) -> None:
    cap = MAX_N_PUNCTURED if is_punctured(kind) else MAX_N_PLAIN
    if n > cap:
        raise ResourceGuardError(
            f"enumeration for kind {kind!r} is guarded at n <= {cap}, got n = {n}"
        )


def _strictly_interleaved(a, b, c, d) -> bool:
    return (a < c < b < d) or (c < a < d < b)


def compatible(a1: ArcClass, a2: ArcClass) -> bool:
    """True iff the two classes admit disjoint representatives."""
    if a1.kind != a2.kind or a1.n != a2.n:
        raise InvalidInputError("arcs live on different polygons")
    if a1 == a2:
        return True
    if not is_punctured(a1.kind):
        return not _strictly_interleaved(a1.a, a1.b, a2.a, a2.b)
    M = a1.period
    for k in range(-2, 3):
        if _strictly_interleaved(a1.a, a1.b, a2.a + k * M, a2.b + k * M):
            return False
    return True


def is_simplex(arcs) -> bool:
    arcs = list(arcs)
    if len(set(arcs)) != len(arcs):
        return False
    return all(compatible(x, y) for i, x in enumerate(arcs) for y in arcs[i + 1:])


@dataclass(frozen=True)
class BarycentricPoint:
    """A point of the arc complex: a simplex with positive weights summing to 1."""

    arcs: tuple
    weights: tuple

    def __post_init__(self):
        arcs = tuple(self.arcs)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "weights", weights)
        if not arcs:
            raise InvalidInputError("a barycentric point needs at least one arc")
        if len(arcs) != len(weights):
            raise InvalidInputError("one weight per arc required")
        if not is_simplex(arcs):
            raise InvalidInputError("support is not a simplex")
        if any(w <= 0.0 for w in weights):
            raise InvalidInputError("barycentric weights must be positive")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise InvalidInputError("barycentric weights must sum to 1")

    @property
    def support(self) -> tuple:
        return self.arcs


def barycenter(arcs) -> BarycentricPoint:
    """Equal-weight point of a simplex."""
    arcs = tuple(arcs)
    if not arcs:
        raise InvalidInputError("cannot take the barycenter of the empty simplex")
    return BarycentricPoint(arcs, tuple(1.0 / len(arcs) for _ in arcs))


# ---------------------------------------------------------------------------
# face decomposition


@dataclass(frozen=True)
class Face:
    """One complementary region of an arc system.

    ``items`` lists the combinatorial slots on the face boundary (cover
    indices; one period's worth for the cusp face). ``side_count`` counts
    boundary sides of the polygon on the face, which for undecorated kinds
    is the number of spikes. ``internal_sides`` counts bounding arcs.
    """

    arc: ArcClass | None
    internal_sides: int
    items: tuple[int, ...]
    side_count: int
    is_cusp: bool = False

    @property
    def r_count(self) -> int:
        return sum(1 for p in self.items if p % 2 == 1)


def _containment_forest(chords):
    """children map of the laminar family of intervals (shared endpoints
    nest); chords must be pairwise non-crossing."""
    order = sorted(chords, key=lambda c: (c[0], -c[1]))
    children: dict = {None: []}
    stack: list = []
    for c in order:
        children[c] = []
        while stack and not (stack[-1][0] <= c[0] and c[1] <= stack[-1][1]):
            stack.pop()
        parent = stack[-1] if stack else None
        children[parent].append(c)
        stack.append(c)
    return children


def _face_of(chord, kids, arc):
    a, b = chord
    items = {a, b}
    sides = 0
    pos = a
    for ka, kb in kids:
        items.update((ka, kb))
        items.update(range(pos + 1, ka))
        sides += ka - pos
        pos = kb
    items.update(range(pos + 1, b))
    sides += b - pos
    return Face(arc, 1 + len(kids), tuple(sorted(items)), sides)


def faces(arcs, kind: str | None = None, n: int | None = None) -> list[Face]:
    """Complementary faces of an arc system (a simplex).

    Punctured kinds are handled on the Z-cover: one face per arc class
    plus the cusp face, whose data is reported per period.
    """
    arcs = sorted(set(arcs))
    if arcs:
        kind, n = arcs[0].kind, arcs[0].n
        if any(x.kind != kind or x.n != n for x in arcs):
            raise InvalidInputError("arcs live on different polygons")
    elif kind is None or n is None:
        raise InvalidInputError("empty simplex needs an explicit kind and n")
    if not is_simplex(arcs):
        raise InvalidInputError("arcs are not pairwise compatible")
    M = period_of(kind, n)

    if not is_punctured(kind):
        chords = {(x.a, x.b): x for x in arcs}
        children = _containment_forest(chords)
        out = [_face_of(c, children[c], chords[c]) for c in chords]
        top = children[None]
        items = {p for p in range(M) if not any(a < p < b for a, b in top)}
        sides = M - sum(b - a for a, b in top)
        out.append(Face(None, len(top), tuple(sorted(items)), sides))
        return out

    window = range(-3, 4)
    lifts = {}
    for x in arcs:
        for k in window:
            lifts[(x.a + k * M, x.b + k * M)] = (x, k)
    children = _containment_forest(lifts)
    out = []
    for (a, b), (x, k) in lifts.items():
        if k == 0:
            out.append(_face_of((a, b), children[(a, b)], x))
    roots = [c for c in children[None] if -M < c[0] < M]
    items = tuple(p for p in range(M) if not any(a < p < b for a, b in roots))
    sides = sum(1 for t in range(M) if not any(a <= t and t + 1 <= b for a, b in roots))
    internal = sum(1 for a, b in children[None] if 0 <= a < M)
    out.append(Face(None, internal, items, sides, is_cusp=True))
    return out


def is_filling(arcs, kind: str | None = None, n: int | None = None) -> bool:
    """Whether the arcs cut the polygon into small-enough disks.

    Undecorated kinds: every disk has at most two spikes and the punctured
    disk none. Decorated kinds: every disk has at most one decorated
    vertex and the punctured disk none.
    """
    fs = faces(arcs, kind, n)
    if arcs:
        first = next(iter(arcs))
        kind = first.kind
    decorated = is_decorated(kind)
    for f in fs:
        budget = f.r_count if decorated else f.side_count
        if f.is_cusp:
            if budget != 0:
                return False
        elif budget > (1 if decorated else 2):
            return False
    return True


@dataclass(frozen=True)
class ConsistencyReport:
    applicable: bool
    k: int
    total: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.applicable and self.total == self.expected


def consistency_count(arcs, kind: str | None = None, n: int | None = None) -> ConsistencyReport:
    """Check the face-vertex budget identity for decorated kinds.

    For a filling k-simplex the total vertex count of all complementary
    polygons equals 2(k+1) + 2n (each boundary vertex with d arc ends lies
    on d+1 faces).
    """
    arcs = list(arcs)
    if arcs:
        kind, n = arcs[0].kind, arcs[0].n
    if kind is None or n is None:
        raise InvalidInputError("empty simplex needs an explicit kind and n")
    if not is_decorated(kind):
        raise UnsupportedOperationError("the face-vertex identity is about decorated kinds")
    k = len(arcs) - 1
    expected = 2 * (k + 1) + 2 * n
    if not is_filling(arcs, kind, n):
        return ConsistencyReport(False, k, 0, expected)
    total = sum(len(f.items) for f in faces(arcs, kind, n))
    return ConsistencyReport(True, k, total, expected)


# ---------------------------------------------------------------------------
# the complex


class ArcComplex:
    """Flag simplicial complex of pairwise-compatible arc classes."""

    def __init__(self, kind: str, n: int, _arcs=None):
        check_kind(kind)
        self.kind = kind
        self.n = n
        if _arcs is None:
            _arcs = enumerate_arcs(kind, n)
        else:
            _check_guard(kind, n)
        self.arcs: tuple[ArcClass, ...] = tuple(sorted(_arcs))
        self._index = {x: i for i, x in enumerate(self.arcs)}
        V = len(self.arcs)
        self._adj = [0] * V
        for i in range(V):
            for j in range(i + 1, V):
                if compatible(self.arcs[i], self.arcs[j]):
                    self._adj[i] |= 1 << j
                    self._adj[j] |= 1 << i

    @property
    def N0(self) -> int:
        return deformation_dimension(self.kind, self.n)

    def __len__(self) -> int:
        return len(self.arcs)

    def is_simplex(self, arcs) -> bool:
        if any(x not in self._index for x in arcs):
            return False
        return is_simplex(arcs)

    def f_vector(self) -> tuple[int, ...]:
        """Numbers of k-simplices for k = 0, 1, ... (vertices first)."""
        counts: list[int] = []
        adj = self._adj

        def rec(cand: int, depth: int) -> None:
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                if depth == len(counts):
                    counts.append(0)
                counts[depth] += 1
                rec(adj[v] & cand, depth + 1)

        full = (1 << len(self.arcs)) - 1
        rec(full, 0)
        return tuple(counts)

    def euler_characteristic(self) -> int:
        f = self.f_vector()
        return sum((-1) ** k * c for k, c in enumerate(f))

    def simplices(self, size: int):
        """Yield every simplex with ``size`` arcs, in canonical order.

        ``size`` counts arcs, so a k-simplex has size k+1; size 0 yields
        the single empty simplex.
        """
        if size < 0:
            raise InvalidInputError("simplex size cannot be negative")
        if size == 0:
            yield ()
            return
        adj, arcs = self._adj, self.arcs

        def rec(prefix: tuple, cand: int, need: int):
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                nxt = prefix + (arcs[v],)
                if need == 1:
                    yield nxt
                else:
                    yield from rec(nxt, adj[v] & cand, need - 1)

        yield from rec((), (1 << len(arcs)) - 1, size)

    def top_simplices(self) -> list[tuple[ArcClass, ...]]:
        """Maximal cliques, canonically ordered (Bron-Kerbosch with pivot)."""
        adj = self._adj
        out: list[int] = []

        def bk(r: int, p: int, x: int) -> None:
            if p == 0 and x == 0:
                out.append(r)
                return
            pivot_pool = p | x
            pivot = (pivot_pool & -pivot_pool).bit_length() - 1
            best = -1
            pool = pivot_pool
            while pool:
                low = pool & -pool
                u = low.bit_length() - 1
                pool ^= low
                deg = bin(adj[u] & p).count("1")
                if deg > best:
                    best, pivot = deg, u
            cands = p & ~adj[pivot]
            while cands:
                low = cands & -cands
                v = low.bit_length() - 1
                cands ^= low
                bk(r | low, p & adj[v], x & adj[v])
                p ^= low
                x |= low

        if self.arcs:
            bk(0, (1 << len(self.arcs)) - 1, 0)
        tops = []
        for mask in out:
            clique = []
            m = mask
            while m:
                low = m & -m
                m ^= low
                clique.append(self.arcs[low.bit_length() - 1])
            tops.append(tuple(clique))
        return sorted(tops)

    def link(self, arcs) -> "ArcComplex":
        """Subcomplex of arcs compatible with every arc of the simplex."""
        arcs = list(arcs)
        if not self.is_simplex(arcs):
            raise InvalidInputError("link requires a simplex of this complex")
        keep = [
            x
            for x in self.arcs
            if x not in arcs and all(compatible(x, y) for y in arcs)
        ]
        return ArcComplex(self.kind, self.n, _arcs=keep)

    def is_pseudo_manifold(self) -> bool:
        """Every codimension-1 simplex of a top lies in exactly two tops."""
        from itertools import combinations

        tops = self.top_simplices()
        if not tops:
            return False
        size = len(tops[0])
        if any(len(t) != size for t in tops):
            return False
        counts: dict = {}
        for t in tops:
            for ridge in combinations(t, size - 1):
                counts[ridge] = counts.get(ridge, 0) + 1
        return all(c == 2 for c in counts.values())

    def faces(self, arcs):
        return faces(arcs, self.kind, self.n)

    def is_filling(self, arcs) -> bool:
        return is_filling(arcs, self.kind, self.n)

    def consistency_count(self, arcs) -> ConsistencyReport:
        return consistency_count(arcs, self.kind, self.n)


def top_simplices(kind: str, n: int) -> list[tuple[ArcClass, ...]]:
    return ArcComplex(kind, n).top_simplices()


def euler_characteristic(obj) -> int:
    """Euler characteristic of an ArcComplex, a link, or an f-vector."""
    if isinstance(obj, ArcComplex):
        return obj.euler_characteristic()
    return sum((-1) ** k * c for k, c in enumerate(obj))


def sphere_euler_characteristic(dim: int) -> int:
    """chi of a sphere of the given dimension; the empty complex is S^-1."""
    if dim < -1:
        raise InvalidInputError("sphere dimension below -1")
    return 0 if dim == -1 else 1 + (-1) ** dim
