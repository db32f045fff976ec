"""Seeded random polygon metrics, shared by the test suite and the CLI.

Vertices are drawn as sorted uniforms in fixed ranges, decoration sizes
log-uniformly below the least vertex gap, and the draw is retried until
the metric validates. Every draw is determined by a (seed, index) pair,
so parallel and serial sweeps see the same metrics.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DecorationOverlapError, InvalidInputError, OrderingError
from .polygons import PolygonMetric, is_decorated, is_punctured, make_metric

_MAX_TRIES = 200

#: free vertices of non-punctured kinds are drawn from (1, 1 + VERTEX_SPAN)
VERTEX_SPAN = 4.0

#: finite decoration sizes, as fractions of the least gap between vertices
SIZE_FRACTIONS = (0.05, 0.85)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one sample of a sweep, independent across indices."""
    return np.random.default_rng([int(seed), int(index)])


def random_metric(kind: str, n: int, rng: np.random.Generator) -> PolygonMetric:
    """Draw one valid random metric of the given kind."""
    last: Exception | None = None
    for _ in range(_MAX_TRIES):
        try:
            return _draw(kind, n, rng)
        except (DecorationOverlapError, OrderingError) as err:
            last = err
    raise InvalidInputError(
        f"no valid random metric for kind={kind!r} n={n} after {_MAX_TRIES} draws"
    ) from last


def _draw(kind: str, n: int, rng: np.random.Generator) -> PolygonMetric:
    if is_punctured(kind):
        free = np.sort(rng.uniform(0.0, 1.0, size=n - 1))
        finite = [0.0, *free.tolist()]
        # gaps between consecutive lifts on the cover, wrap included
        gaps = [b - a for a, b in zip(finite, finite[1:])]
        gaps.append(1.0 - finite[-1])
    else:
        free = np.sort(rng.uniform(1.0, 1.0 + VERTEX_SPAN, size=n - 3))
        finite = [0.0, 1.0, *free.tolist()]
        gaps = [b - a for a, b in zip(finite, finite[1:])]
    if not is_decorated(kind):
        return make_metric(kind, n, free.tolist())
    g = min(gaps)
    lo, hi = SIZE_FRACTIONS[0] * g, SIZE_FRACTIONS[1] * g
    sizes = np.exp(rng.uniform(math.log(lo), math.log(hi), size=n))
    if not is_punctured(kind):
        # the decoration at the vertex at infinity is a height; it must sit
        # above every finite decoration, so draw it from (hi, 4)
        sizes[0] = math.exp(rng.uniform(math.log(hi), math.log(4.0)))
    return make_metric(kind, n, free.tolist(), sizes.tolist())
