"""Decorated ideal polygons, their arc complexes, and strip deformations.

The package computes in three models of the hyperbolic plane (hyperboloid,
projective disk, upper half plane), realizes arcs of ideal and punctured
polygons as geodesics, builds the strip-deformation tangent vectors attached
to weighted arc systems, and numerically verifies the parametrisation
statements that make the arc complex a model for the deformation space.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("stripcomplex")
except PackageNotFoundError:  # running from a checkout without install
    __version__ = "0.0.dev0"

from . import arccomplex, decorations, errors, killing, lorentz, models, polygons, strips

__all__ = [
    "__version__",
    "arccomplex",
    "decorations",
    "errors",
    "killing",
    "lorentz",
    "models",
    "polygons",
    "strips",
]
