"""Plane triangulations with vertex degrees 3 and 6: construction, factorization, orbits."""

from hexorb.builder import LayeredDrawing, build
from hexorb.indexcalc import IndexVector, Orbit, classify, index_vector, orbit, step
from hexorb.planemap import RotationSystem, mirror, op_equivalent, parse_rotation_system, validate
from hexorb.trifactor import Factorization, class_components, factorize

__all__ = [
    "IndexVector",
    "Orbit",
    "RotationSystem",
    "Factorization",
    "LayeredDrawing",
    "build",
    "classify",
    "class_components",
    "factorize",
    "index_vector",
    "mirror",
    "op_equivalent",
    "orbit",
    "parse_rotation_system",
    "step",
    "validate",
]

__version__ = "0.1.0"
