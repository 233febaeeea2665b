"""Exact tools for plane tilings by convex polygons and their multiple lattice tilings."""

from .geometry import ConvexPolygon, Lattice2, Mat2, Vec2, apply_linear, vec
from .multitiling import MultiTilingInstance, bolle_check, family_instance
from .oracle import exact_uniform_multiplicity, verify_kfold

__version__ = "0.1.0"

__all__ = [
    "ConvexPolygon",
    "Lattice2",
    "Mat2",
    "MultiTilingInstance",
    "Vec2",
    "apply_linear",
    "bolle_check",
    "exact_uniform_multiplicity",
    "family_instance",
    "vec",
    "verify_kfold",
]
