"""Exact computations in the derived category of a hyperplane configuration scheme."""

from .endalgebra import Algebra, Vertex, build_algebra
from .objects import Catalog, parse_spec
from .poset import Poset, Stratum, build_poset

__all__ = ["Algebra", "Catalog", "Poset", "Stratum", "Vertex", "build_algebra", "build_poset", "parse_spec"]
__version__ = "0.1.0"
