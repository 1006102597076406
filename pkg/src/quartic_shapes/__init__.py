"""Shapes of Galois quartic number fields and the lattice tools behind them."""

from .fano_lattice import ConormDiagram, ShapeClass, canonical_shape, named_lattice, selling_reduce
from .quartic_c4 import C4Field, C4Shape
from .quartic_v4 import V4Field, V4Shape

__all__ = [
    "C4Field",
    "C4Shape",
    "ConormDiagram",
    "ShapeClass",
    "V4Field",
    "V4Shape",
    "canonical_shape",
    "named_lattice",
    "selling_reduce",
]
__version__ = "0.1.0"
