"""Combinatorial cell complexes: validation, duality, subdivision,
reconstruction, shellings, cobordisms and causal slices."""

from .core import (CellComplex, CcMap, build_complex, skeleton, restriction,
                   boundary, classify, star, link, is_isomorphic)
from .errors import CcError

__all__ = ["CellComplex", "CcMap", "build_complex", "skeleton", "restriction",
           "boundary", "classify", "star", "link", "is_isomorphic", "CcError"]
__version__ = "0.1.0"
