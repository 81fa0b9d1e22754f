"""Exact computations around the Loday-Quillen-Tsygan isomorphism.

Everything is over the rationals with ``fractions.Fraction``; there is no
floating point anywhere in the package.
"""

from .algebras import ProAlgebra, StructAlgebra, get_algebra, matrix_lie_algebra
from .complexes import ChainComplex, ChainMap, homology, homology_dims
from .exact_linear import SparseMat, Subspace
from .reports import Check

__version__ = "0.1.0"

__all__ = ["ChainComplex", "ChainMap", "Check", "ProAlgebra", "SparseMat", "StructAlgebra", "Subspace",
           "get_algebra", "homology", "homology_dims", "matrix_lie_algebra"]
