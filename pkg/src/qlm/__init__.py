"""qlm: exact local models of the rank-3 moduli space on a genus-2 curve.

The package reconstructs, verifies and classifies the etale-local models
of the moduli space of rank-3 bundles with trivial determinant on a
genus-2 curve, together with the fixed-locus models describing the
branch sextic of its theta map.  All computation is exact symbolic
algebra over the rationals.
"""

from .exactpoly import DomainError, Polynomial, PolyMatrix, Rational, StructuralError
from .quiverext import BundleCase, CaseId, ExtQuiver, bundle_case, build_ext_quiver

__version__ = "0.1.0"

__all__ = [
    "BundleCase",
    "CaseId",
    "DomainError",
    "ExtQuiver",
    "PolyMatrix",
    "Polynomial",
    "Rational",
    "StructuralError",
    "bundle_case",
    "build_ext_quiver",
    "__version__",
]
