"""
扩展精度稠密线性代数
"""

from .precision import configure_precision, resolve_precision
from .dense import cholesky, eigh_sym, geneig_sym, least_squares, lowest_eigenvalue

__all__ = [
    "configure_precision",
    "resolve_precision",
    "cholesky",
    "eigh_sym",
    "geneig_sym",
    "least_squares",
    "lowest_eigenvalue",
]
