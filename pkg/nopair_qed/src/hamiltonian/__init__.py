"""
动能平衡基下的算符矩阵组装
"""

from .assembler import (
    OperatorMatrix,
    assemble_bare,
    assemble_breit,
    assemble_coulomb,
    assemble_interaction,
    assemble_metric,
    dump_matrix,
    exchange_blocks,
)

__all__ = [
    "OperatorMatrix",
    "assemble_bare",
    "assemble_breit",
    "assemble_coulomb",
    "assemble_interaction",
    "assemble_metric",
    "dump_matrix",
    "exchange_blocks",
]
