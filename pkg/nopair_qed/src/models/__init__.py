"""
数据模型定义
"""

from .system import PRESETS, TwoBodySystem, make_system
from .basis import BasisSet, load_exponents, save_exponents
from .spectrum import ProjectedSpectrum, ProjectorBasis
from .results import (
    AlphaScan,
    BreitCorrections,
    FitResult,
    NrqedReport,
    OptimizationResult,
    ScanPoint,
    SolveRow,
)

__all__ = [
    "PRESETS",
    "TwoBodySystem",
    "make_system",
    "BasisSet",
    "load_exponents",
    "save_exponents",
    "ProjectedSpectrum",
    "ProjectorBasis",
    "AlphaScan",
    "BreitCorrections",
    "FitResult",
    "NrqedReport",
    "OptimizationResult",
    "ScanPoint",
    "SolveRow",
]
