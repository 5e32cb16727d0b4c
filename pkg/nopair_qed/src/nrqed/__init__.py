"""
nrQED 参考系数
"""

from .reference import nrqed_energy, nrqed_report

__all__ = ["nrqed_energy", "nrqed_report"]
