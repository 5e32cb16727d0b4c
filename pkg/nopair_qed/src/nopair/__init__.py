"""
无对投影
"""

from .projector import build_projector, energy_cut, lowest_with_coupling, solve_projected

__all__ = ["build_projector", "energy_cut", "lowest_with_coupling", "solve_projected"]
