"""
微扰 Breit 修正
"""

from .breit import breit_corrections, breit_pt1, breit_pt2

__all__ = ["breit_corrections", "breit_pt1", "breit_pt2"]
