"""
高斯基函数的解析积分与自旋缩并
"""

from .gaussian import ExponentPair
from .breit import breit_block

__all__ = ["ExponentPair", "breit_block"]
