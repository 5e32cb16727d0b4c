"""
基组指数优化
"""

from .exponents import optimize_exponents, solve_nonrelativistic

__all__ = ["optimize_exponents", "solve_nonrelativistic"]
