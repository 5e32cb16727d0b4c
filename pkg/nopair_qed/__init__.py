"""
无对 Dirac–Coulomb(–Breit) 两体变分求解器
"""

__version__ = "0.1.0"
