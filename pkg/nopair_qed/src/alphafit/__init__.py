"""
α 扫描与展开系数拟合
"""

from .scan import run_scan, run_scans, scan_grid
from .fit import fit

__all__ = ["run_scan", "run_scans", "scan_grid", "fit"]
