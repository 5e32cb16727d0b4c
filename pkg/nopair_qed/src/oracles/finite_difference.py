"""
有限差分验证器
"""

from __future__ import annotations

from typing import Callable

from mpmath import mp

from ..models.spectrum import ProjectedSpectrum
from ..nopair.projector import lowest_with_coupling
from ..perturbation.breit import projected_breit

DEFAULT_STEP = mp.mpf("1e-8")


def finite_difference_slope(f: Callable[[object], object], x0, h=DEFAULT_STEP):
    """中心差分 (f(x0+h) − f(x0−h)) / 2h，误差 O(h²)"""
    x0 = mp.mpf(x0)
    h = mp.mpf(h)
    if h <= 0:
        raise ValueError(f"差分步长必须为正，得到 {h}")
    return (f(x0 + h) - f(x0 - h)) / (2 * h)


def hellmann_feynman_slope(spectrum: ProjectedSpectrum, h=DEFAULT_STEP):
    """
    d/dλ E₀(DC + λ·Breit) 在 λ = 0 处的差分估计

    与 breit_pt1 − E_DC 比较即为一阶微扰的 Hellmann–Feynman 检验。
    """
    if spectrum.model != "DC":
        raise ValueError(f"需要 DC 谱，得到 {spectrum.model}")
    breit = projected_breit(spectrum)

    def ground(coupling):
        return lowest_with_coupling(
            spectrum.projector, spectrum.projected_interaction, breit, coupling
        )

    return finite_difference_slope(ground, 0, h)
