"""
投影 DC 谱上的一阶、二阶微扰 Breit 修正
"""

from __future__ import annotations

from typing import Optional

from mpmath import mp

from ..errors import DegenerateDenominator, IndexOutOfRange
from ..hamiltonian.assembler import assemble_breit
from ..models.results import BreitCorrections
from ..models.spectrum import ProjectedSpectrum
from ..nopair.projector import project
from ..utils.logger import get_logger

logger = get_logger(__name__)

DEGENERATE_GAP = mp.mpf("1e-15")


def projected_breit(spectrum: ProjectedSpectrum):
    """投影坐标下的 Breit 矩阵 UᵀBU，首次调用时组装并缓存在谱对象上"""
    if spectrum.projected_breit is None:
        breit = assemble_breit(spectrum.system, spectrum.basis)
        spectrum.projected_breit = project(spectrum.projector, breit)
    return spectrum.projected_breit


def _check_index(spectrum: ProjectedSpectrum, n: int) -> None:
    if not 0 <= n < spectrum.count:
        raise IndexOutOfRange(n, spectrum.count)


def _coupling(spectrum: ProjectedSpectrum, breit, i: int, n: int):
    """⟨Ψ_i|B'|Ψ_n⟩"""
    size = spectrum.count
    vi = spectrum.eigenvectors[:, i]
    vn = spectrum.eigenvectors[:, n]
    total = mp.mpf(0)
    for a in range(size):
        if not vi[a]:
            continue
        row = mp.fdot((breit[a, b], vn[b]) for b in range(size))
        total += vi[a] * row
    return total


def breit_pt1(spectrum: ProjectedSpectrum, n: int = 0, breit: Optional[object] = None):
    """
    一阶微扰 Breit 能量 E_DC⟨B⟩,n = E_DC,n + ⟨Ψ_n|X†BX|Ψ_n⟩ / ⟨Ψ_n|Ψ_n⟩

    Args:
        spectrum: DC 投影谱
        n: 态编号（0 为基态）
        breit: 投影坐标下的 Breit 矩阵（缺省时组装）

    Returns:
        E_DC⟨B⟩,n

    Raises:
        IndexOutOfRange: n 超出范围
    """
    _check_index(spectrum, n)
    breit = projected_breit(spectrum) if breit is None else breit
    vn = spectrum.eigenvectors[:, n]
    norm = mp.fdot((vn[a], vn[a]) for a in range(spectrum.count))
    return spectrum.eigenvalues[n] + _coupling(spectrum, breit, n, n) / norm


def breit_pt2(spectrum: ProjectedSpectrum, n: int = 0, breit: Optional[object] = None):
    """
    二阶微扰 Breit 能量

    E_DCB₂,n = E_DC⟨B⟩,n − Σ_{i≠n} |⟨Ψ_i|X†BX|Ψ_n⟩|² / (E_DC,i − E_DC,n)

    对所有 4n_b − 1 个互补态求和，基态修正为负。

    Raises:
        IndexOutOfRange: n 超出范围
        DegenerateDenominator: 存在非零耦合且能隙 < 10⁻¹⁵
    """
    _check_index(spectrum, n)
    breit = projected_breit(spectrum) if breit is None else breit
    e_pt1 = breit_pt1(spectrum, n, breit)
    e_n = spectrum.eigenvalues[n]

    coupling_floor = mp.mpf(10) ** (-(mp.dps // 2))
    second = mp.mpf(0)
    for i in range(spectrum.count):
        if i == n:
            continue
        coupling = _coupling(spectrum, breit, i, n)
        gap = spectrum.eigenvalues[i] - e_n
        if abs(gap) < DEGENERATE_GAP:
            if abs(coupling) > coupling_floor:
                raise DegenerateDenominator(i, mp.nstr(gap, 5))
            continue
        second += coupling**2 / gap
    return e_pt1 - second


def breit_corrections(spectrum: ProjectedSpectrum, n: int = 0) -> BreitCorrections:
    """一次性计算 E_DC、E_DC⟨B⟩、E_DCB₂"""
    if spectrum.model != "DC":
        raise ValueError(f"微扰 Breit 修正需要 DC 谱，得到 {spectrum.model}")
    _check_index(spectrum, n)
    breit = projected_breit(spectrum)
    corrections = BreitCorrections(
        n=n,
        e_dc=spectrum.eigenvalues[n],
        e_pt1=breit_pt1(spectrum, n, breit),
        e_pt2=breit_pt2(spectrum, n, breit),
    )
    logger.debug(
        f"Breit 微扰: E_DC={mp.nstr(corrections.e_dc, 15)}, "
        f"PT1={mp.nstr(corrections.e_pt1, 15)}, PT2={mp.nstr(corrections.e_pt2, 15)}"
    )
    return corrections
