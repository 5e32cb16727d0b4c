"""
nrQED 参考值

非相对论能量、α² 阶 Dirac–Coulomb 与 Breit 修正、α³ 阶单/双对 Coulomb 修正，
以及等质量 Breit 与正电子素 α⁴lnα 系数。质量以电子质量为单位，
系数乘以 α 的相应幂次后为 hartree。
"""

from __future__ import annotations

from typing import Any, Dict, Optional

from mpmath import mp

from ..errors import DomainError, QuadratureNotConverged
from ..models.results import NrqedReport
from ..models.system import TwoBodySystem
from ..utils.logger import get_logger

logger = get_logger(__name__)

HYDROGENIC_KINDS = ("energy", "inv_r", "inv_r2", "delta3")
QUADRATURE_TOLERANCE = mp.mpf("1e-10")


def _charge(system: TwoBodySystem):
    return -system.q1q2


def e_nr(system: TwoBodySystem):
    """E_nr = −μZ²/2（Z = −q₁q₂）"""
    return -system.mu * _charge(system) ** 2 / 2


def hydrogenic_expectation(kind: str, system: TwoBodySystem, n: int = 1, l: int = 0):
    """
    约化质量 μ 的类氢期望值

    Args:
        kind: energy / inv_r / inv_r2 / delta3
        system: 两体系统
        n: 主量子数
        l: 角量子数

    Raises:
        DomainError: kind 未知或量子数非法
    """
    if kind not in HYDROGENIC_KINDS:
        raise DomainError(f"未知期望值类型: {kind}，可选 {HYDROGENIC_KINDS}")
    if n < 1 or not 0 <= l < n:
        raise DomainError(f"量子数非法: n={n}, l={l}")
    mu = system.mu
    z = _charge(system)
    n = mp.mpf(n)
    if kind == "energy":
        return -mu * z**2 / (2 * n**2)
    if kind == "inv_r":
        return mu * z / n**2
    if kind == "inv_r2":
        return (mu * z) ** 2 / (n**3 * (l + mp.mpf(1) / 2))
    return (mu * z) ** 3 / (mp.pi * n**3) if l == 0 else mp.mpf(0)


def mass_velocity(system: TwoBodySystem, n: int = 1):
    mu = system.mu
    return mu**4 / 2 * (1 / system.m1**3 + 1 / system.m2**3) * (mp.mpf(3) / (4 * n**4) - mp.mpf(2) / n**3)


def darwin(system: TwoBodySystem, n: int = 1):
    mu = system.mu
    return mu**3 / (2 * mp.mpf(n) ** 3) * (1 / system.m1**2 + 1 / system.m2**2)


def orbit_orbit(system: TwoBodySystem, n: int = 1):
    mu = system.mu
    n = mp.mpf(n)
    return (2 * mu**3 / n**4 - 8 * mu**3 / n**3 + 4 * mu**3 / n**3) / (2 * system.m1 * system.m2)


def spin_spin(system: TwoBodySystem, n: int = 1):
    """单态的自旋-自旋（接触）项"""
    return -2 * system.mu**3 / (system.m1 * system.m2 * mp.mpf(n) ** 3)


def e2_dc(system: TwoBodySystem, n: int = 1):
    """α² 阶 Dirac–Coulomb 修正：质量-速度项 + Darwin 项"""
    return mass_velocity(system, n) + darwin(system, n)


def e2_b(system: TwoBodySystem, n: int = 1):
    """α² 阶 Breit 修正：轨道-轨道项 + 自旋-自旋项"""
    return orbit_orbit(system, n) + spin_spin(system, n)


def e2_dcb(system: TwoBodySystem, n: int = 1):
    return e2_dc(system, n) + e2_b(system, n)


def e3_c02(system: TwoBodySystem):
    """α³ 阶含对 Coulomb 修正（零对 + 双对）"""
    m1, m2 = system.m1, system.m2
    return -(2 * system.mu**3 / (3 * mp.pi)) * (2 / m1**2 + 1 / (m1 * m2) + 2 / m2**2)


def e3_c2(system: TwoBodySystem, tolerance=QUADRATURE_TOLERANCE):
    """
    α³ 阶双对 Coulomb 修正

    E = −(2μ³/π) ∫₀^∞ dk (E₁−m₁)(E₂−m₂) / [k² E₁ E₂ (E₁+E₂+m₁+m₂)]，Eᵢ = √(mᵢ²+k²)

    以 k = m_min·tan θ 把积分区间压缩到 [0, π/2]，用 tanh-sinh 求积。

    Raises:
        QuadratureNotConverged: 误差估计超过 tolerance
    """
    m1, m2 = system.m1, system.m2
    scale = system.m_min
    tolerance = mp.mpf(tolerance)

    def integrand(theta):
        k = scale * mp.tan(theta)
        if k == 0:
            return mp.mpf(0)
        e1 = mp.sqrt(m1**2 + k**2)
        e2 = mp.sqrt(m2**2 + k**2)
        # E − m = k²/(E + m)
        kinetic = k**2 / ((e1 + m1) * (e2 + m2))
        jacobian = scale / mp.cos(theta) ** 2
        return kinetic * jacobian / (e1 * e2 * (e1 + e2 + m1 + m2))

    value, error = mp.quad(integrand, [0, mp.pi / 4, mp.pi / 2], error=True)
    if error > tolerance:
        raise QuadratureNotConverged(mp.nstr(error, 5), mp.nstr(tolerance, 5))
    return -(2 * system.mu**3 / mp.pi) * value


def e3_c0(system: TwoBodySystem, tolerance=QUADRATURE_TOLERANCE):
    """无对 Coulomb 修正 = 含对 − 双对"""
    return e3_c02(system) - e3_c2(system, tolerance)


def e3_c1(system: TwoBodySystem):
    """有限质量单对 Coulomb 修正"""
    m1, m2 = system.m1, system.m2
    return (2 * system.mu**3 / (3 * mp.pi)) * (2 / m1**2 - 1 / (m1 * m2) + 2 / m2**2)


def e3_c1_infty(m1):
    """m₂ → ∞ 极限下的单对 Coulomb 修正 4m₁/(3π)"""
    return 4 * mp.mpf(m1) / (3 * mp.pi)


def _require_equal_mass(system: Optional[TwoBodySystem], what: str) -> None:
    if system is None:
        return
    if not system.is_equal_mass or system.m1 != 1 or system.q1q2 != -1:
        raise DomainError(f"{what} 只对 m₁ = m₂ = 1、q₁q₂ = −1 有定义")


def e3_b_equal_mass(system: Optional[TwoBodySystem] = None):
    """等质量单个瞬时 Breit 光子交换的 α³ 修正 (1/2π)(1 + π/2)"""
    _require_equal_mass(system, "E³_B")
    return (1 + mp.pi / 2) / (2 * mp.pi)


def a4log_ps(system: Optional[TwoBodySystem] = None):
    """正电子素 Coulomb 的 α⁴lnα 系数"""
    _require_equal_mass(system, "α⁴lnα 系数")
    return -mp.mpf(1) / 16


def e2_dc_zero_crossings(m1=1):
    """
    m₂ 的两个根使 E²_DC(m₁, m₂) = 0

    Returns:
        (较小根, 较大根)
    """
    m1 = mp.mpf(m1)

    def f(m2):
        return e2_dc(TwoBodySystem(m1=m1, m2=m2))

    low = mp.findroot(f, (m1 / 10, m1 * mp.mpf("0.5")), solver="illinois")
    high = mp.findroot(f, (2 * m1, 10 * m1), solver="illinois")
    return low, high


def dirac_one_particle_energy(m1, alpha_inverse):
    """单粒子 Dirac 基态能量（扣除静能）m₁c²(√(1−α²) − 1)"""
    c = mp.mpf(alpha_inverse)
    return mp.mpf(m1) * c**2 * (mp.sqrt(1 - 1 / c**2) - 1)


def nrqed_energy(system: TwoBodySystem, model: str = "DC"):
    """
    截至 α³ 的 nrQED 能量 E_nr + α²E⁽²⁾ + α³E⁽³⁾

    DC 使用 E²_DC 与 E³_C0；DCB 使用 E²_DCB 与 E³_C0，等质量时再加 E³_B。
    """
    model = model.upper()
    alpha = system.alpha
    if model == "DC":
        second, third = e2_dc(system), e3_c0(system)
    elif model == "DCB":
        second, third = e2_dcb(system), e3_c0(system)
        if system.is_equal_mass and system.m1 == 1:
            third += e3_b_equal_mass(system)
        else:
            logger.debug("非等质量系统缺少 E³_B，DCB 的 α³ 项只含 Coulomb 部分")
    else:
        raise DomainError(f"未知模型: {model}")
    return e_nr(system) + alpha**2 * second + alpha**3 * third


def relative_importance(e_nr_value, e_dc, e_pt1=None, e_dcb=None, one_pair=None) -> Dict[str, Any]:
    """
    以 ppm 计的相对修正

    Args:
        e_nr_value: 非相对论能量
        e_dc: 无对 DC 能量
        e_pt1: DC⟨B⟩ 能量
        e_dcb: 变分 DCB 能量
        one_pair: α³E³_C1（hartree），给出时额外计算单对修正后的比值

    Returns:
        dict，键为 dc_vs_nr / pt1_vs_dc / dcb_vs_pt1 / dc_one_pair_vs_nr（缺失量对应 None）
    """
    ppm = mp.mpf(10) ** 6
    ratios: Dict[str, Any] = {
        "dc_vs_nr": (e_dc - e_nr_value) / abs(e_nr_value) * ppm,
        "pt1_vs_dc": None,
        "dcb_vs_pt1": None,
        "dc_one_pair_vs_nr": None,
    }
    if e_pt1 is not None:
        ratios["pt1_vs_dc"] = (e_pt1 - e_dc) / abs(e_dc) * ppm
        if e_dcb is not None:
            ratios["dcb_vs_pt1"] = (e_dcb - e_pt1) / abs(e_pt1) * ppm
    if one_pair is not None:
        ratios["dc_one_pair_vs_nr"] = (e_dc + one_pair - e_nr_value) / abs(e_nr_value) * ppm
    return ratios


def nrqed_report(system: TwoBodySystem) -> NrqedReport:
    """汇总一行参考系数；只对等质量系统有定义的字段在其他系统上为 None"""
    equal = system.is_equal_mass and system.m1 == 1 and system.q1q2 == -1
    c2 = e3_c2(system)
    c02 = e3_c02(system)
    report = NrqedReport(
        system=system.name,
        e_nr=e_nr(system),
        e2_dc=e2_dc(system),
        e2_b=e2_b(system),
        e2_dcb=e2_dcb(system),
        e3_c02=c02,
        e3_c2=c2,
        e3_c0=c02 - c2,
        e3_c1=e3_c1(system),
        e3_c1_infty_limit=e3_c1_infty(system.m1),
        e3_b=e3_b_equal_mass() if equal else None,
        a4log_ps=a4log_ps() if equal else None,
    )
    logger.debug(f"nrQED 参考值 ({system.name}): {report.to_dict()}")
    return report
