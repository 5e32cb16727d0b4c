"""
动能平衡变换后的 Breit 块

Breit 算符 B = -q1q2 [σ₁·σ₂ / r − ½ σ₁ₐ σ₂ᵦ (∂ₐ∂ᵦ r)]，四个反对角块为

    B1 = -B (σ₁·p)(σ₂·p) / (4c²m₁m₂)
    B2 = -(σ₂·p) B (σ₁·p) / (4c²m₁m₂)
    B3 = -(σ₁·p) B (σ₂·p) / (4c²m₁m₂)
    B4 = -(σ₂·p)(σ₁·p) B / (4c²m₁m₂)

每块由 σ₁·σ₂/r 部分（库仑型空间积分）与 ∂ₐ∂ᵦr 部分（I₁/I₂ 组合）构成。
"""

from __future__ import annotations

from ..models.system import TwoBodySystem
from .gaussian import (
    ExponentPair,
    coulomb_hessian,
    grad_coulomb_grad,
    i1,
    i2,
)
from .spin import contract

BLOCK_NAMES = ("B1", "B2", "B3", "B4")


def breit_prefactor(system: TwoBodySystem):
    """P = -q1q2 / (4c²m₁m₂)"""
    return -system.q1q2 / (4 * system.c**2 * system.m1 * system.m2)


def _ket_gauge(pair: ExponentPair):
    """⟨f_μ|(∂ₐ∂ᵦ r) ∂ₖ∂ₗ|f_ν⟩"""

    def value(a, b, k, l):
        return -i1(pair, a, b, k, l) - i2(pair, b, a, k, l)

    return value


def _sandwich_gauge(pair: ExponentPair):
    """⟨∂ₖ f_μ|(∂ₐ∂ᵦ r)|∂ₗ f_ν⟩"""
    swapped = pair.swapped()

    def value(k, a, b, l):
        return -i1(swapped, l, b, a, k) - i1(pair, k, b, a, l)

    return value


def breit_block(which: str, pair: ExponentPair, system: TwoBodySystem):
    """
    计算一个 Breit 块在 (μ,ν) 空间对上的 4×4 自旋矩阵

    Args:
        which: "B1" / "B2" / "B3" / "B4"
        pair: (ζ_μ, ζ_ν)，μ 为行（bra），ν 为列（ket）
        system: 两体系统（提供 q1q2、c、质量）

    Returns:
        实的 4×4 mp.matrix，已乘以 -q1q2/(4c²m₁m₂)

    Raises:
        ResidualImaginary: 缩并后虚部残留
    """
    where = f"[{which}, ζ_μ={pair.zeta_mu}, ζ_ν={pair.zeta_nu}]"
    prefactor = breit_prefactor(system)

    if which == "B1":
        hessian = coulomb_hessian(pair)
        gaunt = contract("1212", "mmkl", lambda m, k, l: hessian(k, l), where)
        gauge = contract("1212", "abkl", _ket_gauge(pair), where)
    elif which == "B4":
        swapped = pair.swapped()
        hessian = coulomb_hessian(swapped)
        gaunt = contract("2112", "klmm", lambda k, l, m: hessian(k, l), where)
        gauge = contract("2112", "klab", _ket_gauge(swapped), where)
    elif which in ("B2", "B3"):
        gc = grad_coulomb_grad(pair)
        sandwich = _sandwich_gauge(pair)
        particles = "2121" if which == "B2" else "1122"
        gaunt = contract(particles, "kmml", lambda k, m, l: -gc(k, l), where)
        gauge = contract(particles, "kabl", lambda k, a, b, l: -sandwich(k, a, b, l), where)
    else:
        raise ValueError(f"未知的 Breit 块: {which}，可选: {', '.join(BLOCK_NAMES)}")

    return (gaunt - gauge / 2) * prefactor
