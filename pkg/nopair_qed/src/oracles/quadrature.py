"""
积分的数值求积验证器

与解析公式完全独立：先对高斯函数做符号求导，得到 Σ c·x_{i1}…x_{id}·g 的展开；
单位球面上 n_{i1}…n_{id} 的角平均取精确值（完全配对数 / (d+1)!!）；
剩余的径向矩 ∫ 4π r^{2+p} N_μN_ν e^{-(ζ_μ+ζ_ν) r²} dr 由 tanh-sinh 求积给出。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp

from ..errors import QuadratureNotConverged
from ..integrals.gaussian import AXES, ExponentPair

Term = Tuple[Tuple[int, ...], object]


@dataclass(frozen=True)
class QuadratureSpec:
    """
    一维径向求积任务

    Attributes:
        name: 被积函数标识（用于报错）
        integrand: r ↦ 被积函数值（已含 4πr²）
        scale: 区间分割点（通常取 ζ^{-1/2}），积分区间为 [0, scale, ∞)
        tolerance: 误差估计上限
        relative: tolerance 是否相对于 |积分值|
        max_degree: tanh-sinh 最大细分层数
    """

    name: str
    integrand: Callable[[object], object] = field(compare=False)
    scale: object = 1
    tolerance: Optional[object] = None
    relative: bool = True
    max_degree: int = 10

    def resolved_tolerance(self, value):
        tolerance = (
            mp.mpf(self.tolerance)
            if self.tolerance is not None
            else mp.mpf(10) ** (-(mp.dps - 6))
        )
        if self.relative:
            tolerance *= max(abs(value), mp.mpf(10) ** (-mp.dps))
        return tolerance


def quad_radial(spec: QuadratureSpec):
    """
    在 [0, scale, ∞) 上求积

    Returns:
        (值, 误差估计)

    Raises:
        QuadratureNotConverged: 误差估计超过 tolerance
    """
    value, error = mp.quad(
        spec.integrand,
        [0, mp.mpf(spec.scale), mp.inf],
        error=True,
        maxdegree=spec.max_degree,
    )
    tolerance = spec.resolved_tolerance(value)
    if error > tolerance:
        raise QuadratureNotConverged(mp.nstr(error, 5), mp.nstr(tolerance, 5))
    return value, error


def radial_moment(pair: ExponentPair, power: int):
    """∫₀^∞ 4π r^{2+power} N_μN_ν e^{-s r²} dr（power ≥ −2）"""
    s = pair.zeta_sum
    norms = pair.norm_mu * pair.norm_nu
    spec = QuadratureSpec(
        name=f"moment[{power}]",
        integrand=lambda r: 4 * mp.pi * r ** (2 + power) * norms * mp.exp(-s * r**2),
        scale=1 / mp.sqrt(s),
    )
    return quad_radial(spec)[0]


@lru_cache(maxsize=None)
def _matchings(indices: Tuple[int, ...]) -> int:
    """把 indices 两两配对且每对指标相同的方案数"""
    if not indices:
        return 1
    first, rest = indices[0], indices[1:]
    total = 0
    for pos, other in enumerate(rest):
        if other == first:
            total += _matchings(rest[:pos] + rest[pos + 1 :])
    return total


def angular_average(indices: Sequence[int]):
    """单位球面上 ⟨n_{i1} … n_{id}⟩"""
    d = len(indices)
    if d % 2:
        return mp.mpf(0)
    count = _matchings(tuple(sorted(indices)))
    if not count:
        return mp.mpf(0)
    return mp.mpf(count) / mp.fac2(d + 1)


def derivative_terms(zeta, axes: Sequence[int]) -> List[Term]:
    """
    ∂_{axes} e^{-ζr²} = Σ c · Π x · e^{-ζr²}

    Returns:
        [(坐标单项式指标, 系数), ...]
    """
    terms: Dict[Tuple[int, ...], object] = {(): mp.mpf(1)}
    for axis in axes:
        nxt: Dict[Tuple[int, ...], object] = {}
        for mono, coef in terms.items():
            for pos, factor in enumerate(mono):
                if factor == axis:
                    reduced = mono[:pos] + mono[pos + 1 :]
                    nxt[reduced] = nxt.get(reduced, mp.mpf(0)) + coef
            grown = tuple(sorted(mono + (axis,)))
            nxt[grown] = nxt.get(grown, mp.mpf(0)) - 2 * zeta * coef
        terms = {m: c for m, c in nxt.items() if c}
    return list(terms.items())


def matrix_element(
    pair: ExponentPair,
    bra_axes: Sequence[int] = (),
    ket_axes: Sequence[int] = (),
    operator_axes: Sequence[int] = (),
    r_power: int = 0,
):
    """
    ⟨∂_{bra} f_μ | x_{op} r^{r_power} | ∂_{ket} f_ν⟩

    由符号求导、精确角平均与求积得到的径向矩组合而成。
    """
    bra = derivative_terms(pair.zeta_mu, bra_axes)
    ket = derivative_terms(pair.zeta_nu, ket_axes)
    moments: Dict[int, object] = {}
    total = mp.mpf(0)
    for m_bra, c_bra in bra:
        for m_ket, c_ket in ket:
            indices = m_bra + tuple(operator_axes) + m_ket
            average = angular_average(indices)
            if not average:
                continue
            power = len(indices) + r_power
            if power not in moments:
                moments[power] = radial_moment(pair, power)
            total += c_bra * c_ket * average * moments[power]
    return total


# ========== 各积分的独立计算 ==========


def oracle_overlap(pair: ExponentPair):
    return matrix_element(pair)


def oracle_coulomb(pair: ExponentPair):
    return matrix_element(pair, r_power=-1)


def oracle_laplacian(pair: ExponentPair):
    return mp.fsum(matrix_element(pair, ket_axes=(i, i)) for i in AXES)


def oracle_biharmonic(pair: ExponentPair):
    """⟨∇²f_μ|∇²f_ν⟩"""
    return mp.fsum(
        matrix_element(pair, bra_axes=(i, i), ket_axes=(j, j)) for i in AXES for j in AXES
    )


def oracle_f1(pair: ExponentPair, i: int, j: int):
    return matrix_element(pair, operator_axes=(i, j), r_power=-1)


def oracle_f2(pair: ExponentPair, i: int, j: int, k: int, l: int):
    return matrix_element(pair, operator_axes=(i, j, k, l), r_power=-1)


def oracle_grad_coulomb_grad(pair: ExponentPair, i: int, j: int):
    return matrix_element(pair, bra_axes=(i,), ket_axes=(j,), r_power=-1)


def oracle_gradgrad_coulomb_gradgrad(pair: ExponentPair, i: int, j: int, k: int, l: int):
    return matrix_element(pair, bra_axes=(i, j), ket_axes=(k, l), r_power=-1)


def oracle_coulomb_hessian(pair: ExponentPair, k: int, l: int):
    return matrix_element(pair, ket_axes=(k, l), r_power=-1)


def oracle_i1(pair: ExponentPair, i: int, j: int, k: int, l: int):
    """⟨∂_j f_μ|x_i/r|∂_k∂_l f_ν⟩"""
    return matrix_element(pair, bra_axes=(j,), ket_axes=(k, l), operator_axes=(i,), r_power=-1)


def oracle_i2(pair: ExponentPair, i: int, j: int, k: int, l: int):
    """⟨f_μ|x_i/r|∂_j∂_k∂_l f_ν⟩"""
    return matrix_element(pair, ket_axes=(j, k, l), operator_axes=(i,), r_power=-1)


def oracle_distance_hessian(pair: ExponentPair, a: int, b: int, k: int, l: int):
    """⟨f_μ|(∂ₐ∂ᵦ r) ∂ₖ∂ₗ|f_ν⟩，∂ₐ∂ᵦ r = δₐᵦ/r − xₐxᵦ/r³"""
    value = -matrix_element(pair, ket_axes=(k, l), operator_axes=(a, b), r_power=-3)
    if a == b:
        value += matrix_element(pair, ket_axes=(k, l), r_power=-1)
    return value


def oracle_distance_hessian_sandwich(pair: ExponentPair, k: int, a: int, b: int, l: int):
    """⟨∂ₖ f_μ|(∂ₐ∂ᵦ r)|∂ₗ f_ν⟩"""
    value = -matrix_element(pair, bra_axes=(k,), ket_axes=(l,), operator_axes=(a, b), r_power=-3)
    if a == b:
        value += matrix_element(pair, bra_axes=(k,), ket_axes=(l,), r_power=-1)
    return value
