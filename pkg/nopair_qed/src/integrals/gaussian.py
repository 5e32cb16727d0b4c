"""
球对称高斯函数的解析矩阵元

基函数 f(r) = N exp(-ζ r²)，N = (2ζ/π)^{3/4}。记 a = ζ_μ（左），b = ζ_ν（右），s = a + b。
所有积分以 1/r 作为库仑核，电荷乘积 q1q2 由调用方乘上。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, Tuple

from mpmath import mp

AXES = (0, 1, 2)
AXIS_NAMES = "xyz"

# 四阶 δ 结构的三种配对
PAIRINGS = ("ij_kl", "ik_jl", "il_jk")


def delta(i: int, j: int) -> int:
    return 1 if i == j else 0


def pairing_value(pattern: str, i: int, j: int, k: int, l: int) -> int:
    if pattern == "ij_kl":
        return delta(i, j) * delta(k, l)
    if pattern == "ik_jl":
        return delta(i, k) * delta(j, l)
    if pattern == "il_jk":
        return delta(i, l) * delta(j, k)
    raise ValueError(f"未知的 δ 配对: {pattern}")


def delta_sum(i: int, j: int, k: int, l: int) -> int:
    """δ_ij δ_kl + δ_ik δ_jl + δ_il δ_jk"""
    return delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)


@dataclass(frozen=True)
class ExponentPair:
    """
    一对高斯指数

    Attributes:
        zeta_mu: 左侧（bra）指数
        zeta_nu: 右侧（ket）指数
    """

    zeta_mu: object
    zeta_nu: object

    def __post_init__(self):
        mu = mp.mpf(self.zeta_mu)
        nu = mp.mpf(self.zeta_nu)
        if mu <= 0 or nu <= 0:
            raise ValueError(f"高斯指数必须为正: ζ_μ={mu}, ζ_ν={nu}")
        object.__setattr__(self, "zeta_mu", mu)
        object.__setattr__(self, "zeta_nu", nu)

    @property
    def zeta_sum(self):
        return self.zeta_mu + self.zeta_nu

    @cached_property
    def norm_mu(self):
        return (2 * self.zeta_mu / mp.pi) ** mp.mpf(0.75)

    @cached_property
    def norm_nu(self):
        return (2 * self.zeta_nu / mp.pi) ** mp.mpf(0.75)

    @cached_property
    def f1_scalar(self):
        """F₁ 的 δ_ij 系数 (4/3)√(2/π)(ab)^{3/4}/s²"""
        a, b, s = self.zeta_mu, self.zeta_nu, self.zeta_sum
        return mp.mpf(4) / 3 * mp.sqrt(2 / mp.pi) * (a * b) ** mp.mpf(0.75) / s**2

    @cached_property
    def f2_scalar(self):
        """F₂ 的 δ 配对系数 (8/15)√(2/π)(ab)^{3/4}/s³"""
        a, b, s = self.zeta_mu, self.zeta_nu, self.zeta_sum
        return mp.mpf(8) / 15 * mp.sqrt(2 / mp.pi) * (a * b) ** mp.mpf(0.75) / s**3

    def swapped(self) -> "ExponentPair":
        return ExponentPair(self.zeta_nu, self.zeta_mu)


@dataclass(frozen=True)
class CartesianTensorValue:
    """
    以 Kronecker δ 结构表示的笛卡尔张量

    rank 2 时只有 "ij" 一项；rank 4 时为 PAIRINGS 三种配对的线性组合。

    Attributes:
        rank: 2 或 4
        prefactors: 配对名 -> 标量系数
    """

    rank: int
    prefactors: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.rank not in (2, 4):
            raise ValueError(f"张量阶数只能为 2 或 4，得到 {self.rank}")
        allowed = ("ij",) if self.rank == 2 else PAIRINGS
        for key in self.prefactors:
            if key not in allowed:
                raise ValueError(f"{self.rank} 阶张量不允许配对 {key}")

    def component(self, *indices: int):
        if len(indices) != self.rank:
            raise ValueError(f"需要 {self.rank} 个指标，得到 {len(indices)}")
        if self.rank == 2:
            i, j = indices
            return self.prefactors.get("ij", mp.mpf(0)) * delta(i, j)
        total = mp.mpf(0)
        for pattern, coefficient in self.prefactors.items():
            if pairing_value(pattern, *indices):
                total += coefficient
        return total

    def __call__(self, *indices: int):
        return self.component(*indices)

    def trace(self):
        """rank 2：Σ_i T_ii"""
        if self.rank != 2:
            raise ValueError("只对二阶张量定义迹")
        return 3 * self.prefactors.get("ij", mp.mpf(0))


# ========== 标量积分 ==========


def overlap(pair: ExponentPair):
    """⟨f_μ|f_ν⟩ = (4ab)^{3/4} / s^{3/2}"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    return (4 * a * b) ** mp.mpf(0.75) / s ** mp.mpf(1.5)


def coulomb(pair: ExponentPair):
    """⟨f_μ|1/r|f_ν⟩ = √(32/π) (ab)^{3/4} / s"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    return mp.sqrt(32 / mp.pi) * (a * b) ** mp.mpf(0.75) / s


def laplacian(pair: ExponentPair):
    """⟨f_μ|∇²|f_ν⟩"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    first = -6 * a * (4 * a * b) ** mp.mpf(0.75) / s ** mp.mpf(1.5)
    second = 12 * mp.sqrt(2) * a ** mp.mpf(2.75) * b ** mp.mpf(0.75) / s ** mp.mpf(2.5)
    return first + second


def kinetic_p2(pair: ExponentPair):
    """⟨f_μ|p²|f_ν⟩ = -⟨f_μ|∇²|f_ν⟩"""
    return -laplacian(pair)


def biharmonic(pair: ExponentPair):
    """⟨f_μ|∇²∇²|f_ν⟩ = 120√2 (ab)^{11/4} / s^{7/2}"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    return 120 * mp.sqrt(2) * (a * b) ** mp.mpf(2.75) / s ** mp.mpf(3.5)


# ========== 张量积分 ==========


def f1(pair: ExponentPair) -> CartesianTensorValue:
    """F₁(i,j) = ⟨f_μ|x_i x_j / r|f_ν⟩"""
    return CartesianTensorValue(2, {"ij": pair.f1_scalar})


def f2(pair: ExponentPair) -> CartesianTensorValue:
    """F₂(i,j,k,l) = ⟨f_μ|x_i x_j x_k x_l / r|f_ν⟩"""
    value = pair.f2_scalar
    return CartesianTensorValue(4, {p: value for p in PAIRINGS})


def grad_coulomb_grad(pair: ExponentPair) -> CartesianTensorValue:
    """⟨∂_i f_μ|1/r|∂_j f_ν⟩ = δ_ij (16/3)√(2/π) a^{7/4} b^{7/4} / s²"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    value = mp.mpf(16) / 3 * mp.sqrt(2 / mp.pi) * (a * b) ** mp.mpf(1.75) / s**2
    return CartesianTensorValue(2, {"ij": value})


def gradgrad_coulomb_gradgrad(pair: ExponentPair) -> CartesianTensorValue:
    """⟨∂_i∂_j f_μ|1/r|∂_k∂_l f_ν⟩"""
    a, b, s = pair.zeta_mu, pair.zeta_nu, pair.zeta_sum
    norms = pair.norm_mu * pair.norm_nu
    first = norms * 8 * mp.pi / 3 * a * b / s
    second = norms * 64 * mp.pi * a**2 * b**2 / (15 * s**3)
    return CartesianTensorValue(
        4, {"ij_kl": first + second, "ik_jl": second, "il_jk": second}
    )


def coulomb_hessian(pair: ExponentPair) -> CartesianTensorValue:
    """⟨f_μ|(1/r) ∂_k∂_l|f_ν⟩ = -2b δ_kl V + 4b² F₁(k,l)"""
    b = pair.zeta_nu
    value = -2 * b * coulomb(pair) + 4 * b**2 * pair.f1_scalar
    return CartesianTensorValue(2, {"ij": value})


def i1(pair: ExponentPair, i: int, j: int, k: int, l: int):
    """I₁(μ,ν,i,j,k,l) = 4ab δ_kl F₁(i,j) − 8ab² F₂(i,j,k,l)，μ↔ν 不对称"""
    a, b = pair.zeta_mu, pair.zeta_nu
    value = mp.mpf(0)
    if k == l and i == j:
        value += 4 * a * b * pair.f1_scalar
    ds = delta_sum(i, j, k, l)
    if ds:
        value -= 8 * a * b**2 * pair.f2_scalar * ds
    return value


def i2(pair: ExponentPair, i: int, j: int, k: int, l: int):
    """I₂(μ,ν,i,j,k,l) = 4b²[δ_jk F₁(i,l) + δ_jl F₁(i,k) + δ_kl F₁(i,j)] − 8b³ F₂(i,j,k,l)"""
    b = pair.zeta_nu
    ds = delta_sum(i, j, k, l)
    if not ds:
        return mp.mpf(0)
    return (4 * b**2 * pair.f1_scalar - 8 * b**3 * pair.f2_scalar) * ds


def tensor_components(tensor: CartesianTensorValue) -> Dict[Tuple[int, ...], object]:
    """展开为全部 3^rank 个分量（用于测试与调试）"""
    return {idx: tensor.component(*idx) for idx in product(AXES, repeat=tensor.rank)}
