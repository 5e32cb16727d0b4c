"""
两粒子自旋空间的 Pauli 代数

σ₁ = σ ⊗ 1，σ₂ = 1 ⊗ σ，作用在 4 维两自旋空间上。Pauli 乘积的矩阵元都是
小的高斯整数，用 numpy 复数数组精确表示；与扩展精度空间积分缩并时再拆成实部和虚部。
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Callable, Sequence, Tuple

import numpy as np
from mpmath import mp

from ..errors import ResidualImaginary
from .gaussian import AXES

# 缩并后允许的相对虚部
IMAGINARY_TOLERANCE_EXPONENT = -25

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_IDENTITY2 = np.eye(2, dtype=complex)

SpinFactor = Tuple[int, int]  # (粒子 1 或 2, 笛卡尔分量 0..2)


@lru_cache(maxsize=None)
def sigma(particle: int, axis: int) -> np.ndarray:
    """粒子 particle 的 σ_axis，4×4"""
    if particle == 1:
        matrix = np.kron(_PAULI[axis], _IDENTITY2)
    elif particle == 2:
        matrix = np.kron(_IDENTITY2, _PAULI[axis])
    else:
        raise ValueError(f"粒子编号只能为 1 或 2，得到 {particle}")
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=None)
def spin_product(factors: Tuple[SpinFactor, ...]) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """
    Pauli 矩阵乘积，按从左到右的顺序相乘

    Returns:
        4×4 嵌套元组，每个元素为 (实部, 虚部) 整数对
    """
    result = np.eye(4, dtype=complex)
    for particle, axis in factors:
        result = result @ sigma(particle, axis)
    return tuple(
        tuple((int(round(result[r, c].real)), int(round(result[r, c].imag))) for c in range(4))
        for r in range(4)
    )


class SpinAccumulator:
    """累加 Σ 空间值 × 自旋乘积，分别保存实部与虚部"""

    def __init__(self):
        self.real = [[mp.mpf(0) for _ in range(4)] for _ in range(4)]
        self.imag = [[mp.mpf(0) for _ in range(4)] for _ in range(4)]

    def add(self, value, factors: Tuple[SpinFactor, ...]) -> None:
        if not value:
            return
        table = spin_product(factors)
        for r in range(4):
            row = table[r]
            for c in range(4):
                re, im = row[c]
                if re:
                    self.real[r][c] += value * re
                if im:
                    self.imag[r][c] += value * im

    def to_matrix(self, where: str = ""):
        """
        返回实的 4×4 mp.matrix

        Raises:
            ResidualImaginary: 虚部超过 10⁻²⁵ × 实部最大范数
        """
        norm = max(abs(x) for row in self.real for x in row)
        residual = max(abs(x) for row in self.imag for x in row)
        if residual > 0:
            limit = norm * mp.mpf(10) ** IMAGINARY_TOLERANCE_EXPONENT
            if residual > limit:
                raise ResidualImaginary(mp.nstr(residual, 5), mp.nstr(norm, 5), where)
        return mp.matrix(self.real)


def contract(
    particles: str,
    letters: str,
    spatial: Callable[..., object],
    where: str = "",
):
    """
    Einstein 求和：Σ σ_{p₁ a₁} σ_{p₂ a₂} … × spatial(指标)

    Args:
        particles: 每个 Pauli 因子所属的粒子，如 "1212"
        letters: 每个 Pauli 因子的指标字母，重复字母表示求和的同一指标，如 "mmkl"
        spatial: 以字母为关键字参数的空间积分函数
        where: 出错时附带的位置描述

    Returns:
        实的 4×4 mp.matrix
    """
    if len(particles) != len(letters):
        raise ValueError(f"粒子串 {particles!r} 与指标串 {letters!r} 长度不一致")
    free = []
    for letter in letters:
        if letter not in free:
            free.append(letter)

    acc = SpinAccumulator()
    for values in product(AXES, repeat=len(free)):
        env = dict(zip(free, values))
        value = spatial(**env)
        if not value:
            continue
        factors = tuple((int(p), env[letter]) for p, letter in zip(particles, letters))
        acc.add(value, factors)
    return acc.to_matrix(where)


def sigma_dot_sigma():
    """σ₁·σ₂，单态本征值 -3，三重态 +1"""
    acc = SpinAccumulator()
    for axis in AXES:
        acc.add(mp.mpf(1), ((1, axis), (2, axis)))
    return acc.to_matrix("σ₁·σ₂")


def exchange_permutation() -> Sequence[int]:
    """粒子交换在两自旋基 |s₁ s₂⟩ 上的置换：|↑↓⟩ ↔ |↓↑⟩"""
    return (0, 2, 1, 3)
