"""
扩展精度稠密线性代数

提供对称矩阵容器、Cholesky 分解、广义对称本征问题与 QR 最小二乘。
底层矩阵运算全部交给 mpmath（mp.matrix / mp.cholesky / mp.eigsy / mp.qr）。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from mpmath import mp

from ..errors import NoConvergence, NonPositiveDefinite, RankDeficient
from ..utils.logger import get_logger

logger = get_logger(__name__)

# 最小二乘三角主元相对下限
RANK_FLOOR_EXPONENT = -25


class SymMatrix:
    """
    对称矩阵

    只由下三角构造，上三角镜像写入，因此 A - Aᵀ 严格为零。

    Attributes:
        dim: 维数
        data: mp.matrix 数据
    """

    def __init__(self, dim: int):
        if dim <= 0:
            raise ValueError(f"矩阵维数必须为正，得到 {dim}")
        self.dim = dim
        self.data = mp.matrix(dim, dim)

    @classmethod
    def from_function(cls, dim: int, entry: Callable[[int, int], object]) -> "SymMatrix":
        """按 entry(i, j)（i ≥ j）逐元素构造"""
        sym = cls(dim)
        for i in range(dim):
            for j in range(i + 1):
                value = mp.mpf(entry(i, j))
                sym.data[i, j] = value
                sym.data[j, i] = value
        return sym

    @classmethod
    def from_matrix(cls, matrix) -> "SymMatrix":
        """取已有方阵的下三角构造对称矩阵"""
        matrix = matrix if isinstance(matrix, mp.matrix) else mp.matrix(matrix)
        if matrix.rows != matrix.cols:
            raise ValueError(f"需要方阵，得到 {matrix.rows}×{matrix.cols}")
        return cls.from_function(matrix.rows, lambda i, j: matrix[i, j])

    @classmethod
    def identity(cls, dim: int) -> "SymMatrix":
        return cls.from_function(dim, lambda i, j: 1 if i == j else 0)

    def __getitem__(self, key):
        return self.data[key]

    def max_norm(self):
        return max_abs(self.data)

    def congruence(self, q) -> "SymMatrix":
        """返回 Qᵀ A Q"""
        return SymMatrix.from_matrix(q.T * self.data * q)

    def __repr__(self) -> str:
        return f"SymMatrix(dim={self.dim})"


@dataclass
class EigenDecomposition:
    """
    广义本征分解结果

    Attributes:
        values: 升序本征值
        vectors: 以列存放、关于度量 S 正交归一的本征向量
    """

    values: List
    vectors: Optional[object] = None

    @property
    def dim(self) -> int:
        return len(self.values)

    def vector(self, index: int):
        if self.vectors is None:
            raise ValueError("该分解只计算了本征值")
        return self.vectors[:, index]


def max_abs(matrix) -> object:
    """矩阵元素绝对值的最大值"""
    best = mp.mpf(0)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            value = abs(matrix[i, j])
            if value > best:
                best = value
    return best


def symmetry_defect(matrix) -> object:
    """‖A - Aᵀ‖_max"""
    defect = mp.mpf(0)
    for i in range(matrix.rows):
        for j in range(i):
            value = abs(matrix[i, j] - matrix[j, i])
            if value > defect:
                defect = value
    return defect


def _as_matrix(a):
    return a.data if isinstance(a, SymMatrix) else a


def _locate_bad_pivot(a) -> int:
    """
    二分定位第一个非正定的顺序主子式

    mp.cholesky 只报告失败而不给出位置。
    """
    lo, hi = 1, a.rows
    while lo < hi:
        mid = (lo + hi) // 2
        try:
            mp.cholesky(a[0:mid, 0:mid])
            lo = mid + 1
        except ValueError:
            hi = mid
    return lo - 1


def cholesky(s) -> object:
    """
    Cholesky 分解 S = L Lᵀ

    Args:
        s: 对称正定矩阵（SymMatrix 或 mp.matrix）

    Returns:
        下三角因子 L（mp.matrix）

    Raises:
        NonPositiveDefinite: 某个主元 ≤ 机器精度 eps（对角已缩放到 1 的量级）
    """
    a = _as_matrix(s)
    try:
        return mp.cholesky(a)
    except ValueError as e:
        if "positive-definite" not in str(e):
            raise
        index = _locate_bad_pivot(a)
        logger.debug(f"Cholesky 失败于第 {index} 个主元（维数 {a.rows}）")
        raise NonPositiveDefinite(index) from e


def _diagonal_scaling(s) -> List:
    """度量对角元的 -1/2 次方，用于对称对角缩放 D·A·D"""
    scales = []
    for i in range(s.rows):
        diag = s[i, i]
        if diag <= 0:
            raise NonPositiveDefinite(i, diag)
        scales.append(1 / mp.sqrt(diag))
    return scales


def _scaled(a, scales) -> object:
    n = a.rows
    out = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = a[i, j] * scales[i] * scales[j]
    return out


def _reduce_to_standard(a, lower) -> object:
    """构造 C = L⁻¹ A L⁻ᵀ（利用对称性只做两次三角求解）"""
    n = a.rows
    # W = L⁻¹ A，逐列求解
    w = mp.matrix(n, n)
    for j in range(n):
        column = _lower_solve(lower, a[:, j])
        for i in range(n):
            w[i, j] = column[i]
    # C = W L⁻ᵀ = (L⁻¹ Wᵀ)ᵀ
    c = mp.matrix(n, n)
    wt = w.T
    for j in range(n):
        column = _lower_solve(lower, wt[:, j])
        for i in range(n):
            c[j, i] = column[i]
    # 消除舍入导致的非对称
    for i in range(n):
        for j in range(i):
            avg = (c[i, j] + c[j, i]) / 2
            c[i, j] = avg
            c[j, i] = avg
    return c


def _lower_solve(lower, b) -> object:
    """下三角前代求解 L x = b"""
    n = lower.rows
    x = mp.matrix(n, 1)
    for i in range(n):
        total = b[i] - mp.fdot((lower[i, k], x[k]) for k in range(i))
        x[i] = total / lower[i, i]
    return x


def _upper_solve(upper, y) -> object:
    """上三角回代求解 U x = y"""
    n = upper.rows
    x = mp.matrix(n, 1)
    for i in range(n - 1, -1, -1):
        total = y[i] - mp.fdot((upper[i, k], x[k]) for k in range(i + 1, n))
        x[i] = total / upper[i, i]
    return x


def _eigsy(c, eigvals_only: bool):
    try:
        return mp.eigsy(c, eigvals_only=eigvals_only)
    except RuntimeError as e:
        if "no convergence" not in str(e):
            raise
        raise NoConvergence(2 * mp.dps) from e


def geneig_sym(a, s, eigvals_only: bool = False) -> EigenDecomposition:
    """
    求解广义对称本征问题 A v = λ S v

    步骤：对称对角缩放 → Cholesky 约化为标准问题 → mp.eigsy
    （Householder 三对角化 + 隐式 QL）→ 回代得到 S 正交归一的本征向量。

    Args:
        a: 对称矩阵 A
        s: 对称正定度量 S
        eigvals_only: 只计算本征值

    Returns:
        EigenDecomposition，本征值升序

    Raises:
        NonPositiveDefinite: S 非正定
        NoConvergence: 本征迭代超过上限
    """
    a = _as_matrix(a)
    s = _as_matrix(s)
    if a.rows != s.rows or a.rows != a.cols or s.rows != s.cols:
        raise ValueError(f"矩阵维数不匹配: A {a.rows}×{a.cols}, S {s.rows}×{s.cols}")

    scales = _diagonal_scaling(s)
    a_scaled = _scaled(a, scales)
    s_scaled = _scaled(s, scales)

    lower = cholesky(s_scaled)
    c = _reduce_to_standard(a_scaled, lower)

    if eigvals_only:
        values = _eigsy(c, True)
        ordered = sorted(values[i] for i in range(c.rows))
        return EigenDecomposition(values=ordered)

    values, y = _eigsy(c, False)
    n = c.rows
    order = sorted(range(n), key=lambda i: values[i])

    upper = lower.T
    vectors = mp.matrix(n, n)
    for col, idx in enumerate(order):
        x = _upper_solve(upper, y[:, idx])
        for i in range(n):
            vectors[i, col] = x[i] * scales[i]
    return EigenDecomposition(values=[values[i] for i in order], vectors=vectors)


def lowest_eigenvalue(a, s) -> object:
    """只返回广义本征问题的最低本征值"""
    return geneig_sym(a, s, eigvals_only=True).values[0]


def eigen_residual(a, s, decomposition: EigenDecomposition) -> object:
    """max_i ‖A vᵢ − λᵢ S vᵢ‖_max"""
    a = _as_matrix(a)
    s = _as_matrix(s)
    worst = mp.mpf(0)
    for k, value in enumerate(decomposition.values):
        v = decomposition.vectors[:, k]
        r = a * v - value * (s * v)
        for i in range(r.rows):
            if abs(r[i]) > worst:
                worst = abs(r[i])
    return worst


def least_squares(design, rhs, floor_exponent: int = RANK_FLOOR_EXPONENT) -> Tuple[List, object]:
    """
    Householder QR 线性最小二乘

    先把每一列缩放到单位 2-范数，再做 QR，避免 α⁴lnα 与 α⁴ 列近共线时的精度损失。

    Args:
        design: n×k 设计矩阵
        rhs: 长度为 n 的右端向量
        floor_exponent: 三角主元相对下限 10^floor_exponent

    Returns:
        (系数列表, 均方根残差)

    Raises:
        RankDeficient: 三角主元低于下限
        ValueError: n < k
    """
    design = design if isinstance(design, mp.matrix) else mp.matrix(design)
    rhs = rhs if isinstance(rhs, mp.matrix) else mp.matrix(list(rhs))
    n, k = design.rows, design.cols
    if n < k:
        raise ValueError(f"方程数 {n} 少于未知数 {k}")
    if rhs.rows != n:
        raise ValueError(f"右端长度 {rhs.rows} 与设计矩阵行数 {n} 不一致")

    col_norms = []
    scaled = mp.matrix(n, k)
    for j in range(k):
        norm = mp.sqrt(mp.fsum(design[i, j] ** 2 for i in range(n)))
        if norm == 0:
            raise RankDeficient(j, mp.mpf(0))
        col_norms.append(norm)
        for i in range(n):
            scaled[i, j] = design[i, j] / norm

    if k == 1:
        r_diag = [mp.mpf(1)]
        coef_scaled = [mp.fdot((scaled[i, 0], rhs[i]) for i in range(n))]
    else:
        q, r = mp.qr(scaled, mode="skinny")
        r_diag = [abs(r[j, j]) for j in range(k)]
        r_max = max(r_diag)
        floor = r_max * mp.mpf(10) ** floor_exponent
        for j, pivot in enumerate(r_diag):
            if pivot <= floor:
                raise RankDeficient(j, pivot)
        qtb = mp.matrix(k, 1)
        for j in range(k):
            qtb[j] = mp.fdot((q[i, j], rhs[i]) for i in range(n))
        solution = _upper_solve(r[0:k, 0:k], qtb)
        coef_scaled = [solution[j] for j in range(k)]

    coefficients = [coef_scaled[j] / col_norms[j] for j in range(k)]

    sq = mp.mpf(0)
    for i in range(n):
        predicted = mp.fdot((design[i, j], coefficients[j]) for j in range(k))
        sq += (rhs[i] - predicted) ** 2
    rms = mp.sqrt(sq / n)
    logger.debug(f"最小二乘完成: {n} 个点, {k} 个参数, rms={mp.nstr(rms, 5)}")
    return coefficients, rms


def eigh_sym(a, eigvals_only: bool = False) -> EigenDecomposition:
    """标准对称本征问题（度量为单位阵），本征值升序"""
    a = _as_matrix(a)
    if eigvals_only:
        values = _eigsy(a, True)
        return EigenDecomposition(values=sorted(values[i] for i in range(a.rows)))
    values, vectors = _eigsy(a, False)
    n = a.rows
    order = sorted(range(n), key=lambda i: values[i])
    ordered = mp.matrix(n, n)
    for col, idx in enumerate(order):
        for i in range(n):
            ordered[i, col] = vectors[i, idx]
    return EigenDecomposition(values=[values[i] for i in order], vectors=ordered)
