"""
异常定义

所有计算模块抛出的异常都继承自 NopairQedError，命令行据此区分计算失败（退出码 1）
与用法错误（退出码 2）。
"""

from __future__ import annotations

from typing import Optional


class NopairQedError(Exception):
    """本项目所有计算错误的基类"""


class NonPositiveDefinite(NopairQedError, ValueError):
    """Cholesky 分解遇到非正主元，通常意味着基组或度量矩阵数值退化"""

    def __init__(self, index: int, pivot: Optional[object] = None):
        self.index = index
        self.pivot = pivot
        detail = f"，主元值 {pivot}" if pivot is not None else ""
        super().__init__(f"矩阵非正定：第 {index} 个主元 ≤ 0{detail}")


class NoConvergence(NopairQedError):
    """迭代本征求解超过迭代上限"""

    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"本征求解未收敛（迭代上限 {iterations}）")


class RankDeficient(NopairQedError):
    """最小二乘设计矩阵列秩不足"""

    def __init__(self, column: int, pivot: Optional[object] = None):
        self.column = column
        self.pivot = pivot
        super().__init__(f"设计矩阵秩亏：第 {column} 列的三角主元 {pivot} 低于条件数下限")


class ParseError(NopairQedError, ValueError):
    """指数文件格式错误"""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"第 {line} 行解析失败: {message}")


class NonPositiveExponent(NopairQedError, ValueError):
    """高斯指数必须为正"""

    def __init__(self, value: object, line: Optional[int] = None):
        self.value = value
        self.line = line
        where = f"（第 {line} 行）" if line is not None else ""
        super().__init__(f"高斯指数必须为正，得到 {value}{where}")


class CloseExponents(NopairQedError, ValueError):
    """相邻高斯指数过于接近，基组近线性相关"""

    def __init__(self, lower: object, upper: object, threshold: object):
        self.lower = lower
        self.upper = upper
        self.threshold = threshold
        super().__init__(f"指数过于接近（相对间隔 < {threshold}）: {lower}, {upper}")


class StalledOptimization(NopairQedError):
    """
    指数优化停滞

    一个完整循环的能量下降已低于目标，但线搜索步长尚未收缩。
    只作为优化结果上的标记与日志，不作为致命错误抛出。
    """

    def __init__(self, improvement: object, step: object):
        self.improvement = improvement
        self.step = step
        super().__init__(f"指数优化停滞：循环改进 {improvement}，步长 {step}")


class AmbiguousCut(NopairQedError):
    """能量截断位置附近存在本征值，正能态识别不可靠"""

    def __init__(self, eigenvalue: object, threshold: object):
        self.eigenvalue = eigenvalue
        self.threshold = threshold
        super().__init__(f"能量截断不明确：本征值 {eigenvalue} 距截断值 {threshold} 过近")


class ResidualImaginary(NopairQedError):
    """自旋缩并后残留虚部，通常意味着张量指标顺序错误"""

    def __init__(self, residual: object, norm: object, where: str = ""):
        self.residual = residual
        self.norm = norm
        super().__init__(f"自旋缩并残留虚部 {residual}（矩阵范数 {norm}）{where}")


class DegenerateDenominator(NopairQedError):
    """二阶微扰分母近乎为零"""

    def __init__(self, index: int, gap: object):
        self.index = index
        self.gap = gap
        super().__init__(f"二阶微扰分母退化：态 {index} 的能隙 {gap}")


class IndexOutOfRange(NopairQedError, IndexError):
    """态编号超出投影谱范围"""

    def __init__(self, index: int, size: int):
        self.index = index
        self.size = size
        super().__init__(f"态编号 {index} 超出范围 [0, {size})")


class QuadratureNotConverged(NopairQedError):
    """数值积分误差估计超过容差"""

    def __init__(self, error: object, tolerance: object):
        self.error = error
        self.tolerance = tolerance
        super().__init__(f"数值积分未收敛：误差估计 {error} > 容差 {tolerance}")


class DomainError(NopairQedError, ValueError):
    """参考系数只对特定质量组合有定义"""


class ScanPointFailed(NopairQedError):
    """α 扫描中某一点计算失败，附带出错的 α⁻¹"""

    def __init__(self, alpha_inverse: object, cause: Exception):
        self.alpha_inverse = alpha_inverse
        self.cause = cause
        super().__init__(f"α⁻¹ = {alpha_inverse} 处计算失败: {cause}")
