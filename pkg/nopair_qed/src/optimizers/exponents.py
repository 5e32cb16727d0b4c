"""
非相对论基态求解与高斯指数优化

指数以 tᵢ = ln ζᵢ 参数化：先在偶调和（even-tempered）网格 ζᵢ = a·bⁱ 上粗扫 (a, b)，
再逐坐标做黄金分割线搜索。每次扫描后沿扫描总位移外推，并在 ln ζ 上做一次
联合 Newton 步，直到一个完整循环的能量下降小于目标值。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional, Sequence

from mpmath import mp

from ..errors import NopairQedError, StalledOptimization
from ..integrals.gaussian import ExponentPair, coulomb, kinetic_p2, overlap
from ..linalg.dense import geneig_sym
from ..models.basis import BasisSet
from ..models.results import OptimizationResult
from ..models.system import TwoBodySystem
from ..utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TARGET = mp.mpf("1e-12")

# 粗扫网格：a 以 μ² 为单位取 10 的半整数次幂，b 为公比
COARSE_LOG10_A = tuple(k / 2 for k in range(-8, 2))
COARSE_RATIOS = ("1.6", "2.0", "2.6", "3.4", "4.5")

# 能量不再下降而 ln ζ 仍移动超过此值时视为停滞
STALL_MOVE = mp.mpf("1e-2")

# 与其他指数的最小相对间隔
MIN_SEPARATION = mp.mpf("1e-8")

# 联合 Newton 步：中心差分步长、Hessian 本征值相对下限、ln ζ 上的最大位移
NEWTON_FD_STEP = mp.mpf("1e-5")
NEWTON_EIGEN_FLOOR = mp.mpf("1e-10")
NEWTON_MAX_MOVE = mp.mpf("0.5")


@dataclass
class NonrelativisticSolution:
    """
    非相对论基态

    Attributes:
        energy: 基态能量（hartree）
        coefficients: 展开系数（关于重叠矩阵归一）
        basis: 所用基组
    """

    energy: Any
    coefficients: Any
    basis: BasisSet


class NonrelativisticPencil:
    """
    非相对论矩阵束 (H, S)，H = p²/(2μ) + q₁q₂/r

    改变单个指数时只重算对应的行与列。
    """

    def __init__(self, system: TwoBodySystem, exponents: Sequence[Any]):
        self.system = system
        self.exponents = [mp.mpf(z) for z in exponents]
        n = len(self.exponents)
        self.h = mp.matrix(n, n)
        self.s = mp.matrix(n, n)
        for i in range(n):
            for j in range(i + 1):
                self._fill(i, j)

    def _fill(self, i: int, j: int) -> None:
        pair = ExponentPair(self.exponents[i], self.exponents[j])
        h = kinetic_p2(pair) / (2 * self.system.mu) + self.system.q1q2 * coulomb(pair)
        s = overlap(pair)
        self.h[i, j] = self.h[j, i] = h
        self.s[i, j] = self.s[j, i] = s

    def with_exponent(self, index: int, zeta) -> "NonrelativisticPencil":
        other = NonrelativisticPencil.__new__(NonrelativisticPencil)
        other.system = self.system
        other.exponents = list(self.exponents)
        other.exponents[index] = mp.mpf(zeta)
        other.h = self.h.copy()
        other.s = self.s.copy()
        for j in range(len(other.exponents)):
            other._fill(index, j)
        return other

    def lowest(self):
        return geneig_sym(self.h, self.s, eigvals_only=True).values[0]


def solve_nonrelativistic(system: TwoBodySystem, basis: BasisSet) -> NonrelativisticSolution:
    """
    非相对论基态能量与系数

    求 n_b×n_b 矩阵束 (⟨f|−∇²|f⟩/(2μ) + q₁q₂⟨f|1/r|f⟩, S) 的最低本征值，
    它是 −μ/2 的变分上界。

    Raises:
        NonPositiveDefinite: 重叠矩阵非正定（指数几乎重合）
    """
    pencil = NonrelativisticPencil(system, list(basis))
    decomposition = geneig_sym(pencil.h, pencil.s)
    return NonrelativisticSolution(
        energy=decomposition.values[0],
        coefficients=decomposition.vector(0),
        basis=basis,
    )


def single_gaussian_optimum(system: TwoBodySystem):
    """单个高斯函数的解析最优：ζ = 8μ²/(9π)，E = −4μ/(3π)（q₁q₂ = −1）"""
    mu = system.mu
    return 8 * mu**2 / (9 * mp.pi), -4 * mu / (3 * mp.pi)


def _safe_energy(build, *args):
    """指数非法或重叠矩阵非正定时返回 +inf，使线搜索自然避开"""
    try:
        return build(*args).lowest()
    except (NopairQedError, ValueError, ZeroDivisionError):
        return mp.inf


def _coarse_scan(system: TwoBodySystem, n_b: int) -> BasisSet:
    mu2 = system.mu**2
    best = (mp.inf, None)
    ratios = COARSE_RATIOS if n_b > 1 else ("2.0",)
    for log10_a in COARSE_LOG10_A:
        a = mu2 * mp.mpf(10) ** mp.mpf(log10_a)
        for ratio in ratios:
            b = mp.mpf(ratio)
            exponents = [a * b**i for i in range(n_b)]
            energy = _safe_energy(NonrelativisticPencil, system, exponents)
            if energy < best[0]:
                best = (energy, (a, b))
    if best[1] is None:
        raise NopairQedError("偶调和粗扫没有得到任何有效基组")
    a, b = best[1]
    logger.debug(f"粗扫最优: a={mp.nstr(a, 8)}, b={mp.nstr(b, 4)}, E={mp.nstr(best[0], 15)}")
    return BasisSet.even_tempered(a, b, n_b)


def _golden_section(func, lo, hi, tolerance=mp.mpf("1e-9")):
    """在 [lo, hi] 上对单峰函数做黄金分割搜索，返回 (x, f(x))"""
    inv_phi = 1 / mp.phi
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1 = func(x1)
    f2 = func(x2)
    while hi - lo > tolerance:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = func(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _line_search(pencil: NonrelativisticPencil, index: int, energy, step, tolerance):
    """
    沿 t_index 方向的一维最小化

    先以步长 step 向下降方向扩张括区，再在括区内黄金分割。

    Returns:
        (新 pencil, 新能量, t 的位移)
    """
    t0 = mp.log(pencil.exponents[index])

    others = [z for k, z in enumerate(pencil.exponents) if k != index]

    def at(t):
        zeta = mp.exp(t)
        if any(abs(zeta - z) < MIN_SEPARATION * max(zeta, z) for z in others):
            return mp.inf
        return _safe_energy(pencil.with_exponent, index, zeta)

    f_minus = at(t0 - step)
    f_plus = at(t0 + step)
    if f_minus >= energy and f_plus >= energy:
        lo, hi = t0 - step, t0 + step
    else:
        direction = 1 if f_plus < f_minus else -1
        prev_t = t0
        t, f = t0 + direction * step, min(f_plus, f_minus)
        width = step
        for _ in range(40):
            width *= 2
            nxt = t + direction * width
            f_next = at(nxt)
            if f_next >= f:
                break
            prev_t, t, f = t, nxt, f_next
        else:
            nxt = t
        lo, hi = sorted((prev_t, nxt))

    t_best, f_best = _golden_section(at, lo, hi, tolerance=tolerance)
    if f_best >= energy:
        return pencil, energy, mp.mpf(0)
    return pencil.with_exponent(index, mp.exp(t_best)), f_best, t_best - t0


def _log_exponents(pencil: NonrelativisticPencil) -> List[Any]:
    return [mp.log(z) for z in pencil.exponents]


def _energy_at_logs(system: TwoBodySystem, logs: Sequence[Any]):
    exponents = sorted(mp.exp(t) for t in logs)
    for lower, upper in zip(exponents, exponents[1:]):
        if upper - lower < MIN_SEPARATION * upper:
            return mp.inf
    return _safe_energy(NonrelativisticPencil, system, [mp.exp(t) for t in logs])


def _pattern_move(pencil: NonrelativisticPencil, t_start: Sequence[Any], energy, tolerance):
    """
    沿一次完整扫描的总位移 d 外推：最小化 E(t + λd)，λ ≥ 0

    逐坐标下降在狭长谷底呈锯齿状前进，整体位移方向近似谷底方向。

    Returns:
        (新 pencil, 新能量)
    """
    t_end = _log_exponents(pencil)
    direction = [b - a for a, b in zip(t_start, t_end)]
    if max(abs(x) for x in direction) < tolerance:
        return pencil, energy

    def along(lam):
        return _energy_at_logs(pencil.system, [t + lam * d for t, d in zip(t_end, direction)])

    prev_lam, lam, f = mp.mpf(0), mp.mpf(1), along(1)
    if f >= energy:
        return pencil, energy
    for _ in range(40):
        nxt = 2 * lam + 1
        f_next = along(nxt)
        if f_next >= f:
            break
        prev_lam, lam, f = lam, nxt, f_next
    else:
        nxt = lam
    lam_best, f_best = _golden_section(along, prev_lam, nxt, tolerance=tolerance)
    if f_best >= energy:
        return pencil, energy
    logger.debug(f"外推步 λ={mp.nstr(lam_best, 6)}: E={mp.nstr(f_best, 16)}")
    exponents = [mp.exp(t + lam_best * d) for t, d in zip(t_end, direction)]
    return NonrelativisticPencil(pencil.system, exponents), f_best


def _newton_step(pencil: NonrelativisticPencil, energy, step=NEWTON_FD_STEP):
    """
    ln ζ 上的联合 Newton 步

    梯度与 Hessian 由中心差分得到；Hessian 本征值取绝对值并设下限，
    再沿修正后的 Newton 方向回溯，只接受能量下降的步。

    Returns:
        (新 pencil, 新能量)
    """
    n = len(pencil.exponents)
    t0 = _log_exponents(pencil)

    def shifted(*moves):
        p = pencil
        for index, delta in moves:
            p = p.with_exponent(index, mp.exp(t0[index] + delta))
        return p.lowest()

    try:
        plus = [shifted((i, step)) for i in range(n)]
        minus = [shifted((i, -step)) for i in range(n)]
        hessian = mp.matrix(n, n)
        for i in range(n):
            hessian[i, i] = (plus[i] - 2 * energy + minus[i]) / step**2
            for j in range(i):
                value = (
                    shifted((i, step), (j, step))
                    - shifted((i, step), (j, -step))
                    - shifted((i, -step), (j, step))
                    + shifted((i, -step), (j, -step))
                ) / (4 * step**2)
                hessian[i, j] = hessian[j, i] = value
        eigenvalues, vectors = mp.eigsy(hessian)
    except (NopairQedError, ValueError, ZeroDivisionError, RuntimeError):
        return pencil, energy
    gradient = [(plus[i] - minus[i]) / (2 * step) for i in range(n)]
    values = [eigenvalues[k] for k in range(n)]

    floor = max(abs(v) for v in values) * NEWTON_EIGEN_FLOOR
    if floor == 0:
        return pencil, energy
    delta = [mp.mpf(0)] * n
    for k in range(n):
        weight = mp.fsum(vectors[i, k] * gradient[i] for i in range(n)) / max(abs(values[k]), floor)
        for i in range(n):
            delta[i] -= weight * vectors[i, k]
    longest = max(abs(x) for x in delta)
    if longest == 0:
        return pencil, energy
    if longest > NEWTON_MAX_MOVE:
        delta = [x * NEWTON_MAX_MOVE / longest for x in delta]

    scale = mp.mpf(1)
    for _ in range(30):
        trial = [t + scale * d for t, d in zip(t0, delta)]
        f = _energy_at_logs(pencil.system, trial)
        if f < energy:
            logger.debug(f"Newton 步 (缩放 {mp.nstr(scale, 3)}): E={mp.nstr(f, 16)}")
            return NonrelativisticPencil(pencil.system, [mp.exp(t) for t in trial]), f
        scale /= 2
    return pencil, energy


def optimize_exponents(
    system: TwoBodySystem,
    n_b: int,
    target=DEFAULT_TARGET,
    initial: Optional[BasisSet] = None,
    max_cycles: int = 200,
    line_tolerance=mp.mpf("1e-9"),
    accelerate: bool = True,
) -> OptimizationResult:
    """
    最小化非相对论基态能量的指数优化

    Args:
        system: 两体系统
        n_b: 基函数个数
        target: 一个完整循环的能量下降阈值（hartree）
        initial: 初始基组（缺省时由偶调和粗扫给出）
        max_cycles: 循环数上限
        line_tolerance: 线搜索在 ln ζ 上的收敛宽度
        accelerate: 每次扫描后是否追加外推步与联合 Newton 步

    Returns:
        OptimizationResult；若能量已停止下降而坐标仍在大幅移动，stalled 为 True

    Raises:
        ValueError: n_b < 1 或 target ≤ 0
    """
    if n_b < 1:
        raise ValueError(f"n_b 必须 ≥ 1，得到 {n_b}")
    target = mp.mpf(target)
    if target <= 0:
        raise ValueError(f"target 必须为正，得到 {target}")
    if initial is not None and initial.n_b != n_b:
        raise ValueError(f"初始基组大小 {initial.n_b} 与 n_b={n_b} 不一致")

    logger.info("=" * 60)
    logger.info(f"指数优化: system={system.name}, n_b={n_b}, target={mp.nstr(target, 3)}")
    logger.info("=" * 60)

    basis = initial if initial is not None else _coarse_scan(system, n_b)
    pencil = NonrelativisticPencil(system, list(basis))
    energy = pencil.lowest()
    step = mp.log(2) if n_b > 1 else mp.mpf(1)
    history: List[Any] = [energy]
    stalled = False
    cycle = 0

    for cycle in range(1, max_cycles + 1):
        start = energy
        t_start = _log_exponents(pencil)
        largest_move = mp.mpf(0)
        for index in range(n_b):
            pencil, energy, moved = _line_search(pencil, index, energy, step, line_tolerance)
            largest_move = max(largest_move, abs(moved))
        if accelerate and n_b > 1:
            swept = energy
            pencil, energy = _pattern_move(pencil, t_start, energy, line_tolerance)
            pencil, energy = _newton_step(pencil, energy)
            logger.debug(f"循环 {cycle} 加速步下降 {mp.nstr(swept - energy, 3)}")
        improvement = start - energy
        history.append(energy)
        logger.info(
            f"循环 {cycle}: E={mp.nstr(energy, 16)}, 下降 {mp.nstr(improvement, 3)}, "
            f"最大位移 {mp.nstr(largest_move, 3)}"
        )
        if improvement < target:
            if largest_move > STALL_MOVE:
                stalled = True
                logger.warning(str(StalledOptimization(mp.nstr(improvement, 3), mp.nstr(largest_move, 3))))
            break
        step = max(largest_move, 8 * line_tolerance, mp.mpf("1e-3"))
    else:
        stalled = True
        logger.warning(f"达到循环上限 {max_cycles}，优化未收敛")

    result_basis = BasisSet(pencil.exponents)
    logger.info(f"指数优化完成: E_nr={mp.nstr(energy, 16)}, 距 −μ/2 {mp.nstr(energy + system.mu / 2, 5)}")
    return OptimizationResult(
        basis=result_basis, energy=energy, cycles=cycle, stalled=stalled, history=history
    )
