"""
16·n_b 维动能平衡变换算符矩阵的组装

基函数编号：index = (4·block + spin)·n_b + μ，其中 block ∈ {ll, ls, sl, ss}，
spin 为两自旋基 |s₁s₂⟩ 的编号，μ 为空间高斯函数编号（空间指标变化最快）。

裸哈密顿量与度量只含自旋单位阵，可以写成 (4n_b 空间矩阵) ⊗ 1⁽⁴⁾；
库仑与 Breit 相互作用含自旋结构，按 4×4 自旋块写入。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Union

from mpmath import mp

from ..integrals.breit import BLOCK_NAMES, breit_block
from ..integrals.gaussian import (
    ExponentPair,
    biharmonic,
    coulomb,
    grad_coulomb_grad,
    gradgrad_coulomb_gradgrad,
    kinetic_p2,
    overlap,
)
from ..integrals.spin import contract, exchange_permutation
from ..linalg.dense import max_abs, symmetry_defect
from ..models.basis import BasisSet
from ..models.system import TwoBodySystem
from ..utils.logger import get_logger

logger = get_logger(__name__)

COMPONENT_BLOCKS = ("ll", "ls", "sl", "ss")
SPIN_DIM = 4
SYMMETRY_TOLERANCE_EXPONENT = -25

# Breit 块在 4×4 分量块网格中的位置
BREIT_PLACEMENT = {"B1": (0, 3), "B2": (1, 2), "B3": (2, 1), "B4": (3, 0)}


@dataclass
class OperatorMatrix:
    """
    16·n_b 维算符矩阵

    Attributes:
        kind: 算符名（metric / bare / coulomb / breit / ...）
        n_b: 空间基函数个数
        data: mp.matrix
        symmetry_defect: 显式对称化之前的 ‖M − Mᵀ‖_max
    """

    kind: str
    n_b: int
    data: object
    symmetry_defect: object = field(default_factory=lambda: mp.mpf(0))

    @property
    def dim(self) -> int:
        return 16 * self.n_b

    def index(self, block: int, spin: int, mu: int) -> int:
        return (SPIN_DIM * block + spin) * self.n_b + mu

    def component_block(self, row_block: int, col_block: int):
        """取出 (4n_b)×(4n_b) 的分量块"""
        size = SPIN_DIM * self.n_b
        r0, c0 = row_block * size, col_block * size
        return self.data[r0 : r0 + size, c0 : c0 + size]

    def spin_block(self, s: int, t: int):
        """
        取出固定自旋对 (s, t) 的 (4n_b)×(4n_b) 空间矩阵

        行列编号为 block·n_b + μ。
        """
        n_b = self.n_b
        size = len(COMPONENT_BLOCKS) * n_b
        out = mp.matrix(size, size)
        for beta in range(4):
            for gamma in range(4):
                for mu in range(n_b):
                    row = self.index(beta, s, mu)
                    for nu in range(n_b):
                        value = self.data[row, self.index(gamma, t, nu)]
                        if value:
                            out[beta * n_b + mu, gamma * n_b + nu] = value
        return out

    def max_norm(self):
        return max_abs(self.data)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.n_b != other.n_b:
            raise ValueError(f"基组大小不一致: {self.n_b} vs {other.n_b}")
        return OperatorMatrix(
            kind=f"{self.kind}+{other.kind}",
            n_b=self.n_b,
            data=self.data + other.data,
            symmetry_defect=max(self.symmetry_defect, other.symmetry_defect),
        )

    def scaled(self, factor) -> "OperatorMatrix":
        return OperatorMatrix(self.kind, self.n_b, self.data * factor, self.symmetry_defect)


MetricMatrix = OperatorMatrix


def _table(basis: BasisSet, integral: Callable[[ExponentPair], object]) -> List[List[object]]:
    """对称空间积分表，只计算 μ ≥ ν"""
    n_b = basis.n_b
    table = [[mp.mpf(0)] * n_b for _ in range(n_b)]
    for mu in range(n_b):
        for nu in range(mu + 1):
            value = integral(ExponentPair(basis[mu], basis[nu]))
            table[mu][nu] = value
            table[nu][mu] = value
    return table


def _spatial_from_blocks(n_b: int, blocks: Dict[tuple, List[List[object]]]):
    size = len(COMPONENT_BLOCKS) * n_b
    out = mp.matrix(size, size)
    for (beta, gamma), table in blocks.items():
        for mu in range(n_b):
            for nu in range(n_b):
                value = table[mu][nu]
                if value:
                    out[beta * n_b + mu, gamma * n_b + nu] = value
    return out


def _scale_table(table, factor):
    return [[value * factor for value in row] for row in table]


def spatial_metric(system: TwoBodySystem, basis: BasisSet):
    """
    4n_b 维空间度量 diag(S, p²/(4c²m₂²), p²/(4c²m₁²), p⁴/(16c⁴m₁²m₂²))
    """
    c2 = system.c**2
    m1, m2 = system.m1, system.m2
    s = _table(basis, overlap)
    p2 = _table(basis, kinetic_p2)
    p4 = _table(basis, biharmonic)
    return _spatial_from_blocks(
        basis.n_b,
        {
            (0, 0): s,
            (1, 1): _scale_table(p2, 1 / (4 * c2 * m2**2)),
            (2, 2): _scale_table(p2, 1 / (4 * c2 * m1**2)),
            (3, 3): _scale_table(p4, 1 / (16 * c2**2 * m1**2 * m2**2)),
        },
    )


def spatial_bare(system: TwoBodySystem, basis: BasisSet):
    """
    4n_b 维裸（无相互作用）哈密顿量空间矩阵，含 -2mc² 平移
    """
    c2 = system.c**2
    m1, m2, m12 = system.m1, system.m2, system.m12
    p2 = _table(basis, kinetic_p2)
    p4 = _table(basis, biharmonic)

    kin2 = _scale_table(p2, 1 / (2 * m2))
    kin1 = _scale_table(p2, 1 / (2 * m1))
    quart2 = _scale_table(p4, 1 / (8 * c2 * m1 * m2**2))
    quart1 = _scale_table(p4, 1 / (8 * c2 * m1**2 * m2))

    return _spatial_from_blocks(
        basis.n_b,
        {
            (0, 1): kin2,
            (1, 0): kin2,
            (0, 2): kin1,
            (2, 0): kin1,
            (1, 1): _scale_table(kin2, -1),
            (2, 2): _scale_table(kin1, -1),
            (1, 3): quart2,
            (3, 1): quart2,
            (2, 3): quart1,
            (3, 2): quart1,
            (3, 3): _scale_table(p4, -m12 / (8 * m1**2 * m2**2 * c2)),
        },
    )


def _lift_spin_identity(kind: str, n_b: int, spatial) -> OperatorMatrix:
    """空间矩阵 ⊗ 1⁽⁴⁾"""
    operator = OperatorMatrix(kind=kind, n_b=n_b, data=mp.matrix(16 * n_b, 16 * n_b))
    for beta in range(4):
        for gamma in range(4):
            for mu in range(n_b):
                for nu in range(n_b):
                    value = spatial[beta * n_b + mu, gamma * n_b + nu]
                    if not value:
                        continue
                    for spin in range(SPIN_DIM):
                        operator.data[
                            operator.index(beta, spin, mu), operator.index(gamma, spin, nu)
                        ] = value
    return operator


def assemble_metric(system: TwoBodySystem, basis: BasisSet) -> MetricMatrix:
    """X-KB 度量 I_KB = X†X"""
    metric = _lift_spin_identity("metric", basis.n_b, spatial_metric(system, basis))
    logger.debug(f"度量矩阵组装完成: dim={metric.dim}")
    return metric


def assemble_bare(system: TwoBodySystem, basis: BasisSet) -> OperatorMatrix:
    """裸哈密顿量（无 V 与 B 块）"""
    bare = _lift_spin_identity("bare", basis.n_b, spatial_bare(system, basis))
    logger.debug(f"裸哈密顿量组装完成: dim={bare.dim}")
    return bare


def _place_spin_block(
    operator: OperatorMatrix, row_block: int, col_block: int, mu: int, nu: int, block
) -> None:
    for s in range(SPIN_DIM):
        for t in range(SPIN_DIM):
            value = block[s, t]
            if value:
                operator.data[
                    operator.index(row_block, s, mu), operator.index(col_block, t, nu)
                ] = value


def _finalize(operator: OperatorMatrix) -> OperatorMatrix:
    """记录对称性偏差后显式对称化"""
    data = operator.data
    defect = symmetry_defect(data)
    norm = max_abs(data)
    operator.symmetry_defect = defect
    if norm and defect > norm * mp.mpf(10) ** SYMMETRY_TOLERANCE_EXPONENT:
        logger.warning(
            f"{operator.kind} 矩阵对称性偏差过大: {mp.nstr(defect, 5)}（范数 {mp.nstr(norm, 5)}）"
        )
    for i in range(data.rows):
        for j in range(i):
            if data[i, j] or data[j, i]:
                avg = (data[i, j] + data[j, i]) / 2
                data[i, j] = avg
                data[j, i] = avg
    logger.debug(
        f"{operator.kind} 矩阵组装完成: dim={operator.dim}, 对称性偏差={mp.nstr(defect, 3)}"
    )
    return operator


def assemble_coulomb(system: TwoBodySystem, basis: BasisSet) -> OperatorMatrix:
    """
    库仑相互作用的对角块 D₁…D₄ 中含 V 的部分

    D₁: q V；D₂: q (σ₂·p)V(σ₂·p)/(4m₂²c²)；D₃: q (σ₁·p)V(σ₁·p)/(4m₁²c²)；
    D₄: q (σ₁·p)(σ₂·p)V(σ₁·p)(σ₂·p)/(16m₁²m₂²c⁴)。
    """
    n_b = basis.n_b
    q = system.q1q2
    c2 = system.c**2
    m1, m2 = system.m1, system.m2
    operator = OperatorMatrix(kind="coulomb", n_b=n_b, data=mp.matrix(16 * n_b, 16 * n_b))
    if not q:
        return _finalize(operator)

    identity = mp.eye(SPIN_DIM)
    d2_scale = q / (4 * m2**2 * c2)
    d3_scale = q / (4 * m1**2 * c2)
    d4_scale = q / (16 * m1**2 * m2**2 * c2**2)

    for mu in range(n_b):
        for nu in range(mu + 1):
            pair = ExponentPair(basis[mu], basis[nu])
            where = f"[库仑, μ={mu}, ν={nu}]"
            gc = grad_coulomb_grad(pair)
            gg = gradgrad_coulomb_gradgrad(pair)
            blocks = {
                0: identity * (q * coulomb(pair)),
                1: contract("22", "kl", lambda k, l: gc(k, l), where) * d2_scale,
                2: contract("11", "kl", lambda k, l: gc(k, l), where) * d3_scale,
                3: contract("1212", "ijkl", lambda i, j, k, l: gg(i, j, k, l), where) * d4_scale,
            }
            for block, spin_matrix in blocks.items():
                _place_spin_block(operator, block, block, mu, nu, spin_matrix)
                if mu != nu:
                    _place_spin_block(operator, block, block, nu, mu, spin_matrix.T)
    return _finalize(operator)


def assemble_breit(system: TwoBodySystem, basis: BasisSet) -> OperatorMatrix:
    """
    Breit 相互作用，B1…B4 位于 4×4 分量块网格的反对角线

    四个块都独立计算，对称性偏差反映 B1/B4 与 B2/B3 两两之间的一致性。
    """
    n_b = basis.n_b
    operator = OperatorMatrix(kind="breit", n_b=n_b, data=mp.matrix(16 * n_b, 16 * n_b))
    if not system.q1q2:
        return _finalize(operator)

    for mu in range(n_b):
        for nu in range(n_b):
            pair = ExponentPair(basis[mu], basis[nu])
            for name in BLOCK_NAMES:
                row_block, col_block = BREIT_PLACEMENT[name]
                _place_spin_block(
                    operator, row_block, col_block, mu, nu, breit_block(name, pair, system)
                )
    return _finalize(operator)


def assemble_interaction(system: TwoBodySystem, basis: BasisSet, model: str) -> OperatorMatrix:
    """DC 只含库仑；DCB 含库仑与 Breit"""
    model = model.upper()
    coulomb_matrix = assemble_coulomb(system, basis)
    if model == "DC":
        return coulomb_matrix
    if model == "DCB":
        return coulomb_matrix + assemble_breit(system, basis)
    raise ValueError(f"未知模型: {model}，可选: DC, DCB")


def exchange_blocks(operator: OperatorMatrix) -> OperatorMatrix:
    """
    粒子交换：分量块 ls ↔ sl，同时交换两自旋 |s₁s₂⟩ → |s₂s₁⟩
    """
    block_perm = (0, 2, 1, 3)
    spin_perm = exchange_permutation()
    n_b = operator.n_b
    dim = operator.dim
    perm = [0] * dim
    for beta in range(4):
        for spin in range(SPIN_DIM):
            for mu in range(n_b):
                perm[operator.index(beta, spin, mu)] = operator.index(
                    block_perm[beta], spin_perm[spin], mu
                )
    data = mp.matrix(dim, dim)
    for i in range(dim):
        for j in range(dim):
            value = operator.data[i, j]
            if value:
                data[perm[i], perm[j]] = value
    return OperatorMatrix(
        kind=f"{operator.kind}(exchanged)",
        n_b=n_b,
        data=data,
        symmetry_defect=operator.symmetry_defect,
    )


def dump_matrix(operator: OperatorMatrix, path: Union[str, Path]) -> Path:
    """
    以 `row col value` 三元组文本写出非零元（全精度）

    Returns:
        写入的路径
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# {operator.kind} dim={operator.dim} n_b={operator.n_b} precision={mp.dps}\n")
        for i in range(operator.dim):
            for j in range(operator.dim):
                value = operator.data[i, j]
                if value:
                    f.write(f"{i} {j} {mp.nstr(value, mp.dps + 3, strip_zeros=False)}\n")
                    count += 1
    logger.info(f"已写出 {operator.kind} 矩阵 {count} 个非零元到 {path}")
    return path
