"""
能量截断构造正能投影并求解投影问题
"""

from __future__ import annotations

from typing import Optional

from mpmath import mp

from ..errors import AmbiguousCut
from ..hamiltonian.assembler import (
    OperatorMatrix,
    SPIN_DIM,
    assemble_interaction,
    spatial_bare,
    spatial_metric,
)
from ..linalg.dense import eigh_sym, geneig_sym
from ..models.basis import BasisSet
from ..models.spectrum import ProjectedSpectrum, ProjectorBasis
from ..models.system import TwoBodySystem
from ..utils.logger import get_logger

logger = get_logger(__name__)

# 截断附近的禁区宽度（以 m_min c² 为单位）
CUT_MARGIN = mp.mpf("1e-3")


def energy_cut(system: TwoBodySystem):
    """E_cut = -m_min c²，位于 ++ 分支（≈0）与第一条负能分支（≈-2m_min c²）中间"""
    return -system.m_min * system.c**2


def build_projector(system: TwoBodySystem, basis: BasisSet) -> ProjectorBasis:
    """
    对角化裸哈密顿量，保留能量最高的 4n_b 个态

    裸哈密顿量与度量都是 (空间矩阵) ⊗ 1⁽⁴⁾，因此只需对角化 4n_b 维空间问题，
    选出最高的 n_b 个空间态，每个态与 4 个自旋态直积。

    Args:
        system: 两体系统
        basis: 空间基组

    Returns:
        ProjectorBasis

    Raises:
        AmbiguousCut: 有本征值落在截断附近，或按个数选出的态与阈值判断不一致
    """
    n_b = basis.n_b
    decomposition = geneig_sym(spatial_bare(system, basis), spatial_metric(system, basis))
    values = decomposition.values

    cut = energy_cut(system)
    margin = CUT_MARGIN * system.m_min * system.c**2
    rejected = values[: 3 * n_b]
    selected = values[3 * n_b :]

    for value in values:
        if abs(value - cut) < margin:
            raise AmbiguousCut(mp.nstr(value, 15), mp.nstr(cut, 15))
    if selected[0] <= cut:
        raise AmbiguousCut(mp.nstr(selected[0], 15), mp.nstr(cut, 15))
    if rejected[-1] >= cut:
        raise AmbiguousCut(mp.nstr(rejected[-1], 15), mp.nstr(cut, 15))

    vectors = mp.matrix(4 * n_b, n_b)
    for k in range(n_b):
        for i in range(4 * n_b):
            vectors[i, k] = decomposition.vectors[i, 3 * n_b + k]

    logger.debug(
        f"投影基构造完成: 选中 {SPIN_DIM * n_b} 个态，最低裸能量 {mp.nstr(selected[0], 10)}，"
        f"最高舍弃能量 {mp.nstr(rejected[-1], 10)}，截断 {mp.nstr(cut, 10)}"
    )
    return ProjectorBasis(
        n_b=n_b,
        spatial_vectors=vectors,
        spatial_energies=list(selected),
        rejected_energies=list(rejected),
        cut=cut,
    )


def project(projector: ProjectorBasis, operator: OperatorMatrix):
    """
    Uᵀ M U，U 为提升到 16n_b 维的投影基

    按自旋对 (s, t) 分块计算，每块为 (n_b×4n_b)(4n_b×4n_b)(4n_b×n_b)。

    Returns:
        4n_b×4n_b mp.matrix
    """
    n_b = projector.n_b
    u = projector.spatial_vectors
    ut = u.T
    out = mp.matrix(projector.count, projector.count)
    for s in range(SPIN_DIM):
        for t in range(SPIN_DIM):
            block = operator.spin_block(s, t)
            if not any(block[i, j] for i in range(block.rows) for j in range(block.cols)):
                continue
            reduced = ut * block * u
            for k in range(n_b):
                for kk in range(n_b):
                    out[s * n_b + k, t * n_b + kk] = reduced[k, kk]
    return out


def projected_hamiltonian(projector: ProjectorBasis, interaction, coupling=1):
    """diag(ε) + coupling · interaction（投影坐标）"""
    size = projector.count
    h = mp.matrix(size, size)
    for i in range(size):
        for j in range(size):
            value = interaction[i, j]
            if value:
                h[i, j] = coupling * value
        h[i, i] += projector.energy(i)
    # 消除舍入导致的非对称
    for i in range(size):
        for j in range(i):
            avg = (h[i, j] + h[j, i]) / 2
            h[i, j] = avg
            h[j, i] = avg
    return h


def solve_projected(
    system: TwoBodySystem,
    basis: BasisSet,
    model: str,
    projector: Optional[ProjectorBasis] = None,
    interaction: Optional[OperatorMatrix] = None,
) -> ProjectedSpectrum:
    """
    求解无对 DC / DCB 本征问题

    Args:
        system: 两体系统
        basis: 空间基组
        model: "DC" 或 "DCB"
        projector: 已构造的投影基（可选，复用以节省时间）
        interaction: 已组装的相互作用矩阵（可选）

    Returns:
        ProjectedSpectrum，基态为最低本征值
    """
    model = model.upper()
    if projector is None:
        projector = build_projector(system, basis)
    if interaction is None:
        interaction = assemble_interaction(system, basis, model)

    projected = project(projector, interaction)
    decomposition = eigh_sym(projected_hamiltonian(projector, projected))

    logger.info(
        f"{model} 投影求解完成: n_b={basis.n_b}, 基态 {mp.nstr(decomposition.values[0], 16)}"
    )
    return ProjectedSpectrum(
        model=model,
        system=system,
        basis=basis,
        eigenvalues=decomposition.values,
        eigenvectors=decomposition.vectors,
        projector=projector,
        projected_interaction=projected,
    )


def lowest_with_coupling(projector: ProjectorBasis, coulomb_projected, breit_projected, coupling):
    """DC + coupling·Breit 的最低本征值，用于 Hellmann–Feynman 检验"""
    size = projector.count
    combined = mp.matrix(size, size)
    for i in range(size):
        for j in range(size):
            combined[i, j] = coulomb_projected[i, j] + coupling * breit_projected[i, j]
    return eigh_sym(projected_hamiltonian(projector, combined), eigvals_only=True).values[0]
