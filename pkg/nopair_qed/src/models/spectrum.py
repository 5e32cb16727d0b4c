"""
正能投影相关的数据模型
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from mpmath import mp

from .basis import BasisSet
from .system import TwoBodySystem

SPIN_DIM = 4


@dataclass
class ProjectorBasis:
    """
    正能（++）子空间的基

    空间部分为 4n_b 维裸空间问题的最高 n_b 个本征向量，再与 4 个两自旋态直积，
    共 4n_b 列。投影坐标编号 p = s·n_b + k（s 为自旋，k 为空间态）。

    Attributes:
        n_b: 空间基函数个数
        spatial_vectors: (4n_b)×n_b，列关于空间度量正交归一
        spatial_energies: 被选中的 n_b 个裸本征值（升序）
        rejected_energies: 被舍弃的 3n_b 个裸本征值（升序）
        cut: 截断能量 E_cut = -m_min c²
    """

    n_b: int
    spatial_vectors: Any
    spatial_energies: List[Any]
    rejected_energies: List[Any]
    cut: Any

    @property
    def count(self) -> int:
        return SPIN_DIM * self.n_b

    def energy(self, p: int):
        """投影坐标 p 对应的裸能量"""
        return self.spatial_energies[p % self.n_b]

    def bare_energies(self) -> List[Any]:
        return [self.energy(p) for p in range(self.count)]

    def lifted_vectors(self):
        """16n_b × 4n_b 的完整投影基矩阵"""
        n_b = self.n_b
        out = mp.matrix(16 * n_b, self.count)
        for s in range(SPIN_DIM):
            for k in range(n_b):
                col = s * n_b + k
                for beta in range(4):
                    for mu in range(n_b):
                        value = self.spatial_vectors[beta * n_b + mu, k]
                        if value:
                            out[(SPIN_DIM * beta + s) * n_b + mu, col] = value
        return out


@dataclass
class ProjectedSpectrum:
    """
    投影问题的谱

    Attributes:
        model: "DC" 或 "DCB"
        system: 两体系统
        basis: 空间基组
        eigenvalues: 升序本征值（hartree，++ 分支位于 0 附近）
        eigenvectors: 投影坐标下的正交归一本征向量（按列）
        projector: 所用的投影基
        projected_interaction: 投影坐标下的相互作用矩阵
        projected_breit: 投影坐标下的 Breit 矩阵（微扰计算时填充）
    """

    model: str
    system: TwoBodySystem
    basis: BasisSet
    eigenvalues: List[Any]
    eigenvectors: Any
    projector: ProjectorBasis
    projected_interaction: Optional[Any] = None
    projected_breit: Optional[Any] = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.eigenvalues)

    @property
    def ground_energy(self):
        return self.eigenvalues[0]

    def state(self, n: int):
        return self.eigenvectors[:, n]

    def to_dict(self, n_values: int = 5) -> Dict[str, Any]:
        return {
            "model": self.model,
            "system": self.system.to_dict(),
            "n_b": self.basis.n_b,
            "lowest": [mp.nstr(v, mp.dps) for v in self.eigenvalues[:n_values]],
        }
