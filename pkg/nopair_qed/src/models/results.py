"""
计算结果模型

各命令输出的数据结构，均提供 to_dict 以便写出 JSON/CSV。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from mpmath import mp

MODEL_TAGS = ("DC", "DC<B>", "DCB2", "DCB")


def _s(value: Any, digits: Optional[int] = None) -> Optional[str]:
    if value is None:
        return None
    return mp.nstr(value, digits or mp.dps)


@dataclass
class BreitCorrections:
    """
    微扰 Breit 修正

    Attributes:
        n: 态编号
        e_dc: E_DC
        e_pt1: E_DC⟨B⟩
        e_pt2: E_DCB₂
    """

    n: int
    e_dc: Any
    e_pt1: Any
    e_pt2: Any

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "e_dc": _s(self.e_dc), "e_pt1": _s(self.e_pt1), "e_pt2": _s(self.e_pt2)}


@dataclass
class OptimizationResult:
    """
    指数优化结果

    Attributes:
        basis: 优化后的基组
        energy: 非相对论基态能量
        cycles: 完成的循环数
        stalled: 是否以停滞结束
        history: 每个循环结束时的能量
    """

    basis: Any
    energy: Any
    cycles: int
    stalled: bool = False
    history: List[Any] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_b": self.basis.n_b,
            "energy": _s(self.energy),
            "cycles": self.cycles,
            "stalled": self.stalled,
            "history": [_s(e, 20) for e in self.history],
        }


@dataclass
class SolveRow:
    """
    收敛表中的一行

    Attributes:
        system: 系统名
        n_b: 基组大小
        e_nr: 非相对论能量
        e_dc / e_pt1 / e_pt2 / e_dcb: 各模型能量（未计算时为 None）
    """

    system: str
    n_b: int
    e_nr: Any
    e_dc: Any = None
    e_pt1: Any = None
    e_pt2: Any = None
    e_dcb: Any = None

    COLUMNS = ("system", "n_b", "e_nr", "e_dc", "e_pt1", "e_pt2", "e_dcb")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system,
            "n_b": self.n_b,
            "e_nr": _s(self.e_nr),
            "e_dc": _s(self.e_dc),
            "e_pt1": _s(self.e_pt1),
            "e_pt2": _s(self.e_pt2),
            "e_dcb": _s(self.e_dcb),
        }


@dataclass(frozen=True)
class ScanPoint:
    """α 扫描中的一个点"""

    n: int
    alpha_inverse: Any
    energy: Any
    model: str

    @property
    def alpha(self):
        return 1 / self.alpha_inverse


@dataclass
class AlphaScan:
    """
    同一系统、基组、模型下的一组 (α⁻¹, 能量)

    Attributes:
        system: 系统名
        n_b: 基组大小
        model: 模型标签
        points: 按 n 排序的扫描点
    """

    system: str
    n_b: int
    model: str
    points: List[ScanPoint] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for point in self.points:
            key = mp.nstr(point.alpha_inverse, mp.dps)
            if key in seen:
                raise ValueError(f"α⁻¹ 重复: {key}")
            seen.add(key)
            if point.model != self.model:
                raise ValueError(f"扫描点模型 {point.model} 与扫描模型 {self.model} 不一致")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def alphas(self) -> List[Any]:
        return [p.alpha for p in self.points]

    @property
    def energies(self) -> List[Any]:
        return [p.energy for p in self.points]


@dataclass
class FitResult:
    """
    F(α) = ε₀ + α²ε₂ + α³ε₃ + α⁴lnα ε₄′ + α⁴ε₄ (+ α⁵ε₅ + α⁵lnα ε₅′) 的拟合系数

    Attributes:
        eps0, eps2, eps3, eps4log, eps4: 系数（不含对数项时 eps4log 为 None）
        eps5, eps5log: 可选的五阶系数
        rms_residual: 均方根残差
        points_used: 参与拟合的点数
        model: 模型标签
    """

    eps0: Any
    eps2: Any
    eps3: Any
    eps4log: Any
    eps4: Any
    rms_residual: Any
    points_used: int
    model: str = ""
    eps5: Any = None
    eps5log: Any = None

    def evaluate(self, alpha) -> Any:
        alpha = mp.mpf(alpha)
        value = self.eps0 + alpha**2 * self.eps2 + alpha**3 * self.eps3 + alpha**4 * self.eps4
        if self.eps4log is not None:
            value += alpha**4 * mp.log(alpha) * self.eps4log
        if self.eps5 is not None:
            value += alpha**5 * self.eps5
        if self.eps5log is not None:
            value += alpha**5 * mp.log(alpha) * self.eps5log
        return value

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "model": self.model,
            "eps0": _s(self.eps0),
            "eps2": _s(self.eps2),
            "eps3": _s(self.eps3),
            "eps4log": _s(self.eps4log),
            "eps4": _s(self.eps4),
            "rms_residual": _s(self.rms_residual, 6),
            "points_used": self.points_used,
        }
        if self.eps5 is not None:
            data["eps5"] = _s(self.eps5)
            data["eps5log"] = _s(self.eps5log)
        return data


@dataclass
class NrqedReport:
    """
    nrQED 参考系数（hartree 为单位的 α 幂次系数）

    只对特定质量组合有定义的字段为 None。
    """

    system: str
    e_nr: Any
    e2_dc: Any
    e2_b: Any
    e2_dcb: Any
    e3_c02: Any
    e3_c2: Any
    e3_c0: Any
    e3_c1: Any
    e3_c1_infty_limit: Any
    e3_b: Any = None
    a4log_ps: Any = None

    FIELDS = (
        "e_nr",
        "e2_dc",
        "e2_b",
        "e2_dcb",
        "e3_c02",
        "e3_c2",
        "e3_c0",
        "e3_c1",
        "e3_c1_infty_limit",
        "e3_b",
        "a4log_ps",
    )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"system": self.system}
        for name in self.FIELDS:
            data[name] = _s(getattr(self, name), 15)
        return data
