"""
两体系统模型

定义粒子质量、电荷乘积与精细结构常数，以及常用的预设系统。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from mpmath import mp

# CODATA 2018
DEFAULT_ALPHA_INVERSE = "137.035999084"

MUON_MASS_RATIO = "206.7682830"
PROTON_MASS_RATIO = "1836.15267343"
MUONIC_PROTON_RATIO = "8.88024337"
HEAVY_HYDROGEN_RATIO = "18361.5267343"


@dataclass(frozen=True)
class TwoBodySystem:
    """
    两体系统

    质量以电子质量为单位，能量以 hartree 为单位，c = α⁻¹。

    Attributes:
        m1: 粒子1质量
        m2: 粒子2质量
        q1q2: 电荷乘积（预设系统均为 -1）
        alpha_inverse: 精细结构常数倒数
        name: 系统名称
    """

    m1: Any
    m2: Any
    q1q2: Any = -1
    alpha_inverse: Any = DEFAULT_ALPHA_INVERSE
    name: str = "custom"

    def __post_init__(self):
        for attr in ("m1", "m2", "q1q2", "alpha_inverse"):
            value = getattr(self, attr)
            if isinstance(value, float):
                value = repr(value)
            object.__setattr__(self, attr, mp.mpf(value))
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValueError(f"质量必须为正: m1={self.m1}, m2={self.m2}")
        if self.alpha_inverse <= 0:
            raise ValueError(f"α⁻¹ 必须为正，得到 {self.alpha_inverse}")

    @property
    def c(self):
        """光速（hartree 原子单位）"""
        return self.alpha_inverse

    @property
    def alpha(self):
        return 1 / self.alpha_inverse

    @property
    def mu(self):
        """约化质量"""
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def m_min(self):
        return min(self.m1, self.m2)

    @property
    def m12(self):
        return self.m1 + self.m2

    @property
    def is_equal_mass(self) -> bool:
        return self.m1 == self.m2

    def with_alpha_inverse(self, alpha_inverse) -> "TwoBodySystem":
        """返回只改变 α 的新系统（用于 α 扫描）"""
        return TwoBodySystem(self.m1, self.m2, self.q1q2, alpha_inverse, self.name)

    def swapped(self) -> "TwoBodySystem":
        """交换两个粒子"""
        return TwoBodySystem(self.m2, self.m1, self.q1q2, self.alpha_inverse, self.name)

    def scaled(self, factor) -> "TwoBodySystem":
        """两个质量同乘 factor"""
        factor = mp.mpf(factor)
        return TwoBodySystem(
            self.m1 * factor, self.m2 * factor, self.q1q2, self.alpha_inverse, self.name
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "m1": mp.nstr(self.m1, mp.dps),
            "m2": mp.nstr(self.m2, mp.dps),
            "q1q2": mp.nstr(self.q1q2, mp.dps),
            "alpha_inverse": mp.nstr(self.alpha_inverse, mp.dps),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TwoBodySystem":
        return cls(
            m1=data["m1"],
            m2=data["m2"],
            q1q2=data.get("q1q2", -1),
            alpha_inverse=data.get("alpha_inverse", DEFAULT_ALPHA_INVERSE),
            name=data.get("name", "custom"),
        )


@dataclass(frozen=True)
class SystemPreset:
    """
    预设系统

    Attributes:
        name: 预设名
        label: 表格中使用的显示名
        m1: 粒子1质量
        m2_over_m1: 质量比
    """

    name: str
    label: str
    m1: str
    m2_over_m1: str
    description: str = field(default="", compare=False)

    def build(self, alpha_inverse: Optional[Any] = None) -> TwoBodySystem:
        m1 = mp.mpf(self.m1)
        return TwoBodySystem(
            m1=m1,
            m2=m1 * mp.mpf(self.m2_over_m1),
            alpha_inverse=alpha_inverse if alpha_inverse is not None else DEFAULT_ALPHA_INVERSE,
            name=self.name,
        )


PRESETS: Dict[str, SystemPreset] = {
    "ps": SystemPreset("ps", "Ps", "1", "1", "电子偶素 e⁻e⁺"),
    "mu": SystemPreset("mu", "Mu", "1", MUON_MASS_RATIO, "μ子素 e⁻μ⁺"),
    "h": SystemPreset("h", "H", "1", PROTON_MASS_RATIO, "氢原子 e⁻p⁺"),
    "muh": SystemPreset("muh", "μH", MUON_MASS_RATIO, MUONIC_PROTON_RATIO, "μ子氢 μ⁻p⁺"),
    "h10": SystemPreset("h10", "10H", "1", HEAVY_HYDROGEN_RATIO, "质子质量放大十倍的氢"),
}

PRESET_NAMES = tuple(PRESETS) + ("custom",)


def make_system(
    name: str,
    m1: Optional[Any] = None,
    m2_over_m1: Optional[Any] = None,
    alpha_inverse: Optional[Any] = None,
) -> TwoBodySystem:
    """
    按预设名或自定义质量创建系统

    Args:
        name: 预设名（ps / mu / h / muh / h10）或 custom
        m1: 自定义时的粒子1质量
        m2_over_m1: 自定义时的质量比
        alpha_inverse: α⁻¹，默认 CODATA 值

    Returns:
        TwoBodySystem
    """
    if name == "custom":
        if m1 is None or m2_over_m1 is None:
            raise ValueError("custom 系统需要同时给出 m1 与 m2/m1")
        preset = SystemPreset("custom", "custom", str(m1), str(m2_over_m1))
        return preset.build(alpha_inverse)
    if name not in PRESETS:
        raise ValueError(f"未知系统: {name}，可选: {', '.join(PRESET_NAMES)}")
    return PRESETS[name].build(alpha_inverse)
