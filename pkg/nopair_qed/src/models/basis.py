"""
高斯基组模型

空间基函数为归一化球对称高斯函数 N·exp(-ζ r²)，基组由一列正指数 ζ 决定。
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from mpmath import mp
from mpmath.libmp import repr_dps

from ..errors import CloseExponents, NonPositiveExponent, ParseError
from ..utils.logger import get_logger

logger = get_logger(__name__)

# 相邻指数的最小相对间隔
MIN_RELATIVE_SEPARATION = mp.mpf("1e-8")

HEADER_PATTERN = re.compile(
    r"^#\s*nopair-qed exponents v1\s+system=(?P<system>\S+)\s+nb=(?P<nb>\d+)\s+precision=(?P<precision>\d+)\s*$"
)


@dataclass(frozen=True)
class BasisSet:
    """
    高斯指数集合

    Attributes:
        exponents: 升序排列的正指数（bohr⁻²）
    """

    exponents: Tuple[Any, ...]

    def __post_init__(self):
        values = []
        for raw in self.exponents:
            value = mp.mpf(repr(raw)) if isinstance(raw, float) else mp.mpf(raw)
            if value <= 0:
                raise NonPositiveExponent(value)
            values.append(value)
        if not values:
            raise ValueError("基组至少需要一个指数")
        values.sort()
        for lower, upper in zip(values, values[1:]):
            if (upper - lower) / upper < MIN_RELATIVE_SEPARATION:
                raise CloseExponents(
                    mp.nstr(lower, 12), mp.nstr(upper, 12), mp.nstr(MIN_RELATIVE_SEPARATION, 3)
                )
        object.__setattr__(self, "exponents", tuple(values))

    @property
    def n_b(self) -> int:
        return len(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, index: int):
        return self.exponents[index]

    def with_appended(self, exponent) -> "BasisSet":
        return BasisSet(self.exponents + (exponent,))

    def scaled(self, factor) -> "BasisSet":
        """所有指数乘以 factor"""
        factor = mp.mpf(factor)
        return BasisSet(tuple(z * factor for z in self.exponents))

    @classmethod
    def even_tempered(cls, a, b, n_b: int) -> "BasisSet":
        """ζᵢ = a·bⁱ，i = 0..n_b-1"""
        a = mp.mpf(a)
        b = mp.mpf(b)
        return cls(tuple(a * b**i for i in range(n_b)))

    @classmethod
    def from_log(cls, log_exponents: Iterable[Any]) -> "BasisSet":
        return cls(tuple(mp.exp(t) for t in log_exponents))

    def log_exponents(self) -> List:
        return [mp.log(z) for z in self.exponents]

    def to_dict(self) -> Dict[str, Any]:
        return {"n_b": self.n_b, "exponents": [_full_str(z) for z in self.exponents]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BasisSet":
        return cls(tuple(mp.mpf(z) for z in data["exponents"]))


def _full_str(value) -> str:
    """保证十进制往返不丢位的字符串"""
    return mp.nstr(value, repr_dps(mp.prec), strip_zeros=False)


def save_exponents(
    basis: BasisSet, path: Union[str, Path], system_name: str = "custom"
) -> Path:
    """
    写出指数文件

    格式：首行为头部 `# nopair-qed exponents v1 system=<name> nb=<N> precision=<digits>`，
    之后每行一个指数。

    Args:
        basis: 基组
        path: 输出路径
        system_name: 写入头部的系统名

    Returns:
        写入的路径
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# nopair-qed exponents v1 system={system_name} nb={basis.n_b} precision={mp.dps}"]
    lines.extend(_full_str(z) for z in basis.exponents)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"已保存 {basis.n_b} 个指数到 {path}")
    return path


def read_exponent_header(path: Union[str, Path]) -> Dict[str, str]:
    """只读取指数文件头部"""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
    match = HEADER_PATTERN.match(first)
    if not match:
        raise ParseError(1, f"头部格式不正确: {first!r}")
    return match.groupdict()


def load_exponents(path: Union[str, Path], expected_nb: Optional[int] = None) -> BasisSet:
    """
    读取指数文件

    Args:
        path: 文件路径
        expected_nb: 期望的基组大小（可选）

    Returns:
        BasisSet

    Raises:
        ParseError: 头部缺失、数值无法解析或个数与头部不符（附行号）
        NonPositiveExponent: 指数不为正（附行号）
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "文件为空")

    match = HEADER_PATTERN.match(lines[0].strip())
    if not match:
        raise ParseError(1, f"头部格式不正确: {lines[0]!r}")
    header_nb = int(match.group("nb"))

    exponents = []
    for line_no, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped:
            continue
        try:
            value = mp.mpf(stripped.replace("−", "-"))
        except (ValueError, TypeError) as e:
            raise ParseError(line_no, f"无法解析数值 {stripped!r}") from e
        if value <= 0:
            raise NonPositiveExponent(stripped, line=line_no)
        exponents.append(value)

    if len(exponents) != header_nb:
        raise ParseError(1, f"头部声明 nb={header_nb}，实际读到 {len(exponents)} 个指数")
    if expected_nb is not None and header_nb != expected_nb:
        raise ParseError(1, f"头部声明 nb={header_nb}，与要求的 n_b={expected_nb} 不符")

    logger.debug(f"从 {path} 读取 {header_nb} 个指数（system={match.group('system')}）")
    return BasisSet(tuple(exponents))
