"""
精度约定

全部计算使用 mpmath 的全局 mp 上下文；十进制位数在一次运行开始时设定，之后不再改变。
"""

from __future__ import annotations

import os
from typing import Optional, Union

from mpmath import mp

from ..utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_DIGITS = 34
MIN_DIGITS = 30
PRECISION_ENV = "NOPAIR_QED_PRECISION"

HighReal = type(mp.mpf(0))
Number = Union[int, float, str, "mp.mpf"]


def resolve_precision(digits: Optional[int] = None) -> int:
    """
    确定本次运行的十进制精度

    优先级：显式参数 > 环境变量 NOPAIR_QED_PRECISION > 默认 34 位。

    Args:
        digits: 显式指定的位数

    Returns:
        十进制位数

    Raises:
        ValueError: 位数低于 30 或环境变量无法解析
    """
    if digits is None:
        env_value = os.environ.get(PRECISION_ENV, "").strip()
        if env_value:
            try:
                digits = int(env_value)
            except ValueError as e:
                raise ValueError(f"环境变量 {PRECISION_ENV} 不是整数: {env_value!r}") from e
        else:
            digits = DEFAULT_DIGITS
    if digits < MIN_DIGITS:
        raise ValueError(f"精度至少需要 {MIN_DIGITS} 位有效数字，得到 {digits}")
    return digits


def configure_precision(digits: Optional[int] = None) -> int:
    """设置全局工作精度，返回实际使用的位数"""
    resolved = resolve_precision(digits)
    if mp.dps != resolved:
        logger.debug(f"工作精度: {mp.dps} -> {resolved} 位")
    mp.dps = resolved
    return resolved


def high(value: Number) -> "mp.mpf":
    """
    转换为扩展精度实数

    浮点数经由 repr 字符串转换，保留其十进制写法而不是二进制展开。
    """
    if isinstance(value, float):
        return mp.mpf(repr(value))
    return mp.mpf(value)
