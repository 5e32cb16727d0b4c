"""
运行配置

YAML 配置文件（system / basis / run 三节）+ 环境变量替换 + 命令行覆盖，
最终由 pydantic 校验为 RunConfig。
"""

from __future__ import annotations

import copy
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..models.system import DEFAULT_ALPHA_INVERSE, PRESET_NAMES, TwoBodySystem, make_system
from .logger import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "config.yaml"
CONFIG_ECHO_NAME = "run_config.yaml"

ModelName = Literal["dc", "dcb", "dc-only"]
BreitMode = Literal["none", "pt1", "pt2", "variational", "all"]


def _decimal_text(value: Any) -> Any:
    """数值统一保存为十进制字符串，避免经过 float 丢失位数"""
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise ValueError("需要数值，得到布尔值")
    if isinstance(value, float):
        return repr(value)
    return str(value)


class SystemSection(BaseModel):
    """system 节"""

    model_config = ConfigDict(extra="forbid")

    preset: str = "ps"
    m1: Optional[str] = None
    m2_over_m1: Optional[str] = None
    alpha_inverse: str = DEFAULT_ALPHA_INVERSE

    @field_validator("m1", "m2_over_m1", "alpha_inverse", mode="before")
    @classmethod
    def _as_text(cls, v: Any) -> Any:
        return _decimal_text(v)

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, v: str) -> str:
        v = v.lower()
        if v not in PRESET_NAMES:
            raise ValueError(f"未知系统: {v}，可选 {PRESET_NAMES}")
        return v

    @model_validator(mode="after")
    def _custom_masses(self) -> "SystemSection":
        if self.preset == "custom" and (self.m1 is None or self.m2_over_m1 is None):
            raise ValueError("custom 系统需要同时给出 m1 与 m2_over_m1")
        for name in ("m1", "m2_over_m1", "alpha_inverse"):
            text = getattr(self, name)
            if text is not None and float(text) <= 0:
                raise ValueError(f"{name} 必须为正，得到 {text}")
        return self

    def build(self) -> TwoBodySystem:
        return make_system(self.preset, self.m1, self.m2_over_m1, self.alpha_inverse)


class BasisSection(BaseModel):
    """basis 节"""

    model_config = ConfigDict(extra="forbid")

    nb: int = Field(10, ge=1)
    exponents: Optional[str] = None
    target: str = "1e-12"

    @field_validator("target", mode="before")
    @classmethod
    def _target_text(cls, v: Any) -> Any:
        return _decimal_text(v)

    @field_validator("target")
    @classmethod
    def _positive_target(cls, v: str) -> str:
        if float(v) <= 0:
            raise ValueError(f"target 必须为正，得到 {v}")
        return v


class RunSection(BaseModel):
    """run 节"""

    model_config = ConfigDict(extra="forbid")

    model: ModelName = "dcb"
    breit: BreitMode = "all"
    scan_from: int = -50
    scan_to: int = 50
    scan_step: int = Field(5, ge=1)
    log_term: bool = True
    fifth_order: bool = False
    precision_digits: Optional[int] = Field(None, ge=30)
    threads: int = Field(1, ge=1)
    out: str = "output"
    dump_matrices: bool = False

    @model_validator(mode="after")
    def _scan_range(self) -> "RunSection":
        if self.scan_from > self.scan_to:
            raise ValueError(f"扫描区间为空: {self.scan_from}..{self.scan_to}")
        return self


class RunConfig(BaseModel):
    """
    一次运行的完整配置

    model_dump() 写成 YAML 后可以直接作为配置文件重新加载。
    """

    model_config = ConfigDict(extra="forbid")

    system: SystemSection = Field(default_factory=SystemSection)
    basis: BasisSection = Field(default_factory=BasisSection)
    run: RunSection = Field(default_factory=RunSection)

    def build_system(self) -> TwoBodySystem:
        return self.system.build()

    def breit_columns(self) -> List[str]:
        """
        需要计算的能量列（模型标签）

        DC 总是计算；dc-only 关闭所有 Breit 列；变分 DCB 只在 model=dcb 时计算。
        """
        columns = ["DC"]
        if self.run.model == "dc-only" or self.run.breit == "none":
            return columns
        if self.run.breit in ("pt1", "pt2", "all"):
            columns.append("DC<B>")
        if self.run.breit in ("pt2", "all"):
            columns.append("DCB2")
        if self.run.model == "dcb" and self.run.breit in ("variational", "all"):
            columns.append("DCB")
        return columns

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(), allow_unicode=True, sort_keys=False)


def _replace_env_vars(obj):
    """递归替换 ${VAR} 形式的环境变量，未设置的保持原样"""
    if isinstance(obj, dict):
        return {k: _replace_env_vars(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [_replace_env_vars(item) for item in obj]
    elif isinstance(obj, str) and obj.startswith("${") and obj.endswith("}"):
        env_var = obj[2:-1]
        return os.environ.get(env_var, obj)
    return obj


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        elif value is not None:
            merged[key] = value
    return merged


def _drop_unset_env(obj):
    """去掉替换后仍为 ${VAR} 的值，让 pydantic 使用默认值"""
    if isinstance(obj, dict):
        return {
            k: _drop_unset_env(v)
            for k, v in obj.items()
            if not (isinstance(v, str) and v.startswith("${") and v.endswith("}"))
        }
    return obj


def load_config_file(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    读取 YAML 配置文件

    Args:
        path: 配置文件路径（缺省为 config/config.yaml，不存在时返回空配置）

    Returns:
        替换环境变量后的原始字典
    """
    load_dotenv()
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    if not config_path.exists():
        if path is not None:
            raise FileNotFoundError(f"配置文件不存在: {config_path}")
        return {}
    with open(config_path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"配置文件顶层必须是映射: {config_path}")
    logger.debug(f"已读取配置文件: {config_path}")
    return _drop_unset_env(_replace_env_vars(raw))


def build_run_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Dict[str, Any]]] = None
) -> RunConfig:
    """
    文件配置与命令行覆盖合并后校验

    Args:
        path: 配置文件路径
        overrides: {"system": {...}, "basis": {...}, "run": {...}}，值为 None 的项不覆盖

    Raises:
        pydantic.ValidationError: 配置非法
    """
    merged = _deep_merge(load_config_file(path), overrides or {})
    return RunConfig.model_validate(merged)


def write_config_echo(config: RunConfig, out_dir: Union[str, Path]) -> Path:
    """把解析后的配置写到 <out>/run_config.yaml"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / CONFIG_ECHO_NAME
    path.write_text(config.to_yaml(), encoding="utf-8")
    return path
