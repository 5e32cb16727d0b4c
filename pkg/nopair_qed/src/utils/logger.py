"""
日志配置模块
根据 NOPAIR_QED_VERBOSE 环境变量控制日志详细程度
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

# 需要屏蔽的第三方库logger列表
THIRD_PARTY_LOGGERS = [
    "asyncio",
    "numpy",
    "concurrent.futures",
]

DEFAULT_LOG_PREFIX = "nopair_qed"


def _get_log_dir() -> Path:
    """
    获取日志文件目录

    优先使用 NOPAIR_QED_LOG_DIR 环境变量，否则使用当前工作目录下的 logs 目录。

    Returns:
        日志目录路径
    """
    env_dir = os.environ.get("NOPAIR_QED_LOG_DIR", "").strip()
    log_dir = Path(env_dir) if env_dir else Path.cwd() / "logs"
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir


def _is_verbose_env() -> bool:
    verbose_env = os.environ.get("NOPAIR_QED_VERBOSE", "").lower()
    return verbose_env in ("1", "true", "yes", "on")


def setup_logging(
    verbose: Optional[bool] = None, log_file: Optional[str] = None
) -> None:
    """
    设置日志配置

    配置说明：
    - 控制台：INFO 级别；verbose 时为 DEBUG
    - 文件1 (debug)：输出DEBUG级别及以上的所有日志
    - 文件2 (info)：输出INFO级别及以上的日志

    Args:
        verbose: 是否启用详细日志，如果为None则从环境变量读取
        log_file: 日志文件名前缀，如果为None则使用默认名称 "nopair_qed"
    """
    global _logging_initialized

    if verbose is None:
        verbose = _is_verbose_env()

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # 清除现有的处理器（避免重复添加）
    root_logger.handlers.clear()

    # ========== 1. 控制台处理器 ==========
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    console_formatter = logging.Formatter(
        "%(asctime)s - %(levelname)s - %(message)s", datefmt="%Y-%m-%d %H:%M:%S"
    )
    console_handler.setFormatter(console_formatter)
    root_logger.addHandler(console_handler)

    log_dir = _get_log_dir()
    if log_file is None:
        log_file = DEFAULT_LOG_PREFIX

    file_format_str = (
        "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
    )
    file_formatter = logging.Formatter(file_format_str, datefmt="%Y-%m-%d %H:%M:%S")

    # ========== 2. DEBUG级别文件处理器 ==========
    debug_file_handler = RotatingFileHandler(
        log_dir / f"{log_file}_debug.log",
        maxBytes=10 * 1024 * 1024,  # 10MB
        backupCount=5,
        encoding="utf-8",
    )
    debug_file_handler.setLevel(logging.DEBUG)
    debug_file_handler.setFormatter(file_formatter)
    root_logger.addHandler(debug_file_handler)

    # ========== 3. INFO级别文件处理器 ==========
    info_file_handler = RotatingFileHandler(
        log_dir / f"{log_file}_info.log",
        maxBytes=10 * 1024 * 1024,  # 10MB
        backupCount=5,
        encoding="utf-8",
    )
    info_file_handler.setLevel(logging.INFO)
    info_file_handler.setFormatter(file_formatter)
    root_logger.addHandler(info_file_handler)

    # 屏蔽第三方库的日志输出
    for logger_name in THIRD_PARTY_LOGGERS:
        third_party_logger = logging.getLogger(logger_name)
        third_party_logger.setLevel(logging.WARNING)
        third_party_logger.propagate = False

    _logging_initialized = True


# 标记是否已经初始化过日志
_logging_initialized = False


def get_logger(name: str) -> logging.Logger:
    """
    获取指定名称的日志记录器

    Args:
        name: 日志记录器名称（通常是模块名）

    Returns:
        配置好的日志记录器
    """
    if not _logging_initialized:
        setup_logging()

    return logging.getLogger(name)
