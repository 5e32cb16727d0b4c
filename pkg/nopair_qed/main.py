"""
无对 Dirac–Coulomb(–Breit) 求解器命令行入口

退出码：0 成功；1 计算失败；2 用法或配置错误。
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from src.errors import NopairQedError
from src.linalg.precision import configure_precision
from src.models.system import PRESET_NAMES
from src.pipeline.commands import COMMANDS, run_command
from src.utils.config import build_run_config
from src.utils.logger import get_logger, setup_logging

load_dotenv()

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _common_arguments() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="YAML 配置文件（缺省为 config/config.yaml）")
    parent.add_argument("--system", choices=PRESET_NAMES, help="两体系统")
    parent.add_argument("--m1", help="粒子 1 质量（custom 系统，电子质量单位）")
    parent.add_argument("--m2-over-m1", dest="m2_over_m1", help="质量比 m₂/m₁（custom 系统）")
    parent.add_argument("--alpha-inverse", dest="alpha_inverse", help="α⁻¹")
    parent.add_argument("--nb", type=int, help="空间高斯基函数个数")
    parent.add_argument("--exponents", help="指数文件路径")
    parent.add_argument("--target", help="指数优化的循环能量下降阈值")
    parent.add_argument("--model", choices=["dc", "dcb", "dc-only"])
    parent.add_argument("--breit", choices=["none", "pt1", "pt2", "variational", "all"])
    parent.add_argument("--scan-from", dest="scan_from", type=int)
    parent.add_argument("--scan-to", dest="scan_to", type=int)
    parent.add_argument("--scan-step", dest="scan_step", type=int)
    parent.add_argument(
        "--no-log-term", dest="log_term", action="store_const", const=False, help="拟合不含 α⁴lnα 项"
    )
    parent.add_argument(
        "--fifth-order", dest="fifth_order", action="store_const", const=True, help="拟合加入 α⁵ 项"
    )
    parent.add_argument("--precision-digits", dest="precision_digits", type=int, help="十进制有效位数（≥ 30）")
    parent.add_argument("--threads", type=int, help="α 扫描并发点数")
    parent.add_argument("--out", help="输出目录")
    parent.add_argument(
        "--dump-matrices", dest="dump_matrices", action="store_const", const=True, help="写出组装的矩阵"
    )
    parent.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="启用详细日志输出（等同于设置 NOPAIR_QED_VERBOSE=1）",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="无对 Dirac–Coulomb(–Breit) 两体变分求解器")
    parent = _common_arguments()
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "optimize": "优化非相对论基组指数",
        "solve": "固定 α 下求解 DC / DC⟨B⟩ / DCB₂ / DCB 基态",
        "scan-fit": "α 扫描并拟合展开系数",
        "compare": "拟合系数与 nrQED 参考值对照",
        "nrqed": "只计算 nrQED 参考系数",
    }
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[parent], help=helps[name])
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """命令行参数 → 配置覆盖（未给出的参数为 None，不覆盖文件配置）"""
    preset = args.system
    if preset is None and (args.m1 is not None or args.m2_over_m1 is not None):
        preset = "custom"
    return {
        "system": {
            "preset": preset,
            "m1": args.m1,
            "m2_over_m1": args.m2_over_m1,
            "alpha_inverse": args.alpha_inverse,
        },
        "basis": {"nb": args.nb, "exponents": args.exponents, "target": args.target},
        "run": {
            "model": args.model,
            "breit": args.breit,
            "scan_from": args.scan_from,
            "scan_to": args.scan_to,
            "scan_step": args.scan_step,
            "log_term": args.log_term,
            "fifth_order": args.fifth_order,
            "precision_digits": args.precision_digits,
            "threads": args.threads,
            "out": args.out,
            "dump_matrices": args.dump_matrices,
        },
    }


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    # 设置日志
    if args.verbose:
        os.environ["NOPAIR_QED_VERBOSE"] = "1"
    setup_logging(verbose=args.verbose)

    try:
        config = build_run_config(args.config, overrides_from_args(args))
        digits = configure_precision(config.run.precision_digits)
    except ValidationError as e:
        logger.error(f"配置校验失败:\n{e}")
        return EXIT_USAGE
    except (ValueError, FileNotFoundError) as e:
        logger.error(f"配置错误: {e}")
        return EXIT_USAGE
    logger.debug(f"工作精度: {digits} 位")

    try:
        run_command(args.command, config)
    except NopairQedError as e:
        logger.error(f"计算失败: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        # 参数组合非法（如扫描点数少于拟合列数）
        logger.error(f"参数错误: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning("已中断")
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
