"""
命令行各子命令的执行流程

每个命令接收校验后的 RunConfig，先把配置回显到日志与 <out>/run_config.yaml，
再依次完成计算、写出结果文件并以表格形式打印。
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from mpmath import mp

from ..alphafit.fit import fit, write_fit_json
from ..alphafit.scan import run_scans, scan_grid, write_scan_csv
from ..hamiltonian.assembler import (
    assemble_bare,
    assemble_breit,
    assemble_coulomb,
    assemble_metric,
    dump_matrix,
)
from ..models.basis import BasisSet, load_exponents, save_exponents
from ..models.results import FitResult, NrqedReport, OptimizationResult, SolveRow
from ..models.system import TwoBodySystem
from ..nopair.projector import build_projector, lowest_with_coupling, solve_projected
from ..nrqed.reference import (
    dirac_one_particle_energy,
    e2_dc_zero_crossings,
    nrqed_report,
    relative_importance,
)
from ..optimizers.exponents import optimize_exponents, solve_nonrelativistic
from ..perturbation.breit import breit_pt1, breit_pt2, projected_breit
from ..utils.config import RunConfig, write_config_echo
from ..utils.logger import get_logger
from .tables import comparison_table, fit_table, nrqed_table, ratio_table, solve_table

logger = get_logger(__name__)


def _echo_config(command: str, config: RunConfig) -> Path:
    out = Path(config.run.out)
    # 精度可能来自环境变量，回显生效值
    resolved = config.model_copy(
        update={"run": config.run.model_copy(update={"precision_digits": mp.dps})}
    )
    logger.info("=" * 60)
    logger.info(f"命令: {command}, precision={mp.dps} 位")
    logger.info("=" * 60)
    for line in resolved.to_yaml().splitlines():
        logger.info(f"  {line}")
    path = write_config_echo(resolved, out)
    logger.debug(f"配置已回显到: {path}")
    return out


def _write_json(payload: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
    logger.info(f"结果已写入: {path}")
    return path


def _exponent_path(config: RunConfig, system: TwoBodySystem) -> Path:
    return Path(config.run.out) / f"exponents_{system.name}_nb{config.basis.nb}.txt"


def resolve_basis(config: RunConfig, system: TwoBodySystem) -> BasisSet:
    """
    取得空间基组

    basis.exponents 指向已有文件时直接读取，否则重新优化并保存到输出目录。
    """
    if config.basis.exponents:
        path = Path(config.basis.exponents)
        if path.exists():
            basis = load_exponents(path, expected_nb=config.basis.nb)
            logger.info(f"从 {path} 读取 {basis.n_b} 个指数")
            return basis
        logger.warning(f"指数文件不存在: {path}，改为重新优化")
    result = optimize_exponents(system, config.basis.nb, target=config.basis.target)
    save_exponents(result.basis, _exponent_path(config, system), system.name)
    return result.basis


def cmd_optimize(config: RunConfig) -> OptimizationResult:
    """优化指数并写出指数文件；已有指数文件时以其为初始值继续优化"""
    out = _echo_config("optimize", config)
    system = config.build_system()

    initial = None
    if config.basis.exponents and Path(config.basis.exponents).exists():
        initial = load_exponents(config.basis.exponents, expected_nb=config.basis.nb)
        logger.info(f"以 {config.basis.exponents} 中的指数为初始值")

    result = optimize_exponents(system, config.basis.nb, target=config.basis.target, initial=initial)
    path = save_exponents(result.basis, _exponent_path(config, system), system.name)
    _write_json(result.to_dict(), out / f"optimize_{system.name}_nb{config.basis.nb}.json")

    gap = result.energy + system.mu / 2
    logger.info(f"E_nr = {mp.nstr(result.energy, 20)}")
    logger.info(f"E_nr − (−μ/2) = {mp.nstr(gap, 5)}")
    if result.stalled:
        logger.warning("优化以停滞结束，结果仍已保存")
    logger.info(f"指数文件: {path}")
    return result


def _dump_all(system: TwoBodySystem, basis: BasisSet, out: Path) -> None:
    matrix_dir = out / "matrices"
    for build in (assemble_metric, assemble_bare, assemble_coulomb, assemble_breit):
        operator = build(system, basis)
        dump_matrix(operator, matrix_dir / f"{operator.kind}_{system.name}_nb{basis.n_b}.txt")


def solve_row(system: TwoBodySystem, basis: BasisSet, columns: List[str]) -> SolveRow:
    """
    一行收敛表：E_nr 与所请求的各模型能量

    所有模型共享一个投影基；Breit 矩阵只组装一次。
    """
    nr = solve_nonrelativistic(system, basis)
    projector = build_projector(system, basis)
    dc = solve_projected(system, basis, "DC", projector)
    row = SolveRow(system=system.name, n_b=basis.n_b, e_nr=nr.energy, e_dc=dc.ground_energy)

    if any(tag != "DC" for tag in columns):
        breit = projected_breit(dc)
        if "DC<B>" in columns:
            row.e_pt1 = breit_pt1(dc, 0, breit)
        if "DCB2" in columns:
            row.e_pt2 = breit_pt2(dc, 0, breit)
        if "DCB" in columns:
            row.e_dcb = lowest_with_coupling(projector, dc.projected_interaction, breit, 1)
    return row


def _write_solve_csv(row: SolveRow, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = row.to_dict()
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SolveRow.COLUMNS)
        writer.writerow([data[name] if data[name] is not None else "" for name in SolveRow.COLUMNS])
    logger.info(f"结果已写入: {path}")
    return path


def cmd_solve(config: RunConfig) -> SolveRow:
    """在固定 α 下求解各模型的基态能量"""
    out = _echo_config("solve", config)
    system = config.build_system()
    basis = resolve_basis(config, system)
    columns = config.breit_columns()

    row = solve_row(system, basis, columns)
    stem = f"solve_{system.name}_nb{basis.n_b}"
    _write_solve_csv(row, out / f"{stem}.csv")
    _write_json(row.to_dict(), out / f"{stem}.json")
    if config.run.dump_matrices:
        _dump_all(system, basis, out)

    logger.info("\n" + solve_table([row]))
    return row


def _fit_scans(config: RunConfig, scans) -> Dict[str, FitResult]:
    return {
        tag: fit(scan, include_log=config.run.log_term, include_fifth=config.run.fifth_order)
        for tag, scan in scans.items()
    }


def cmd_scan_fit(config: RunConfig) -> Dict[str, FitResult]:
    """α 扫描后拟合 α 展开系数"""
    out = _echo_config("scan-fit", config)
    system = config.build_system()
    basis = resolve_basis(config, system)
    columns = config.breit_columns()
    grid = scan_grid(config.run.scan_from, config.run.scan_to, config.run.scan_step)

    scans = run_scans(system, basis, columns, grid, threads=config.run.threads)
    stem = f"{system.name}_nb{basis.n_b}"
    write_scan_csv(list(scans.values()), out / f"scan_{stem}.csv")

    fits = _fit_scans(config, scans)
    extra: Dict[str, Any] = {
        "system": system.name,
        "n_b": basis.n_b,
        "alpha_inverse": mp.nstr(system.alpha_inverse, mp.dps),
        "grid": [grid[0], grid[-1], config.run.scan_step],
    }
    if config.run.log_term:
        # 不含 α⁴lnα 列时的残差
        extra["rms_without_log"] = {
            tag: mp.nstr(fit(scan, include_log=False).rms_residual, 6)
            for tag, scan in scans.items()
        }
    write_fit_json(list(fits.values()), out / f"fit_{stem}.json", extra=extra)

    logger.info("\n" + fit_table(fits))
    return fits


def _reference_for(tag: str, report: NrqedReport) -> Dict[str, Any]:
    """各模型 α², α³, α⁴lnα 系数的 nrQED 对照值（没有参考值的为 None）"""
    equal = report.e3_b is not None
    if tag == "DC":
        return {"eps2": report.e2_dc, "eps3": report.e3_c0, "eps4log": report.a4log_ps}
    third = report.e3_c0 + report.e3_b if equal else None
    return {"eps2": report.e2_dcb, "eps3": third, "eps4log": None}


def comparison_entries(fits: Dict[str, FitResult], report: NrqedReport):
    entries = []
    for tag, result in fits.items():
        references = _reference_for(tag, report)
        for name in ("eps2", "eps3", "eps4log"):
            fitted = getattr(result, name)
            if fitted is None:
                continue
            reference = references.get(name)
            entries.append(
                {
                    "model": tag,
                    "coefficient": name,
                    "fitted": fitted,
                    "reference": reference,
                    "delta": fitted - reference if reference is not None else None,
                }
            )
    return entries


def cmd_compare(config: RunConfig) -> Dict[str, Any]:
    """
    拟合系数与 nrQED 参考值对照，并给出固定 α 下的相对修正（ppm）
    """
    out = _echo_config("compare", config)
    system = config.build_system()
    basis = resolve_basis(config, system)
    columns = config.breit_columns()
    report = nrqed_report(system)

    row = solve_row(system, basis, columns)
    one_pair = system.alpha**3 * report.e3_c1
    ratios = relative_importance(row.e_nr, row.e_dc, row.e_pt1, row.e_dcb, one_pair=one_pair)

    grid = scan_grid(config.run.scan_from, config.run.scan_to, config.run.scan_step)
    scans = run_scans(system, basis, columns, grid, threads=config.run.threads)
    fits = _fit_scans(config, scans)
    entries = comparison_entries(fits, report)

    stem = f"{system.name}_nb{basis.n_b}"
    payload = {
        "solve": row.to_dict(),
        "nrqed": report.to_dict(),
        "fits": [f.to_dict() for f in fits.values()],
        "comparison": [
            {
                "model": e["model"],
                "coefficient": e["coefficient"],
                "fitted": mp.nstr(e["fitted"], 15),
                "reference": mp.nstr(e["reference"], 15) if e["reference"] is not None else None,
                "delta": mp.nstr(e["delta"], 6) if e["delta"] is not None else None,
            }
            for e in entries
        ],
        "ratios_ppm": {k: mp.nstr(v, 8) if v is not None else None for k, v in ratios.items()},
    }
    _write_json(payload, out / f"compare_{stem}.json")

    logger.info("\n" + solve_table([row]))
    logger.info("\n" + fit_table(fits))
    logger.info("\n" + comparison_table(entries))
    logger.info("\n" + ratio_table(ratios))
    return payload


def cmd_nrqed(config: RunConfig) -> NrqedReport:
    """只计算 nrQED 参考系数，不做变分求解"""
    out = _echo_config("nrqed", config)
    system = config.build_system()
    report = nrqed_report(system)

    payload: Dict[str, Any] = {"report": report.to_dict()}
    payload["dirac_reduced_mass"] = mp.nstr(
        dirac_one_particle_energy(system.mu, system.alpha_inverse), 20
    )
    if system.m1 == 1:
        low, high = e2_dc_zero_crossings(system.m1)
        payload["e2_dc_zero_crossings"] = [mp.nstr(low, 15), mp.nstr(high, 15)]
        logger.info(f"E²_DC 零点: m₂ = {mp.nstr(low, 12)}, {mp.nstr(high, 12)}")
    _write_json(payload, out / f"nrqed_{system.name}.json")

    logger.info("\n" + nrqed_table(report))
    return report


COMMANDS = {
    "optimize": cmd_optimize,
    "solve": cmd_solve,
    "scan-fit": cmd_scan_fit,
    "compare": cmd_compare,
    "nrqed": cmd_nrqed,
}


def run_command(name: str, config: RunConfig) -> Optional[Any]:
    if name not in COMMANDS:
        raise ValueError(f"未知命令: {name}，可选 {sorted(COMMANDS)}")
    return COMMANDS[name](config)
