"""
α 扫描驱动

α⁻¹ = α₀⁻¹ + n，每个点独立求解。多个点以协程调度，阻塞的求解交给线程池，
并发度由 asyncio.Semaphore 控制；结果按 n 排序，与完成顺序无关。
"""

from __future__ import annotations

import asyncio
import csv
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

from mpmath import mp

from ..errors import DomainError, NopairQedError, ScanPointFailed
from ..hamiltonian.assembler import assemble_breit
from ..models.basis import BasisSet
from ..models.results import MODEL_TAGS, AlphaScan, ScanPoint
from ..models.system import TwoBodySystem
from ..nopair.projector import build_projector, lowest_with_coupling, project, solve_projected
from ..perturbation.breit import breit_pt1, breit_pt2
from ..utils.logger import get_logger

logger = get_logger(__name__)

FULL_GRID = (-50, 51)
DESK_STEP = 5
CSV_HEADER = ("alpha_inverse", "alpha", "model", "energy_hartree")


def scan_grid(n_from: int, n_to: int, step: int = 1) -> List[int]:
    """
    n_from..n_to（含两端）按 step 取整数偏移

    Raises:
        ValueError: 区间为空或 step < 1
    """
    if step < 1:
        raise ValueError(f"扫描步长必须 ≥ 1，得到 {step}")
    if n_from > n_to:
        raise ValueError(f"扫描区间为空: {n_from}..{n_to}")
    return list(range(n_from, n_to + 1, step))


def _normalize_models(models: Iterable[str]) -> List[str]:
    normalized = []
    for model in models:
        tag = model.upper()
        if tag not in MODEL_TAGS:
            raise ValueError(f"未知模型标签: {model}，可选 {MODEL_TAGS}")
        if tag not in normalized:
            normalized.append(tag)
    if not normalized:
        raise ValueError("至少需要一个模型")
    return normalized


def solve_scan_point(
    system: TwoBodySystem, basis: BasisSet, n: int, models: Sequence[str]
) -> Dict[str, object]:
    """
    单个 α 点：一次投影基构造与组装，共享给所有请求的模型

    Returns:
        模型标签 → 能量
    """
    point_system = system.with_alpha_inverse(system.alpha_inverse + n)
    projector = build_projector(point_system, basis)
    energies: Dict[str, object] = {}

    if models == ["DCB"]:
        energies["DCB"] = solve_projected(point_system, basis, "DCB", projector).ground_energy
        return energies

    dc = solve_projected(point_system, basis, "DC", projector)
    energies["DC"] = dc.ground_energy
    if any(tag != "DC" for tag in models):
        breit = project(projector, assemble_breit(point_system, basis))
        dc.projected_breit = breit
        if "DC<B>" in models:
            energies["DC<B>"] = breit_pt1(dc, 0, breit)
        if "DCB2" in models:
            energies["DCB2"] = breit_pt2(dc, 0, breit)
        if "DCB" in models:
            energies["DCB"] = lowest_with_coupling(projector, dc.projected_interaction, breit, 1)
    return {tag: energies[tag] for tag in models}


async def _solve_async(
    semaphore: asyncio.Semaphore,
    executor: ThreadPoolExecutor,
    system: TwoBodySystem,
    basis: BasisSet,
    n: int,
    models: Sequence[str],
):
    async with semaphore:
        loop = asyncio.get_running_loop()
        alpha_inverse = system.alpha_inverse + n
        logger.debug(f"α 扫描点开始: n={n}, α⁻¹={mp.nstr(alpha_inverse, 15)}")
        try:
            energies = await loop.run_in_executor(
                executor, solve_scan_point, system, basis, n, models
            )
        except NopairQedError as e:
            raise ScanPointFailed(mp.nstr(alpha_inverse, 15), e) from e
        logger.info(
            f"α 扫描点完成: n={n:+d}, "
            + ", ".join(f"{tag}={mp.nstr(value, 16)}" for tag, value in energies.items())
        )
        return n, energies


async def _run_scans_async(system, basis, models, grid, threads):
    semaphore = asyncio.Semaphore(threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        tasks = [
            asyncio.create_task(_solve_async(semaphore, executor, system, basis, n, models))
            for n in grid
        ]
        try:
            return await asyncio.gather(*tasks)
        except BaseException:
            for task in tasks:
                task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)
            raise


def run_scans(
    system: TwoBodySystem,
    basis: BasisSet,
    models: Iterable[str],
    grid: Sequence[int],
    threads: int = 1,
) -> Dict[str, AlphaScan]:
    """
    在同一 α 网格上计算多个模型

    Args:
        system: 参考系统（α₀⁻¹ 取自 system.alpha_inverse）
        basis: 固定基组
        models: 模型标签，取自 DC / DC<B> / DCB2 / DCB
        grid: 整数偏移 n
        threads: 并发点数

    Returns:
        模型标签 → AlphaScan（点按 n 升序）

    Raises:
        DomainError: 某个 α₀⁻¹ + n ≤ 0
        ScanPointFailed: 某个点的求解失败（带 α⁻¹ 标记）
    """
    models = _normalize_models(models)
    grid = sorted(set(int(n) for n in grid))
    if not grid:
        raise ValueError("α 网格为空")
    if threads < 1:
        raise ValueError(f"线程数必须 ≥ 1，得到 {threads}")
    for n in grid:
        if system.alpha_inverse + n <= 0:
            raise DomainError(f"α⁻¹ = {mp.nstr(system.alpha_inverse, 15)} + {n} 不为正")

    logger.info("=" * 60)
    logger.info(
        f"α 扫描: system={system.name}, n_b={basis.n_b}, 模型 {models}, "
        f"{len(grid)} 个点 ({grid[0]}..{grid[-1]}), threads={threads}"
    )
    logger.info("=" * 60)

    results = asyncio.run(_run_scans_async(system, basis, models, grid, threads))
    results = sorted(results, key=lambda item: item[0])

    scans: Dict[str, AlphaScan] = {}
    for tag in models:
        points = [
            ScanPoint(n=n, alpha_inverse=system.alpha_inverse + n, energy=energies[tag], model=tag)
            for n, energies in results
        ]
        scans[tag] = AlphaScan(system=system.name, n_b=basis.n_b, model=tag, points=points)
    return scans


def run_scan(
    system: TwoBodySystem,
    basis: BasisSet,
    model: str,
    n_from: int,
    n_to: int,
    step: int = 1,
    threads: int = 1,
) -> AlphaScan:
    """单模型 α 扫描"""
    tag = model.upper()
    return run_scans(system, basis, [tag], scan_grid(n_from, n_to, step), threads)[tag]


def write_scan_csv(scans: Union[AlphaScan, Iterable[AlphaScan]], path: Union[str, Path]) -> Path:
    """写出扫描 CSV：alpha_inverse,alpha,model,energy_hartree（全精度）"""
    if isinstance(scans, AlphaScan):
        scans = [scans]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for scan in scans:
            for point in scan.points:
                writer.writerow(
                    [
                        mp.nstr(point.alpha_inverse, mp.dps),
                        mp.nstr(point.alpha, mp.dps),
                        point.model,
                        mp.nstr(point.energy, mp.dps),
                    ]
                )
    logger.info(f"扫描结果已写入: {path}")
    return path


def read_scan_csv(path: Union[str, Path], system: str = "custom", n_b: int = 0) -> Dict[str, AlphaScan]:
    """读取 write_scan_csv 写出的文件，按模型分组"""
    grouped: Dict[str, List[ScanPoint]] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        for row in reader:
            tag = row["model"]
            points = grouped.setdefault(tag, [])
            points.append(
                ScanPoint(
                    n=len(points),
                    alpha_inverse=mp.mpf(row["alpha_inverse"]),
                    energy=mp.mpf(row["energy_hartree"]),
                    model=tag,
                )
            )
    return {
        tag: AlphaScan(system=system, n_b=n_b, model=tag, points=points)
        for tag, points in grouped.items()
    }
