"""
α 级数拟合

F(α) = ε₀ + α²ε₂ + α³ε₃ + α⁴lnα ε₄′ + α⁴ε₄，可选再加 α⁵ 与 α⁵lnα 两列。
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from mpmath import mp

from ..linalg.dense import least_squares
from ..models.results import AlphaScan, FitResult
from ..utils.logger import get_logger

logger = get_logger(__name__)

Column = Tuple[str, Callable[[Any], Any]]

BASE_COLUMNS: List[Column] = [
    ("eps0", lambda a: mp.mpf(1)),
    ("eps2", lambda a: a**2),
    ("eps3", lambda a: a**3),
    ("eps4log", lambda a: a**4 * mp.log(a)),
    ("eps4", lambda a: a**4),
]
FIFTH_COLUMNS: List[Column] = [
    ("eps5", lambda a: a**5),
    ("eps5log", lambda a: a**5 * mp.log(a)),
]


def design_columns(include_log: bool = True, include_fifth: bool = False) -> List[Column]:
    columns = [c for c in BASE_COLUMNS if include_log or c[0] != "eps4log"]
    if include_fifth:
        columns += FIFTH_COLUMNS
    return columns


def fit(scan: AlphaScan, include_log: bool = True, include_fifth: bool = False) -> FitResult:
    """
    对 α 扫描做普通最小二乘

    Args:
        scan: α 扫描
        include_log: 是否包含 α⁴lnα 列
        include_fifth: 是否包含 α⁵、α⁵lnα 列

    Returns:
        FitResult（未包含的系数为 None）

    Raises:
        ValueError: 点数少于参数个数
        RankDeficient: α 网格退化
    """
    columns = design_columns(include_log, include_fifth)
    if len(scan) < len(columns):
        raise ValueError(f"拟合 {len(columns)} 个系数至少需要 {len(columns)} 个点，得到 {len(scan)}")

    alphas = scan.alphas
    design = mp.matrix(len(alphas), len(columns))
    for i, alpha in enumerate(alphas):
        for j, (_, column) in enumerate(columns):
            design[i, j] = column(alpha)

    coefficients, rms = least_squares(design, scan.energies)
    values: Dict[str, Optional[Any]] = {name: None for name, _ in BASE_COLUMNS + FIFTH_COLUMNS}
    for (name, _), value in zip(columns, coefficients):
        values[name] = value

    result = FitResult(
        rms_residual=rms,
        points_used=len(scan),
        model=scan.model,
        **values,
    )
    logger.info(
        f"拟合完成 ({scan.model}, {len(scan)} 点, log={include_log}, α⁵={include_fifth}): "
        f"ε₂={mp.nstr(result.eps2, 10)}, ε₃={mp.nstr(result.eps3, 8)}, rms={mp.nstr(rms, 4)}"
    )
    return result


def write_fit_json(
    results: Union[FitResult, List[FitResult]], path: Union[str, Path], extra: Optional[Dict] = None
) -> Path:
    """写出拟合报告 JSON"""
    if isinstance(results, FitResult):
        results = [results]
    payload: Dict[str, Any] = {"fits": [r.to_dict() for r in results]}
    if extra:
        payload.update(extra)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
    logger.info(f"拟合报告已写入: {path}")
    return path
