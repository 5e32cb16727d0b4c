"""
表格渲染

能量按小数点后三位一组用空格分隔，便于逐位比对。
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence

from mpmath import mp

from ..models.results import FitResult, NrqedReport, SolveRow

MISSING = "—"


def format_grouped(value: Any, decimals: int = 12) -> str:
    """
    定点格式化并把小数部分三位一组

    Examples:
        format_grouped(mpf("-0.2499999999194"), 13) -> "-0.249 999 999 919 4"
    """
    if value is None:
        return MISSING
    if decimals < 0:
        raise ValueError(f"小数位数不能为负: {decimals}")
    value = mp.mpf(value)
    scaled = int(mp.nint(abs(value) * mp.mpf(10) ** decimals))
    sign = "-" if value < 0 and scaled else ""
    integer, fraction = divmod(scaled, 10**decimals)
    if decimals == 0:
        return f"{sign}{integer}"
    digits = str(fraction).rjust(decimals, "0")
    groups = [digits[i : i + 3] for i in range(0, decimals, 3)]
    return f"{sign}{integer}." + " ".join(groups)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)


def solve_table(rows: Sequence[SolveRow], decimals: int = 12) -> str:
    headers = ["system", "n_b", "E_nr", "E_DC", "E_DC<B>", "E_DCB2", "E_DCB"]
    body = [
        [
            row.system,
            str(row.n_b),
            format_grouped(row.e_nr, decimals),
            format_grouped(row.e_dc, decimals),
            format_grouped(row.e_pt1, decimals),
            format_grouped(row.e_pt2, decimals),
            format_grouped(row.e_dcb, decimals),
        ]
        for row in rows
    ]
    return render_table(headers, body)


def fit_table(fits: Dict[str, FitResult], decimals: int = 9) -> str:
    headers = ["model", "eps0", "eps2", "eps3", "eps4'", "eps4", "rms", "points"]
    body = [
        [
            tag,
            format_grouped(f.eps0, decimals),
            format_grouped(f.eps2, decimals),
            format_grouped(f.eps3, decimals),
            format_grouped(f.eps4log, decimals) if f.eps4log is not None else MISSING,
            format_grouped(f.eps4, decimals),
            mp.nstr(f.rms_residual, 3),
            str(f.points_used),
        ]
        for tag, f in fits.items()
    ]
    return render_table(headers, body)


def comparison_table(entries: List[Dict[str, Any]], decimals: int = 6) -> str:
    """拟合值与 nrQED 参考值的对照（δε = 拟合 − 参考）"""
    headers = ["model", "coefficient", "fitted", "nrQED", "delta"]
    body = []
    for entry in entries:
        delta = entry.get("delta")
        body.append(
            [
                entry["model"],
                entry["coefficient"],
                format_grouped(entry["fitted"], decimals),
                format_grouped(entry.get("reference"), decimals),
                mp.nstr(delta, 3) if delta is not None else MISSING,
            ]
        )
    return render_table(headers, body)


def ratio_table(ratios: Dict[str, Optional[Any]], decimals: int = 4) -> str:
    labels = {
        "dc_vs_nr": "(E_DC - E_nr)/|E_nr|",
        "pt1_vs_dc": "(E_DC<B> - E_DC)/|E_DC|",
        "dcb_vs_pt1": "(E_DCB - E_DC<B>)/|E_DC<B>|",
        "dc_one_pair_vs_nr": "(E_DC + a^3 E_C1 - E_nr)/|E_nr|",
    }
    body = [[labels[key], format_grouped(value, decimals)] for key, value in ratios.items()]
    return render_table(["ratio", "ppm"], body)


def nrqed_table(report: NrqedReport, decimals: int = 6) -> str:
    body = [[name, format_grouped(getattr(report, name), decimals)] for name in NrqedReport.FIELDS]
    return render_table(["coefficient", report.system], body)
