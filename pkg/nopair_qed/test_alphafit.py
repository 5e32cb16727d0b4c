"""
测试 α 扫描与展开系数拟合
"""

import json
import sys
from pathlib import Path

import pytest
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from src.alphafit.fit import design_columns, fit, write_fit_json
from src.alphafit.scan import (
    read_scan_csv,
    run_scan,
    run_scans,
    scan_grid,
    solve_scan_point,
    write_scan_csv,
)
from src.errors import DomainError
from src.linalg.precision import configure_precision
from src.models.basis import BasisSet
from src.models.results import AlphaScan, FitResult, ScanPoint
from src.models.system import DEFAULT_ALPHA_INVERSE, make_system
from src.optimizers.exponents import solve_nonrelativistic

configure_precision(34)

TRUE = FitResult(
    eps0=mp.mpf(-1) / 4,
    eps2=mp.mpf(3) / 64,
    eps3=mp.mpf("-0.12"),
    eps4log=mp.mpf(-1) / 16,
    eps4=mp.mpf("0.3"),
    rms_residual=0,
    points_used=0,
    model="DC",
)


def synthetic_scan(truth=TRUE, grid=None, model="DC"):
    grid = grid if grid is not None else scan_grid(-50, 50, 5)
    base = mp.mpf(DEFAULT_ALPHA_INVERSE)
    points = [
        ScanPoint(n=n, alpha_inverse=base + n, energy=truth.evaluate(1 / (base + n)), model=model)
        for n in grid
    ]
    return AlphaScan(system="ps", n_b=0, model=model, points=points)


def test_scan_grid():
    assert len(scan_grid(-50, 51)) == 102
    assert scan_grid(-50, 50, 5)[:3] == [-50, -45, -40]
    assert len(scan_grid(-50, 50, 5)) == 21
    with pytest.raises(ValueError):
        scan_grid(3, 1)
    with pytest.raises(ValueError):
        scan_grid(0, 5, 0)


def test_alpha_scan_validation():
    scan = synthetic_scan()
    with pytest.raises(ValueError):
        AlphaScan(system="ps", n_b=0, model="DC", points=scan.points + [scan.points[0]])
    with pytest.raises(ValueError):
        AlphaScan(system="ps", n_b=0, model="DCB", points=scan.points)


def test_fit_recovers_synthetic_coefficients():
    result = fit(synthetic_scan())

    assert result.points_used == 21
    assert abs(result.eps0 - TRUE.eps0) < mp.mpf("1e-25")
    assert abs(result.eps2 - TRUE.eps2) < mp.mpf("1e-12")
    assert abs(result.eps3 - TRUE.eps3) < mp.mpf("1e-9")
    assert abs(result.eps4log - TRUE.eps4log) < mp.mpf("1e-6")
    assert abs(result.eps4 - TRUE.eps4) < mp.mpf("1e-5")
    assert result.rms_residual < mp.mpf("1e-28"), f"精确数据的残差应在舍入水平，得到 {result.rms_residual}"


def test_missing_log_term_degrades_fit():
    scan = synthetic_scan()
    with_log = fit(scan, include_log=True)
    without_log = fit(scan, include_log=False)
    assert without_log.eps4log is None
    assert without_log.rms_residual > mp.mpf(10) ** 6 * with_log.rms_residual, (
        "数据含 α⁴lnα 项时，去掉该列应显著增大残差"
    )


def test_fifth_order_columns():
    names = [name for name, _ in design_columns(include_log=True, include_fifth=True)]
    assert names == ["eps0", "eps2", "eps3", "eps4log", "eps4", "eps5", "eps5log"]

    result = fit(synthetic_scan(), include_fifth=True)
    assert result.eps5 is not None and result.eps5log is not None
    assert abs(result.eps2 - TRUE.eps2) < mp.mpf("1e-10")


def test_fit_needs_enough_points():
    with pytest.raises(ValueError):
        fit(synthetic_scan(grid=[-1, 0, 1, 2]))


def test_fit_evaluate_reproduces_data():
    scan = synthetic_scan()
    result = fit(scan)
    for point in scan.points:
        assert abs(result.evaluate(point.alpha) - point.energy) < mp.mpf("1e-27")


def test_scan_csv_and_fit_json(tmp_path):
    scan = synthetic_scan()
    csv_path = write_scan_csv(scan, tmp_path / "scan.csv")
    restored = read_scan_csv(csv_path, system="ps")["DC"]
    assert len(restored) == len(scan)
    for a, b in zip(scan.points, restored.points):
        assert abs(a.energy - b.energy) < mp.mpf("1e-32")
        assert abs(a.alpha_inverse - b.alpha_inverse) < mp.mpf("1e-30")

    json_path = write_fit_json(fit(scan), tmp_path / "fit.json", extra={"system": "ps"})
    payload = json.loads(json_path.read_text(encoding="utf-8"))
    assert payload["system"] == "ps"
    assert payload["fits"][0]["model"] == "DC"
    assert abs(mp.mpf(payload["fits"][0]["eps2"]) - TRUE.eps2) < mp.mpf("1e-12")


def test_run_scans_ordered_and_reproducible():
    system = make_system("ps")
    basis = BasisSet(("0.05", "0.4"))
    scans = run_scans(system, basis, ["DC", "dc<b>"], [1, -1, 0], threads=2)

    assert list(scans) == ["DC", "DC<B>"]
    dc = scans["DC"]
    assert [p.n for p in dc.points] == [-1, 0, 1], "扫描点应按 n 排序"
    assert dc.points[0].alpha_inverse == system.alpha_inverse - 1

    serial = solve_scan_point(system, basis, 0, ["DC", "DC<B>"])
    assert scans["DC"].points[1].energy == serial["DC"]
    assert scans["DC<B>"].points[1].energy == serial["DC<B>"]
    assert serial["DC<B>"] < serial["DC"]


def test_run_scan_single_model():
    scan = run_scan(make_system("ps"), BasisSet(("0.05", "0.4")), "dc", -1, 1)
    assert scan.model == "DC"
    assert [p.n for p in scan.points] == [-1, 0, 1]


def test_run_scans_rejects_bad_input():
    system = make_system("ps", alpha_inverse="10")
    basis = BasisSet(("0.05", "0.4"))
    with pytest.raises(DomainError):
        run_scans(system, basis, ["DC"], [-10, 0])
    with pytest.raises(ValueError):
        run_scans(system, basis, ["QED"], [0])

def test_log_term_on_solver_scan():
    system = make_system("ps")
    basis = BasisSet(("0.05", "0.4"))
    scan = run_scans(system, basis, ["DC"], scan_grid(-50, 50, 10), threads=2)["DC"]

    with_log = fit(scan, include_log=True)
    without_log = fit(scan, include_log=False)
    assert with_log.points_used == without_log.points_used == 11
    assert without_log.eps4log is None
    assert with_log.rms_residual <= without_log.rms_residual, "多一列的嵌套拟合残差不应更大"

    # 固定基组的能量只依赖 c²，ε₀ 外推回同一基组的非相对论能量
    e_nr = solve_nonrelativistic(system, basis).energy
    for result in (with_log, without_log):
        assert abs(result.eps0 - e_nr) < mp.mpf("1e-9"), f"ε₀ = {result.eps0}，E_nr = {e_nr}"

    shift = (scan.points[5].energy - e_nr) / system.alpha**2
    assert abs(without_log.eps2 - shift) < mp.mpf("1e-3") * abs(shift)


if __name__ == "__main__":
    test_scan_grid()
    test_fit_recovers_synthetic_coefficients()
    test_missing_log_term_degrades_fit()
    print("α 拟合测试通过！")
