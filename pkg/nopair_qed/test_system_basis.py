"""
测试两体系统预设与高斯基组（含指数文件读写）
"""

import sys
from pathlib import Path

import pytest
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import CloseExponents, NonPositiveExponent, ParseError
from src.linalg.precision import configure_precision
from src.models.basis import BasisSet, load_exponents, read_exponent_header, save_exponents
from src.models.system import PRESETS, TwoBodySystem, make_system

configure_precision(34)


def test_presets_reduced_mass():
    ps = make_system("ps")
    assert ps.mu == mp.mpf("0.5"), "Ps 的约化质量应为 1/2"
    assert ps.is_equal_mass
    assert ps.q1q2 == -1

    h = make_system("h")
    ratio = mp.mpf("1836.15267343")
    assert abs(h.mu - ratio / (1 + ratio)) < mp.mpf("1e-30")

    muh = make_system("muh")
    assert muh.m1 == mp.mpf("206.7682830"), "μH 的粒子 1 为 μ 子"
    assert set(PRESETS) == {"ps", "mu", "h", "muh", "h10"}


def test_custom_system_and_alpha():
    system = make_system("custom", "2", "3", "100")
    assert system.m2 == 6
    assert system.alpha == mp.mpf(1) / 100
    assert system.m_min == 2

    scanned = system.with_alpha_inverse(system.alpha_inverse + 5)
    assert scanned.alpha_inverse == 105
    assert scanned.m1 == system.m1, "改变 α 不应改变质量"

    with pytest.raises(ValueError):
        make_system("custom", "1", None)
    with pytest.raises(ValueError):
        make_system("unknown")
    with pytest.raises(ValueError):
        TwoBodySystem(m1=-1, m2=1)


def test_system_round_trip_dict():
    system = make_system("mu")
    restored = TwoBodySystem.from_dict(system.to_dict())
    assert restored.name == system.name
    for attr in ("m1", "m2", "q1q2", "alpha_inverse"):
        assert abs(getattr(restored, attr) - getattr(system, attr)) < mp.mpf("1e-28"), attr


def test_basis_sorted_and_validated():
    basis = BasisSet(("4", "0.5", "1"))
    assert list(basis) == [mp.mpf("0.5"), 1, 4], "指数应升序保存"
    assert basis.n_b == 3

    with pytest.raises(NonPositiveExponent):
        BasisSet(("1", "-2"))
    with pytest.raises(CloseExponents) as excinfo:
        BasisSet(("1", "1"))
    assert isinstance(excinfo.value, ValueError)


def test_even_tempered_and_scaling():
    basis = BasisSet.even_tempered("0.1", "3", 4)
    assert abs(basis[3] - mp.mpf("2.7")) < mp.mpf("1e-30")
    scaled = basis.scaled(4)
    assert abs(scaled[0] - mp.mpf("0.4")) < mp.mpf("1e-30")


def test_exponent_file_preserves_digits(tmp_path):
    basis = BasisSet.even_tempered(mp.mpf(1) / 7, mp.pi, 5)
    path = save_exponents(basis, tmp_path / "exponents.txt", system_name="ps")

    header = read_exponent_header(path)
    assert header["system"] == "ps"
    assert header["nb"] == "5"

    restored = load_exponents(path, expected_nb=5)
    for a, b in zip(basis, restored):
        assert a == b, f"指数读写丢位: {a} vs {b}"


def test_exponent_file_errors(tmp_path):
    path = tmp_path / "bad.txt"

    path.write_text("0.5\n1.0\n", encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        load_exponents(path)
    assert excinfo.value.line == 1, "缺少头部应报告第 1 行"

    path.write_text(
        "# nopair-qed exponents v1 system=ps nb=2 precision=34\n0.5\nabc\n", encoding="utf-8"
    )
    with pytest.raises(ParseError) as excinfo:
        load_exponents(path)
    assert excinfo.value.line == 3

    path.write_text(
        "# nopair-qed exponents v1 system=ps nb=2 precision=34\n0.5\n-1\n", encoding="utf-8"
    )
    with pytest.raises(NonPositiveExponent) as excinfo:
        load_exponents(path)
    assert excinfo.value.line == 3

    path.write_text(
        "# nopair-qed exponents v1 system=ps nb=2 precision=34\n0.5\n1.5\n", encoding="utf-8"
    )
    with pytest.raises(ParseError):
        load_exponents(path, expected_nb=3)


if __name__ == "__main__":
    test_presets_reduced_mass()
    test_custom_system_and_alpha()
    test_system_round_trip_dict()
    test_basis_sorted_and_validated()
    test_even_tempered_and_scaling()
    print("系统与基组测试通过！")
