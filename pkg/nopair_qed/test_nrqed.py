"""
测试 nrQED 参考系数
"""

import sys
from pathlib import Path

import pytest
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import DomainError
from src.linalg.precision import configure_precision
from src.models.system import TwoBodySystem, make_system
from src.nrqed.reference import (
    a4log_ps,
    dirac_one_particle_energy,
    e2_b,
    e2_dc,
    e2_dc_zero_crossings,
    e2_dcb,
    e3_b_equal_mass,
    e3_c0,
    e3_c02,
    e3_c1,
    e3_c1_infty,
    e3_c2,
    e_nr,
    hydrogenic_expectation,
    nrqed_energy,
    nrqed_report,
    relative_importance,
)

configure_precision(34)

TIGHT = mp.mpf("1e-30")


def test_positronium_second_order():
    ps = make_system("ps")
    assert e_nr(ps) == mp.mpf(-1) / 4
    assert abs(e2_dc(ps) - mp.mpf(3) / 64) < TIGHT
    assert abs(e2_b(ps) - mp.mpf(-3) / 8) < TIGHT
    assert abs(e2_dcb(ps) - mp.mpf(-21) / 64) < TIGHT


def test_infinite_mass_limit_matches_dirac():
    """m₂ → ∞ 时 E_nr + α²E²_DC 与单粒子 Dirac 能量展开一致"""
    heavy = TwoBodySystem(m1=1, m2=mp.mpf(10) ** 30)
    assert abs(e2_dc(heavy) - mp.mpf(-1) / 8) < mp.mpf("1e-25")

    alpha_inverse = mp.mpf("137.035999084")
    alpha = 1 / alpha_inverse
    exact = dirac_one_particle_energy(1, alpha_inverse)
    series = -mp.mpf(1) / 2 - alpha**2 / 8
    assert abs(exact - series) < alpha**4, "Dirac 能量的 α² 展开应准确到 α⁴"


def test_hydrogenic_expectations():
    h = TwoBodySystem(m1=1, m2=mp.mpf(10) ** 40)
    assert abs(hydrogenic_expectation("energy", h) + mp.mpf(1) / 2) < mp.mpf("1e-30")
    assert abs(hydrogenic_expectation("inv_r", h) - 1) < mp.mpf("1e-30")
    assert abs(hydrogenic_expectation("delta3", h) - 1 / mp.pi) < mp.mpf("1e-30")
    assert hydrogenic_expectation("delta3", h, n=2, l=1) == 0
    with pytest.raises(DomainError):
        hydrogenic_expectation("inv_r3", h)
    with pytest.raises(DomainError):
        hydrogenic_expectation("energy", h, n=1, l=1)


def test_positronium_third_order():
    ps = make_system("ps")
    assert abs(e3_c02(ps) + 5 / (12 * mp.pi)) < TIGHT
    assert abs(e3_c1(ps) - 1 / (4 * mp.pi)) < TIGHT
    assert abs(e3_b_equal_mass(ps) - (1 + mp.pi / 2) / (2 * mp.pi)) < TIGHT
    assert a4log_ps(ps) == mp.mpf(-1) / 16

    two_pair = e3_c2(ps)
    assert two_pair < 0, "双对修正应为负"
    assert abs(two_pair) < abs(e3_c02(ps))
    assert abs(e3_c0(ps) - (e3_c02(ps) - two_pair)) < TIGHT


def test_two_pair_vanishes_for_heavy_partner():
    """m₂ ≫ m₁ 时双对修正被 1/m₂ 压低"""
    light = e3_c2(make_system("custom", "1", "1"))
    heavy = e3_c2(make_system("custom", "1", "1000"))
    assert abs(heavy) < abs(light) / 10


def test_single_pair_limit():
    h = make_system("h")
    assert abs(e3_c1(h) - e3_c1_infty(1)) < mp.mpf("1e-2"), "氢原子单对修正接近 m₂→∞ 极限"
    assert abs(e3_c1_infty(2) - 8 / (3 * mp.pi)) < TIGHT


def test_equal_mass_only_coefficients():
    mu = make_system("mu")
    with pytest.raises(DomainError):
        e3_b_equal_mass(mu)
    with pytest.raises(DomainError):
        a4log_ps(mu)

    report = nrqed_report(mu)
    assert report.e3_b is None
    assert report.a4log_ps is None
    assert nrqed_report(make_system("ps")).e3_b is not None


def test_e2_dc_zero_crossings():
    """x² − 5x + 1 = 0，x = m₂/m₁"""
    low, high = e2_dc_zero_crossings(1)
    assert abs(low - (5 - mp.sqrt(21)) / 2) < mp.mpf("1e-25")
    assert abs(high - (5 + mp.sqrt(21)) / 2) < mp.mpf("1e-25")
    assert abs(e2_dc(TwoBodySystem(m1=1, m2=high))) < mp.mpf("1e-25")


def test_nrqed_energy_models():
    ps = make_system("ps")
    alpha = ps.alpha
    dc = nrqed_energy(ps, "DC")
    dcb = nrqed_energy(ps, "dcb")
    assert abs(dc - (e_nr(ps) + alpha**2 * e2_dc(ps) + alpha**3 * e3_c0(ps))) < TIGHT
    assert dcb < dc, "Breit 修正对 Ps 单态为负"
    with pytest.raises(DomainError):
        nrqed_energy(ps, "QED")


def test_relative_importance_ppm():
    ratios = relative_importance(
        mp.mpf(-1), mp.mpf("-0.999999"), e_pt1=mp.mpf("-0.999998"), e_dcb=None, one_pair=mp.mpf(0)
    )
    assert abs(ratios["dc_vs_nr"] - 1) < mp.mpf("1e-25")
    assert abs(ratios["pt1_vs_dc"] - mp.mpf("1") / mp.mpf("0.999999")) < mp.mpf("1e-25")
    assert ratios["dcb_vs_pt1"] is None
    assert abs(ratios["dc_one_pair_vs_nr"] - 1) < mp.mpf("1e-25")

@pytest.mark.parametrize(
    "name, coefficient, expected, tolerance",
    [
        ("mu", e2_dcb, "-0.1345278919", "1e-9"),
        ("mu", e3_c02, "-0.4193357967", "1e-9"),
        ("h", e2_dc, "-0.1244561978", "1e-9"),
        ("h", e3_c0, "-0.4238359697", "1e-9"),
        ("muh", e3_c0, "-67.89993035", "1e-7"),
    ],
)
def test_unequal_mass_coefficients(name, coefficient, expected, tolerance):
    value = coefficient(make_system(name))
    assert abs(value - mp.mpf(expected)) < mp.mpf(tolerance), (
        f"{name} 的 {coefficient.__name__} = {value}，期望 {expected}"
    )


if __name__ == "__main__":
    test_positronium_second_order()
    test_infinite_mass_limit_matches_dirac()
    test_positronium_third_order()
    test_e2_dc_zero_crossings()
    print("nrQED 参考值测试通过！")
