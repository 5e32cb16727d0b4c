"""
测试正能投影、投影求解与微扰 Breit 修正
"""

import sys
from pathlib import Path

import pytest
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import IndexOutOfRange
from src.hamiltonian.assembler import spatial_metric
from src.linalg.dense import max_abs
from src.linalg.precision import configure_precision
from src.models.basis import BasisSet
from src.models.system import make_system
from src.nopair.projector import build_projector, energy_cut, lowest_with_coupling, solve_projected
from src.optimizers.exponents import optimize_exponents, solve_nonrelativistic
from src.oracles.finite_difference import finite_difference_slope, hellmann_feynman_slope
from src.perturbation.breit import breit_corrections, breit_pt1, breit_pt2, projected_breit

configure_precision(34)

BASIS = BasisSet.even_tempered("0.03", "4", 3)


@pytest.fixture(scope="module")
def ps():
    return make_system("ps")


@pytest.fixture(scope="module")
def dc_spectrum(ps):
    return solve_projected(ps, BASIS, "DC")


def test_energy_cut(ps):
    assert energy_cut(ps) == -ps.c**2


def test_projector_separates_branches(ps):
    projector = build_projector(ps, BASIS)
    assert projector.count == 4 * BASIS.n_b
    assert len(projector.rejected_energies) == 3 * BASIS.n_b
    assert min(projector.spatial_energies) > projector.cut, "选中的态应在截断之上"
    assert max(projector.rejected_energies) < projector.cut, "舍弃的态应在截断之下"
    # ++ 分支为动能量级，负能分支约为 −2mc²
    assert max(projector.rejected_energies) < -ps.c**2 * mp.mpf("1.5")


def test_dc_spectrum_close_to_nonrelativistic(ps, dc_spectrum):
    e_nr = solve_nonrelativistic(ps, BASIS).energy
    assert e_nr > -ps.mu / 2, "非相对论能量应为 −μ/2 的变分上界"
    assert dc_spectrum.count == 4 * BASIS.n_b
    assert dc_spectrum.eigenvalues == sorted(dc_spectrum.eigenvalues)
    assert abs(dc_spectrum.ground_energy - e_nr) < mp.mpf("1e-4"), (
        f"E_DC={dc_spectrum.ground_energy} 与 E_nr={e_nr} 相差过大"
    )


def test_zero_coupling_reproduces_dc(dc_spectrum):
    breit = projected_breit(dc_spectrum)
    value = lowest_with_coupling(
        dc_spectrum.projector, dc_spectrum.projected_interaction, breit, 0
    )
    assert abs(value - dc_spectrum.ground_energy) < mp.mpf("1e-30")


def test_perturbative_breit_ordering(dc_spectrum):
    corrections = breit_corrections(dc_spectrum)
    shift = corrections.e_pt1 - corrections.e_dc
    assert shift < 0, "Ps 基态的一阶 Breit 修正应为负"
    assert corrections.e_pt2 <= corrections.e_pt1, "基态二阶修正不应为正"
    assert abs(corrections.e_pt2 - corrections.e_pt1) < abs(shift), "二阶修正应小于一阶"


def test_variational_dcb_close_to_second_order(ps, dc_spectrum):
    breit = projected_breit(dc_spectrum)
    e_pt1 = breit_pt1(dc_spectrum, 0, breit)
    e_pt2 = breit_pt2(dc_spectrum, 0, breit)
    e_dcb = lowest_with_coupling(dc_spectrum.projector, dc_spectrum.projected_interaction, breit, 1)

    assert e_dcb <= e_pt1, "变分 DCB 不应高于一阶期望值"
    assert abs(e_dcb - e_pt2) < mp.mpf("1e-2") * abs(e_pt1 - dc_spectrum.ground_energy)

    dcb = solve_projected(ps, BASIS, "DCB", projector=dc_spectrum.projector)
    assert abs(dcb.ground_energy - e_dcb) < mp.mpf("1e-28"), "两种 DCB 求解方式应一致"


def test_hellmann_feynman_matches_first_order(dc_spectrum):
    shift = breit_pt1(dc_spectrum) - dc_spectrum.ground_energy
    slope = hellmann_feynman_slope(dc_spectrum)
    assert abs(slope - shift) < abs(shift) * mp.mpf("1e-8"), (
        f"dE/dλ={slope} 与一阶修正 {shift} 不符"
    )


def test_finite_difference_slope():
    slope = finite_difference_slope(lambda x: x**3, 2)
    assert abs(slope - 12) < mp.mpf("1e-14")
    with pytest.raises(ValueError):
        finite_difference_slope(lambda x: x, 0, 0)


def test_index_checks(dc_spectrum, ps):
    with pytest.raises(IndexOutOfRange):
        breit_pt1(dc_spectrum, dc_spectrum.count)
    with pytest.raises(IndexOutOfRange):
        breit_pt2(dc_spectrum, -1)

    dcb = solve_projected(ps, BASIS, "DCB", projector=dc_spectrum.projector)
    with pytest.raises(ValueError):
        breit_corrections(dcb)

PRESET_NAMES = ("ps", "mu", "h", "muh", "h10")


def preset_basis(system):
    """按 μ² 缩放的三函数偶调和基组"""
    return BASIS.scaled(system.mu**2)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_projector_cut_for_every_preset(name):
    system = make_system(name)
    basis = preset_basis(system)
    projector = build_projector(system, basis)

    assert projector.count == 4 * basis.n_b
    assert len(projector.spatial_energies) == basis.n_b
    gap = system.m_min * system.c**2 * mp.mpf("1e-3")
    assert min(projector.spatial_energies) - projector.cut > gap, "正能分支离截断太近"
    assert projector.cut - max(projector.rejected_energies) > gap, "负能分支离截断太近"


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_projector_idempotent(name):
    system = make_system(name)
    basis = preset_basis(system)
    projector = build_projector(system, basis)
    u = projector.spatial_vectors
    p = u * u.T * spatial_metric(system, basis)

    defect = max_abs(p * p - p)
    assert defect < mp.mpf("1e-25") * max(1, max_abs(p)), f"P² ≠ P，偏差 {mp.nstr(defect, 5)}"


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_spectrum_bounded_and_breit_attractive(name):
    system = make_system(name)
    basis = preset_basis(system)
    e_nr = solve_nonrelativistic(system, basis).energy
    dc = solve_projected(system, basis, "DC")
    dcb = solve_projected(system, basis, "DCB", projector=dc.projector)

    floor = -10 * abs(e_nr)
    assert min(dc.eigenvalues) > floor, "投影后的 DC 谱不应坍缩"
    assert min(dcb.eigenvalues) > floor, "投影后的 DCB 谱不应坍缩"
    assert dcb.ground_energy < dc.ground_energy, "单态基态的 Breit 修正应为负"


def test_nonrelativistic_limit(ps, dc_spectrum):
    e_nr = solve_nonrelativistic(ps, BASIS).energy
    weak = ps.with_alpha_inverse(ps.alpha_inverse * 100)
    e_weak = solve_projected(weak, BASIS, "DC").ground_energy

    ratio = abs(e_weak - e_nr) / abs(dc_spectrum.ground_energy - e_nr)
    assert mp.mpf("0.5e-4") < ratio < mp.mpf("1.5e-4"), (
        f"α 缩小 100 倍后相对论修正之比 {mp.nstr(ratio, 6)}，应约为 10⁻⁴"
    )


def test_nested_bases_lower_dc_energy(ps, dc_spectrum):
    smaller = BasisSet(tuple(BASIS)[:2])
    larger = BASIS.with_appended("1.9")
    e_small = solve_projected(ps, smaller, "DC").ground_energy
    e_large = solve_projected(ps, larger, "DC").ground_energy

    assert e_small >= dc_spectrum.ground_energy >= e_large, (
        f"嵌套基组的 E_DC 应单调不增: {e_small}, {dc_spectrum.ground_energy}, {e_large}"
    )


@pytest.fixture(scope="module")
def ps_twenty(ps):
    optimized = optimize_exponents(ps, 20, target="1e-16")
    spectrum = solve_projected(ps, optimized.basis, "DC")
    dcb = solve_projected(ps, optimized.basis, "DCB", projector=spectrum.projector)
    return optimized, breit_corrections(spectrum), dcb


@pytest.mark.slow
@pytest.mark.parametrize(
    "column, expected, tolerance",
    [
        ("e_nr", "-0.2499999999194", "1e-11"),
        ("e_dc", "-0.249997552650", "2e-9"),
        ("e_pt1", "-0.250017362124", "2e-9"),
        ("e_pt2", "-0.250017403806", "2e-9"),
        ("e_dcb", "-0.250017404023", "2e-9"),
    ],
)
def test_ps_twenty_function_energies(ps_twenty, column, expected, tolerance):
    optimized, corrections, dcb = ps_twenty
    values = {
        "e_nr": optimized.energy,
        "e_dc": corrections.e_dc,
        "e_pt1": corrections.e_pt1,
        "e_pt2": corrections.e_pt2,
        "e_dcb": dcb.ground_energy,
    }
    value = values[column]
    assert abs(value - mp.mpf(expected)) < mp.mpf(tolerance), f"{column} = {value}，期望 {expected}"


@pytest.mark.slow
def test_muonic_hydrogen_ten_function_dc():
    system = make_system("muh")
    optimized = optimize_exponents(system, 10, target="1e-12")
    e_dc = solve_projected(system, optimized.basis, "DC").ground_energy
    assert abs(e_dc - mp.mpf("-92.92073069326")) < mp.mpf("1e-6"), f"μH E_DC = {e_dc}"


if __name__ == "__main__":
    system = make_system("ps")
    spectrum = solve_projected(system, BASIS, "DC")
    test_energy_cut(system)
    test_projector_separates_branches(system)
    test_perturbative_breit_ordering(spectrum)
    test_hellmann_feynman_matches_first_order(spectrum)
    print("无对投影测试通过！")
