"""
测试解析积分与独立求积验证器的一致性，以及自旋缩并
"""

import sys
from itertools import permutations, product
from pathlib import Path

import pytest
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from src.errors import QuadratureNotConverged, ResidualImaginary
from src.integrals.breit import _ket_gauge, _sandwich_gauge, breit_block, breit_prefactor
from src.integrals.gaussian import (
    AXES,
    ExponentPair,
    biharmonic,
    coulomb,
    coulomb_hessian,
    f1,
    f2,
    grad_coulomb_grad,
    gradgrad_coulomb_gradgrad,
    i1,
    i2,
    laplacian,
    overlap,
    tensor_components,
)
from src.integrals.spin import contract, sigma_dot_sigma
from src.linalg.precision import configure_precision
from src.models.system import make_system
from src.oracles import quadrature as oracle

configure_precision(34)

PAIR = ExponentPair("0.7", "1.9")

# 覆盖全等、两两配对、无配对三类指标组合
INDEX4 = [
    (0, 0, 0, 0),
    (0, 0, 1, 1),
    (0, 1, 0, 1),
    (0, 1, 1, 0),
    (1, 2, 1, 2),
    (2, 2, 0, 0),
    (0, 1, 2, 2),
    (0, 1, 0, 0),
]
INDEX2 = list(product(AXES, repeat=2))


def assert_close(got, want, what):
    tolerance = mp.mpf("1e-24") * max(abs(want), 1)
    assert abs(got - want) <= tolerance, f"{what}: 解析 {got} 与数值 {want} 不符"


def test_normalized_overlap():
    assert abs(overlap(ExponentPair("1.3", "1.3")) - 1) < mp.mpf("1e-32"), "归一化高斯自重叠应为 1"


def test_overlap_matches_quadrature():
    assert_close(overlap(PAIR), oracle.oracle_overlap(PAIR), "overlap")


def test_coulomb_matches_quadrature():
    assert_close(coulomb(PAIR), oracle.oracle_coulomb(PAIR), "coulomb")


def test_laplacian_matches_quadrature():
    assert_close(laplacian(PAIR), oracle.oracle_laplacian(PAIR), "laplacian")


def test_biharmonic_matches_quadrature():
    assert_close(biharmonic(PAIR), oracle.oracle_biharmonic(PAIR), "biharmonic")


def test_f1_matches_quadrature():
    tensor = f1(PAIR)
    for i, j in INDEX2:
        assert_close(tensor(i, j), oracle.oracle_f1(PAIR, i, j), f"F1[{i}{j}]")


def test_f2_matches_quadrature():
    tensor = f2(PAIR)
    for idx in INDEX4:
        assert_close(tensor(*idx), oracle.oracle_f2(PAIR, *idx), f"F2{idx}")


def test_grad_coulomb_grad_matches_quadrature():
    tensor = grad_coulomb_grad(PAIR)
    for i, j in INDEX2:
        assert_close(tensor(i, j), oracle.oracle_grad_coulomb_grad(PAIR, i, j), f"GC[{i}{j}]")


def test_gradgrad_coulomb_gradgrad_matches_quadrature():
    tensor = gradgrad_coulomb_gradgrad(PAIR)
    for idx in INDEX4:
        assert_close(
            tensor(*idx), oracle.oracle_gradgrad_coulomb_gradgrad(PAIR, *idx), f"GG{idx}"
        )


def test_coulomb_hessian_matches_quadrature():
    tensor = coulomb_hessian(PAIR)
    for k, l in INDEX2:
        assert_close(tensor(k, l), oracle.oracle_coulomb_hessian(PAIR, k, l), f"H[{k}{l}]")


def test_i1_matches_quadrature():
    for idx in INDEX4 + [(1, 0, 0, 0), (0, 0, 0, 1)]:
        assert_close(i1(PAIR, *idx), oracle.oracle_i1(PAIR, *idx), f"I1{idx}")
        swapped = PAIR.swapped()
        assert_close(i1(swapped, *idx), oracle.oracle_i1(swapped, *idx), f"I1{idx} (交换)")


def test_i2_matches_quadrature():
    for idx in INDEX4:
        assert_close(i2(PAIR, *idx), oracle.oracle_i2(PAIR, *idx), f"I2{idx}")


def test_i2_fully_symmetric():
    for idx in product(AXES, repeat=4):
        reference = i2(PAIR, *idx)
        for perm in permutations(idx):
            assert i2(PAIR, *perm) == reference, f"I2 对 {idx} 的置换 {perm} 不对称"


def test_breit_gauge_terms_match_quadrature():
    ket = _ket_gauge(PAIR)
    sandwich = _sandwich_gauge(PAIR)
    for idx in INDEX4:
        assert_close(ket(*idx), oracle.oracle_distance_hessian(PAIR, *idx), f"∂∂r·∂∂{idx}")
        assert_close(
            sandwich(*idx), oracle.oracle_distance_hessian_sandwich(PAIR, *idx), f"∂·∂∂r·∂{idx}"
        )


def test_derivative_terms_pairs_monomial_with_coefficient():
    zeta = mp.mpf("0.7")
    assert oracle.derivative_terms(zeta, (0,)) == [((0,), -2 * zeta)]
    terms = dict(oracle.derivative_terms(zeta, (0, 0)))
    assert terms == {(): -2 * zeta, (0, 0): 4 * zeta**2}, "∂ₓ² e^{-ζr²} = (4ζ²x² − 2ζ) e^{-ζr²}"


PAULI = (
    mp.matrix([[0, 1], [1, 0]]),
    mp.matrix([[0, -1j], [1j, 0]]),
    mp.matrix([[1, 0], [0, -1]]),
)
SINGLET = {(0, 1): 1 / mp.sqrt(2), (1, 0): -1 / mp.sqrt(2)}


def singlet_weight(first, second):
    """⟨S|A⊗B|S⟩，A、B 为单粒子 2×2 自旋算符"""
    total = mp.mpc(0)
    for (s1, s2), bra in SINGLET.items():
        for (t1, t2), ket in SINGLET.items():
            total += bra * first[s1, t1] * second[s2, t2] * ket
    assert abs(total.imag) < mp.mpf("1e-30")
    return total.real


def brute_force_singlet_b1(pair, system):
    """直接按 -B(σ₁·p)(σ₂·p)/(4c²m₁m₂) 展开求单态对角元"""
    total = mp.mpf(0)
    for a, b, k, l in product(AXES, repeat=4):
        gauge = singlet_weight(PAULI[a] * PAULI[k], PAULI[b] * PAULI[l])
        if gauge:
            total -= gauge * oracle.oracle_distance_hessian(pair, a, b, k, l) / 2
    for m, k, l in product(AXES, repeat=3):
        gaunt = singlet_weight(PAULI[m] * PAULI[k], PAULI[m] * PAULI[l])
        if gaunt:
            total += gaunt * oracle.oracle_coulomb_hessian(pair, k, l)
    return breit_prefactor(system) * total


def brute_force_singlet_b2(pair, system):
    """-(σ₂·p)B(σ₁·p)/(4c²m₁m₂)：p 作用到两侧后为 ⟨∂f|B|∂f⟩"""
    total = mp.mpf(0)
    for k, a, b, l in product(AXES, repeat=4):
        gauge = singlet_weight(PAULI[a] * PAULI[l], PAULI[k] * PAULI[b])
        if gauge:
            total -= gauge * oracle.oracle_distance_hessian_sandwich(pair, k, a, b, l) / 2
    for k, m, l in product(AXES, repeat=3):
        gaunt = singlet_weight(PAULI[m] * PAULI[l], PAULI[k] * PAULI[m])
        if gaunt:
            total += gaunt * oracle.oracle_grad_coulomb_grad(pair, k, l)
    return -breit_prefactor(system) * total


@pytest.mark.parametrize(
    "which, brute_force", [("B1", brute_force_singlet_b1), ("B2", brute_force_singlet_b2)]
)
def test_breit_singlet_element_matches_operator(which, brute_force):
    system = make_system("ps")
    singlet = mp.matrix([0, 1, -1, 0]) / mp.sqrt(2)
    for pair in (PAIR, ExponentPair("0.7", "0.7")):
        block = breit_block(which, pair, system)
        analytic = (singlet.T * block * singlet)[0, 0]
        assert_close(analytic, brute_force(pair, system), f"{which} 单态对角元 {pair}")


def test_quad_radial_value_and_failure():
    spec = oracle.QuadratureSpec(name="gauss", integrand=lambda r: 4 * mp.pi * r**2 * mp.exp(-r**2))
    value, error = oracle.quad_radial(spec)
    assert abs(value - mp.pi ** mp.mpf(1.5)) < mp.mpf("1e-26")
    assert error >= 0

    kinked = oracle.QuadratureSpec(
        name="kink",
        integrand=lambda r: mp.sqrt(abs(r - mp.mpf("0.37"))) * mp.exp(-r),
        tolerance="1e-30",
        relative=False,
        max_degree=2,
    )
    with pytest.raises(QuadratureNotConverged):
        oracle.quad_radial(kinked)


def test_tensor_components_count():
    assert len(tensor_components(f2(PAIR))) == 81
    assert f1(PAIR).trace() == 3 * f1(PAIR)(0, 0)


def test_sigma_dot_sigma_singlet():
    """σ₁·σ₂ = 2P₁₂ − 1：单态 −3，三重态 +1"""
    matrix = sigma_dot_sigma()
    assert matrix[0, 0] == 1, "|↑↑⟩ 为三重态"
    assert matrix[1, 1] == -1
    assert matrix[1, 2] == 2

    singlet = mp.matrix([0, 1, -1, 0])
    image = matrix * singlet
    for i in range(4):
        assert image[i] == -3 * singlet[i], "单态本征值应为 -3"


def test_contract_sums_repeated_letters():
    matrix = contract("11", "kk", lambda k: 1)
    for r in range(4):
        for c in range(4):
            assert matrix[r, c] == (3 if r == c else 0), "Σ σ_k σ_k 应为 3·1"


def test_contract_rejects_imaginary_result():
    with pytest.raises(ResidualImaginary):
        contract("12", "kl", lambda k, l: 1 if (k, l) == (0, 1) else 0)


if __name__ == "__main__":
    test_normalized_overlap()
    test_overlap_matches_quadrature()
    test_coulomb_matches_quadrature()
    test_f1_matches_quadrature()
    test_i2_fully_symmetric()
    test_sigma_dot_sigma_singlet()
    print("积分测试通过！")
