import math

import numpy as np
import pytest

from boundary_oracle import branch_energy, oracle_min
from deformed_space import PhysicalContext, SolveMethod, UncertaintyPoint, constraint_residual, DeformationParams
from deformed_space import nondimensionalize_harmonic, to_nondim
from errors import InvalidDeformationError
from harmonic_oscillator import (
    harmonic_energy_physical,
    harmonic_lambdas,
    harmonic_linear,
    harmonic_minimum,
    harmonic_minimum_physical,
    k_pair,
)
from potentials import evaluator, parse_potential


def random_deformations(rng, count, upper=3.0):
    pairs = []
    while len(pairs) < count:
        alpha, beta = rng.uniform(0.0, upper, size=2)
        if alpha * beta < 0.25:
            pairs.append((alpha, beta))
    return pairs


def test_k_pair_undeformed():
    pair = k_pair(0.0, 0.0)
    assert (pair.k1, pair.k2) == (-1.0, 1.0)


def test_k_pair_sum_example():
    pair = k_pair(0.3, 0.1)
    assert pair.k1 + pair.k2 == pytest.approx(-0.4, abs=1e-12)


def test_k_pair_identities():
    rng = np.random.default_rng(7)
    for alpha, beta in random_deformations(rng, 10_000):
        pair = k_pair(alpha, beta)
        assert pair.k1 < 0 < pair.k2
        assert pair.k1 * pair.k2 == pytest.approx(-1.0, abs=1e-12)
        assert pair.k1 + pair.k2 == pytest.approx(2 * (beta - alpha), abs=1e-12)
        assert pair.k2 - pair.k1 == pytest.approx(2 * math.sqrt((beta - alpha) ** 2 + 1), abs=1e-12)


def test_k_pair_rejects_invalid_deformation():
    with pytest.raises(InvalidDeformationError):
        k_pair(0.5, 0.5)


def test_lambdas_reproduce_k_pair():
    rng = np.random.default_rng(8)
    for alpha, beta in random_deformations(rng, 200):
        lambda1, lambda2 = harmonic_lambdas(alpha, beta)
        a, b, c = 1 - 4 * alpha * beta, 4 * (alpha + beta), -4.0
        for lam in (lambda1, lambda2):
            assert a * lam * lam + b * lam + c == pytest.approx(0.0, abs=1e-9 * max(1.0, abs(b * lam)))
        pair = k_pair(alpha, beta)
        assert 2 * beta - 2 / lambda1 == pytest.approx(pair.k1, rel=1e-10)
        assert 2 * beta - 2 / lambda2 == pytest.approx(pair.k2, rel=1e-10)


def test_undeformed_ground_state():
    result = harmonic_minimum(0.0, 0.0)
    assert result.point.xi == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert result.point.q == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert result.energy_nd == pytest.approx(1.0, rel=1e-12)
    assert result.method is SolveMethod.CLOSED_FORM


def test_undeformed_ground_state_physical():
    ctx = PhysicalContext(hbar=1.0, mass=2.0, omega=3.0)
    assert harmonic_minimum_physical(ctx, 0.0, 0.0).energy_physical == pytest.approx(1.5, rel=1e-12)
    assert harmonic_energy_physical(ctx, 0.0, 0.0) == pytest.approx(1.5, rel=1e-12)


@pytest.mark.parametrize("beta", [0.0, 0.01, 0.3, 1.0, 7.5])
def test_beta_only_closed_form(beta):
    assert harmonic_minimum(0.0, beta).energy_nd == pytest.approx(beta + math.sqrt(1 + beta * beta), rel=1e-12)


def test_minimum_lies_on_boundary():
    rng = np.random.default_rng(9)
    for alpha, beta in random_deformations(rng, 500):
        result = harmonic_minimum(alpha, beta)
        assert abs(result.diagnostics.residual) <= 1e-10 * max(1.0, result.point.xi * result.point.q)
        assert result.energy_nd == pytest.approx(result.point.xi ** 2 + result.point.q ** 2, rel=1e-10)


def test_exchange_symmetry():
    rng = np.random.default_rng(10)
    for alpha, beta in random_deformations(rng, 200):
        direct = harmonic_minimum(alpha, beta)
        swapped = harmonic_minimum(beta, alpha)
        assert direct.energy_nd == pytest.approx(swapped.energy_nd, rel=1e-10)
        assert direct.point.xi == pytest.approx(swapped.point.q, rel=1e-10)
        assert direct.point.q == pytest.approx(swapped.point.xi, rel=1e-10)


@pytest.mark.parametrize("alpha", [1e3, 1e5, 1e7, 1e8])
def test_alpha_only_closed_form(alpha):
    result = harmonic_minimum(alpha, 0.0)
    assert result.energy_nd == pytest.approx(alpha + math.sqrt(1 + alpha * alpha), rel=1e-12)
    assert result.energy_nd == harmonic_minimum(0.0, alpha).energy_nd
    assert result.energy_nd == pytest.approx(result.point.xi ** 2 + result.point.q ** 2, rel=1e-12)


def test_exchange_symmetry_far_from_diagonal():
    rng = np.random.default_rng(14)
    for _ in range(500):
        large = 10 ** rng.uniform(0, 8)
        small = rng.uniform(0.0, 0.25) / large
        direct = harmonic_minimum(large, small)
        swapped = harmonic_minimum(small, large)
        assert direct.energy_nd == swapped.energy_nd
        assert (direct.point.xi, direct.point.q) == (swapped.point.q, swapped.point.xi)
        assert abs(direct.diagnostics.residual) <= 1e-10 * direct.point.xi * direct.point.q


def test_energy_monotone_in_each_parameter():
    grid = np.linspace(0.0, 0.45, 30)
    for fixed in (0.0, 0.2, 0.5):
        along_alpha = [harmonic_minimum(a, fixed).energy_nd for a in grid if a * fixed < 0.25]
        along_beta = [harmonic_minimum(fixed, b).energy_nd for b in grid if b * fixed < 0.25]
        assert np.all(np.diff(along_alpha) >= 0)
        assert np.all(np.diff(along_beta) >= 0)


def test_boundary_stationarity():
    pot = evaluator(parse_potential("x^2"))
    for alpha, beta in [(0.1, 0.1), (0.05, 0.4), (0.3, 0.02)]:
        result = harmonic_minimum(alpha, beta)
        xi = result.point.xi
        h = 1e-4
        energies = [branch_energy(pot, x, alpha, beta) for x in (xi - h, xi, xi + h)]
        assert energies[1] == pytest.approx(result.energy_nd, rel=1e-10)
        assert energies[0] + energies[2] - 2 * energies[1] > 0
        assert energies[1] <= min(energies[0], energies[2])


def test_matches_oracle():
    pot = evaluator(parse_potential("x^2"))
    result = harmonic_minimum(0.1, 0.1)
    assert result.energy_nd == pytest.approx(oracle_min(pot, 0.1, 0.1).energy_nd, abs=1e-8)


def test_physical_closed_form_matches_nondimensional_path():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 300:
        hbar, mass, omega = rng.uniform(0.5, 2.0, size=3)
        alpha_prime, beta_prime = rng.uniform(0.0, 1.0, size=2)
        if alpha_prime * beta_prime * hbar * hbar >= 0.99:
            continue
        ctx = PhysicalContext(hbar=hbar, mass=mass, omega=omega)
        nd = nondimensionalize_harmonic(ctx)
        dp = to_nondim(alpha_prime, beta_prime, nd)
        expected = nd.e0 * harmonic_minimum(dp.alpha, dp.beta).energy_nd
        assert harmonic_energy_physical(ctx, alpha_prime, beta_prime) == pytest.approx(expected, rel=1e-11)
        checked += 1


def test_physical_alpha_zero_reduces_to_beta_only_form():
    ctx = PhysicalContext(hbar=1.0, mass=2.0, omega=0.5)
    beta_prime = 0.8
    beta = ctx.hbar * ctx.mass * ctx.omega * beta_prime / 2
    expected = ctx.hbar * ctx.omega / 2 * (beta + math.sqrt(1 + beta * beta))
    assert harmonic_energy_physical(ctx, 0.0, beta_prime) == pytest.approx(expected, rel=1e-12)


def test_physical_closed_form_with_dominant_alpha():
    ctx = PhysicalContext(hbar=1.0, mass=2.0, omega=0.5)
    for alpha_prime in (1e3, 1e6, 1e9):
        alpha = ctx.hbar * alpha_prime / (2 * ctx.mass * ctx.omega)
        expected = ctx.hbar * ctx.omega / 2 * (alpha + math.sqrt(1 + alpha * alpha))
        assert harmonic_energy_physical(ctx, alpha_prime, 0.0) == pytest.approx(expected, rel=1e-12)


def test_linear_approximation():
    ctx = PhysicalContext(hbar=1.3, mass=0.7, omega=2.1)
    assert harmonic_linear(ctx, 0.0, 0.0) == pytest.approx(1.3 * 2.1 / 2)
    slope = (harmonic_linear(ctx, 0.0, 1e-3) - harmonic_linear(ctx, 0.0, 0.0)) / 1e-3
    assert slope == pytest.approx(1.3 ** 2 * 2.1 ** 2 * 0.7 / 4, rel=1e-9)


def test_linear_approximation_error_is_quadratic():
    ctx = PhysicalContext(hbar=1.0, mass=1.0, omega=1.0)
    gaps = []
    for scale in (2e-3, 1e-3, 5e-4):
        alpha_prime, beta_prime = 0.6 * scale, 1.0 * scale
        gaps.append(abs(harmonic_linear(ctx, alpha_prime, beta_prime)
                        - harmonic_energy_physical(ctx, alpha_prime, beta_prime)))
    assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=0.05)
    assert gaps[1] / gaps[2] == pytest.approx(4.0, rel=0.05)


def test_residual_helper_agrees_with_diagnostics():
    result = harmonic_minimum(0.2, 0.3)
    point = UncertaintyPoint(result.point.xi, result.point.q)
    assert constraint_residual(point, DeformationParams.nondim(0.2, 0.3)) == result.diagnostics.residual
