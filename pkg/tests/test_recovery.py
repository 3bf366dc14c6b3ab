"""Sparse recovery, the weak transition curve, and the Monte Carlo grid.

The weak-threshold implementation is checked against an independent oracle:
the Gaussian shortfall moment E(z) = integral_z^inf (u - z)^2 phi(u) du is
evaluated by quadrature here and substituted into the same objective, so a
closed-form slip in the library would show up as a curve mismatch.
"""

import math

import numpy as np
import pytest

from nuwsim.recovery import (
    PhaseTransitionGrid,
    RecoveryResult,
    dt_curve,
    omp,
    phase_transition,
    support_success,
    weak_threshold,
)
from nuwsim.seeding import seed_derive
from nuwsim.sensing import effective_matrix, nuwbs_plan
from nuwsim.signals import SparseSpectrum, SubBandSpec, idft

TWO_BAND = SubBandSpec(n=256, bands=((64, 80), (160, 176)))

# frozen from a hand evaluation of the weak-threshold maximization
WEAK_EXPECTED = {
    0.0625: 0.16423,
    0.25: 0.26738,
    0.5: 0.38569,
    0.75: 0.53371,
}


def quadrature_weak_threshold(delta):
    """Oracle: same maximization, E(z) by trapezoid quadrature."""
    us_all = np.linspace(0.0, 20.0, 200001)
    phi = np.exp(-0.5 * us_all**2) / np.sqrt(2 * np.pi)

    def shortfall(z):
        w = np.clip(us_all - z, 0.0, None)
        return np.trapezoid(w**2 * phi, us_all)

    best = 0.0
    for z in np.linspace(1e-6, 12.0, 2401):
        e = shortfall(z)
        den = 1.0 + z * z - 2.0 * e
        if den <= 0:
            continue
        val = (1.0 - (2.0 / delta) * e) / den
        best = max(best, val)
    return best


@pytest.mark.parametrize("delta", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_weak_threshold_matches_quadrature_oracle(delta):
    assert abs(weak_threshold(delta) - quadrature_weak_threshold(delta)) < 1e-4


def test_weak_threshold_frozen_values():
    for delta, expected in WEAK_EXPECTED.items():
        assert abs(weak_threshold(delta) - expected) < 5e-4


def test_weak_threshold_endpoints():
    assert weak_threshold(1.0) == 1.0
    with pytest.raises(ValueError):
        weak_threshold(0.0)
    with pytest.raises(ValueError):
        weak_threshold(1.5)


def test_weak_threshold_is_increasing():
    deltas = np.linspace(0.05, 1.0, 39)
    rhos = [weak_threshold(d) for d in deltas]
    assert np.all(np.diff(rhos) > 0)


def test_dt_curve_is_delta_times_rho():
    deltas = np.array([0.25, 0.5])
    curve = dt_curve(deltas)
    assert np.allclose(curve, [0.25 * weak_threshold(0.25), 0.5 * weak_threshold(0.5)])


@pytest.fixture(scope="module")
def full_plan_matrix():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    return plan, effective_matrix(plan)


def sparse_measurement(matrix, support, values):
    coeffs = np.zeros(256, dtype=np.complex128)
    coeffs[support] = values
    return matrix.entries @ coeffs


def test_omp_exhaustive_single_tone(full_plan_matrix):
    _, matrix = full_plan_matrix
    for b in TWO_BAND.sigma:
        y = sparse_measurement(matrix, [b], [np.exp(0.3j)])
        result = omp(matrix, y, 1, sigma=TWO_BAND.sigma)
        assert result.support.shape == (1,) and result.support[0] == b
        assert abs(result.coefficients[0] - np.exp(0.3j)) < 1e-8


def test_omp_recovers_support_and_values(full_plan_matrix):
    _, matrix = full_plan_matrix
    rng = seed_derive(31)
    support = np.sort(rng.choice(TWO_BAND.sigma, size=4, replace=False))
    values = np.exp(2j * np.pi * rng.uniform(size=4))
    y = sparse_measurement(matrix, support, values)
    result = omp(matrix, y, 4, sigma=TWO_BAND.sigma)
    assert support_success(result, support)
    assert np.allclose(result.coefficients, values, atol=1e-8)
    assert np.array_equal(result.support, np.sort(result.support))


def test_omp_support_coefficients_stay_aligned(full_plan_matrix):
    # support is reported sorted; coefficients must follow the permutation
    _, matrix = full_plan_matrix
    rng = seed_derive(32)
    support = np.array([70, 165])
    values = np.array([0.5 + 0.1j, 2.0 - 0.3j])
    y = sparse_measurement(matrix, support, values)
    result = omp(matrix, y, 2, sigma=TWO_BAND.sigma)
    assert np.array_equal(result.support, support)
    assert np.allclose(result.coefficients, values, atol=1e-8)


def test_omp_residual_monotone_in_iterations(full_plan_matrix):
    _, matrix = full_plan_matrix
    rng = seed_derive(33)
    for _ in range(100):
        support = np.sort(rng.choice(TWO_BAND.sigma, size=6, replace=False))
        values = np.exp(2j * np.pi * rng.uniform(size=6))
        y = sparse_measurement(matrix, support, values)
        prev = math.inf
        for k in range(1, 9):
            resid = omp(matrix, y, k, sigma=TWO_BAND.sigma).residual_norm
            assert resid <= prev + 1e-12
            prev = resid


def test_omp_full_measurement_high_sparsity_success(full_plan_matrix):
    # all 32 comb slots kept: recovery succeeds comfortably at K = 4
    _, matrix = full_plan_matrix
    wins = 0
    for t in range(100):
        rng = seed_derive(34, (t,))
        support = np.sort(rng.choice(TWO_BAND.sigma, size=4, replace=False))
        values = np.exp(2j * np.pi * rng.uniform(size=4))
        y = sparse_measurement(matrix, support, values)
        wins += support_success(omp(matrix, y, 4, sigma=TWO_BAND.sigma), support)
    assert wins >= 95


def test_omp_accepts_plain_arrays():
    rng = seed_derive(35)
    a = (rng.standard_normal((16, 8)) + 1j * rng.standard_normal((16, 8))) / 4.0
    x = np.zeros(8, dtype=np.complex128)
    x[[2, 5]] = [1.0, 1j]
    result = omp(a, a @ x, 2)
    assert isinstance(result, RecoveryResult)
    assert np.array_equal(result.support, [2, 5])


def test_omp_validates_arguments(full_plan_matrix):
    _, matrix = full_plan_matrix
    y = np.zeros(32, dtype=np.complex128)
    with pytest.raises(ValueError):
        omp(matrix, y[:10], 1, sigma=TWO_BAND.sigma)
    with pytest.raises(ValueError):
        omp(matrix, y, 33, sigma=TWO_BAND.sigma)
    with pytest.raises(ValueError):
        omp(matrix, y, -1, sigma=TWO_BAND.sigma)
    with pytest.raises(ValueError):
        omp(matrix, y, 1, sigma=np.array([64, 64]))
    with pytest.raises(ValueError):
        omp(matrix, y, 1, sigma=np.array([500]))


def test_omp_zero_k_is_empty(full_plan_matrix):
    _, matrix = full_plan_matrix
    y = sparse_measurement(matrix, [70], [1.0])
    result = omp(matrix, y, 0, sigma=TWO_BAND.sigma)
    assert result.support.shape == (0,)
    assert result.iterations == 0
    assert np.isclose(result.residual_norm, np.linalg.norm(y))


def test_support_success_requires_exact_match():
    result = RecoveryResult(
        n=256,
        support=np.array([64, 70]),
        coefficients=np.ones(2, dtype=np.complex128),
        order=np.array([70, 64]),
        residual_norm=0.0,
        rank_deficient=False,
    )
    assert support_success(result, np.array([70, 64]))
    assert not support_success(result, np.array([64, 71]))
    assert not support_success(result, np.array([64]))


def test_phase_transition_small_grid_properties():
    grid = phase_transition(TWO_BAND, 4.0, 16, (8, 32), (0, 1, 2), 10, 77)
    assert isinstance(grid, PhaseTransitionGrid)
    assert grid.success.shape == (2, 3)
    # k = 0 succeeds vacuously; full measurement at k = 1 is immediate
    assert grid.success[0, 0] == 1.0 and grid.success[1, 0] == 1.0
    assert grid.success[1, 1] == 1.0
    assert np.allclose(grid.m_ratios, [8 / 32, 32 / 32])
    assert np.allclose(grid.k_ratios, [0.0, 1 / 32, 2 / 32])
    assert grid.trials == 10
    assert grid.dt_deltas[0] == 0.05 and grid.dt_deltas[-1] == 1.0


def test_phase_transition_is_seed_deterministic():
    a = phase_transition(TWO_BAND, 4.0, 16, (12,), (2, 4), 20, 5)
    b = phase_transition(TWO_BAND, 4.0, 16, (12,), (2, 4), 20, 5)
    c = phase_transition(TWO_BAND, 4.0, 16, (12,), (2, 4), 20, 6)
    assert np.array_equal(a.success, b.success)
    assert not np.array_equal(a.success, c.success)


def test_phase_transition_workers_do_not_change_results():
    a = phase_transition(TWO_BAND, 4.0, 16, (8, 16), (1, 2, 3), 15, 9, workers=1)
    b = phase_transition(TWO_BAND, 4.0, 16, (8, 16), (1, 2, 3), 15, 9, workers=4)
    assert np.array_equal(a.success, b.success)


def test_phase_transition_marks_unattainable_cells():
    # the comb only has 32 slots; m = 40 cannot be realized
    grid = phase_transition(TWO_BAND, 4.0, 16, (8, 40), (1,), 5, 3)
    assert np.isfinite(grid.success[0, 0])
    assert np.isnan(grid.success[1, 0])


def test_phase_transition_validates_grids():
    with pytest.raises(ValueError):
        phase_transition(TWO_BAND, 4.0, 16, (), (1,), 5, 0)
    with pytest.raises(ValueError):
        phase_transition(TWO_BAND, 4.0, 16, (8,), (64,), 5, 0)
    with pytest.raises(ValueError):
        phase_transition(TWO_BAND, 4.0, 16, (8,), (1,), 0, 0)
