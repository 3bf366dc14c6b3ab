"""Support-restricted sparse recovery and the phase-transition experiment.

Recovery uses orthogonal matching pursuit over the Fourier columns of the
occupied bins; the theoretical reference is the weak phase-transition
threshold for Gaussian ensembles, mapped onto the same axes as the
empirical grid (both in multiples of the occupied-bin count).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .kernels import omp_greedy
from .seeding import seed_derive
from .sensing import EffectiveSensingMatrix, effective_matrix, nuwbs_plan, puncture_slots
from .signals import SubBandSpec, draw_sparse_coefficients

__all__ = [
    "RecoveryResult",
    "PhaseTransitionGrid",
    "omp",
    "support_success",
    "weak_threshold",
    "dt_curve",
    "phase_transition",
]


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of one pursuit: support is sorted, coefficients align with it."""

    n: int
    support: np.ndarray
    coefficients: np.ndarray
    order: np.ndarray
    residual_norm: float
    rank_deficient: bool

    def __post_init__(self):
        for name in ("support", "order"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        coef = np.asarray(self.coefficients, dtype=np.complex128)
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    @property
    def iterations(self) -> int:
        return int(self.order.shape[0])


def omp(matrix, y, k: int, sigma=None, rel_tol: float = 1e-10) -> RecoveryResult:
    """Orthogonal matching pursuit restricted to the candidate bins `sigma`.

    `matrix` is an EffectiveSensingMatrix or a plain (m, n) array of sensing
    rows. Runs at most k iterations (k must not exceed |sigma|), with early
    exit once the residual falls to rel_tol times the measurement norm.
    Rank-deficient refits are solved minimum-norm and flagged in the result.
    """
    if isinstance(matrix, EffectiveSensingMatrix):
        entries = matrix.entries
    else:
        entries = np.asarray(matrix, dtype=np.complex128)
        if entries.ndim != 2:
            raise ValueError("matrix must be 2-d")
    m, n = entries.shape
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (m,):
        raise ValueError(f"y must have shape ({m},), got {y.shape}")
    if sigma is None:
        sigma = np.arange(n, dtype=np.int64)
    else:
        sigma = np.asarray(sigma, dtype=np.int64)
        if sigma.ndim != 1 or sigma.shape[0] == 0:
            raise ValueError("sigma must be a nonempty 1-d bin index set")
        if np.unique(sigma).shape[0] != sigma.shape[0]:
            raise ValueError("sigma bins must be unique")
        if sigma.min() < 0 or sigma.max() >= n:
            raise ValueError(f"sigma bins must lie in [0, {n})")
    k = int(k)
    if not (0 <= k <= sigma.shape[0]):
        raise ValueError(f"k must be in [0, {sigma.shape[0]}], got {k}")

    a = np.ascontiguousarray(entries[:, sigma])
    order_idx, coef, resid_norm, rank_deficient = omp_greedy(a, y, k, float(rel_tol))
    order_bins = sigma[order_idx]
    perm = np.argsort(order_bins)
    return RecoveryResult(
        n=n,
        support=order_bins[perm],
        coefficients=np.asarray(coef)[perm],
        order=order_bins,
        residual_norm=float(resid_norm),
        rank_deficient=bool(rank_deficient),
    )


def support_success(result: RecoveryResult, true_support) -> bool:
    """Exact support match: recovered bin set equals the true bin set."""
    truth = np.unique(np.asarray(true_support, dtype=np.int64))
    return result.support.shape == truth.shape and bool(np.all(result.support == truth))


# Weak phase-transition threshold for the real-Gaussian ensemble. The
# parametric characterization below maximizes over the threshold parameter z;
# E(z) is the second moment of the shortfall (u - z)^+ under the standard
# normal, which has the closed form used here.

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _gauss_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) * _INV_SQRT_2PI


def _gauss_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _shortfall_moment(z: float) -> float:
    return (1.0 + z * z) * _gauss_cdf(-z) - z * _gauss_pdf(z)


def _weak_objective(z: float, delta: float) -> float:
    e = _shortfall_moment(z)
    den = 1.0 + z * z - 2.0 * e
    if den <= 0.0:
        return -math.inf
    return (1.0 - (2.0 / delta) * e) / den


def weak_threshold(delta: float) -> float:
    """Weak threshold rho(delta) = k/m boundary at undersampling delta = m/n.

    Computed by maximizing the parametric objective over z; smooth and
    unimodal, so a coarse bracket plus ternary refinement is exact to
    machine precision for practical purposes.
    """
    delta = float(delta)
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if delta == 1.0:
        return 1.0
    zs = np.linspace(1e-6, 12.0, 4801)
    vals = [_weak_objective(z, delta) for z in zs]
    i = int(np.argmax(vals))
    lo = zs[max(i - 1, 0)]
    hi = zs[min(i + 1, zs.shape[0] - 1)]
    for _ in range(120):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if _weak_objective(m1, delta) < _weak_objective(m2, delta):
            lo = m1
        else:
            hi = m2
    return _weak_objective(0.5 * (lo + hi), delta)


def dt_curve(deltas) -> np.ndarray:
    """Recovery boundary in k/n units over undersampling ratios delta = m/n.

    Returns delta * rho(delta) pointwise, so the curve lives on the same
    axes as the empirical grid: a cell (m/n, k/n) below the curve is
    theoretically recoverable. Monotone increasing with dt_curve([1.0]) = 1.
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=np.float64))
    if deltas.ndim != 1 or deltas.shape[0] == 0:
        raise ValueError("deltas must be a nonempty 1-d array")
    return np.array([d * weak_threshold(d) for d in deltas])


@dataclass(frozen=True)
class PhaseTransitionGrid:
    """Empirical success surface with the theoretical boundary attached.

    success[i, j] is the Monte-Carlo success rate at (m_values[i],
    k_values[j]); unattainable cells (more measurements requested than comb
    slots exist) hold NaN. dt_deltas/dt_rhos sample the theoretical boundary
    on the same normalized axes.
    """

    m_values: np.ndarray
    k_values: np.ndarray
    m_ratios: np.ndarray
    k_ratios: np.ndarray
    success: np.ndarray
    trials: int
    dt_deltas: np.ndarray
    dt_rhos: np.ndarray

    def __post_init__(self):
        for name in ("m_values", "k_values"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("m_ratios", "k_ratios", "success", "dt_deltas", "dt_rhos"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def phase_transition(
    spec: SubBandSpec,
    tau: float,
    gamma: int,
    m_values,
    k_values,
    trials: int,
    master_seed: int,
    *,
    rel_tol: float = 1e-10,
    workers: int = 1,
) -> PhaseTransitionGrid:
    """Success-rate grid of noiseless pursuit over measurement/sparsity counts.

    Per cell (m, k) and trial: puncture the full bandpass comb down to m
    atoms, draw a k-sparse in-band spectrum with unit-magnitude random-phase
    coefficients, measure, and pursue with exactly k picks. Every trial's
    generator derives from (master_seed, m, k, trial), so the grid is
    reproducible under any worker count.
    """
    m_values = np.asarray(m_values, dtype=np.int64)
    k_values = np.asarray(k_values, dtype=np.int64)
    if m_values.ndim != 1 or m_values.shape[0] == 0 or np.any(m_values < 1):
        raise ValueError("m_values must be a nonempty 1-d array of positive counts")
    if k_values.ndim != 1 or k_values.shape[0] == 0 or np.any(k_values < 0):
        raise ValueError("k_values must be a nonempty 1-d array of counts")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    sigma = spec.sigma
    s_len = sigma.shape[0]
    if np.any(k_values > s_len):
        raise ValueError(f"k_values must not exceed |sigma| = {s_len}")

    # One full comb; per-trial plans only re-select its rows.
    full_plan = nuwbs_plan(spec, tau=tau, gamma=gamma)
    theta_sigma = np.ascontiguousarray(effective_matrix(full_plan).entries[:, sigma])
    branches = len(spec.bands)
    slots_per_branch = spec.n // gamma
    total_slots = branches * slots_per_branch

    def run_cell(i: int, j: int) -> float:
        m = int(m_values[i])
        k = int(k_values[j])
        if m > total_slots:
            return math.nan  # unattainable: comb has no m-th slot to keep
        wins = 0
        for t in range(trials):
            rng = seed_derive(master_seed, (m, k, t))
            rows = puncture_slots(slots_per_branch, branches, m / total_slots, rng)
            support, values = draw_sparse_coefficients(spec, k, rng)
            support_idx = np.searchsorted(sigma, support)
            y = theta_sigma[np.ix_(rows, support_idx)] @ values
            a = theta_sigma[rows, :]
            order_idx, _, _, _ = omp_greedy(a, y, k, rel_tol)
            if order_idx.shape[0] == k and np.array_equal(np.sort(order_idx), support_idx):
                wins += 1
        return wins / trials

    cells = [(i, j) for i in range(m_values.shape[0]) for j in range(k_values.shape[0])]
    success = np.empty((m_values.shape[0], k_values.shape[0]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rates = list(pool.map(lambda ij: run_cell(*ij), cells))
    else:
        rates = [run_cell(i, j) for i, j in cells]
    for (i, j), rate in zip(cells, rates):
        success[i, j] = rate

    dt_deltas = np.linspace(0.05, 1.0, 39)
    return PhaseTransitionGrid(
        m_values=m_values,
        k_values=k_values,
        m_ratios=m_values / s_len,
        k_ratios=k_values / s_len,
        success=success,
        trials=int(trials),
        dt_deltas=dt_deltas,
        dt_rhos=dt_curve(dt_deltas),
    )
