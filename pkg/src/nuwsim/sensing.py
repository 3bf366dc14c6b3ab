"""Sub-Nyquist acquisition models and their effective sensing matrices.

Three acquisition modes share one algebraic shape: a measurement is an inner
product between the signal and a unit-norm analysis row, so the effective
sensing matrix against the frequency basis is

    theta = R_omega @ W^H @ F^H

where W^H stacks conjugated analysis atoms (Dirac spikes for plain
non-uniform sampling) and F^H is the unitary inverse-DFT basis. Rows are
computed as conjugated unitary DFTs of the atoms, which keeps them exactly
unit-norm and makes the Dirac special case coincide bit-for-bit with direct
non-uniform sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import Signal, SubBandSpec, awgn, dft
from .wavelets import AtomParams, WaveletFrame, build_frame

__all__ = [
    "MODES",
    "MeasurementPlan",
    "EffectiveSensingMatrix",
    "PlanInfeasibleError",
    "nus_plan",
    "nuws_plan",
    "nuwbs_plan",
    "comb_shifts",
    "puncture_slots",
    "effective_matrix",
    "measure",
]

MODES = ("nus", "nuws", "nuwbs")


class PlanInfeasibleError(ValueError):
    """Raised when a measurement plan cannot be realized as specified."""


@dataclass(frozen=True)
class MeasurementPlan:
    """Which rows get acquired.

    omega holds time-sample indices for mode "nus" and frame-atom indices for
    modes "nuws"/"nuwbs". The frame is absent for "nus". gamma and
    puncture_keep are only meaningful for "nuwbs" plans.
    """

    mode: str
    n: int
    omega: np.ndarray
    frame: WaveletFrame | None = None
    gamma: int | None = None
    puncture_keep: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        omega = np.asarray(self.omega, dtype=np.int64).copy()
        if omega.ndim != 1 or omega.shape[0] == 0:
            raise ValueError("omega must be a nonempty 1-d index set")
        if np.unique(omega).shape[0] != omega.shape[0]:
            raise ValueError("omega must not contain duplicate indices")
        limit = self.n if self.mode == "nus" else len(self.frame)
        if omega.min() < 0 or omega.max() >= limit:
            raise ValueError(f"omega indices must lie in [0, {limit})")
        if self.mode == "nus":
            if self.frame is not None:
                raise ValueError("nus plans carry no frame")
        else:
            if self.frame is None:
                raise ValueError(f"{self.mode} plans need a frame")
            if self.frame.n != self.n:
                raise ValueError("frame grid length disagrees with plan n")
        if not (0.0 < self.puncture_keep <= 1.0):
            raise ValueError(f"puncture_keep must lie in (0, 1], got {self.puncture_keep}")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @property
    def m(self) -> int:
        return int(self.omega.shape[0])


@dataclass(frozen=True)
class EffectiveSensingMatrix:
    """theta = R_omega W^H F^H with unit-norm rows, shape (m, n)."""

    entries: np.ndarray
    plan: MeasurementPlan

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self):
        return self.entries.shape


def nus_plan(omega, n: int) -> MeasurementPlan:
    """Non-uniform sampling: acquire the time samples listed in omega."""
    return MeasurementPlan(mode="nus", n=n, omega=omega)


def nuws_plan(frame: WaveletFrame, omega) -> MeasurementPlan:
    """Non-uniform wavelet sampling: acquire <atom_i, x> for i in omega."""
    return MeasurementPlan(mode="nuws", n=frame.n, omega=omega, frame=frame)


def comb_shifts(n: int, gamma: int) -> np.ndarray:
    """Comb time shifts gamma/2 + k*gamma, k = 0..n/gamma - 1.

    Shifts are centered inside their gamma slots so the first and last atoms
    are clipped symmetrically at the grid edges instead of losing half their
    support at delta = 0 (envelopes never wrap). gamma has to tile the grid
    exactly; a partial trailing slot would leave samples no atom covers.
    """
    if gamma < 1:
        raise ValueError(f"gamma must be a positive integer, got {gamma}")
    if n % gamma:
        raise PlanInfeasibleError(f"gamma = {gamma} must divide the grid length {n}")
    slots = n // gamma
    if slots < 1:
        raise ValueError(f"gamma = {gamma} leaves no comb slot on a grid of {n}")
    return gamma / 2.0 + gamma * np.arange(slots, dtype=np.float64)


def puncture_slots(slots_per_branch: int, branches: int, keep: float, rng) -> np.ndarray:
    """Uniform-without-replacement puncturing with a deterministic total count.

    Keeps round(keep * branches * slots_per_branch) slots overall, split as
    evenly as possible across branches (leading branches absorb a remainder).
    Returns sorted global slot indices, branch-major. keep=1.0 consumes no
    randomness.
    """
    total_slots = slots_per_branch * branches
    target = int(round(keep * total_slots))
    if target < 1:
        raise PlanInfeasibleError(
            f"puncture_keep = {keep} keeps {target} of {total_slots} slots"
        )
    if target == total_slots:
        return np.arange(total_slots, dtype=np.int64)
    if rng is None:
        raise ValueError("puncturing below keep=1.0 needs an rng")
    base, extra = divmod(target, branches)
    kept = []
    for b in range(branches):
        count = base + (1 if b < extra else 0)
        if count > slots_per_branch:
            raise PlanInfeasibleError(
                f"branch {b}: {count} slots requested, only {slots_per_branch} exist"
            )
        if count:
            local = np.sort(rng.choice(slots_per_branch, size=count, replace=False))
            kept.append(b * slots_per_branch + local)
    return np.concatenate(kept).astype(np.int64)


def nuwbs_plan(
    spec: SubBandSpec,
    tau: float,
    gamma: int,
    puncture_keep: float = 1.0,
    rng: np.random.Generator | None = None,
) -> MeasurementPlan:
    """Bandpass comb plan: one atom branch per sub-band, shifts every gamma samples.

    Each branch carries atoms at the band's midpoint bin frequency with the
    comb shifts of :func:`comb_shifts`, optionally punctured to a kept
    fraction. Atoms of one branch must not overlap in time: the truncation
    half-width 4*tau has to fit the shift spacing gamma.
    """
    n = spec.n
    shifts = comb_shifts(n, gamma)
    bands = sorted(spec.bands)
    for b, (start, stop) in enumerate(bands):
        if 4.0 * tau > gamma:
            raise PlanInfeasibleError(
                f"branch {b} (bins [{start}, {stop})): atom window 4*tau = {4.0 * tau} "
                f"exceeds the shift spacing gamma = {gamma}; atoms would overlap"
            )
    params = []
    for start, stop in bands:
        center_bin = (start + stop) // 2
        f_c = center_bin / n
        params.extend(AtomParams(f_c=f_c, tau=tau, delta=d) for d in shifts)
    frame = build_frame(params, n)
    kept = puncture_slots(len(shifts), len(bands), puncture_keep, rng)
    return MeasurementPlan(
        mode="nuwbs",
        n=n,
        omega=kept,
        frame=frame,
        gamma=gamma,
        puncture_keep=puncture_keep,
    )


def _rows_from_atoms(samples: np.ndarray) -> np.ndarray:
    # conj(unitary DFT) of each atom row: <atom, f_k> for every Fourier column
    return np.conj(np.fft.fft(samples, axis=1)) / math.sqrt(samples.shape[1])


def effective_matrix(plan: MeasurementPlan) -> EffectiveSensingMatrix:
    """Materialize theta = R_omega W^H F^H for any plan mode."""
    if plan.mode == "nus":
        spikes = np.zeros((plan.m, plan.n), dtype=np.complex128)
        spikes[np.arange(plan.m), plan.omega] = 1.0
        rows = _rows_from_atoms(spikes)
    else:
        stacked = np.stack([plan.frame.atoms[i].samples for i in plan.omega])
        rows = _rows_from_atoms(stacked)
    return EffectiveSensingMatrix(entries=rows, plan=plan)


def measure(
    plan: MeasurementPlan,
    x: Signal,
    snr_db: float = math.inf,
    rng: np.random.Generator | None = None,
    *,
    matrix: EffectiveSensingMatrix | None = None,
) -> np.ndarray:
    """Acquire y = theta @ dft(x) with optional measurement-domain noise.

    The SNR follows the awgn convention on the clean measurement vector.
    Pass a precomputed `matrix` (from effective_matrix of the same plan) to
    avoid rebuilding it in tight loops.
    """
    if x.n != plan.n:
        raise ValueError(f"signal length {x.n} disagrees with plan n = {plan.n}")
    if matrix is None:
        matrix = effective_matrix(plan)
    elif matrix.plan is not plan:
        raise ValueError("matrix was built for a different plan")
    y = matrix.entries @ dft(x).coefficients
    if math.isinf(snr_db) and snr_db > 0:
        return y
    if rng is None:
        raise ValueError("finite snr_db needs an rng")
    return awgn(y, snr_db, rng)
