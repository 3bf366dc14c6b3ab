"""Measurement plans, comb geometry, puncturing, and the effective matrix."""

import numpy as np
import pytest

from nuwsim.seeding import seed_derive
from nuwsim.sensing import (
    EffectiveSensingMatrix,
    PlanInfeasibleError,
    comb_shifts,
    effective_matrix,
    measure,
    nus_plan,
    nuwbs_plan,
    nuws_plan,
    puncture_slots,
)
from nuwsim.signals import Signal, SubBandSpec, dft, idft_basis, make_multiband_signal
from nuwsim.wavelets import AtomParams, WaveletAtom, WaveletFrame, build_frame

TWO_BAND = SubBandSpec(n=256, bands=((64, 80), (160, 176)))


def dirac_frame(positions, n):
    atoms = []
    for t in positions:
        s = np.zeros(n, dtype=np.complex128)
        s[t] = 1.0
        atoms.append(WaveletAtom(params=AtomParams(f_c=0.0, tau=1.0, delta=float(t)), samples=s))
    return WaveletFrame(tuple(atoms))


def test_comb_shifts_are_centered():
    shifts = comb_shifts(64, 16)
    assert np.array_equal(shifts, [8.0, 24.0, 40.0, 56.0])


def test_comb_shifts_require_divisibility():
    with pytest.raises(PlanInfeasibleError):
        comb_shifts(100, 16)


def test_puncture_keep_all_is_identity():
    rows = puncture_slots(16, 2, 1.0, rng=None)
    assert np.array_equal(rows, np.arange(32))


def test_puncture_counts_are_deterministic():
    # round(keep * total) slots overall, remainder to the leading branches
    rng = seed_derive(11)
    rows = puncture_slots(16, 2, 0.6875, rng)  # 22 of 32
    assert rows.shape == (22,)
    assert np.array_equal(rows, np.sort(rows))
    first = np.sum(rows < 16)
    assert first == 11


def test_puncture_remainder_goes_to_leading_branch():
    rng = seed_derive(12)
    rows = puncture_slots(4, 3, 0.61, rng)  # round(7.32) = 7 -> 3 + 2 + 2
    assert rows.shape == (7,)
    counts = [np.sum((rows >= 4 * b) & (rows < 4 * (b + 1))) for b in range(3)]
    assert counts == [3, 2, 2]


def test_puncture_rejects_empty_or_overfull():
    with pytest.raises(PlanInfeasibleError):
        puncture_slots(16, 2, 0.001, seed_derive(13))


def test_nus_plan_matrix_is_subsampled_inverse_dft():
    rng = seed_derive(14)
    omega = np.sort(rng.choice(256, size=32, replace=False))
    entries = effective_matrix(nus_plan(omega, 256)).entries
    f = idft_basis(256)
    assert np.max(np.abs(entries - f[omega, :])) < 1e-12


def test_nus_equals_nuws_with_dirac_atoms_bitwise():
    rng = seed_derive(15)
    omega = np.sort(rng.choice(256, size=40, replace=False))
    a_nus = effective_matrix(nus_plan(omega, 256)).entries
    frame = dirac_frame(omega, 256)
    a_nuws = effective_matrix(nuws_plan(frame, np.arange(40))).entries
    assert np.array_equal(a_nus, a_nuws)


def test_effective_matrix_rows_are_unit_norm():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    entries = effective_matrix(plan).entries
    assert np.allclose(np.linalg.norm(entries, axis=1), 1.0, atol=1e-6)


def test_nuwbs_plan_geometry():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    assert plan.mode == "nuwbs"
    assert plan.m == 32  # 16 shifts per branch, two branches
    # branch-major atom order with per-branch center frequencies
    f_cs = [a.params.f_c for a in plan.frame.atoms]
    assert f_cs[:16] == [72 / 256] * 16
    assert f_cs[16:] == [168 / 256] * 16
    deltas = [a.params.delta for a in plan.frame.atoms]
    assert deltas[:16] == list(comb_shifts(256, 16))


def test_nuwbs_infeasible_when_atoms_overlap():
    with pytest.raises(PlanInfeasibleError, match="branch 0"):
        nuwbs_plan(TWO_BAND, tau=8.0, gamma=16)


def test_nuwbs_infeasible_when_gamma_does_not_divide():
    with pytest.raises(PlanInfeasibleError):
        nuwbs_plan(TWO_BAND, tau=2.0, gamma=24)


def test_nuwbs_puncture_needs_rng():
    with pytest.raises(ValueError):
        nuwbs_plan(TWO_BAND, tau=4.0, gamma=16, puncture_keep=0.5)


def test_nuwbs_punctured_plan_is_reproducible():
    a = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16, puncture_keep=0.5, rng=seed_derive(16))
    b = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16, puncture_keep=0.5, rng=seed_derive(16))
    assert a.m == b.m == 16
    assert np.array_equal(a.omega, b.omega)
    assert np.array_equal(effective_matrix(a).entries, effective_matrix(b).entries)


def test_measure_matches_direct_inner_products():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    matrix = effective_matrix(plan)
    _, sig = make_multiband_signal(TWO_BAND, 5, seed_derive(17))
    y = measure(plan, sig, matrix=matrix)
    direct = np.array([np.vdot(atom.samples, sig.samples) for atom in plan.frame.atoms])
    assert np.max(np.abs(y - direct)) < 1e-10


def test_measure_equals_matrix_times_spectrum():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    matrix = effective_matrix(plan)
    _, sig = make_multiband_signal(TWO_BAND, 5, seed_derive(18))
    y = measure(plan, sig, matrix=matrix)
    assert np.max(np.abs(y - matrix.entries @ dft(sig).coefficients)) < 1e-12


def test_far_out_of_band_bins_are_attenuated_to_truncation_floor():
    # an interferer 8N/(pi*tau) bins from the carrier sits 8 spectral sigmas
    # out; the ideal Gaussian tail there is e^-64, but truncating the envelope
    # at 4*tau leaves window sidelobes near its e^-16 edge amplitude, and that
    # is the attainable floor
    n, tau, carrier_bin = 256, 8.0, 72
    plan = nuwbs_plan(SubBandSpec(n=n, bands=((64, 80),)), tau=tau, gamma=64)
    theta = effective_matrix(plan).entries
    cut = 8.0 * n / (np.pi * tau)
    bins = np.arange(n)
    dist = np.minimum((bins - carrier_bin) % n, (carrier_bin - bins) % n)
    far = np.abs(theta[:, dist >= cut])
    assert far.max() < 1e-8
    assert far.max() > np.exp(-64)


def test_measure_noise_needs_rng():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    _, sig = make_multiband_signal(TWO_BAND, 3, seed_derive(19))
    with pytest.raises(ValueError):
        measure(plan, sig, snr_db=20.0)


def test_measure_rejects_foreign_matrix():
    plan_a = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    plan_b = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    matrix_b = effective_matrix(plan_b)
    _, sig = make_multiband_signal(TWO_BAND, 3, seed_derive(20))
    with pytest.raises(ValueError):
        measure(plan_a, sig, matrix=matrix_b)


def test_measure_rejects_wrong_length_signal():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    with pytest.raises(ValueError):
        measure(plan, Signal(np.ones(128, dtype=np.complex128)))


def test_effective_matrix_entries_read_only():
    plan = nuwbs_plan(TWO_BAND, tau=4.0, gamma=16)
    matrix = effective_matrix(plan)
    assert isinstance(matrix, EffectiveSensingMatrix)
    with pytest.raises(ValueError):
        matrix.entries[0, 0] = 0.0
