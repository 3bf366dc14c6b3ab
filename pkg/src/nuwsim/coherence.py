"""Mutual coherence between acquisition rows and the Fourier basis.

The key design quantity for the comb acquisition: wide-band atoms look like
Dirac rows and approach the Welch floor 1/sqrt(N); narrow-band atoms align
with Fourier columns and push coherence toward 1. The sweep reproduces that
trade-off as a function of wavelet bandwidth over sub-band bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import SubBandSpec
from .wavelets import AtomParams, WaveletFrame, atom_bandwidth, gabor_atom

__all__ = [
    "CoherenceCurve",
    "welch_bound",
    "mutual_coherence",
    "local_mutual_coherence",
    "coherence_sweep",
]

_NORM_TOL = 1e-6


def welch_bound(n: int) -> float:
    """Coherence floor 1/sqrt(n) of any unit-norm row set against a unitary basis."""
    return 1.0 / math.sqrt(n)


def _check_unit(norms: np.ndarray, what: str):
    worst = float(np.max(np.abs(norms - 1.0)))
    if worst > _NORM_TOL:
        raise ValueError(
            f"{what} must be unit-norm within {_NORM_TOL} (worst deviation {worst:.3e}); "
            "normalization is the caller's responsibility"
        )


def mutual_coherence(rows: np.ndarray, cols: np.ndarray) -> float:
    """max_{i,k} |<row_i, col_k>| for unit-norm rows and columns.

    `rows` holds analysis vectors as rows, shape (m, n); `cols` holds basis
    vectors as columns, shape (n, k). Inputs that are not unit-norm within
    1e-6 are rejected rather than silently normalized.
    """
    rows = np.asarray(rows, dtype=np.complex128)
    cols = np.asarray(cols, dtype=np.complex128)
    if rows.ndim != 2 or cols.ndim != 2 or rows.shape[1] != cols.shape[0]:
        raise ValueError(f"incompatible shapes {rows.shape} and {cols.shape}")
    _check_unit(np.linalg.norm(rows, axis=1), "rows")
    _check_unit(np.linalg.norm(cols, axis=0), "columns")
    return float(np.max(np.abs(rows @ cols)))


def local_mutual_coherence(frame: WaveletFrame, sigma) -> float:
    """Mutual coherence of a frame against Fourier columns restricted to sigma."""
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.ndim != 1 or sigma.shape[0] == 0:
        raise ValueError("sigma must be a nonempty 1-d bin index set")
    n = frame.n
    if sigma.min() < 0 or sigma.max() >= n:
        raise ValueError(f"sigma bins must lie in [0, {n})")
    samples = np.stack([a.samples for a in frame.atoms])
    # row i, column k of theta = <atom_i, f_k>: conjugated unitary DFT of the atom
    inner = np.conj(np.fft.fft(samples, axis=1)) / math.sqrt(n)
    return float(np.max(np.abs(inner[:, sigma])))


@dataclass(frozen=True)
class CoherenceCurve:
    """Local coherence versus bandwidth ratio, one point per envelope scale."""

    taus: np.ndarray
    ratios: np.ndarray
    coherences: np.ndarray
    bound: float

    def __post_init__(self):
        for name in ("taus", "ratios", "coherences"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def coherence_sweep(spec: SubBandSpec, taus) -> CoherenceCurve:
    """Sweep the envelope scale and record local coherence against the sub-bands.

    For each tau an atom is centered on the first band (midpoint bin, time
    shift n/2) and its coherence with the Fourier columns of the occupied
    bins is measured. Ratios are reported as the atom's -10 dB bandwidth over
    the first band's width, so small tau means a wide, incoherent atom.
    """
    taus = np.asarray(taus, dtype=np.float64)
    if taus.ndim != 1 or taus.shape[0] == 0:
        raise ValueError("taus must be a nonempty 1-d array")
    if np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be positive and strictly ascending")
    n = spec.n
    start, stop = sorted(spec.bands)[0]
    f_c = ((start + stop) // 2) / n
    bw_rf = (stop - start) / n
    sigma = spec.sigma
    mus = np.empty(taus.shape[0])
    for i, tau in enumerate(taus):
        atom = gabor_atom(AtomParams(f_c=f_c, tau=float(tau), delta=n // 2), n)
        mus[i] = local_mutual_coherence(WaveletFrame([atom]), sigma)
    ratios = np.array([atom_bandwidth(float(t)) / bw_rf for t in taus])
    return CoherenceCurve(taus=taus, ratios=ratios, coherences=mus, bound=welch_bound(n))
