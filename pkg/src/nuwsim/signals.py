"""Discrete complex baseband signals and their unitary frequency-domain view.

Everything downstream works on length-N complex sample vectors with a unitary
DFT pair (1/sqrt(N) normalization both ways), so Parseval holds exactly and
sensing rows built in either domain have the same norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Signal",
    "SparseSpectrum",
    "SubBandSpec",
    "dft",
    "idft",
    "idft_basis",
    "draw_sparse_coefficients",
    "make_multiband_signal",
    "awgn",
    "add_noise",
]


def _as_complex_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError(f"{name} needs at least 2 samples, got {arr.shape[0]}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Signal:
    """Complex time-domain samples on a uniform grid of spacing 1/rate."""

    samples: np.ndarray
    rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_complex_vector(self.samples, "samples"))
        if not (self.rate > 0):
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))


@dataclass(frozen=True)
class SparseSpectrum:
    """Dense frequency-domain coefficient vector; support is derived, never stored."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _as_complex_vector(self.coefficients, "coefficients")
        )

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coefficients)

    @property
    def sparsity(self) -> int:
        return int(self.support.shape[0])


@dataclass(frozen=True)
class SubBandSpec:
    """Occupied sub-bands of an N-bin spectrum.

    Bands are half-open bin ranges [start, stop), pairwise disjoint and inside
    [0, N). Bin k corresponds to normalized frequency k/N.
    """

    n: int
    bands: tuple = field(default=())

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        bands = tuple((int(a), int(b)) for a, b in self.bands)
        if not bands:
            raise ValueError("at least one band is required")
        for start, stop in bands:
            if not (0 <= start < stop <= self.n):
                raise ValueError(f"band [{start}, {stop}) outside [0, {self.n})")
        ordered = sorted(bands)
        for (_, prev_stop), (next_start, _) in zip(ordered, ordered[1:]):
            if next_start < prev_stop:
                raise ValueError("bands must be pairwise disjoint")
        object.__setattr__(self, "bands", bands)

    @property
    def sigma(self) -> np.ndarray:
        """Sorted occupied bin indices (the union of all bands)."""
        return np.concatenate([np.arange(a, b) for a, b in sorted(self.bands)])

    @property
    def occupancy(self) -> int:
        return int(sum(b - a for a, b in self.bands))

    @property
    def delta_f(self) -> float:
        """Bin spacing in normalized frequency."""
        return 1.0 / self.n


def dft(x) -> SparseSpectrum:
    """Unitary DFT of a signal (1/sqrt(N) normalization)."""
    samples = x.samples if isinstance(x, Signal) else np.asarray(x, dtype=np.complex128)
    return SparseSpectrum(np.fft.fft(samples) / math.sqrt(samples.shape[0]))


def idft(s) -> Signal:
    """Unitary inverse DFT; exact inverse of :func:`dft` up to roundoff."""
    coeff = s.coefficients if isinstance(s, SparseSpectrum) else np.asarray(s, dtype=np.complex128)
    return Signal(np.fft.ifft(coeff) * math.sqrt(coeff.shape[0]))


def draw_sparse_coefficients(spec: SubBandSpec, k: int, rng: np.random.Generator):
    """Draw a K-sparse in-band coefficient vector with unit-magnitude entries.

    Support is uniform without replacement over the occupied bins; phases are
    uniform on [0, 2pi). Returns (support, values) with support sorted ascending
    and values aligned to it.
    """
    sigma = spec.sigma
    if not (0 <= k <= sigma.shape[0]):
        raise ValueError(f"k must be in [0, {sigma.shape[0]}], got {k}")
    support = np.sort(rng.choice(sigma, size=k, replace=False))
    values = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=k))
    return support, values


def make_multiband_signal(spec: SubBandSpec, k: int, rng: np.random.Generator):
    """K-sparse multi-band test signal.

    Returns (spectrum, signal) where the spectrum has exactly k nonzero bins,
    all inside the sub-bands of `spec`, each of unit magnitude with a random
    phase.
    """
    support, values = draw_sparse_coefficients(spec, k, rng)
    coeff = np.zeros(spec.n, dtype=np.complex128)
    coeff[support] = values
    spectrum = SparseSpectrum(coeff)
    return spectrum, idft(spectrum)


def idft_basis(n: int) -> np.ndarray:
    """Explicit unitary inverse-DFT matrix F^H; column k is the tone exp(2j pi k t / n) / sqrt(n)."""
    grid = np.arange(n)
    return np.exp(2j * np.pi * np.outer(grid, grid) / n) / math.sqrt(n)


def awgn(values: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric white Gaussian noise added to a complex vector.

    snr_db is 10*log10(||values||^2 / E||noise||^2). snr_db=inf returns the
    input unchanged without consuming randomness; an all-zero input with a
    finite SNR is an error because the ratio is undefined.
    """
    values = np.asarray(values, dtype=np.complex128)
    if math.isinf(snr_db) and snr_db > 0:
        return values
    energy = float(np.vdot(values, values).real)
    if energy == 0.0:
        raise ValueError("SNR is undefined for an all-zero vector")
    n = values.shape[0]
    # per-sample complex variance so that E||noise||^2 = ||values||^2 / 10^(snr/10)
    var = energy / (n * 10.0 ** (snr_db / 10.0))
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    noise *= math.sqrt(var / 2.0)
    return values + noise


def add_noise(x: Signal, snr_db: float, rng: np.random.Generator) -> Signal:
    """Add white Gaussian noise to a signal at a prescribed total SNR (see awgn)."""
    if math.isinf(snr_db) and snr_db > 0:
        return x
    return Signal(awgn(x.samples, snr_db, rng), rate=x.rate)
