"""Gabor atoms, constant-Q Morlet-style scale families, and analysis frames.

Atoms are complex modulated Gaussians evaluated on the integer sample grid.
The envelope is truncated to |t - delta| <= 4*tau (amplitude e^-16 at the
edge) and the atom is renormalized to unit l2 norm afterwards, so sensing
rows built from atoms are exactly unit-norm. Truncated envelopes never wrap
around the grid: tau is capped so the window fits in half the grid, and
samples falling outside [0, N) are simply dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ALPHA_10DB",
    "AtomParams",
    "WaveletAtom",
    "WaveletFrame",
    "MorletFamily",
    "DegenerateAtomError",
    "gabor_atom",
    "gabor_spectrum",
    "atom_bandwidth",
    "tau_for_bandwidth",
    "morlet_family",
    "build_frame",
]

# -10 dB fractional bandwidth constant of the Gaussian envelope:
# BW(-10 dB) = 1 / (tau * pi * ALPHA_10DB * sqrt(2)).
ALPHA_10DB = 0.33


class DegenerateAtomError(ValueError):
    """Raised when an atom's truncation window captures no grid sample."""


@dataclass(frozen=True)
class AtomParams:
    """Center frequency (cycles/sample), envelope scale tau and time shift delta (samples)."""

    f_c: float
    tau: float
    delta: float

    def __post_init__(self):
        if not (0.0 <= self.f_c < 1.0):
            raise ValueError(f"f_c must lie in [0, 1), got {self.f_c}")
        if not (self.tau > 0.0):
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class WaveletAtom:
    """A unit-norm atom sampled on the length-n grid."""

    params: AtomParams
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.complex128).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.shape[0]


class WaveletFrame:
    """An ordered collection of atoms on a common grid.

    The analysis matrix has one row per atom, each row the conjugate of the
    atom's samples, so `matrix @ x` stacks the inner products <atom, x>.
    """

    def __init__(self, atoms):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("a frame needs at least one atom")
        n = atoms[0].n
        for i, atom in enumerate(atoms):
            if atom.n != n:
                raise ValueError(f"atom {i} has grid length {atom.n}, expected {n}")
        self._atoms = atoms
        self._n = n

    @property
    def atoms(self):
        return self._atoms

    @property
    def n(self) -> int:
        return self._n

    def __len__(self) -> int:
        return len(self._atoms)

    @property
    def matrix(self) -> np.ndarray:
        """Analysis matrix, shape (len(frame), n): row i is conj(atom_i)."""
        return np.conj(np.stack([a.samples for a in self._atoms]))


@dataclass(frozen=True)
class MorletFamily:
    """Constant-Q family: one (f_c, tau) pair per center frequency."""

    q: float
    scales: tuple

    @property
    def center_freqs(self):
        return tuple(f for f, _ in self.scales)

    @property
    def taus(self):
        return tuple(t for _, t in self.scales)


def gabor_atom(params: AtomParams, n: int) -> WaveletAtom:
    """Sample a Gabor atom on the integer grid t = 0..n-1.

    The continuous prototype is

        psi(t) = 2^(1/4) / (sqrt(tau) * pi^(1/4))
                 * exp(j 2 pi f_c (t - delta)) * exp(-((t - delta)/tau)^2)

    truncated to |t - delta| <= 4*tau and renormalized to unit l2 norm.

    Raises DegenerateAtomError if no grid point falls inside the truncation
    window, and ValueError if the window half-width 4*tau exceeds n/2 (which
    would force wraparound) or delta lies outside [0, n).
    """
    if n < 2:
        raise ValueError(f"grid length must be at least 2, got {n}")
    if not (0.0 <= params.delta < n):
        raise ValueError(f"delta must lie in [0, {n}), got {params.delta}")
    if 4.0 * params.tau > n / 2.0:
        raise ValueError(
            f"truncation window 4*tau = {4.0 * params.tau} exceeds n/2 = {n / 2.0}; "
            "envelope wraparound is not supported"
        )
    t = np.arange(n, dtype=np.float64)
    d = t - params.delta
    inside = np.abs(d) <= 4.0 * params.tau
    if not inside.any():
        raise DegenerateAtomError(
            f"no grid sample inside |t - {params.delta}| <= {4.0 * params.tau}"
        )
    envelope = np.where(inside, np.exp(-((d / params.tau) ** 2)), 0.0)
    amplitude = 2.0 ** 0.25 / (math.sqrt(params.tau) * math.pi ** 0.25)
    samples = amplitude * envelope * np.exp(2j * np.pi * params.f_c * d)
    samples /= np.linalg.norm(samples)
    return WaveletAtom(params, samples)


def gabor_spectrum(params: AtomParams, f) -> np.ndarray:
    """Continuous-time Fourier transform of the untruncated Gabor prototype.

    Psi(f) = (tau * sqrt(2 pi))^(1/2) * exp(-j 2 pi delta f)
             * exp(-(pi tau (f - f_c))^2)

    The peak magnitude (tau*sqrt(2pi))^(1/2) is the transform of the
    unit-energy prototype, not of the grid-renormalized atom; use it as a
    closed-form cross-check against explicit inner products.
    """
    f = np.asarray(f, dtype=np.float64)
    peak = math.sqrt(params.tau * math.sqrt(2.0 * math.pi))
    return (
        peak
        * np.exp(-2j * np.pi * params.delta * f)
        * np.exp(-((np.pi * params.tau * (f - params.f_c)) ** 2))
    )


def atom_bandwidth(tau: float) -> float:
    """-10 dB bandwidth of the Gaussian envelope, in cycles/sample."""
    if not (tau > 0):
        raise ValueError(f"tau must be positive, got {tau}")
    return 1.0 / (tau * math.pi * ALPHA_10DB * math.sqrt(2.0))


def tau_for_bandwidth(bw: float) -> float:
    """Envelope scale whose -10 dB bandwidth equals `bw` (inverse of atom_bandwidth)."""
    if not (bw > 0):
        raise ValueError(f"bw must be positive, got {bw}")
    return 1.0 / (bw * math.pi * ALPHA_10DB * math.sqrt(2.0))


def morlet_family(q: float, center_freqs) -> MorletFamily:
    """Constant-Q scale family: tau = Q / (f_c * pi * ALPHA_10DB * sqrt(2)).

    Equivalently Q = f_c * tau * pi * ALPHA_10DB * sqrt(2), so every member
    has the same ratio of center frequency to -10 dB bandwidth.
    """
    if not (q > 0):
        raise ValueError(f"Q must be positive, got {q}")
    freqs = tuple(float(f) for f in center_freqs)
    if not freqs:
        raise ValueError("at least one center frequency is required")
    scales = []
    for f_c in freqs:
        if not (0.0 < f_c < 1.0):
            raise ValueError(f"center frequencies must lie in (0, 1), got {f_c}")
        scales.append((f_c, q / (f_c * math.pi * ALPHA_10DB * math.sqrt(2.0))))
    return MorletFamily(q, tuple(scales))


def build_frame(params_list, n: int) -> WaveletFrame:
    """Build a frame of Gabor atoms, reporting the offending index on failure."""
    atoms = []
    for i, params in enumerate(params_list):
        try:
            atoms.append(gabor_atom(params, n))
        except DegenerateAtomError as exc:
            raise DegenerateAtomError(f"atom {i}: {exc}") from exc
    return WaveletFrame(atoms)
