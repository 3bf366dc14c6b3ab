"""Discrete-time simulator for non-uniform wavelet sampling of sparse multi-band signals.

The package builds Gabor/Morlet measurement frames, forms the effective
sensing operator against a unitary DFT basis, and provides coherence
analysis, greedy sparse recovery with a compiled kernel, a mixer-integrator
pipeline model for out-of-band rejection, and a config-driven experiment
harness behind the `a2i` command.
"""

from .coherence import (
    CoherenceCurve,
    coherence_sweep,
    local_mutual_coherence,
    mutual_coherence,
    welch_bound,
)
from .harness import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    ResultBundle,
    config_from_dict,
    config_to_dict,
    load_config,
    run,
)
from .kernels import BACKEND
from .pipeline import (
    CombOverlapError,
    PipelineConfig,
    RejectionCurve,
    h_cwt,
    h_wbs,
    matched_width_preset,
    mix_integrate_decimate,
    rejection_sweep,
    wavelet_comb,
)
from .recovery import (
    PhaseTransitionGrid,
    RecoveryResult,
    dt_curve,
    omp,
    phase_transition,
    support_success,
    weak_threshold,
)
from .seeding import seed_derive
from .sensing import (
    MODES,
    EffectiveSensingMatrix,
    MeasurementPlan,
    PlanInfeasibleError,
    comb_shifts,
    effective_matrix,
    measure,
    nus_plan,
    nuwbs_plan,
    nuws_plan,
    puncture_slots,
)
from .signals import (
    Signal,
    SparseSpectrum,
    SubBandSpec,
    add_noise,
    awgn,
    dft,
    draw_sparse_coefficients,
    idft,
    idft_basis,
    make_multiband_signal,
)
from .wavelets import (
    ALPHA_10DB,
    AtomParams,
    DegenerateAtomError,
    MorletFamily,
    WaveletAtom,
    WaveletFrame,
    atom_bandwidth,
    build_frame,
    gabor_atom,
    gabor_spectrum,
    morlet_family,
    tau_for_bandwidth,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_10DB",
    "BACKEND",
    "EXPERIMENTS",
    "MODES",
    "AtomParams",
    "CoherenceCurve",
    "CombOverlapError",
    "ConfigError",
    "DegenerateAtomError",
    "EffectiveSensingMatrix",
    "ExperimentConfig",
    "MeasurementPlan",
    "MorletFamily",
    "PhaseTransitionGrid",
    "PipelineConfig",
    "PlanInfeasibleError",
    "RecoveryResult",
    "RejectionCurve",
    "ResultBundle",
    "Signal",
    "SparseSpectrum",
    "SubBandSpec",
    "WaveletAtom",
    "WaveletFrame",
    "add_noise",
    "atom_bandwidth",
    "awgn",
    "build_frame",
    "coherence_sweep",
    "comb_shifts",
    "config_from_dict",
    "config_to_dict",
    "dft",
    "draw_sparse_coefficients",
    "dt_curve",
    "effective_matrix",
    "gabor_atom",
    "gabor_spectrum",
    "h_cwt",
    "h_wbs",
    "idft",
    "idft_basis",
    "load_config",
    "local_mutual_coherence",
    "make_multiband_signal",
    "matched_width_preset",
    "measure",
    "mix_integrate_decimate",
    "morlet_family",
    "mutual_coherence",
    "nus_plan",
    "nuwbs_plan",
    "nuws_plan",
    "omp",
    "phase_transition",
    "puncture_slots",
    "rejection_sweep",
    "run",
    "seed_derive",
    "support_success",
    "tau_for_bandwidth",
    "wavelet_comb",
    "weak_threshold",
    "welch_bound",
]
