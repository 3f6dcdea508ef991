"""Distinguishability and two-particle interference in HOM and HBT setups."""

from .duality import DualityRecord, Experiment, duality_check, duality_sweep
from .hbt import (
    ExchangeSign,
    FringePattern,
    GridSpec,
    WavepacketConfig,
    analytic_pattern,
    eraser_pattern,
    extract_visibility,
    hbt_eraser_density,
    initial_wavefunction,
    joint_density_analytic,
    propagate_numeric,
)
from .hom import (
    apply_beamsplitter,
    brute_force_coincidence,
    build_input_state,
    coincidence_probability,
    delay_scan,
    eraser_joint_probability,
    hom_visibility,
)
from .internal import (
    InternalState,
    Overlap,
    distinguishability,
    distinguishability_uqsd,
    make_state,
    overlap,
    pair_with_overlap,
)
from .sampling import EventBatch, HistogramEstimate, estimate_visibility, sample_hbt, sample_hom

__version__ = "0.1.0"
