"""Gaussian-state model of a nonlinear coupler: two linearly coupled waveguides
with degenerate parametric down-conversion, and the squeezing and entanglement
of the output modes."""

from .coupler import (
    CouplerParams,
    DriftMatrix,
    Regime,
    RegimeResult,
    build_drift,
    classify_regime,
    classify_regime_spectral,
    effective_phase,
)
from .dynamics import covariance_at, evolve, propagator, squeeze_variance, vacuum_covariance
from .entanglement import (
    EntanglementReport,
    block_decompose,
    log_negativity,
    pt_spectrum_oracle,
    pt_symplectic_spectrum,
)
from .errors import InvalidInputError, NumericalFailure
from .phaseopt import PhaseOptimum, en_of_phase, optimize_over_z, optimize_phase

__version__ = "0.1.0"
