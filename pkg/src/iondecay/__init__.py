"""Desk-scale simulator for dephasing of a trapped-ion qubit pair.

The package covers two decoherence mechanisms and the statistics used to
tell them apart from data:

* ``fieldnoise``: a stochastic magnetic field dephases superpositions; the
  equal-splitting pair subspace is immune to common-mode fluctuations.
* ``reservoir``: a far-detuned, intensity-noisy light field produces
  engineered dissipation through photon-number-dependent level shifts.
* ``modelfit``: least-squares sieve deciding whether a visibility curve
  decays exponentially (linear ln V) or Gaussianly (quadratic ln V).
* ``spinspace``: states, density matrices and Bloch geometry.
* ``cli``: command line front end over CSV/JSON files.
"""

from .errors import (
    ConfigError,
    DegenerateDesign,
    FockOverflow,
    GridError,
    InvalidCoherenceFactor,
    InvalidState,
    IonDecayError,
    NonPositiveVisibility,
    NotInSubspace,
    OrderError,
    ParseError,
    RangeError,
    ResolutionError,
    UnsupportedAnalytic,
)
from .spinspace import (
    BlochVector,
    DfsDensity,
    DfsPureState,
    FourLevelState,
    bloch,
    density_from_coherence,
    dfs_project,
    visibility,
)
from .fieldnoise import (
    CoherenceFactor,
    DecoherenceCurve,
    Empirical,
    Gaussian,
    Lorentzian,
    SpinFrequencies,
    coherence_analytic,
    coherence_mc,
    coherence_quadrature,
    dfs_visibility_curve,
    evolve_dfs_fixed,
    evolve_four_fixed,
    test_state_visibility_curve,
)
from .reservoir import (
    BathSummary,
    FockRegister,
    IntensityNoise,
    JcParams,
    check_dispersive_validity,
    dispersive_shift,
    engineered_decoherence_mc,
    evolve_dispersive,
    full_jc_evolve,
    white_noise_rate,
)
from .modelfit import (
    DecayFamily,
    FitResult,
    LogPoint,
    SieveVerdict,
    VisibilityDataset,
    fit_linear,
    fit_quadratic_pure,
    generate_synthetic,
    log_transform,
    sieve,
    verdict_from_asd,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "IonDecayError", "InvalidState", "InvalidCoherenceFactor",
    "NotInSubspace", "UnsupportedAnalytic", "ResolutionError", "GridError",
    "FockOverflow", "NonPositiveVisibility", "DegenerateDesign",
    "RangeError", "ParseError", "OrderError", "ConfigError",
    # spinspace
    "DfsPureState", "DfsDensity", "FourLevelState", "BlochVector",
    "density_from_coherence", "bloch", "visibility", "dfs_project",
    # fieldnoise
    "SpinFrequencies", "Gaussian", "Lorentzian", "Empirical",
    "CoherenceFactor", "DecoherenceCurve", "evolve_dfs_fixed",
    "evolve_four_fixed", "coherence_analytic", "coherence_quadrature",
    "coherence_mc", "dfs_visibility_curve", "test_state_visibility_curve",
    # reservoir
    "JcParams", "IntensityNoise", "BathSummary", "FockRegister",
    "dispersive_shift", "evolve_dispersive", "engineered_decoherence_mc",
    "full_jc_evolve", "check_dispersive_validity", "white_noise_rate",
    # modelfit
    "DecayFamily", "VisibilityDataset", "LogPoint", "FitResult",
    "SieveVerdict", "log_transform", "fit_linear", "fit_quadratic_pure",
    "sieve", "verdict_from_asd", "generate_synthetic",
]
