"""Outage analysis for beam pointing under Gaussian position uncertainty.

A transmitter aims a directional beam at a noisy estimate of the
receiver's position.  This package classifies when the resulting link is
deterministically covered, deterministically in outage, or genuinely
probabilistic; brackets the outage probability with closed-form bounds;
cross-checks them against deterministic quadrature and Monte Carlo
estimators; and finds the beamwidth minimizing outage under a total
transmit-power budget.  A small command-line front end drives point
evaluations, parameter sweeps and the optimizer from config files.
"""

from .channel import (
    PATTERN_DECAY,
    SMALL_BEAM_LIMIT,
    AntennaConfig,
    LinkConfig,
    friis_gain,
    pattern_gain,
    pmax_from_budget,
    pmax_from_budget_exact,
    pointing_angle,
    received_power,
    transmit_power_exact,
)
from .errors import (
    BeamOutageError,
    BeamWraparoundError,
    ConfigError,
    DegenerateNormalError,
    InvalidModelError,
    NotPositiveDefiniteError,
    ToleranceNotMetError,
    UndefinedDirectionError,
    WrongRegimeError,
)
from .gauss2d import (
    Covariance2x2,
    HalfPlane,
    PositioningErrorModel,
    covariance_from_model,
    halfplane_prob,
    q_function,
    sample_gaussian,
    spectral_sqrt,
)
from .optimizer import (
    BudgetedLink,
    Optimum,
    SweepVerification,
    budget_outage_on_grid,
    optimal_beamwidth,
    verify_optimum,
)
from .oracle import (
    McConfig,
    OracleMethod,
    OracleResult,
    outage_montecarlo,
    outage_quadrature,
)
from .outage import (
    OutageEstimate,
    OutageRegime,
    RegimeKind,
    classify,
    estimate_outage,
    k_factor,
    outage_bounds,
    tightness_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaConfig",
    "BeamOutageError",
    "BeamWraparoundError",
    "BudgetedLink",
    "ConfigError",
    "Covariance2x2",
    "DegenerateNormalError",
    "HalfPlane",
    "InvalidModelError",
    "LinkConfig",
    "McConfig",
    "NotPositiveDefiniteError",
    "Optimum",
    "PATTERN_DECAY",
    "OracleMethod",
    "OracleResult",
    "OutageEstimate",
    "OutageRegime",
    "PositioningErrorModel",
    "RegimeKind",
    "SMALL_BEAM_LIMIT",
    "SweepVerification",
    "ToleranceNotMetError",
    "UndefinedDirectionError",
    "WrongRegimeError",
    "budget_outage_on_grid",
    "classify",
    "covariance_from_model",
    "estimate_outage",
    "friis_gain",
    "halfplane_prob",
    "k_factor",
    "optimal_beamwidth",
    "outage_bounds",
    "outage_montecarlo",
    "outage_quadrature",
    "pattern_gain",
    "pmax_from_budget",
    "pmax_from_budget_exact",
    "pointing_angle",
    "q_function",
    "received_power",
    "sample_gaussian",
    "spectral_sqrt",
    "tightness_ratio",
    "transmit_power_exact",
    "verify_optimum",
]
