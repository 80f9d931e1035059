"""Parisian ruin asymptotics for Gaussian risk processes.

Thin python surface over the C++ core: exact fBm sampling, the sup-inf
Parisian functional, MIPR variance geometry, case classification,
Pickands/Piterbarg constant estimation, and vicinity-restricted Monte Carlo.
"""

from ._core import (
    ParisianError,
    analyze_model,
    cov_fbm,
    cov_fgn,
    estimate_constant,
    log_psi,
    mc_ruin_mipr,
    mc_ruin_synthetic,
    parisian_sup_inf,
    psi,
    sample_fbm,
    sliding_min,
    talagrand_constant,
    __version__,
)

__all__ = [
    "ParisianError",
    "analyze_model",
    "cov_fbm",
    "cov_fgn",
    "estimate_constant",
    "log_psi",
    "mc_ruin_mipr",
    "mc_ruin_synthetic",
    "parisian_sup_inf",
    "psi",
    "sample_fbm",
    "sliding_min",
    "talagrand_constant",
    "__version__",
]
