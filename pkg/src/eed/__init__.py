"""Expected end-to-end distortion of analog sources over wideband MIMO.

Monte Carlo estimators, high-SNR asymptotics in all SCBR regimes with
and without spatial correlation, and the frequency-diversity limit.
"""

from .asymptotic import (AsymptoticEED, delta_l_exact, distortion_exponent_1,
                         distortion_factor_1, extend_to_L,
                         infinite_l_asymptotic, kappa_h, kappa_l, lemma1_limit,
                         phi, v3_determinant)
from .channel import (CorrelationSpec, Regime, RegimeKind, SystemConfig,
                      build_correlation, classify_regime,
                      correlation_eigenvalues, eta_as_fraction, moderate_s,
                      scbr_beta, transit_point)
from .errors import ConfigError, DegenerateSpectrumError, DomainError
from .montecarlo import (MCEstimate, SampleSpec, WelfordAccumulator,
                         estimate_eed, estimate_ergodic_capacity,
                         infinite_l_bound_mc, instant_distortion,
                         merge_estimates)
from .numerics import (EULER_GAMMA, ComplexMatrix, LogValue, harmonic,
                       hermitian_eigenvalues, ln_gamma, logdet_hermitian_pd,
                       matrix_sqrt_psd, pochhammer, sample_complex_gaussian,
                       splitmix64)

__version__ = "1.0.0"

__all__ = [
    "AsymptoticEED", "ComplexMatrix", "ConfigError", "CorrelationSpec",
    "DegenerateSpectrumError", "DomainError", "EULER_GAMMA", "LogValue",
    "MCEstimate", "Regime", "RegimeKind", "SampleSpec", "SystemConfig",
    "WelfordAccumulator", "build_correlation", "classify_regime",
    "correlation_eigenvalues", "delta_l_exact", "distortion_exponent_1",
    "distortion_factor_1", "estimate_eed", "estimate_ergodic_capacity",
    "eta_as_fraction", "extend_to_L", "harmonic", "hermitian_eigenvalues",
    "infinite_l_asymptotic", "infinite_l_bound_mc", "instant_distortion",
    "kappa_h", "kappa_l", "lemma1_limit", "ln_gamma", "logdet_hermitian_pd",
    "matrix_sqrt_psd", "merge_estimates", "moderate_s", "pochhammer", "phi",
    "sample_complex_gaussian", "scbr_beta", "splitmix64", "transit_point",
    "v3_determinant",
]
