"""Error types shared across the package.

Two families: DomainError for mathematically invalid inputs discovered
inside the computation (gamma poles, non-Hermitian matrices, singular
spectra), ConfigError for structurally invalid user configuration.
Both derive from ValueError so callers that don't care can catch one type.
"""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """System or correlation configuration violates a structural constraint."""


class DegenerateSpectrumError(DomainError):
    """Correlation eigenvalues too close to equal for the correlated
    moderate-regime factor, which requires distinct eigenvalues."""
