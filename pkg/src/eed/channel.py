"""System configuration, SCBR regime classification, spatial correlation.

The regime classifier works on beta = 2/(L*eta). Users enter eta as a
decimal, so beta is reconstructed as an exact rational from the decimal
form of eta before any interval comparison; boundary hits like beta = 5
are then exact instead of drifting by one ulp across a regime boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DomainError
from .numerics import ComplexMatrix, hermitian_eigenvalues

MAX_ANTENNAS = 8
MAX_DIVERSITY = 1024

# snap tolerance for treating beta - dn as an exact integer in parity and
# floor decisions; user-entered rationals are meant to hit these exactly
PARITY_SNAP = 1e-9


@dataclass(frozen=True)
class SystemConfig:
    """Antenna counts, frequency diversity order, SCBR and source power."""

    nt: int
    nr: int
    eta: float
    l: int = 1
    ps: float = 1.0

    def __post_init__(self):
        for name, val in (("nt", self.nt), ("nr", self.nr)):
            if not isinstance(val, int) or not 1 <= val <= MAX_ANTENNAS:
                raise ConfigError(f"{name} must be an integer in [1, {MAX_ANTENNAS}], got {val!r}")
        if not isinstance(self.l, int) or not 1 <= self.l <= MAX_DIVERSITY:
            raise ConfigError(f"l must be an integer in [1, {MAX_DIVERSITY}], got {self.l!r}")
        if not (isinstance(self.eta, (int, float)) and math.isfinite(self.eta) and self.eta > 0):
            raise ConfigError(f"eta must be a positive finite real, got {self.eta!r}")
        if not (isinstance(self.ps, (int, float)) and math.isfinite(self.ps) and self.ps > 0):
            raise ConfigError(f"ps must be a positive finite real, got {self.ps!r}")

    @property
    def n_min(self) -> int:
        return min(self.nt, self.nr)

    @property
    def n_max(self) -> int:
        return max(self.nt, self.nr)

    @property
    def dn(self) -> int:
        return abs(self.nt - self.nr)


def eta_as_fraction(eta: float) -> Fraction:
    """Exact rational for a user-entered SCBR value.

    Decodes the shortest decimal representation of the float, so 0.2
    becomes 1/5 rather than the binary expansion of the nearest double.
    """
    return Fraction(str(eta))


def scbr_beta(config: SystemConfig) -> Fraction:
    """The classifying quantity beta = 2 / (L * eta), exact."""
    return Fraction(2) / (config.l * eta_as_fraction(config.eta))


class RegimeKind(enum.Enum):
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    beta: float
    s: int | None = None


def moderate_s(beta: Fraction, dn: int) -> int:
    """Staircase index s = floor((beta + 1 - dn)/2) with integer snapping.

    beta values within PARITY_SNAP of an integer are treated as exactly
    that integer so a one-ulp-short beta does not drop the floor by one.
    """
    x = beta - dn
    xf = float(x)
    x0 = round(xf)
    if abs(xf - x0) <= PARITY_SNAP:
        x = Fraction(x0)
    return math.floor((x + 1) / 2)


def classify_regime(config: SystemConfig) -> Regime:
    """Which SCBR regime the configuration is in at diversity order L.

    Interval tests are exact on the rational beta; the moderate interval
    is closed on both ends.
    """
    beta = scbr_beta(config)
    if beta > config.nt + config.nr - 1:
        return Regime(RegimeKind.LOW, float(beta))
    if beta < config.dn + 1:
        return Regime(RegimeKind.HIGH, float(beta))
    return Regime(RegimeKind.MODERATE, float(beta), moderate_s(beta, config.dn))


def transit_point(config: SystemConfig) -> int:
    """Smallest diversity order beyond which the distortion exponent
    stops improving: ceil(2 / (eta * (dn + 1))). Ignores config.l."""
    return math.ceil(Fraction(2) / (eta_as_fraction(config.eta) * (config.dn + 1)))


@dataclass(frozen=True)
class CorrelationSpec:
    """Spatial correlation model on the smaller antenna side.

    kind is one of 'identity', 'exponential' (needs r) or 'explicit'
    (needs the ascending eigenvalue list of a unit-diagonal matrix).
    """

    kind: str
    r: float | None = None
    eigenvalues: tuple | None = None

    def __post_init__(self):
        if self.kind == "identity":
            return
        if self.kind == "exponential":
            if not (isinstance(self.r, (int, float)) and 0 < self.r < 1):
                raise ConfigError(f"exponential correlation needs r in (0,1), got {self.r!r}")
            return
        if self.kind == "explicit":
            sig = self.eigenvalues
            if not sig or any(not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0)
                              for v in sig):
                raise ConfigError("explicit eigenvalues must be positive finite reals")
            if any(b <= a for a, b in zip(sig, sig[1:])):
                raise ConfigError("explicit eigenvalues must be strictly ascending")
            return
        raise ConfigError(f"unknown correlation kind {self.kind!r}")

    @staticmethod
    def identity() -> "CorrelationSpec":
        return CorrelationSpec("identity")

    @staticmethod
    def exponential(r: float) -> "CorrelationSpec":
        return CorrelationSpec("exponential", r=float(r))

    @staticmethod
    def explicit(eigenvalues) -> "CorrelationSpec":
        return CorrelationSpec("explicit", eigenvalues=tuple(float(v) for v in eigenvalues))


def build_correlation(spec: CorrelationSpec, dim: int):
    """Correlation matrix and its ascending eigenvalues for one side.

    dim is the smaller antenna count of the target system. The matrix
    always has unit diagonal; eigenvalues therefore sum to dim. For the
    explicit variant the matrix is reconstructed as F diag(sigma) F* with
    F the unitary DFT, whose equal-magnitude rows make every diagonal
    entry the eigenvalue mean, i.e. exactly 1 under the trace constraint.
    """
    if not 1 <= dim <= MAX_ANTENNAS:
        raise ConfigError(f"correlation dimension must be in [1, {MAX_ANTENNAS}], got {dim}")
    if spec.kind == "identity":
        return ComplexMatrix.identity(dim), [1.0] * dim
    if spec.kind == "exponential":
        idx = np.arange(dim)
        mat = spec.r ** np.abs(idx[:, None] - idx[None, :])
        cm = ComplexMatrix.from_array(mat)
        return cm, hermitian_eigenvalues(cm)
    # explicit
    sig = spec.eigenvalues
    if len(sig) != dim:
        raise ConfigError(f"expected {dim} explicit eigenvalues, got {len(sig)}")
    if abs(sum(sig) - dim) > 1e-8 * dim:
        raise ConfigError(
            f"explicit eigenvalues must sum to the dimension {dim} "
            f"(unit-diagonal trace), got sum {sum(sig)!r}")
    k = np.arange(dim)
    f = np.exp(2j * np.pi * np.outer(k, k) / dim) / math.sqrt(dim)
    mat = (f * np.asarray(sig)) @ f.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return ComplexMatrix.from_array(mat), [float(v) for v in sig]


def correlation_eigenvalues(spec: CorrelationSpec, dim: int) -> np.ndarray:
    """Ascending eigenvalue vector only; avoids matrix work for identity
    and explicit variants."""
    if spec.kind == "identity":
        return np.ones(dim)
    if spec.kind == "explicit":
        if len(spec.eigenvalues) != dim:
            raise ConfigError(
                f"expected {dim} explicit eigenvalues, got {len(spec.eigenvalues)}")
        if abs(sum(spec.eigenvalues) - dim) > 1e-8 * dim:
            raise ConfigError("explicit eigenvalues must sum to the dimension")
        return np.asarray(spec.eigenvalues, dtype=float)
    _, eig = build_correlation(spec, dim)
    return np.asarray(eig)
