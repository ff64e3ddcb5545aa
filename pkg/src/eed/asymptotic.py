"""Closed-form high-SNR behavior of the expected end-to-end distortion.

Everything here is organized around beta = 2/(L eta), the exponent the
per-channel determinant is raised to. Three ranges of beta behave
differently:

  high      beta < dn + 1          diversity-limited, smooth gamma products
  moderate  dn + 1 <= beta <= nt + nr - 1   staircase mixing, possible log-rho factor
  low       beta > nt + nr - 1     fully diversity-saturated

with dn = |nt - nr|. The decay rate delta, the coefficient mu (kept as a
LogValue because nt**delta alone reaches 4**20), and the presence of a
log(rho) factor all come out of the regime machinery below. Interval
tests run on exact rationals reconstructed from the user's decimal eta,
so boundary hits are exact; see the channel module.

Eigenvalue inputs (sigma) always describe the correlation on the smaller
antenna side, ascending. All-ones eigenvalues reproduce the uncorrelated
formulas exactly. In the moderate regime the correlated coefficient has
removable 0/0 points where column ties of the eigenvalue-power matrix
cancel against zeros of a rising-factorial denominator; those are
detected exactly and evaluated as a symmetric two-sided limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import (PARITY_SNAP, CorrelationSpec, SystemConfig,
                      correlation_eigenvalues, eta_as_fraction, moderate_s,
                      scbr_beta)
from .errors import DegenerateSpectrumError, DomainError
from .numerics import EULER_GAMMA, LogValue, harmonic, ln_gamma, pochhammer

# half-width for the two-sided limit at removable singular points of the
# correlated moderate coefficient; averaging kills the O(delta) term
COLLISION_DELTA = 2.0 ** -17


@dataclass(frozen=True)
class AsymptoticEED:
    """High-SNR law mu * (ln rho)**p * rho**(-delta).

    mu_coeff stays in the log domain. log_rho_power is 0 or 1 for a
    single-channel factor; the L-fold extension multiplies it by L along
    with raising mu to the L-th power.
    """

    mu_coeff: LogValue
    log_rho_power: int
    delta: float

    def evaluate_logvalue(self, rho: float) -> LogValue:
        if not (isinstance(rho, (int, float)) and math.isfinite(rho) and rho > 0):
            raise DomainError(f"rho must be a positive finite real, got {rho!r}")
        lnr = math.log(rho)
        out = self.mu_coeff * LogValue(1, -self.delta * lnr)
        if self.log_rho_power:
            out = out * LogValue.from_real(lnr) ** self.log_rho_power
        return out

    def evaluate(self, rho: float) -> float:
        """Linear value; raises OverflowError outside double range."""
        return self.evaluate_logvalue(rho).to_real()


def _check_counts(t: int, m: int, n: int) -> None:
    if not isinstance(t, int) or t < 0:
        raise DomainError(f"t must be a nonnegative integer, got {t!r}")
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < m:
        raise DomainError(f"need integer n >= m >= 1, got m={m!r}, n={n!r}")


def _gamma_factor(x: float, what: str) -> LogValue:
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"gamma pole in {what}: argument {x} is not positive")
    return LogValue(1, ln_gamma(x))


def kappa_l(beta: float, t: int, m: int, n: int) -> LogValue:
    """Gamma-product coefficient for the saturated part of the spectrum.

    Defined for beta - n + m - 2t + 1 > 0 when t >= 1; each factor is
    checked so a pole reports which argument died.
    """
    _check_counts(t, m, n)
    beta = float(beta)
    if t == 0:
        return LogValue.one()
    if beta - n + m - 2 * t + 1 <= 0:
        raise DomainError(
            f"kappa_l needs beta - n + m - 2t + 1 > 0, got {beta - n + m - 2 * t + 1}")
    out = (_gamma_factor(n - m + 1.0, "kappa_l Gamma(n-m+1)")
           * _gamma_factor(beta - n + m - 1.0, "kappa_l Gamma(beta-n+m-1)")
           / _gamma_factor(beta, "kappa_l Gamma(beta)"))
    for k in range(2, t + 1):
        out = out * _gamma_factor(float(k), "kappa_l Gamma(k)")
        out = out * _gamma_factor(n - m + float(k), "kappa_l Gamma(n-m+k)")
        out = out * _gamma_factor(beta - n + m - 2.0 * k + 2.0,
                                  "kappa_l Gamma(beta-n+m-2k+2)")
        out = out * _gamma_factor(beta - n + m - 2.0 * k + 1.0,
                                  "kappa_l Gamma(beta-n+m-2k+1)")
        out = out / _gamma_factor(beta - k + 1.0, "kappa_l Gamma(beta-k+1)")
        out = out / _gamma_factor(beta - n + m - k + 1.0,
                                  "kappa_l Gamma(beta-n+m-k+1)")
    return out


def kappa_h(beta: float, t: int, m: int, n: int) -> LogValue:
    """Gamma-product coefficient for the unsaturated part of the spectrum.

    prod_{k=1..t} Gamma(k) Gamma(n - m - beta + k); beta itself may be
    negative, only the individual gamma arguments must be positive.
    """
    _check_counts(t, m, n)
    beta = float(beta)
    out = LogValue.one()
    for k in range(1, t + 1):
        out = out * _gamma_factor(float(k), "kappa_h Gamma(k)")
        out = out * _gamma_factor(n - m - beta + float(k), "kappa_h Gamma(n-m-beta+k)")
    return out


def _delta1_sum(beta_q: Fraction, m: int, dn: int) -> Fraction:
    return sum((min(beta_q, Fraction(2 * k - 1 + dn)) for k in range(1, m + 1)),
               Fraction(0))


def distortion_exponent_1(nt: int, nr: int, eta_eff: float) -> float:
    """Decay rate of the single-channel distortion at effective SCBR
    eta_eff: sum over the spectrum of min(2/eta_eff, 2k-1+dn). Spatial
    correlation does not enter."""
    if not (isinstance(nt, int) and isinstance(nr, int) and nt >= 1 and nr >= 1):
        raise DomainError(f"antenna counts must be positive integers, got {nt!r}, {nr!r}")
    if not (isinstance(eta_eff, (int, float)) and math.isfinite(eta_eff) and eta_eff > 0):
        raise DomainError(f"eta_eff must be a positive finite real, got {eta_eff!r}")
    beta_q = 2 / eta_as_fraction(eta_eff)
    return float(_delta1_sum(beta_q, min(nt, nr), abs(nt - nr)))


def delta_l_exact(config: SystemConfig) -> Fraction:
    """Distortion exponent at diversity L as an exact rational:
    L * sum_k min(2/(L eta), 2k-1+dn)."""
    return config.l * _delta1_sum(scbr_beta(config), config.n_min, config.dn)


def _checked_sigma(sigma, m: int):
    if sigma is None:
        return (1.0,) * m
    sig = tuple(float(v) for v in sigma)
    if len(sig) != m:
        raise DomainError(f"expected {m} eigenvalues, got {len(sig)}")
    for v in sig:
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"eigenvalues must be positive finite reals, got {v!r}")
    if any(b < a for a, b in zip(sig, sig[1:])):
        raise DomainError("eigenvalues must be ascending")
    return sig


def v3_determinant(sigma, beta: float, dn: int) -> LogValue:
    """Signed determinant of the eigenvalue-power matrix of the moderate
    regime, elements sigma_i**(-min(j-1, beta-dn-j)).

    Exactly tied column exponents give an exact zero; a determinant that
    is singular to working precision without such a tie reports a
    degenerate spectrum.
    """
    sig = tuple(float(v) for v in sigma)
    m = len(sig)
    if m < 1:
        raise DomainError("sigma must be non-empty")
    for v in sig:
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"eigenvalues must be positive finite reals, got {v!r}")
    if any(b <= a for a, b in zip(sig, sig[1:])):
        raise DomainError("eigenvalues must be strictly ascending")
    beta = float(beta)
    if not (isinstance(dn, int) and dn >= 0):
        raise DomainError(f"dn must be a nonnegative integer, got {dn!r}")
    if not dn + 1 <= beta <= dn + 2 * m - 1:
        raise DomainError(
            f"beta={beta} outside the moderate interval [{dn + 1}, {dn + 2 * m - 1}]")
    x = beta - dn
    expo = [min(j - 1.0, x - j) for j in range(1, m + 1)]
    if len(set(expo)) < m:
        return LogValue.zero()
    mat = np.array([[sv ** -e for e in expo] for sv in sig])
    sign, lnabs = np.linalg.slogdet(mat)
    if sign == 0.0 or not math.isfinite(lnabs):
        raise DegenerateSpectrumError(
            "eigenvalue-power matrix is singular to working precision")
    return LogValue(1 if sign > 0 else -1, float(lnabs))


def _fac3b_prefactor(beta: float, s: int, m: int, dn: int, sig) -> LogValue:
    """Ratio of the correlated to the uncorrelated moderate coefficient
    at a staircase index s, for distinct eigenvalues, beta off any
    removable singular point."""
    det = v3_determinant(sig, beta, dn)
    if det.is_zero():
        raise DegenerateSpectrumError(
            "eigenvalue-power matrix collapsed at an untreated tie point")
    out = LogValue(-1 if (s * (s - 1) // 2) % 2 else 1, 0.0) * det
    for i in range(m):
        for j in range(i + 1, m):
            out = out / LogValue.from_real(sig[j] - sig[i])
    out = out / LogValue(1, (dn + 1) * sum(math.log(v) for v in sig))
    x = beta - dn
    for k in range(1, m - s + 1):
        out = out * LogValue.from_real(pochhammer(float(k), s))
        out = out / LogValue.from_real(pochhammer(s + k - x, s))
    return out


def _mu1_from_beta(beta_q: Fraction, nt: int, nr: int, ps: float, sig):
    """Single-channel coefficient (LogValue) and log-rho flag at exact
    beta, eigenvalues already validated."""
    m, n, dn = min(nt, nr), max(nt, nr), abs(nt - nr)
    beta = float(beta_q)
    denom = LogValue.one()
    for k in range(1, m + 1):
        denom = denom * _gamma_factor(float(n - k + 1), "Gamma(n-k+1)")
        denom = denom * _gamma_factor(float(m - k + 1), "Gamma(m-k+1)")
    delta1 = float(_delta1_sum(beta_q, m, dn))
    base = LogValue.from_real(ps) * LogValue(1, delta1 * math.log(nt)) / denom
    ln_sig_sum = sum(math.log(v) for v in sig)
    unit = all(v == 1.0 for v in sig)

    if beta_q > n + m - 1:
        # low: every spectral term saturated
        return base * kappa_l(beta, m, m, n) * LogValue(1, -n * ln_sig_sum), 0
    if beta_q < dn + 1:
        # high: no term saturated
        return base * kappa_h(beta, m, m, n) * LogValue(1, -beta * ln_sig_sum), 0

    # moderate: s saturated terms, the rest carry beta
    s = moderate_s(beta_q, dn)
    x_q = beta_q - dn
    xf = float(x_q)
    x0 = round(xf)
    is_int = abs(xf - x0) <= PARITY_SNAP
    if is_int and x0 % 2 == 1:
        kappa = kappa_l(beta, s - 1, m, n) * kappa_h(beta - 2.0 * s, m - s, m, n)
        p = 1
    else:
        kappa = kappa_l(beta, s, m, n) * kappa_h(beta - 2.0 * s, m - s, m, n)
        p = 0
    mu_unc = base * kappa
    if unit:
        return mu_unc, p
    if any(b == a for a, b in zip(sig, sig[1:])):
        raise DegenerateSpectrumError(
            "correlated moderate-regime coefficient needs distinct eigenvalues")
    if is_int and 2 <= x0 <= 2 * m - 2:
        # removable 0/0 of the correlated prefactor: column tie of the
        # power matrix against a rising-factorial zero; symmetric
        # two-sided evaluation, s and the log flag held at the center
        lo = _fac3b_prefactor(dn + x0 - COLLISION_DELTA, s, m, dn, sig)
        hi = _fac3b_prefactor(dn + x0 + COLLISION_DELTA, s, m, dn, sig)
        pref = (lo + hi) * LogValue.from_real(0.5)
    else:
        pref = _fac3b_prefactor(beta, s, m, dn, sig)
    return mu_unc * pref, p


def distortion_factor_1(config: SystemConfig, sigma=None):
    """Single-channel high-SNR coefficient at config.eta taken as the
    effective SCBR (config.l plays no role here; the diversity extension
    is extend_to_L). Returns (LogValue, log_rho_power)."""
    sig = _checked_sigma(sigma, config.n_min)
    beta_q = 2 / eta_as_fraction(config.eta)
    return _mu1_from_beta(beta_q, config.nt, config.nr, config.ps, sig)


def extend_to_L(config: SystemConfig, corr: CorrelationSpec | None = None) -> AsymptoticEED:
    """Diversity-L law from the single-channel coefficient at the
    compressed SCBR L*eta: delta scales by L, mu is ps**(1-L) times the
    L-th power, the log-rho flag scales by L."""
    if corr is None:
        corr = CorrelationSpec.identity()
    sig = tuple(float(v) for v in correlation_eigenvalues(corr, config.n_min))
    beta_q = scbr_beta(config)
    mu1, p1 = _mu1_from_beta(beta_q, config.nt, config.nr, config.ps, sig)
    mu = LogValue.from_real(config.ps) ** (1 - config.l) * mu1 ** config.l
    return AsymptoticEED(mu, config.l * p1, float(delta_l_exact(config)))


def lemma1_limit(n: int, a: float) -> float:
    """Infinite-repetition limit of [Gamma(n - a/L)/Gamma(n)]**L:
    exp(a*euler_gamma + a/n - a*H_n)."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a != 0):
        raise DomainError(f"a must be a nonzero finite real, got {a!r}")
    return math.exp(a * (EULER_GAMMA + 1.0 / n - harmonic(n)))


def infinite_l_asymptotic(config: SystemConfig, sigma=None) -> AsymptoticEED:
    """High-SNR law of the infinite-diversity distortion floor."""
    m, dn = config.n_min, config.dn
    sig = _checked_sigma(sigma, m)
    scale = float(2 / eta_as_fraction(config.eta))
    delta = scale * m
    ln_mu = (math.log(config.ps) + delta * math.log(config.nt)
             + scale * (EULER_GAMMA * m
                        - sum(harmonic(dn + k - 1) for k in range(1, m + 1)))
             - scale * sum(math.log(v) for v in sig))
    return AsymptoticEED(LogValue(1, ln_mu), 0, delta)


def phi(config: SystemConfig, l: int, sigma=None) -> float:
    """Per-channel shrink factor of the high-regime coefficient at
    diversity l: prod_k sigma_k**(-2/eta) * Gamma(dn - 2/(l eta) + k) /
    Gamma(dn + k). Needs the high regime at l, else a gamma pole."""
    if not isinstance(l, int) or l < 1:
        raise DomainError(f"l must be a positive integer, got {l!r}")
    m, dn = config.n_min, config.dn
    sig = _checked_sigma(sigma, m)
    beta_l = float(2 / (l * eta_as_fraction(config.eta)))
    scale = float(2 / eta_as_fraction(config.eta))
    out = 0.0
    for k in range(1, m + 1):
        arg = dn - beta_l + k
        if arg <= 0:
            raise DomainError(
                f"gamma pole in phi: dn - 2/(l*eta) + {k} = {arg}; "
                f"diversity {l} is below the high-regime threshold")
        out += ln_gamma(arg) - ln_gamma(float(dn + k)) - scale * math.log(sig[k - 1])
    return math.exp(out)
