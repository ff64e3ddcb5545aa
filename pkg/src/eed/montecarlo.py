"""Monte Carlo estimation of expected end-to-end distortion and capacity.

Sampling is split across independent generator streams. The contract:
for a fixed (seed, n_samples, n_streams) the result is bit-identical no
matter how many OS threads actually execute, because every stream owns
its own PCG64 generator, does a fixed batch schedule, and the per-stream
accumulators are merged in stream-index order at the end. EED_THREADS
(or the CPU count) only sizes the physical pool.

Per-draw values for the distortion estimator are v = exp(-c ln det M)
with M = I + (rho/nt) G and c = 2/(L eta); G is the Gram matrix of an
iid complex Gaussian block, built on the smaller antenna side (both
sides give the same determinant) and colored there when a correlation
model is active.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import CorrelationSpec, SystemConfig, build_correlation
from .errors import ConfigError, DomainError
from .numerics import ComplexMatrix, logdet_hermitian_pd, matrix_sqrt_psd, splitmix64

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 state increment, same as numerics

LN2 = math.log(2.0)


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its Gaussian-approximation standard error."""

    mean: float
    std_error: float
    n_samples: int


@dataclass(frozen=True)
class SampleSpec:
    """How much to sample and how to split it across streams.

    n_samples is rounded up to a multiple of n_streams; the per-stream
    share is what each generator actually draws, so the reported
    n_samples of an estimate can exceed the requested one by up to
    n_streams - 1.
    """

    seed: int
    n_samples: int
    n_streams: int = 4

    def __post_init__(self):
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ConfigError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if not isinstance(self.n_streams, int) or self.n_streams < 1:
            raise ConfigError(f"n_streams must be a positive integer, got {self.n_streams!r}")

    @property
    def per_stream(self) -> int:
        return -(-self.n_samples // self.n_streams)

    @property
    def total(self) -> int:
        return self.per_stream * self.n_streams


class WelfordAccumulator:
    """One-pass (count, mean, M2) moments with batch updates and merging.

    Merging two accumulators gives the same moments (to rounding) as one
    accumulator fed the concatenated data, which is what makes the
    stream-parallel estimate independent of physical scheduling.
    """

    __slots__ = ("count", "mean", "m2")

    def __init__(self, count: int = 0, mean: float = 0.0, m2: float = 0.0):
        self.count = count
        self.mean = mean
        self.m2 = m2

    def update_batch(self, values: np.ndarray) -> None:
        b = int(values.size)
        if b == 0:
            return
        bm = float(values.mean())
        bm2 = float(((values - bm) ** 2).sum())
        self._combine(b, bm, bm2)

    def merge(self, other: "WelfordAccumulator") -> None:
        self._combine(other.count, other.mean, other.m2)

    def _combine(self, count: int, mean: float, m2: float) -> None:
        if count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = count, mean, m2
            return
        total = self.count + count
        delta = mean - self.mean
        self.mean += delta * count / total
        self.m2 += m2 + delta * delta * self.count * count / total
        self.count = total

    def to_estimate(self) -> MCEstimate:
        if self.count < 1:
            raise DomainError("accumulator holds no samples")
        if self.count == 1:
            return MCEstimate(self.mean, 0.0, 1)
        var = self.m2 / (self.count - 1)
        return MCEstimate(self.mean, math.sqrt(max(var, 0.0) / self.count), self.count)


def merge_estimates(parts) -> MCEstimate:
    """Pool stream-level accumulators into one estimate, in list order."""
    parts = list(parts)
    if not parts:
        raise DomainError("cannot merge an empty list of accumulators")
    pooled = WelfordAccumulator()
    for p in parts:
        pooled.merge(p)
    return pooled.to_estimate()


def instant_distortion(h_list, config: SystemConfig, rho: float) -> float:
    """Optimum distortion for one realization of the L channel matrices."""
    if not (isinstance(rho, (int, float)) and math.isfinite(rho) and rho >= 0):
        raise DomainError(f"rho must be a nonnegative finite real, got {rho!r}")
    if len(h_list) != config.l:
        raise DomainError(f"expected {config.l} channel matrices, got {len(h_list)}")
    c = 2.0 / (config.l * config.eta)
    total = 0.0
    for h in h_list:
        if h.rows != config.nr or h.cols != config.nt:
            raise DomainError(
                f"channel matrix must be {config.nr} x {config.nt}, got {h.rows} x {h.cols}")
        arr = h.as_array()
        gram = arr @ arr.conj().T
        m = np.eye(config.nr) + (rho / config.nt) * gram
        total += logdet_hermitian_pd(ComplexMatrix.from_array(m))
    return config.ps * math.exp(-c * total)


def _stream_seed(seed: int, index: int) -> int:
    # output #index of the splitmix64 sequence started at seed
    return splitmix64((seed + index * _GOLDEN) & _MASK64)


def _batch_size(m: int, n: int) -> int:
    # keep per-batch scratch around tens of MB for the largest arrays
    return min(65536, max(1024, (1 << 21) // (m * n)))


def _stream_moments(seed: int, n_draws: int, m: int, n: int, s_half, c_snr: float,
                    transform) -> WelfordAccumulator:
    rng = np.random.Generator(np.random.PCG64(seed))
    acc = WelfordAccumulator()
    eye = np.eye(m)
    batch = _batch_size(m, n)
    left = n_draws
    while left > 0:
        b = min(batch, left)
        zr = rng.standard_normal((b, m, n, 2))
        z = (zr[..., 0] + 1j * zr[..., 1]) * math.sqrt(0.5)
        gram = z @ z.conj().transpose(0, 2, 1)
        if s_half is not None:
            gram = s_half @ gram @ s_half
        chol = np.linalg.cholesky(eye + c_snr * gram)
        diag = np.diagonal(chol, axis1=1, axis2=2).real
        lndet = 2.0 * np.log(diag).sum(axis=1)
        acc.update_batch(transform(lndet))
        left -= b
    return acc


def _pool_size(n_streams: int) -> int:
    env = os.environ.get("EED_THREADS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ConfigError(f"EED_THREADS must be an integer, got {env!r}") from None
        if workers < 1:
            raise ConfigError(f"EED_THREADS must be >= 1, got {workers}")
    else:
        workers = os.cpu_count() or 1
    return min(workers, n_streams)


def _run_streams(config: SystemConfig, corr: CorrelationSpec, rho: float,
                 spec: SampleSpec, transform) -> MCEstimate:
    if not (isinstance(rho, (int, float)) and math.isfinite(rho) and rho >= 0):
        raise DomainError(f"rho must be a nonnegative finite real, got {rho!r}")
    m, n = config.n_min, config.n_max
    s_half = None
    if corr.kind != "identity":
        mat, _ = build_correlation(corr, m)
        s_half = matrix_sqrt_psd(mat).as_array()
    c_snr = rho / config.nt
    per = spec.per_stream

    def worker(i: int) -> WelfordAccumulator:
        return _stream_moments(_stream_seed(spec.seed, i), per, m, n, s_half,
                               c_snr, transform)

    workers = _pool_size(spec.n_streams)
    if workers == 1:
        accs = [worker(i) for i in range(spec.n_streams)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(worker, range(spec.n_streams)))
    return merge_estimates(accs)


def estimate_eed(config: SystemConfig, corr: CorrelationSpec, rho: float,
                 spec: SampleSpec) -> MCEstimate:
    """Sampling estimate of the expected optimum distortion at diversity L.

    The inner mean m averages v = exp(-(2/(L eta)) ln det M) over draws;
    the reported mean is ps * m**L and the standard error follows by the
    delta method, ps * L * m**(L-1) * se(m). The delta method is
    first-order, so treat the error bar as approximate when
    L * se(m) / m exceeds about 0.1.
    """
    c = 2.0 / (config.l * config.eta)

    def transform(lndet: np.ndarray) -> np.ndarray:
        return np.exp(-c * lndet)

    inner = _run_streams(config, corr, rho, spec, transform)
    mean = config.ps * inner.mean ** config.l
    se = config.ps * config.l * inner.mean ** (config.l - 1) * inner.std_error
    return MCEstimate(mean, se, inner.n_samples)


def estimate_ergodic_capacity(config: SystemConfig, corr: CorrelationSpec, rho: float,
                              spec: SampleSpec) -> MCEstimate:
    """Average of log2 det(I + (rho/nt) G) in bits per two-dimensional
    channel use. Per-bandwidth scaling is deliberately left out; the CLI
    output header says so."""

    def transform(lndet: np.ndarray) -> np.ndarray:
        return lndet / LN2

    return _run_streams(config, corr, rho, spec, transform)


def infinite_l_bound_mc(config: SystemConfig, corr: CorrelationSpec, rho: float,
                        spec: SampleSpec) -> MCEstimate:
    """Distortion floor in the infinite-diversity limit, from the sampled
    ergodic capacity: ps * 2**(-(2/eta) chat)."""
    cap = estimate_ergodic_capacity(config, corr, rho, spec)
    scale = 2.0 / config.eta
    value = config.ps * 2.0 ** (-scale * cap.mean)
    se = scale * LN2 * value * cap.std_error
    return MCEstimate(value, se, cap.n_samples)
