"""Log-domain scalar arithmetic and small complex-matrix kernels.

All gamma-product assembly in this package runs through LogValue and
ln_gamma: individual gamma factors overflow double precision long before
the assembled coefficients do. The matrix side is deliberately small
(antenna counts are capped at 8), so robustness beats speed: Hermitian
eigenvalues come from a cyclic Jacobi sweep rather than a general solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One output of the splitmix64 generator for the given 64-bit state.

    Equals the next() call of the reference implementation seeded with
    ``state``: the state first advances by the golden-ratio increment,
    then the mixed value is returned. Used to derive decorrelated
    per-stream seeds from a single user seed.
    """
    z = (state + _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class LogValue:
    """A real number carried as (sign, natural log of magnitude).

    sign is -1, 0 or +1; sign 0 means exactly zero and ln_magnitude is
    ignored then. Multiplication, division, powers and signed addition
    stay in the log domain, so products whose factors reach 1e300 are
    fine as long as ln_magnitude stays within about +-1e6.
    """

    sign: int
    ln_magnitude: float

    @staticmethod
    def one() -> "LogValue":
        return LogValue(1, 0.0)

    @staticmethod
    def zero() -> "LogValue":
        return LogValue(0, 0.0)

    @staticmethod
    def from_real(x: float) -> "LogValue":
        if x == 0.0:
            return LogValue(0, 0.0)
        if not math.isfinite(x):
            raise DomainError(f"cannot represent non-finite value {x!r}")
        return LogValue(1 if x > 0 else -1, math.log(abs(x)))

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_real(self) -> float:
        """Linear value; raises OverflowError outside double range."""
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.ln_magnitude)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign,
                        self.ln_magnitude + other.ln_magnitude)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise DomainError("division by exact zero LogValue")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign,
                        self.ln_magnitude - other.ln_magnitude)

    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.ln_magnitude)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = self, other
        if lo.ln_magnitude > hi.ln_magnitude:
            hi, lo = lo, hi
        d = lo.ln_magnitude - hi.ln_magnitude  # <= 0
        if self.sign == other.sign:
            return LogValue(hi.sign, hi.ln_magnitude + math.log1p(math.exp(d)))
        if d == 0.0:
            return LogValue.zero()
        return LogValue(hi.sign, hi.ln_magnitude + math.log1p(-math.exp(d)))

    def __pow__(self, k: float) -> "LogValue":
        if self.sign == 0:
            if k > 0:
                return LogValue.zero()
            if k == 0:
                return LogValue.one()
            raise DomainError("zero LogValue raised to a negative power")
        if self.sign < 0:
            if k != int(k):
                raise DomainError("negative LogValue raised to non-integer power")
            sign = -1 if int(k) % 2 else 1
            return LogValue(sign, k * self.ln_magnitude)
        return LogValue(1, k * self.ln_magnitude)


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0:
        raise DomainError(f"ln_gamma requires a positive finite argument, got {x!r}")
    return math.lgamma(x)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial a(a+1)...(a+n-1) as an explicit product.

    The product form keeps negative non-integer bases valid, which the
    gamma-ratio form is not without reflection handling.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer order must be a nonnegative integer, got {n!r}")
    out = 1.0
    for k in range(int(n)):
        f = a + k
        if f == 0.0:
            raise DomainError(f"pochhammer({a}, {n}) crosses a zero factor at k={k}")
        out *= f
    return out


def harmonic(n: int) -> float:
    """Harmonic number H_n; H_0 is the empty sum, 0."""
    if n < 0 or n != int(n):
        raise DomainError(f"harmonic order must be a nonnegative integer, got {n!r}")
    return sum(1.0 / k for k in range(1, int(n) + 1))


@dataclass(frozen=True)
class ComplexMatrix:
    """Immutable dense complex matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DomainError(
                f"entry count {len(self.entries)} != rows*cols {self.rows * self.cols}")

    @staticmethod
    def from_array(a) -> "ComplexMatrix":
        arr = np.asarray(a, dtype=complex)
        if arr.ndim != 2:
            raise DomainError(f"expected a 2-D array, got ndim={arr.ndim}")
        return ComplexMatrix(arr.shape[0], arr.shape[1],
                             tuple(complex(v) for v in arr.ravel()))

    @staticmethod
    def identity(n: int) -> "ComplexMatrix":
        return ComplexMatrix.from_array(np.eye(n))

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex).reshape(self.rows, self.cols)


def _as_square_hermitian(m: ComplexMatrix, what: str) -> np.ndarray:
    a = m.as_array()
    if a.shape[0] != a.shape[1]:
        raise DomainError(f"{what} requires a square matrix, got {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.conj().T).max()) > 1e-12 * scale:
        raise DomainError(f"{what} requires a Hermitian matrix")
    return a


def _jacobi_hermitian(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns (eigenvalues unsorted, unitary V with A = V diag V†).
    Each rotation factors out the phase of the pivot entry, reducing the
    2x2 subproblem to the classical real symmetric rotation.
    """
    n = a.shape[0]
    a = a.astype(complex).copy()
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    thresh = tol * max(1.0, float(np.linalg.norm(a, "fro")))
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                off = max(off, r)
                if r <= thresh:
                    continue
                phase = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 if tau == 0.0 else math.copysign(1.0, tau) / (
                    abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # column transform A <- A G, then row transform A <- G† A
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * phase * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
                row_p = c * a[p, :] - s * phase * a[q, :]
                row_q = s * np.conj(phase) * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = c * v[:, p] - s * np.conj(phase) * v[:, q]
                vq = s * phase * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
        if off <= thresh:
            return np.diag(a).real.copy(), v
    raise DomainError("Jacobi eigensolver did not converge within 100 sweeps")


def hermitian_eigenvalues(m: ComplexMatrix) -> list:
    """Eigenvalues of a Hermitian matrix, sorted ascending."""
    a = _as_square_hermitian(m, "hermitian_eigenvalues")
    w, _ = _jacobi_hermitian(a)
    return sorted(float(x) for x in w)


def logdet_hermitian_pd(m: ComplexMatrix) -> float:
    """Natural-log determinant of a Hermitian positive definite matrix."""
    a = _as_square_hermitian(m, "logdet_hermitian_pd")
    try:
        c = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as e:
        raise DomainError(f"matrix is not positive definite: {e}") from e
    return float(2.0 * np.log(np.abs(np.diag(c))).sum())


def matrix_sqrt_psd(m: ComplexMatrix) -> ComplexMatrix:
    """Hermitian square root S of a PSD matrix, S S† = m."""
    a = _as_square_hermitian(m, "matrix_sqrt_psd")
    w, v = _jacobi_hermitian(a)
    scale = max(1.0, float(np.abs(w).max()))
    if w.min() < -1e-10 * scale:
        raise DomainError(f"matrix has negative eigenvalue {w.min():.3e}, not PSD")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return ComplexMatrix.from_array(s)


def sample_complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> ComplexMatrix:
    """rows x cols matrix of i.i.d. CN(0,1) entries.

    Real and imaginary parts are independent N(0, 1/2), so E|h|^2 = 1.
    """
    z = rng.standard_normal((rows, cols, 2))
    return ComplexMatrix.from_array((z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5))
