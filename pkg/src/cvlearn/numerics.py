"""Shared numeric substrate.

Complex phase-space vectors, deterministic counter-based random streams,
log-domain regularized incomplete gamma, and a brute-force single-mode
Fourier quadrature used as an independent oracle by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "RandomStream",
    "FourierOracleResult",
    "as_complex_vector",
    "phase_kernel",
    "gaussian_complex",
    "log_reg_upper_gamma",
    "trapezoid_weights",
    "fourier_oracle_1mode",
    "fourier_oracle_1mode_grid",
]

_MASK64 = (1 << 64) - 1


class DimensionMismatchError(ValueError):
    """Operands live in phase spaces with different mode counts."""


def as_complex_vector(values, n: int | None = None) -> np.ndarray:
    """Coerce ``values`` to a finite 1-D complex128 vector.

    Scalars become length-1 vectors.  If ``n`` is given, the length is
    enforced (raising :class:`DimensionMismatchError` otherwise).
    """
    vec = np.asarray(values, dtype=np.complex128)
    if vec.ndim == 0:
        vec = vec.reshape(1)
    if vec.ndim != 1:
        raise ValueError(f"expected a 1-D complex vector, got shape {vec.shape}")
    if n is not None and vec.shape[0] != n:
        raise DimensionMismatchError(f"expected length {n}, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("complex vector contains NaN or Inf")
    return vec


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RandomStream:
    """Descriptor of a counter-based random stream.

    A stream is a *value*: ``generator()`` always starts from draw index 0,
    so identical (master_seed, substream_index, draw_index) triples yield
    identical draws regardless of host parallelism.  Fresh randomness is
    obtained by spawning children with :meth:`substream`; children mix the
    parent index through splitmix64 so nested spawning cannot collide.
    """

    master_seed: int
    substream_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "master_seed", int(self.master_seed) & _MASK64)
        object.__setattr__(self, "substream_index", int(self.substream_index) & _MASK64)

    def substream(self, index: int) -> "RandomStream":
        """Child stream for chunk/trial ``index`` (deterministic, collision-safe)."""
        if index < 0:
            raise ValueError("substream index must be nonnegative")
        child = _splitmix64(_splitmix64(self.substream_index) ^ (int(index) & _MASK64))
        return RandomStream(self.master_seed, child)

    def generator(self) -> np.random.Generator:
        """Fresh Philox generator keyed by (master_seed, substream_index)."""
        key = (self.substream_index << 64) | self.master_seed
        return np.random.Generator(np.random.Philox(key=key))


def phase_kernel(a, b) -> complex:
    """Displacement phase factor ``exp(a†b − b†a) = exp(2i·Im(a†b))``.

    Unit modulus for any pair of equal-length vectors; Hermitian under
    argument swap: ``phase_kernel(a, b) == conj(phase_kernel(b, a))``.
    """
    av = as_complex_vector(a)
    bv = as_complex_vector(b, n=av.shape[0])
    return complex(np.exp(2j * float(np.imag(np.vdot(av, bv)))))


def gaussian_complex(stream: RandomStream, n: int, var_per_quadrature: float) -> np.ndarray:
    """Draw one complex vector with i.i.d. N(0, var) real and imaginary parts.

    ``var_per_quadrature == 0`` returns the zero vector without consuming
    randomness.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    v = float(var_per_quadrature)
    if not math.isfinite(v) or v < 0:
        raise ValueError(f"var_per_quadrature must be finite and >= 0, got {v}")
    if v == 0.0:
        return np.zeros(n, dtype=np.complex128)
    draws = stream.generator().standard_normal((int(n), 2)) * math.sqrt(v)
    return draws[:, 0] + 1j * draws[:, 1]


def log_reg_upper_gamma(n: int, x: float) -> float:
    """Natural log of Q(n, x) = Γ(n, x)/Γ(n), stable up to n = 14000+.

    Log-domain throughout: lower-series below the mode (x < n + 1), Lentz
    continued fraction above it.  Q itself would underflow near n = 14000
    in linear arithmetic; ln Q stays representable.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"x must be finite and >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < n + 1:
        return _log_q_from_series(n, x)
    return _log_q_continued_fraction(n, x)


def _log_q_from_series(n: int, x: float) -> float:
    # Lower-gamma series: P(n,x) = x^n e^{-x}/Γ(n) · Σ_k x^k / (n(n+1)...(n+k)).
    # In this region P < ~0.6, so log1p(-P) keeps full relative accuracy of Q.
    term = 1.0 / n
    total = term
    ap = n
    for _ in range(10_000_000):
        ap += 1
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    else:  # pragma: no cover
        raise RuntimeError("incomplete gamma series failed to converge")
    log_p = n * math.log(x) - x - math.lgamma(n) + math.log(total)
    p = math.exp(log_p)
    if p >= 1.0:  # pragma: no cover - series region keeps P < 1
        p = math.nextafter(1.0, 0.0)
    return math.log1p(-p)


def _log_q_continued_fraction(n: int, x: float) -> float:
    # Modified Lentz evaluation of the standard upper-gamma continued fraction.
    fpmin = 1e-300
    b = x + 1.0 - n
    c = 1.0 / fpmin
    d = 1.0 / b if b != 0.0 else 1.0 / fpmin
    h = d
    for i in range(1, 10_000_000):
        an = -i * (i - n)
        b += 2.0
        d = an * d + b
        if abs(d) < fpmin:
            d = fpmin
        c = b + an / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:  # pragma: no cover
        raise RuntimeError("incomplete gamma continued fraction failed to converge")
    return -x + n * math.log(x) - math.lgamma(n) + math.log(h)


@dataclass(frozen=True)
class FourierOracleResult:
    value: complex
    coverage_ok: bool


def trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights for a monotone 1-D axis."""
    x = np.asarray(axis, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("axis must be 1-D with at least two points")
    w = np.empty_like(x)
    w[1:-1] = (x[2:] - x[:-2]) / 2.0
    w[0] = (x[1] - x[0]) / 2.0
    w[-1] = (x[-1] - x[-2]) / 2.0
    return w


_COVERAGE_TOL = 1e-12


def _oracle_boundary_ok(f_grid: np.ndarray) -> bool:
    edge = max(
        float(np.max(np.abs(f_grid[0, :]))),
        float(np.max(np.abs(f_grid[-1, :]))),
        float(np.max(np.abs(f_grid[:, 0]))),
        float(np.max(np.abs(f_grid[:, -1]))),
    )
    return edge < _COVERAGE_TOL


def fourier_oracle_1mode(f_grid, beta_re, beta_im, target) -> FourierOracleResult:
    """Trapezoid quadrature of (1/π²) ∬ f(β) e^{β†α − α†β} d²β at α = target.

    ``f_grid[i, j] = f(beta_re[i] + 1j*beta_im[j])`` on a single-mode grid.
    Exists only to cross-check closed forms; ``coverage_ok`` is False when
    |f| at the grid boundary exceeds 1e-12 (insufficient support coverage).
    """
    f = np.asarray(f_grid, dtype=np.complex128)
    bre = np.asarray(beta_re, dtype=np.float64)
    bim = np.asarray(beta_im, dtype=np.float64)
    if f.shape != (bre.size, bim.size):
        raise ValueError("f_grid shape must be (len(beta_re), len(beta_im))")
    alpha = complex(as_complex_vector(target, n=1)[0])
    w_re = trapezoid_weights(bre)
    w_im = trapezoid_weights(bim)
    # e^{β†α − α†β} = exp(2i (Re β · Im α − Im β · Re α)) for a single mode
    row = w_re * np.exp(2j * bre * alpha.imag)
    col = w_im * np.exp(-2j * bim * alpha.real)
    value = complex(row @ f @ col) / math.pi**2
    return FourierOracleResult(value=value, coverage_ok=_oracle_boundary_ok(f))


def fourier_oracle_1mode_grid(f_grid, beta_re, beta_im, alpha_re, alpha_im):
    """Vectorized :func:`fourier_oracle_1mode` over a grid of targets.

    Returns ``(values, coverage_ok)`` with ``values[p, q]`` the quadrature at
    ``alpha_re[p] + 1j*alpha_im[q]``.  Same trapezoid weights as the scalar
    oracle, evaluated as two matrix products.
    """
    f = np.asarray(f_grid, dtype=np.complex128)
    bre = np.asarray(beta_re, dtype=np.float64)
    bim = np.asarray(beta_im, dtype=np.float64)
    are = np.asarray(alpha_re, dtype=np.float64)
    aim = np.asarray(alpha_im, dtype=np.float64)
    if f.shape != (bre.size, bim.size):
        raise ValueError("f_grid shape must be (len(beta_re), len(beta_im))")
    w_re = trapezoid_weights(bre)
    w_im = trapezoid_weights(bim)
    # values[p, q] = Σ_ij e^{2i bre_i aim_q} w_i f_ij w_j e^{-2i bim_j are_p}
    left = np.exp(-2j * np.outer(are, bim))          # (P, J) uses Re α
    right = np.exp(2j * np.outer(bre, aim))          # (I, Q) uses Im α
    inner = (f * w_im[None, :]) @ left.T             # (I, P)
    values = ((w_re[:, None] * inner).T @ right) / math.pi**2   # (P, Q)
    return values, _oracle_boundary_ok(f)
