"""Analytic noise envelopes for the entangled-probe measurement scheme.

Effective squeezing under loss and finite measurement squeezing, the
two-mode-squeezed-vacuum characteristic function g, phase-diffusion and
beam-splitter-crosstalk envelopes, and the generic sample-overhead rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .numerics import as_complex_vector

__all__ = [
    "SingularCrosstalkError",
    "NoiseEnvelope",
    "excess_noise_weight",
    "r_eff",
    "g_tmsv",
    "phase_diffusion_g_sq",
    "crosstalk_envelope",
    "sample_overhead",
]


class SingularCrosstalkError(ValueError):
    """Crosstalk angle at or beyond the +-pi/4 singularity."""


def _check_rates(r: float, T_b: float, T_a: float, s: float):
    if not (r >= 0):
        raise ValueError(f"squeezing r must be >= 0, got {r}")
    if not (0 < T_b <= 1):
        raise ValueError(f"transmission T_b must lie in (0, 1], got {T_b}")
    if not (0 < T_a <= 1):
        raise ValueError(f"transmission T_a must lie in (0, 1], got {T_a}")
    if not (s >= 0):
        raise ValueError(f"measurement squeezing s must be >= 0, got {s}")


def excess_noise_weight(r: float, T_b: float = 1.0, T_a: float = 1.0, s: float = math.inf) -> float:
    """e^{-2 r_eff} = T_b e^{-2r} + e^{-2s}/T_a + (1 - T_b) + (1 - T_a)/T_a."""
    _check_rates(r, T_b, T_a, s)
    meas = 0.0 if math.isinf(s) else math.exp(-2.0 * s) / T_a
    return T_b * math.exp(-2.0 * r) + meas + (1.0 - T_b) + (1.0 - T_a) / T_a


def r_eff(r: float, T_b: float = 1.0, T_a: float = 1.0, s: float = math.inf) -> float:
    """Effective squeezing absorbing input squeezing, loss, and finite measurement squeezing.

    The ideal preset (T_b = T_a = 1, s = inf) returns r exactly.
    """
    _check_rates(r, T_b, T_a, s)
    if T_b == 1.0 and T_a == 1.0 and math.isinf(s):
        return float(r)
    return -0.5 * math.log(excess_noise_weight(r, T_b, T_a, s))


def g_tmsv(w1, w2, r: float) -> float:
    """Characteristic function of n TMSV pairs at (w1, w2).

    exp(-1/2 [ (|w1|^2 + |w2|^2) cosh 2r  -  2 Re(w1·w2) sinh 2r ]),
    with the plain (unconjugated) dot product; factorizes over modes.
    At w2 = conj(w1) it reduces to exp(-e^{-2r} |w1|^2).
    """
    a = as_complex_vector(w1)
    b = as_complex_vector(w2, n=a.shape[0])
    quad = (float(np.sum(a.real**2 + a.imag**2)) + float(np.sum(b.real**2 + b.imag**2))) * math.cosh(
        2.0 * r
    ) - 2.0 * float(np.real(np.sum(a * b))) * math.sinh(2.0 * r)
    return math.exp(-0.5 * quad)


@dataclass(frozen=True)
class NoiseEnvelope:
    """Squared characteristic-function envelope and the induced sample overhead."""

    beta: np.ndarray
    g_sq: float
    overhead: float


def _make_envelope(beta: np.ndarray, g_sq: float) -> NoiseEnvelope:
    if not (0.0 <= g_sq <= 1.0 + 1e-12):
        raise ValueError(f"internal error: g_sq = {g_sq} outside [0, 1]")
    g_sq = min(g_sq, 1.0)
    return NoiseEnvelope(beta=beta, g_sq=g_sq, overhead=math.inf if g_sq == 0.0 else 1.0 / g_sq)


_GH_START_ORDER = 8
_GH_MAX_ORDER = 512
_GH_REL_TOL = 1e-8


def _phase_mode_average(b2: float, cosh2r: float, sinh2r: float, delta: float) -> float:
    """E over (phi_A, phi_B) ~ N(0, delta^2)^2 of exp(-b2 (cosh2r - cos(phi_A+phi_B) sinh2r)).

    Tensor-product Gauss-Hermite, order doubled until relative change < 1e-8.
    """
    prev = None
    order = _GH_START_ORDER
    while True:
        x, w = hermgauss(order)
        phi = math.sqrt(2.0) * delta * x
        psi = phi[:, None] + phi[None, :]
        vals = np.exp(-b2 * (cosh2r - np.cos(psi) * sinh2r))
        est = float((w[:, None] * w[None, :] * vals).sum()) / math.pi
        if prev is not None and abs(est - prev) <= _GH_REL_TOL * max(abs(est), 1e-300):
            return est
        if order >= _GH_MAX_ORDER:  # pragma: no cover - converges long before
            return est
        prev = est
        order *= 2


def phase_diffusion_g_sq(beta, r: float, delta_rad: float) -> NoiseEnvelope:
    """|g_Delta(beta*, beta)|^2 under Gaussian phase diffusion of width delta_rad.

    Per-mode double Gaussian average of g over the two random phases,
    multiplied across modes; delta_rad = 0 returns exp(-2 e^{-2r} |beta|^2)
    exactly.
    """
    b = as_complex_vector(beta)
    delta = float(delta_rad)
    if delta < 0:
        raise ValueError("delta_rad must be >= 0")
    norm_sq = float(np.sum(b.real**2 + b.imag**2))
    if delta == 0.0:
        return _make_envelope(b, math.exp(-2.0 * math.exp(-2.0 * r) * norm_sq))
    cosh2r = math.cosh(2.0 * r)
    sinh2r = math.sinh(2.0 * r)
    cache: dict[float, float] = {}
    g = 1.0
    for b2 in (b.real**2 + b.imag**2).tolist():
        if b2 == 0.0:
            continue
        if b2 not in cache:
            cache[b2] = _phase_mode_average(b2, cosh2r, sinh2r, delta)
        g *= cache[b2]
    return _make_envelope(b, g * g)


def crosstalk_envelope(beta, r: float, theta: float) -> NoiseEnvelope:
    """|g(beta^theta, beta, r)|^2 cos^{2n}(2 theta) for Bell-measurement crosstalk.

    beta^theta rescales the quadratures:
      Re -> (cos t - sin t)/(sin t + cos t) * Re,
      Im -> (sin t + cos t)/(sin t - cos t) * Im.
    |theta| >= pi/4 is a singular configuration (sin t - cos t -> 0).
    """
    b = as_complex_vector(beta)
    t = float(theta)
    if not abs(t) < math.pi / 4:
        raise SingularCrosstalkError(f"|theta| must be < pi/4, got {t}")
    c, s = math.cos(t), math.sin(t)
    beta_theta = ((c - s) / (s + c)) * b.real + 1j * ((s + c) / (s - c)) * b.imag
    g = g_tmsv(beta_theta, b, r)
    g_sq = g * g * math.cos(2.0 * t) ** (2 * b.shape[0])
    return _make_envelope(b, g_sq)


def sample_overhead(g_sq: float, eps: float, delta: float) -> float:
    """Sample count 8 g_sq^{-1} eps^{-2} ln(4/delta) for a generic input-state envelope.

    Constants match the two-sided Hoeffding bound used throughout; g_sq = 0
    returns inf (infinite-overhead flag).
    """
    if not (0.0 <= g_sq <= 1.0):
        raise ValueError(f"g_sq must lie in [0, 1], got {g_sq}")
    if not (eps > 0):
        raise ValueError("eps must be > 0")
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    if g_sq == 0.0:
        return math.inf
    return 8.0 / (g_sq * eps * eps) * math.log(4.0 / delta)
