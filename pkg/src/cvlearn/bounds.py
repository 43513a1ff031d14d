"""Sample-complexity bounds and tail quantities, all in log10 domain.

Entanglement-free lower bounds (main, finite-width, Gaussian-scheme
variants), the entangled-probe upper bound, their advantage ratio, the
Gaussian tail probability of the hidden-peak prior, and the Monte Carlo
saturation check of the closed-form fidelity bound.

Constants (0.01, 1.98, 0.99, 8, ln 4/delta) are kept explicit: the
advantage contours depend on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .numerics import RandomStream, log_reg_upper_gamma

__all__ = [
    "BoundKind",
    "BoundQuery",
    "BoundResult",
    "FidelityBoundResult",
    "lower_bound_ef",
    "lower_bound_ef_finite_sigma",
    "lower_bound_ef_gaussian",
    "upper_bound_ea",
    "advantage_ratio",
    "gaussian_tail",
    "fidelity_bound_saturation",
    "sigma_condition_ok",
]

_LOG10 = math.log(10.0)


class BoundKind(str, Enum):
    EF_MAIN = "ef_main"
    EF_FINITE_SIGMA = "ef_finite_sigma"
    EF_GAUSSIAN = "ef_gaussian"
    EA_UPPER = "ea_upper"


@dataclass(frozen=True)
class BoundQuery:
    """(n, kappa, eps, delta, sigma) query; the task is |beta|^2 <= kappa*n.

    delta feeds only the upper bound: the lower bounds fix the success
    probability at 2/3.  sigma = 0 selects the main-text limit.
    """

    n: int
    kappa: float
    eps: float
    delta: float
    sigma: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not (self.kappa >= 0 and math.isfinite(self.kappa)):
            raise ValueError("kappa must be finite and >= 0")
        if not (self.eps > 0):
            raise ValueError("eps must be > 0")
        if not (0 < self.delta < 1):
            raise ValueError("delta must lie in (0, 1)")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be finite and >= 0")

    @property
    def sigma_gamma_sq(self) -> float:
        """Hidden-peak prior variance per quadrature: 2 sigma_gamma^2 = 0.99 kappa."""
        return 0.99 * self.kappa / 2.0


@dataclass(frozen=True)
class BoundResult:
    log10_N: float
    valid: bool
    which: BoundKind
    reasons: tuple[str, ...] = ()
    active_branch: str | None = None


def _premise_reasons(q: BoundQuery) -> list[str]:
    reasons = []
    if q.n < 8:
        reasons.append("n_lt_8")
    if q.eps > 0.24:
        reasons.append("eps_gt_0.24")
    return reasons


def sigma_condition_ok(kappa: float, sigma: float) -> bool:
    """Finite-width lower-bound premise: 2 sigma^2 <= max{1 - 1.98 kappa, 0.99 kappa (sqrt(1 + (0.99 kappa)^-2) - 1)}."""
    if sigma == 0.0:
        return True
    if kappa <= 0:
        return 2.0 * sigma * sigma <= 1.0
    k99 = 0.99 * kappa
    limit = max(1.0 - 1.98 * kappa, k99 * (math.sqrt(1.0 + k99**-2) - 1.0))
    return 2.0 * sigma * sigma <= limit


def lower_bound_ef_finite_sigma(q: BoundQuery) -> BoundResult:
    """log10 of 0.01 eps^-2 (1 + 1.98 kappa / (1 + 2 sigma^2))^n.

    Reduces bitwise to :func:`lower_bound_ef` at sigma = 0.  Premise
    violations are flagged, not raised.
    """
    reasons = _premise_reasons(q)
    if not sigma_condition_ok(q.kappa, q.sigma):
        reasons.append("sigma_condition")
    base = 1.0 + 1.98 * q.kappa / (1.0 + 2.0 * q.sigma * q.sigma)
    log10_n = -2.0 - 2.0 * math.log10(q.eps) + q.n * math.log10(base)
    return BoundResult(log10_N=log10_n, valid=not reasons, which=BoundKind.EF_FINITE_SIGMA, reasons=tuple(reasons))


def lower_bound_ef(q: BoundQuery) -> BoundResult:
    """Main lower bound: log10 of 0.01 eps^-2 (1 + 1.98 kappa)^n (sigma -> 0 limit)."""
    res = lower_bound_ef_finite_sigma(replace(q, sigma=0.0))
    return BoundResult(log10_N=res.log10_N, valid=res.valid, which=BoundKind.EF_MAIN, reasons=res.reasons)


def lower_bound_ef_gaussian(q: BoundQuery) -> BoundResult:
    """Gaussian-scheme lower bound: min of the half-exponent and full-exponent branches.

    0.01 eps^-2 min{(1 + 0.99 kappa / sigma^2)^{n/2}, (1 + 1.98 kappa / (1 + 2 sigma^2))^n};
    sigma = 0 is a domain error (the first branch diverges; use lower_bound_ef).
    """
    if q.sigma <= 0:
        raise ValueError("lower_bound_ef_gaussian requires sigma > 0")
    reasons = _premise_reasons(q)
    prefix = -2.0 - 2.0 * math.log10(q.eps)
    half = prefix + (q.n / 2.0) * math.log10(1.0 + 0.99 * q.kappa / (q.sigma * q.sigma))
    full = prefix + q.n * math.log10(1.0 + 1.98 * q.kappa / (1.0 + 2.0 * q.sigma * q.sigma))
    branch = "n_half" if half <= full else "n_full"
    return BoundResult(
        log10_N=min(half, full),
        valid=not reasons,
        which=BoundKind.EF_GAUSSIAN,
        reasons=tuple(reasons),
        active_branch=branch,
    )


def upper_bound_ea(q: BoundQuery, r_eff: float) -> BoundResult:
    """Entangled-probe upper bound, worst case over |beta|^2 <= kappa n.

    log10 of 8 e^{2 e^{-2 r_eff} kappa n} eps^-2 ln(4/delta).
    """
    weight = math.exp(-2.0 * r_eff) if not math.isinf(r_eff) else 0.0
    log10_n = (
        math.log10(8.0 * math.log(4.0 / q.delta))
        - 2.0 * math.log10(q.eps)
        + 2.0 * weight * q.kappa * q.n / _LOG10
    )
    return BoundResult(log10_N=log10_n, valid=True, which=BoundKind.EA_UPPER)


_EF_VARIANTS = {
    BoundKind.EF_MAIN: lower_bound_ef,
    BoundKind.EF_FINITE_SIGMA: lower_bound_ef_finite_sigma,
    BoundKind.EF_GAUSSIAN: lower_bound_ef_gaussian,
}


def advantage_ratio(q: BoundQuery, r_eff: float, ef_variant: BoundKind = BoundKind.EF_FINITE_SIGMA) -> float:
    """log10(N_lower / N_upper); NaN when the chosen lower bound is invalid."""
    lower = _EF_VARIANTS[BoundKind(ef_variant)](q)
    upper = upper_bound_ea(q, r_eff)
    if not lower.valid:
        return math.nan
    return lower.log10_N - upper.log10_N


def gaussian_tail(n: int, kappa: float) -> float:
    """Pr(|gamma|^2 > kappa n) under the hidden-peak prior: Q(n, n/0.99).

    With 2 sigma_gamma^2 = 0.99 kappa and cutoff R^2 = kappa n the kappa
    dependence cancels exactly; kappa is accepted for interface symmetry.
    """
    if not (kappa > 0):
        raise ValueError("kappa must be > 0")
    return math.exp(log_reg_upper_gamma(int(n), n / 0.99))


@dataclass(frozen=True)
class FidelityBoundResult:
    mc_estimate: float
    mc_std_error: float
    closed_form: float
    condition_ok: bool


def fidelity_bound_saturation(
    n: int, sigma: float, sigma_gamma_sq: float, M: int, stream: RandomStream
) -> FidelityBoundResult:
    """Monte Carlo check of the coherent-state saturation of the fidelity bound.

    E_gamma[e^{-2|gamma|^2/(1+2 sigma^2)}] over gamma ~ N(0, sigma_gamma^2 per
    quadrature) against ((1+2 sigma^2)/(1+2 sigma^2+4 sigma_gamma^2))^n.
    condition_ok reports the bound's premise
    sigma^2 <= max{1/2 - 2 s_g^2, s_g^2 (sqrt(1 + 1/(4 s_g^4)) - 1)}.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    sg2 = float(sigma_gamma_sq)
    if sg2 <= 0:
        raise ValueError("sigma_gamma_sq must be > 0")
    s2 = float(sigma) ** 2
    condition_ok = s2 <= max(0.5 - 2.0 * sg2, sg2 * (math.sqrt(1.0 + 1.0 / (4.0 * sg2 * sg2)) - 1.0))
    closed = ((1.0 + 2.0 * s2) / (1.0 + 2.0 * s2 + 4.0 * sg2)) ** n
    rng = stream.generator()
    coeff = 2.0 / (1.0 + 2.0 * s2)
    total = 0.0
    total_sq = 0.0
    remaining = int(M)
    while remaining:
        m = min(remaining, 131072)
        gamma_sq = np.sum(rng.standard_normal((m, 2 * int(n))) ** 2, axis=1) * sg2
        vals = np.exp(-coeff * gamma_sq)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        remaining -= m
    mean = total / M
    var = max(total_sq / M - mean * mean, 0.0)
    return FidelityBoundResult(
        mc_estimate=mean,
        mc_std_error=math.sqrt(var / M),
        closed_form=closed,
        condition_ok=condition_ok,
    )
