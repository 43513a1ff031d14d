"""Partially-revealed hypothesis-testing game on the 3-peak channel family.

Alice hides either the depolarizing channel or a signal channel with a
Gaussian-random peak location gamma; Bob measures with the entangled-probe
scheme, and only after his samples are fixed is gamma revealed.  Bob then
thresholds the imaginary part of his estimate at eps = 0.98 eps0: the three
candidate values of Im lambda(gamma) are separated by at least 2 eps
whenever |gamma|^2 > 2 sigma^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSpec, depolarizing, three_peak
from .estimation import estimate_lambda, hoeffding_N
from .measurement import SchemeConfig, sample_outcomes
from .numerics import RandomStream

__all__ = ["GameConfig", "RoundOutcome", "GameSummary", "play_round", "run_game"]

_WILSON_Z = 1.959963984540054  # 95% two-sided


@dataclass(frozen=True)
class GameConfig:
    """Channel/task parameters plus Bob's per-round sample budget."""

    n: int
    kappa: float
    sigma: float
    eps0: float
    scheme: SchemeConfig
    N: int
    rounds: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not (self.kappa > 0):
            raise ValueError("kappa must be > 0")
        if not (self.sigma > 0):
            raise ValueError("sigma must be > 0")
        if not (0 <= self.eps0 <= 0.25):
            raise ValueError("eps0 must lie in [0, 0.25]")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ValueError("rounds must be a positive integer")

    @property
    def eps(self) -> float:
        return 0.98 * self.eps0

    @property
    def sigma_gamma_sq(self) -> float:
        return 0.99 * self.kappa / 2.0

    @classmethod
    def with_hoeffding_n(
        cls,
        n: int,
        kappa: float,
        sigma: float,
        eps0: float,
        scheme: SchemeConfig,
        rounds: int,
        delta: float = 1.0 / 3.0,
    ) -> "GameConfig":
        """Size N for the worst case |beta|^2 = kappa n (gamma is revealed only afterwards)."""
        eps = 0.98 * eps0
        if eps <= 0:
            raise ValueError("hoeffding sizing requires eps0 > 0")
        n_samples = hoeffding_N(eps, delta, scheme.r_eff, kappa * n)
        return cls(n=n, kappa=kappa, sigma=sigma, eps0=eps0, scheme=scheme, N=n_samples, rounds=rounds)


@dataclass(frozen=True)
class RoundOutcome:
    truth: str
    guess: str
    in_range: bool


@dataclass(frozen=True)
class GameSummary:
    rounds: int
    N: int
    success_rate: float
    ci_low: float
    ci_high: float
    in_range_fraction: float

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "N": self.N,
            "success_rate": self.success_rate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "in_range_fraction": self.in_range_fraction,
        }


def _signal_channel(cfg: GameConfig, gamma: np.ndarray) -> ChannelSpec:
    if cfg.eps0 == 0.0:
        return depolarizing(cfg.n, cfg.sigma)  # indistinguishable control
    return three_peak(cfg.n, gamma, cfg.eps0, cfg.sigma)


def play_round(cfg: GameConfig, stream: RandomStream) -> RoundOutcome:
    """One round: Alice samples (hypothesis, s, gamma); Bob samples, then decides.

    Bob guesses "dep" when |Im lambda_hat(gamma)| < eps, "signal" otherwise,
    and guesses uniformly when |gamma|^2 is outside (2 sigma^2, kappa n].
    """
    alice = stream.substream(0).generator()
    draws = alice.standard_normal((cfg.n, 2)) * math.sqrt(cfg.sigma_gamma_sq)
    gamma = draws[:, 0] + 1j * draws[:, 1]
    truth = "dep" if alice.random() < 0.5 else "signal"
    sign = 1.0 if alice.random() < 0.5 else -1.0

    channel = depolarizing(cfg.n, cfg.sigma) if truth == "dep" else _signal_channel(cfg, sign * gamma)
    samples = sample_outcomes(channel, cfg.scheme, cfg.N, stream.substream(1))
    est = estimate_lambda(samples, gamma)

    gamma_sq = float(np.sum(draws**2))
    in_range = 2.0 * cfg.sigma**2 < gamma_sq <= cfg.kappa * cfg.n
    if in_range:
        guess = "dep" if abs(est.lambda_hat.imag) < cfg.eps else "signal"
    else:
        guess = "dep" if stream.substream(2).generator().random() < 0.5 else "signal"
    return RoundOutcome(truth=truth, guess=guess, in_range=in_range)


def _wilson(successes: int, total: int) -> tuple[float, float]:
    z = _WILSON_Z
    p = successes / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + z * z / (4.0 * total * total)) / denom
    return center - half, center + half


def run_game(cfg: GameConfig, stream: RandomStream, rounds: int | None = None) -> GameSummary:
    """Play independent rounds (round r on stream.substream(r)); Wilson 95% CI."""
    total = int(rounds) if rounds is not None else cfg.rounds
    if total < 1:
        raise ValueError("rounds must be >= 1")
    outcomes = [play_round(cfg, stream.substream(r)) for r in range(total)]
    return summarize_rounds(cfg, outcomes)


def summarize_rounds(cfg: GameConfig, outcomes: list[RoundOutcome]) -> GameSummary:
    total = len(outcomes)
    successes = sum(1 for o in outcomes if o.truth == o.guess)
    in_range = sum(1 for o in outcomes if o.in_range)
    lo, hi = _wilson(successes, total)
    return GameSummary(
        rounds=total,
        N=cfg.N,
        success_rate=successes / total,
        ci_low=lo,
        ci_high=hi,
        in_range_fraction=in_range / total,
    )
