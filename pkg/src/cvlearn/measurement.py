"""Measurement-outcome simulation for the channel-learning schemes.

The Bell measurement is never simulated in Fock space.  The exact Gaussian
operational model is used instead: an outcome is zeta = sqrt(T_a) (alpha + w)
with alpha drawn from the channel and w complex Gaussian with per-quadrature
variance e^{-2 r_eff}/2, which reproduces the measured-outcome distribution
of the entangled probe (and, at r = 0, of vacuum + heterodyne) exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import noise
from .channels import ChannelSpec, ChannelValidationError, sample_displacements_batch, eval_p
from .numerics import RandomStream

__all__ = [
    "SchemeConfig",
    "OutcomeSamples",
    "sample_outcomes",
    "eval_p_meas",
    "crosstalk_sample_transform",
    "save_outcomes",
    "load_outcomes",
]

_DEFAULT_CHUNK = 65536
_FILE_FORMAT = "cvlearn-outcomes"
_FILE_VERSION = 1


@dataclass(frozen=True)
class SchemeConfig:
    """Measurement-scheme parameters (input squeezing, loss rates, measurement squeezing)."""

    r: float
    T_b: float = 1.0
    T_a: float = 1.0
    s: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "T_b", float(self.T_b))
        object.__setattr__(self, "T_a", float(self.T_a))
        object.__setattr__(self, "s", float(self.s))
        noise.excess_noise_weight(self.r, self.T_b, self.T_a, self.s)  # validates domains

    @classmethod
    def ideal(cls, r: float) -> "SchemeConfig":
        return cls(r=r)

    @classmethod
    def vacuum_heterodyne(cls) -> "SchemeConfig":
        """Entanglement-free preset: identical to the entangled scheme at r = 0."""
        return cls(r=0.0)

    @property
    def noise_weight(self) -> float:
        """e^{-2 r_eff}; the per-quadrature outcome noise variance is half this."""
        return noise.excess_noise_weight(self.r, self.T_b, self.T_a, self.s)

    @property
    def r_eff(self) -> float:
        return noise.r_eff(self.r, self.T_b, self.T_a, self.s)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "T_b": self.T_b,
            "T_a": self.T_a,
            "s": None if math.isinf(self.s) else self.s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SchemeConfig":
        s = data.get("s", None)
        if s is None or s == "inf":
            s = math.inf
        return cls(r=data["r"], T_b=data.get("T_b", 1.0), T_a=data.get("T_a", 1.0), s=s)


@dataclass(frozen=True, eq=False)
class OutcomeSamples:
    """A seeded batch of measurement outcomes with provenance metadata."""

    scheme: SchemeConfig
    channel_digest: str
    zeta: np.ndarray
    master_seed: int
    substream_index: int
    chunk_size: int

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=np.complex128)
        if z.ndim != 2 or z.shape[0] < 1:
            raise ValueError("zeta must have shape (N, n) with N >= 1")
        if not np.all(np.isfinite(z)):
            raise ValueError("outcomes contain NaN or Inf")
        z.setflags(write=False)
        object.__setattr__(self, "zeta", z)

    @property
    def N(self) -> int:
        return self.zeta.shape[0]

    @property
    def n(self) -> int:
        return self.zeta.shape[1]


def sample_outcomes(
    spec: ChannelSpec,
    cfg: SchemeConfig,
    N: int,
    stream: RandomStream,
    chunk_size: int = _DEFAULT_CHUNK,
) -> OutcomeSamples:
    """Draw N outcomes zeta = sqrt(T_a) (alpha + w).

    Work is partitioned into fixed-size chunks, chunk c drawing from
    stream.substream(c); the result is therefore identical under any
    parallel execution of the chunks, for a fixed chunk_size.
    """
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    N = int(N)
    w_var = cfg.noise_weight / 2.0
    sqrt_ta = math.sqrt(cfg.T_a)
    out = np.empty((N, spec.n), dtype=np.complex128)
    for chunk, start in enumerate(range(0, N, chunk_size)):
        m = min(chunk_size, N - start)
        rng = stream.substream(chunk).generator()
        alpha = sample_displacements_batch(spec, m, rng)
        if w_var > 0.0:
            draws = rng.standard_normal((m, spec.n, 2)) * math.sqrt(w_var)
            alpha = alpha + (draws[..., 0] + 1j * draws[..., 1])
        out[start : start + m] = sqrt_ta * alpha
    return OutcomeSamples(
        scheme=cfg,
        channel_digest=spec.digest(),
        zeta=out,
        master_seed=stream.master_seed,
        substream_index=stream.substream_index,
        chunk_size=chunk_size,
    )


def measured_mixture(spec: ChannelSpec, cfg: SchemeConfig) -> ChannelSpec:
    """Gaussian mixture of the rescaled outcome eta = zeta / sqrt(T_a).

    Multiplying each peak by the measurement envelope e^{-t |beta|^2}
    (t = e^{-2 r_eff}) is again a Gaussian peak: width sigma/sqrt(1+2 sigma^2 t),
    center gamma/(1+2 sigma^2 t), amplitude c * e^{-t |gamma|^2/(1+2 sigma^2 t)}.
    """
    if not spec.samplable:
        raise ChannelValidationError("per-peak widths: measured density is unavailable")
    t = cfg.noise_weight
    if t == 0.0:
        return spec
    denom = 1.0 + 2.0 * spec.sigma**2 * t
    centers = spec.pair_centers / denom
    amps = spec.pair_weights * np.exp(
        -t * np.sum(spec.pair_centers.real**2 + spec.pair_centers.imag**2, axis=-1) / denom
    )
    return ChannelSpec(
        n=spec.n,
        sigma=spec.sigma / math.sqrt(denom),
        zero_weight=spec.zero_weight,
        pair_weights=amps,
        pair_centers=centers,
    )


def eval_p_meas(spec: ChannelSpec, cfg: SchemeConfig, zeta):
    """Closed-form outcome density of :func:`sample_outcomes` at zeta.

    Evaluates the envelope-transformed mixture at zeta/sqrt(T_a) with the
    T_a^{-n} Jacobian.  Accepts a single vector or an (m, n) batch.
    """
    mixture = measured_mixture(spec, cfg)
    eta = np.asarray(zeta, dtype=np.complex128) / math.sqrt(cfg.T_a)
    return eval_p(mixture, eta) / cfg.T_a**spec.n


def crosstalk_sample_transform(zeta, theta: float):
    """Outcome-coordinate change for the crosstalk-aware estimator.

    Re -> Re/(cos t - sin t), Im -> Im/(cos t + sin t); the identity at
    t = 0.  With this convention the standard estimator kernel applied to
    transformed outcomes, scaled by 1/g(beta^theta, beta, r), is unbiased
    for lambda(beta).  |theta| >= pi/4 is singular.
    """
    t = float(theta)
    if not abs(t) < math.pi / 4:
        raise noise.SingularCrosstalkError(f"|theta| must be < pi/4, got {t}")
    z = np.asarray(zeta, dtype=np.complex128)
    c, s = math.cos(t), math.sin(t)
    return z.real / (c - s) + 1j * (z.imag / (c + s))


# -- persistence ---------------------------------------------------------------


def save_outcomes(samples: OutcomeSamples, path):
    """Columnar outcome file: one JSON header line, then N rows of 2n LE float64."""
    header = {
        "format": _FILE_FORMAT,
        "version": _FILE_VERSION,
        "n": samples.n,
        "N": samples.N,
        "scheme": samples.scheme.to_dict(),
        "channel_digest": samples.channel_digest,
        "master_seed": samples.master_seed,
        "substream_index": samples.substream_index,
        "chunk_size": samples.chunk_size,
    }
    rows = np.empty((samples.N, 2 * samples.n), dtype="<f8")
    rows[:, 0::2] = samples.zeta.real
    rows[:, 1::2] = samples.zeta.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, separators=(",", ":")).encode())
        fh.write(b"\n")
        fh.write(rows.tobytes())


def load_outcomes(path) -> OutcomeSamples:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        payload = fh.read()
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"corrupt outcome file header: {exc}") from exc
    if header.get("format") != _FILE_FORMAT or header.get("version") != _FILE_VERSION:
        raise ValueError(f"unsupported outcome file format: {header.get('format')!r}")
    n, count = int(header["n"]), int(header["N"])
    expected = count * 2 * n * 8
    if len(payload) != expected:
        raise ValueError(f"outcome payload has {len(payload)} bytes, expected {expected}")
    rows = np.frombuffer(payload, dtype="<f8").reshape(count, 2 * n)
    zeta = rows[:, 0::2] + 1j * rows[:, 1::2]
    return OutcomeSamples(
        scheme=SchemeConfig.from_dict(header["scheme"]),
        channel_digest=header["channel_digest"],
        zeta=zeta,
        master_seed=int(header["master_seed"]),
        substream_index=int(header["substream_index"]),
        chunk_size=int(header["chunk_size"]),
    )
