"""Unbiased characteristic-function estimators and Hoeffding sample planning."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSpec, eval_lambda
from .measurement import OutcomeSamples, SchemeConfig, sample_outcomes
from .numerics import RandomStream, as_complex_vector

__all__ = [
    "EstimateResult",
    "estimate_lambda",
    "estimate_lambda_batch",
    "hoeffding_N",
    "empirical_failure_rate",
    "export_estimates_csv",
]


@dataclass(frozen=True)
class EstimateResult:
    """lambda-hat at one beta with its sample standard error.

    envelope = e^{e^{-2 r_eff} |beta|^2}: the estimator is the envelope times
    a mean of unit-modulus terms, so |lambda_hat| <= envelope and
    std_error <= envelope/sqrt(N).
    """

    beta: np.ndarray
    lambda_hat: complex
    std_error: float
    N: int
    envelope: float


def _kernel_terms(samples: OutcomeSamples, beta: np.ndarray) -> np.ndarray:
    # e^{(zeta†beta - beta†zeta)/sqrt(T_a)} = e^{2i Im(eta†beta)}, eta = zeta/sqrt(T_a)
    eta = samples.zeta / math.sqrt(samples.scheme.T_a)
    return np.exp(-2j * np.imag(eta @ np.conj(beta)))


def estimate_lambda(samples: OutcomeSamples, beta) -> EstimateResult:
    """Envelope-rescaled empirical Fourier mean over the outcome batch.

    lambda_hat = e^{e^{-2 r_eff}|beta|^2} (1/N) sum_i e^{(zeta_i†beta - beta†zeta_i)/sqrt(T_a)}.
    The standard error combines the real/imaginary sample deviations of the
    unit-modulus terms in quadrature (population normalization).
    """
    b = as_complex_vector(beta, n=samples.n)
    if samples.N < 1:
        raise ValueError("empty sample batch")
    envelope = math.exp(samples.scheme.noise_weight * float(np.sum(b.real**2 + b.imag**2)))
    terms = _kernel_terms(samples, b)
    mean = complex(np.mean(terms))
    var = float(np.mean(terms.real**2)) - mean.real**2 + float(np.mean(terms.imag**2)) - mean.imag**2
    se = envelope * math.sqrt(max(var, 0.0) / samples.N)
    return EstimateResult(beta=b, lambda_hat=envelope * mean, std_error=se, N=samples.N, envelope=envelope)


def estimate_lambda_batch(samples: OutcomeSamples, betas) -> list[EstimateResult]:
    """Elementwise :func:`estimate_lambda` over one pass of the sample batch."""
    return [estimate_lambda(samples, b) for b in betas]


def hoeffding_N(eps: float, delta: float, r_eff: float, beta_norm_sq: float) -> int:
    """Samples sufficient for |lambda_hat - lambda| <= eps with probability 1 - delta.

    ceil(8 e^{2 e^{-2 r_eff} |beta|^2} eps^{-2} ln(4/delta)); the constant 8
    and ln(4/delta) come from the eps/2-per-part union bound over the real
    and imaginary parts.
    """
    if not (eps > 0):
        raise ValueError("eps must be > 0")
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    if beta_norm_sq < 0:
        raise ValueError("beta_norm_sq must be >= 0")
    weight = math.exp(-2.0 * r_eff) if not math.isinf(r_eff) else 0.0
    return math.ceil(8.0 * math.exp(2.0 * weight * beta_norm_sq) / (eps * eps) * math.log(4.0 / delta))


def empirical_failure_rate(
    spec: ChannelSpec,
    cfg: SchemeConfig,
    beta,
    eps: float,
    N: int,
    trials: int,
    stream: RandomStream,
) -> float:
    """Fraction of independent N-sample estimates with |lambda_hat - lambda| > eps."""
    if trials < 100:
        raise ValueError("trials must be >= 100")
    b = as_complex_vector(beta, n=spec.n)
    target = complex(eval_lambda(spec, b))
    failures = 0
    for trial in range(int(trials)):
        samples = sample_outcomes(spec, cfg, N, stream.substream(trial))
        est = estimate_lambda(samples, b)
        if abs(est.lambda_hat - target) > eps:
            failures += 1
    return failures / float(trials)


def export_estimates_csv(results: list[EstimateResult], path, header_lines: list[str] | None = None):
    """CSV export: beta_re_*, beta_im_*, lambda_re, lambda_im, se, N, envelope."""
    if not results:
        raise ValueError("nothing to export")
    n = results[0].beta.shape[0]
    cols = [f"beta_re_{j}" for j in range(n)] + [f"beta_im_{j}" for j in range(n)]
    cols += ["lambda_re", "lambda_im", "se", "N", "envelope"]
    lines = []
    if header_lines:
        lines.extend(f"# {h}" for h in header_lines)
    lines.append(",".join(cols))
    for r in results:
        row = [str(float(v)) for v in r.beta.real] + [str(float(v)) for v in r.beta.imag]
        row += [
            str(float(r.lambda_hat.real)),
            str(float(r.lambda_hat.imag)),
            str(float(r.std_error)),
            str(int(r.N)),
            str(float(r.envelope)),
        ]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
