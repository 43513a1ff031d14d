"""Desk-scale toolkit for learning bosonic random displacement channels.

Samples measurement outcomes of entangled-probe and entanglement-free
schemes, builds unbiased characteristic-function estimators, and evaluates
the sample-complexity bounds and noise envelopes governing the
entanglement-enabled advantage.
"""

from .bounds import (
    BoundKind,
    BoundQuery,
    BoundResult,
    FidelityBoundResult,
    advantage_ratio,
    gaussian_tail,
    fidelity_bound_saturation,
    lower_bound_ef,
    lower_bound_ef_finite_sigma,
    lower_bound_ef_gaussian,
    upper_bound_ea,
)
from .channels import (
    ChannelSpec,
    ChannelValidationError,
    DisplacementSample,
    depolarizing,
    eval_lambda,
    eval_p,
    five_peak_example,
    sample_displacement,
    three_peak,
)
from .estimation import (
    EstimateResult,
    empirical_failure_rate,
    estimate_lambda,
    estimate_lambda_batch,
    hoeffding_N,
)
from .game import GameConfig, GameSummary, play_round, run_game
from .measurement import (
    OutcomeSamples,
    SchemeConfig,
    crosstalk_sample_transform,
    eval_p_meas,
    load_outcomes,
    sample_outcomes,
    save_outcomes,
)
from .noise import (
    NoiseEnvelope,
    SingularCrosstalkError,
    crosstalk_envelope,
    g_tmsv,
    phase_diffusion_g_sq,
    r_eff,
    sample_overhead,
)
from .numerics import (
    DimensionMismatchError,
    RandomStream,
    fourier_oracle_1mode,
    gaussian_complex,
    log_reg_upper_gamma,
    phase_kernel,
)

__version__ = "0.1.0"
