"""Outage analysis for a relay-assisted decentralized wireless network."""

from relaymix._core import (  # noqa: F401
    ActivationAnalysis,
    ActivationRule,
    BoundResult,
    ConfigParseError,
    CoincidentPoints,
    DerivedScalars,
    Error,
    ExactOutageOptions,
    ExactOutageResult,
    HypothesisViolated,
    IntegrationBudgetExceeded,
    JointLtResult,
    LtOptions,
    MaxIterations,
    McCounts,
    McOptions,
    McResult,
    McScheme,
    NetworkParams,
    Phi0Result,
    QuadratureNonConvergence,
    RateScheme,
    RootNotBracketed,
    SigmaResult,
    TargetUnreachable,
    ThresholdFieldRule,
    ThresholdSearchResult,
    UnknownFigure,
    UnsupportedCorrelation,
    ValidationError,
    Vec2,
    __version__,
    activation_decision,
    derive_scalars,
    estimate_op,
    estimate_op_curve,
    expected_distance_bound,
    expected_relay_dest_distance,
    gamma_factor,
    lambda_in_of_sigma,
    lt_interference_closed,
    lt_interference_joint,
    max_rate_for_op,
    nuttall_q20,
    op_dt,
    op_gain_ratio,
    op_mix_exact,
    op_mix_upper_bound,
    optimize_phi0,
    optimize_threshold,
    require_valid,
    sigma_c,
    sigma_in_of,
    sigma_t,
    threshold_from_rate,
)
