"""Sibuya copulas from jump-driven default intensities.

Entities share a scaled Poisson jump process on top of their own
deterministic drifts; the resulting survival copula is evaluated exactly,
sampled reproducibly, and used to price first-to-default swaps.
"""
from .config import HierarchicalModel, load_model, model_from_dict, model_to_dict
from .dependence import (
    DependenceReport,
    LimitEstimate,
    dependence_report,
    extremal_dependence,
    extremal_dependence_enumerated,
    extremal_dependence_numeric,
    limit_estimate,
    plod_ratio,
    survival_copula_diagonal,
    tail_dependence_analytic,
    tail_dependence_numeric,
)
from .errors import ConfigurationError, DomainError, NotAvailableError, NumericError, SibuyaError
from .jumps import JumpModel, jump_from_dict
from .model import (
    ReducedParams,
    SibuyaModel,
    TriggerDependence,
    copula,
    copula_diagonal,
    hierarchical_copula,
    joint_survival,
    joint_survival_expsum,
    joint_survival_jointure,
    jointure,
    marginal_hazard,
    marginal_survival,
    marginal_survival_inverse,
    mixture_copula,
    reduced_params,
)
from .pricing import (
    PricingInputs,
    beta_exponent,
    ftd_fair_spread,
    ftd_legs,
    ftd_present_value,
    level_curve,
    mc_break_even_spread,
)
from .rates import ConstantRate, LinearRate, PiecewiseConstantRate, RateFunction, rate_from_dict
from .sampling import (
    SampleBatch,
    empirical_copula,
    sample,
    sample_hierarchical,
    sample_row,
    simultaneous_default_rate,
)

__version__ = "0.1.0"
