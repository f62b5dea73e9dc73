"""Exploitation/exploration analysis of elitist (1+1) EAs under Gaussian
mutation: closed-form success probabilities and one-step improvement rates,
their dimension-scaling bounds, and seeded Monte-Carlo cross-validation."""

__version__ = "0.1.0"

from .bounds import (
    BoundKind,
    BoundValue,
    ScalingFit,
    fit_decay_base,
    ir_cht_1d,
    ir_cht_ep_bounds,
    ir_sph_1d,
    ir_sph_ep_bounds,
    ir_sph_rus,
    optimal_sigma_cht_1d,
    p_cht_1d,
    p_cht_ep_bounds,
    p_sph_1d,
    p_sph_ep_bounds,
    p_sph_rus,
    rus_cht_coordinate_feasible,
)
from .core import Algorithm, SearchState, StepRecord, ep_step, initial_state, run, rus_step
from .errors import (
    AccuracyError,
    DomainError,
    Ea1p1Error,
    EvaluationError,
    FitRangeError,
    InconsistentStateError,
    InfeasiblePointError,
    UnsupportedProblemError,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    estimate_improvement_rate,
    estimate_success_probability,
    estimate_transition_mix,
)
from .numerics import (
    ArgmaxResult,
    QuadratureSpec,
    gaussian_cdf,
    integrate,
    maximize_1d,
    moment_integrals,
    psi,
)
from .problems import (
    ProblemKind,
    ProblemSpec,
    RegionLabel,
    TransitionKind,
    classify_point,
    classify_transition,
    evaluate,
    promising_region_radius2,
)
from .sampler import Placement, PlacementKind, RngStream, gaussian, place
