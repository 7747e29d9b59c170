"""Coefficient selection for compute-and-forward relaying over Gaussian
and Eisenstein integer lattices."""

from .errors import (
    BudgetExceededError,
    CfselectError,
    ConfigError,
    InternalError,
    InvalidInputError,
    TableMissError,
    TableParseError,
)
from .flops import FlopCounter
from .geometry import (
    AlphaSector,
    ConvexCell,
    HalfPlane,
    Line2D,
    cell_of,
    cells_in_sector,
    largest_inscribed_axis_square,
    line_intersection,
    region_of_vector,
)
from .kernels import backend
from .rate import (
    Channel,
    CoeffVector,
    RateResult,
    effective_noise,
    gram_matrix,
    mmse_alpha,
    rate_of_alpha,
    rate_of_pair,
)
from .rings import (
    RingElement,
    RingId,
    RingSpec,
    quantize,
    quantize_full,
    quantize_vector,
    spec_of,
    units,
)
from .selectors import (
    CandidateSet,
    SelectionResult,
    build_candidates,
    exhaustive_select,
    linear_select,
    lll_select,
    midpoint_select,
    vertex_select,
)
from .thresholds import (
    GammaSample,
    ThresholdBin,
    ThresholdTable,
    build_table,
    gamma_opt_of,
    lookup,
    parse,
    serialize,
)
from .bench import (
    ExperimentConfig,
    ResultRow,
    gen_channel,
    run_complexity_experiment,
    run_rate_experiment,
    scaling_check,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaSector",
    "BudgetExceededError",
    "CandidateSet",
    "CfselectError",
    "Channel",
    "CoeffVector",
    "ConfigError",
    "ConvexCell",
    "ExperimentConfig",
    "FlopCounter",
    "GammaSample",
    "HalfPlane",
    "InternalError",
    "InvalidInputError",
    "Line2D",
    "RateResult",
    "ResultRow",
    "RingElement",
    "RingId",
    "RingSpec",
    "SelectionResult",
    "TableMissError",
    "TableParseError",
    "ThresholdBin",
    "ThresholdTable",
    "backend",
    "build_candidates",
    "build_table",
    "cell_of",
    "cells_in_sector",
    "effective_noise",
    "exhaustive_select",
    "gamma_opt_of",
    "gen_channel",
    "gram_matrix",
    "largest_inscribed_axis_square",
    "line_intersection",
    "linear_select",
    "lll_select",
    "lookup",
    "midpoint_select",
    "mmse_alpha",
    "parse",
    "quantize",
    "quantize_full",
    "quantize_vector",
    "rate_of_alpha",
    "rate_of_pair",
    "region_of_vector",
    "run_complexity_experiment",
    "run_rate_experiment",
    "scaling_check",
    "serialize",
    "spec_of",
    "units",
    "vertex_select",
]
