"""Pair-distance statistics of lattice point sets in n-balls.

Analytic distribution of the normalized distance between two uniform points
of an n-ball (`theory`, built on `specfun`), lattice/primitive point
enumeration with equidistribution checks (`pointsets`), empirical histograms
and goodness of fit (`empirical`), Monte Carlo cross-checks (`oracle`), and a
CLI tying them together (`cli`).
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    ConvergenceError,
    DomainError,
    PairCorrError,
    UnsupportedDimensionError,
)
from .specfun import BetaParams, beta, inc_beta, log_gamma, reg_inc_beta
from .theory import (
    DistributionSpec,
    EvalMode,
    Lambda,
    RationalPolynomial,
    cdf,
    mode,
    pdf,
    pdf_closed_form,
    pdf_polynomial_odd,
    region_volume,
    unit_ball_volume,
)
from .pointsets import (
    LatticePointSet,
    WedgeSpec,
    cap_measure,
    count,
    iter_points,
    points_array,
    radial_check,
    wedge_check,
)
from .empirical import (
    GofReport,
    PairHistogram,
    exact_histogram,
    ks_compare,
    pair_count_in_region,
    sampled_histogram,
)
from .oracle import (
    McEstimate,
    RegionSpec,
    analytic_cap_volume,
    mc_cap_measure,
    mc_cap_volume,
    mc_region_volume,
)

__all__ = [
    "__version__",
    "PairCorrError",
    "DomainError",
    "UnsupportedDimensionError",
    "BudgetExceededError",
    "ConvergenceError",
    "BetaParams",
    "log_gamma",
    "beta",
    "inc_beta",
    "reg_inc_beta",
    "DistributionSpec",
    "EvalMode",
    "Lambda",
    "RationalPolynomial",
    "region_volume",
    "cdf",
    "pdf",
    "pdf_closed_form",
    "pdf_polynomial_odd",
    "mode",
    "unit_ball_volume",
    "LatticePointSet",
    "WedgeSpec",
    "iter_points",
    "points_array",
    "count",
    "radial_check",
    "cap_measure",
    "wedge_check",
    "PairHistogram",
    "GofReport",
    "exact_histogram",
    "sampled_histogram",
    "ks_compare",
    "pair_count_in_region",
    "RegionSpec",
    "McEstimate",
    "mc_region_volume",
    "mc_cap_volume",
    "mc_cap_measure",
    "analytic_cap_volume",
]
