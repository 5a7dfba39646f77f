"""Jensen-gap bounds, refinements and reference oracles."""

from .applications import (
    CapacityReport, DivergenceReport, EntropyReport, capacity_expansion_coefficients,
    entropy_bounds, high_snr_correction, rayleigh_capacity, reverse_pinsker,
)
from .bounds import (
    BoundReport, ChebysevResult, MercerResult, TangencyResult, chebysev_gruss,
    covariance_bound, fourth_order, green_gap, green_gruss_refinement, green_kernel,
    gruss_second_order, jensen_bound, jensen_mercer, mgf_bounds, optimize_tangency,
    partitioned_sandwich, signed_refinement, tangent_bound, variance_sandwich,
)
from .distributions import (
    Beta, CellStats, Distribution, Empirical, Exponential, FiniteDiscrete, MomentSummary,
    Normal, PartitionSpec, SupportInterval, Truncated, Uniform, cell_stats, moments,
    parse_distribution, read_samples,
)
from .errors import (
    DomainMismatch, JensenGapError, NoDensity, NonConvex, NonFiniteMoment, QuadratureFailure,
    SpecParseError, SupportMismatch, ZeroProbability,
)
from .functions import (
    HessianRange, PhiModel, builtin_catalog, deriv_range, deriv_sup_norm, exp_scaled,
    hessian_range, log1p_snr, neg_exp, neg_log, parse_phi, reciprocal, square, xlogx,
)
from .oracle import GapOracle, expect, expect_mc, integral_remainder_gap

__version__ = "0.1.0"
