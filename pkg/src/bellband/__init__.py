"""Numerical toolkit for CHSH constraints on singlet correlations and the
regularity of the one unknown correlation on the positive angle cube."""

__version__ = "0.1.0"

from .band import Interval, LpResult, band_map, feasible_band, feasible_distribution, lp_band
from .chsh import (
    BooleResult,
    CorrelationVector,
    boole_check,
    chsh_value,
    correlations_from_angles,
    polytope_member,
)
from .core import (
    AngleQuadruplet,
    AngleTriple,
    JointDistribution2,
    as_outcomes,
    empirical_correlation,
    reduce_angles,
    singlet_joint,
    twisted_malus,
    wrap_angle,
)
from .errors import (
    BellbandError,
    DomainError,
    GridFormatError,
    InfeasibleError,
    ShapeError,
)
from .f4 import (
    AnalysisReport,
    F4Candidate,
    QuadraticFit,
    ReportTolerances,
    Violation,
    axis_derivative_check,
    builtins,
    contradiction_report,
    direction_quotients,
    gradient_at_origin,
    inequality_scan,
    jump_measure,
    quadratic_fit,
    second_quotient,
)
from .sampling import (
    JointDistribution4,
    OctetSequences,
    sample_lhv_pairs,
    sample_octet,
    sample_singlet_pairs,
)

__all__ = [
    "__version__",
    "AngleQuadruplet",
    "AngleTriple",
    "AnalysisReport",
    "BellbandError",
    "BooleResult",
    "CorrelationVector",
    "DomainError",
    "F4Candidate",
    "GridFormatError",
    "InfeasibleError",
    "Interval",
    "JointDistribution2",
    "JointDistribution4",
    "LpResult",
    "OctetSequences",
    "QuadraticFit",
    "ReportTolerances",
    "ShapeError",
    "Violation",
    "as_outcomes",
    "axis_derivative_check",
    "band_map",
    "boole_check",
    "builtins",
    "chsh_value",
    "contradiction_report",
    "correlations_from_angles",
    "direction_quotients",
    "empirical_correlation",
    "feasible_band",
    "feasible_distribution",
    "gradient_at_origin",
    "inequality_scan",
    "jump_measure",
    "lp_band",
    "polytope_member",
    "quadratic_fit",
    "reduce_angles",
    "sample_lhv_pairs",
    "sample_octet",
    "sample_singlet_pairs",
    "second_quotient",
    "singlet_joint",
    "twisted_malus",
    "wrap_angle",
]
