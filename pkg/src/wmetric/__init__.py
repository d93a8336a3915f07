"""Weighted distances, Bloch-type and Lipschitz-type norms, and numerical
checks of Hardy-Littlewood type inequalities on low-dimensional domains."""

from .curves import Curve, curve_integral, curve_length, segments_inside
from .domains import Domain, Weight
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateMajorantError,
    DomainViolationError,
    InvalidInputError,
    PreconditionError,
    ResolutionError,
    WMetricError,
)
from .estimators import (
    NormEstimate,
    bloch_norm_estimate,
    dstar_estimate,
    dstar_values,
    holder_norm_estimate,
    ro_constant_estimate,
)
from .geodesics import (
    ConditionReport,
    GeodesicResult,
    check_extension_condition,
    refine_sequence,
    topology_equivalence_ratio,
    weighted_distance_upper,
)
from .harness import (
    TheoremReport,
    q_profile,
    verify_converse_strong,
    verify_forward,
    verify_image_curve_lemma,
    verify_unit_ball_corollary,
)
from .majorant import Majorant, check_condition_A, check_majorant_axioms
from .mappings import Mapping, affine, constant, identity, log_branch, monomial, power_alpha

__version__ = "0.1.0"
