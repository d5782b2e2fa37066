"""Noncommutative functions on matrix upper half-planes.

Block-matrix difference operators, contraction margins for half-plane
self-maps, hyperbolic balls and numerical boundary (Julia-Carathéodory)
analysis, with seeded verification suites.
"""

from .boundary import (BoundaryProbe, ConvergenceReport, Schedule, Status, c_block_consistency,
                       delta_limit_boundedness, estimate_boundary_derivative,
                       estimate_boundary_value, estimate_c, julia_inequality_check,
                       re_vanishing_check, scalar_jwc, implication_chain)
from .errors import (ConditioningError, DimensionError, DomainError, NCJuliaError, NumericError,
                     PreconditionError)
from .hermitian import (HalfPlanePoint, PosdefCertificate, block2_is_positive, herm_inv_sqrt,
                        herm_sqrt, imag_part, is_positive_definite, loewner_leq, min_eig, op_norm,
                        real_part)
from .hyperbolic import (BallDiagnostics, BallSpec, ball_diagnostics, ball_distance,
                         midpoint_convexity_check, sample_members)
from .ncfunction import (LoewnerFunction, Moebius, NCFunction, NevanlinnaPick, Polynomial,
                         delta2_f, delta_f, derivative, from_descriptor, identity, inversion)
from .realization import LoewnerRealization
from .schwarz_pick import (ContractionMargin, MarginForm, contraction_margin, order_margin,
                           second_order_margin)

__all__ = [
    "ball_diagnostics",
    "ball_distance",
    "BallDiagnostics",
    "BallSpec",
    "block2_is_positive",
    "BoundaryProbe",
    "c_block_consistency",
    "ConditioningError",
    "contraction_margin",
    "ContractionMargin",
    "ConvergenceReport",
    "delta2_f",
    "delta_f",
    "delta_limit_boundedness",
    "derivative",
    "DimensionError",
    "DomainError",
    "estimate_boundary_derivative",
    "estimate_boundary_value",
    "estimate_c",
    "from_descriptor",
    "HalfPlanePoint",
    "herm_inv_sqrt",
    "herm_sqrt",
    "identity",
    "imag_part",
    "implication_chain",
    "inversion",
    "is_positive_definite",
    "julia_inequality_check",
    "loewner_leq",
    "LoewnerFunction",
    "LoewnerRealization",
    "MarginForm",
    "midpoint_convexity_check",
    "min_eig",
    "Moebius",
    "NCFunction",
    "NCJuliaError",
    "NevanlinnaPick",
    "NumericError",
    "op_norm",
    "order_margin",
    "Polynomial",
    "PosdefCertificate",
    "PreconditionError",
    "re_vanishing_check",
    "real_part",
    "sample_members",
    "scalar_jwc",
    "Schedule",
    "second_order_margin",
    "Status",
]

__version__ = "0.1.0"
