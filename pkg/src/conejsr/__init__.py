"""Matrix families on polyhedral invariant cones.

Cone geometry, positivity classification, irreducibility certificates,
joint spectral radius bounds, extremal norm construction and regularity
experiments, plus a small CLI (``conejsr``).
"""

from . import errors
from .errors import (
    BadGrid,
    BadParams,
    BudgetExceeded,
    ConeJsrError,
    DegenerateBase,
    DimensionLimit,
    DimensionMismatch,
    FaceCapExceeded,
    FamilyReducible,
    Inconsistent,
    IndexOutOfRange,
    MethodUnavailable,
    NotCommuting,
    NotConePreserving,
    NotCrossPositive,
    NotFull,
    NotInterior,
    NotPointed,
    NotProjection,
    NotSimplicial,
    ParseError,
    PerturbationEscapes,
    PreconditionFailed,
    ToleranceConflict,
    ValidationError,
    ViolationFound,
)
from .cones import (
    Face,
    PointClass,
    PolyhedralCone,
    base_points,
    classify_point,
    compact_base,
    construct_cone,
    enumerate_faces,
    face_contains,
    general_cone,
    lattice_abs,
    lattice_max,
    order_compare,
    orthant,
    simplicial_cone,
    uniform_domination_delta,
)
from .irreducible import (
    IrreducibilityReport,
    boundary_eigenvector,
    convex_irreducible_witness,
    exp_irreducible,
    family_irreducible,
    invariant_faces,
    is_irreducible_single,
    real_eigenspaces,
)
from .jsr import (
    ConvexityReport,
    JsrBounds,
    JsrParams,
    continuous_refinement_table,
    convexity_checks,
    domination_lower_bound,
    jsr_bounds,
    spectral_radius,
)
from .maps import (
    MapClassification,
    Verdict,
    classify_map,
    clip_to_cone_preserving,
    is_cone_preserving,
    is_cross_positive,
    is_exp_K_positive,
    is_K_positive,
    matrix_exponential,
)
from .norms import (
    ABSOLUTE,
    MONOTONE,
    BaseNorm,
    BoundednessReport,
    NormApprox,
    ResidualReport,
    base_monotone_norm,
    boundedness_diagnostic,
    build_extremal_norm,
    eccentricity,
    extremality_residual,
    induced_matrix_norm,
    norm_positivity,
)
from .problem import ProblemSpec, emit_problem, parse_problem
from .regularity import (
    LipschitzReport,
    TrialRecord,
    hausdorff_distance,
    lipschitz_experiment,
)
from .semigroup import (
    MatrixFamily,
    ProductWord,
    ProjectionDiagnostic,
    continuous_family,
    continuous_slice,
    discrete_family,
    enumerate_products,
    evolve_jump,
    projection_product_diagnostic,
    validate_jump_family,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ConeJsrError",
    "BadGrid",
    "BadParams",
    "BudgetExceeded",
    "DegenerateBase",
    "DimensionLimit",
    "DimensionMismatch",
    "FaceCapExceeded",
    "FamilyReducible",
    "Inconsistent",
    "IndexOutOfRange",
    "MethodUnavailable",
    "NotCommuting",
    "NotConePreserving",
    "NotCrossPositive",
    "NotFull",
    "NotInterior",
    "NotPointed",
    "NotProjection",
    "NotSimplicial",
    "ParseError",
    "PerturbationEscapes",
    "PreconditionFailed",
    "ToleranceConflict",
    "ValidationError",
    "ViolationFound",
    "Face",
    "PointClass",
    "PolyhedralCone",
    "base_points",
    "classify_point",
    "compact_base",
    "construct_cone",
    "enumerate_faces",
    "face_contains",
    "general_cone",
    "lattice_abs",
    "lattice_max",
    "order_compare",
    "orthant",
    "simplicial_cone",
    "uniform_domination_delta",
    "IrreducibilityReport",
    "boundary_eigenvector",
    "convex_irreducible_witness",
    "exp_irreducible",
    "family_irreducible",
    "invariant_faces",
    "is_irreducible_single",
    "real_eigenspaces",
    "ConvexityReport",
    "JsrBounds",
    "JsrParams",
    "continuous_refinement_table",
    "convexity_checks",
    "domination_lower_bound",
    "jsr_bounds",
    "spectral_radius",
    "MapClassification",
    "Verdict",
    "classify_map",
    "clip_to_cone_preserving",
    "is_cone_preserving",
    "is_cross_positive",
    "is_exp_K_positive",
    "is_K_positive",
    "matrix_exponential",
    "ABSOLUTE",
    "MONOTONE",
    "BaseNorm",
    "BoundednessReport",
    "NormApprox",
    "ResidualReport",
    "base_monotone_norm",
    "boundedness_diagnostic",
    "build_extremal_norm",
    "eccentricity",
    "extremality_residual",
    "induced_matrix_norm",
    "norm_positivity",
    "ProblemSpec",
    "emit_problem",
    "parse_problem",
    "LipschitzReport",
    "TrialRecord",
    "hausdorff_distance",
    "lipschitz_experiment",
    "MatrixFamily",
    "ProductWord",
    "ProjectionDiagnostic",
    "continuous_family",
    "continuous_slice",
    "discrete_family",
    "enumerate_products",
    "evolve_jump",
    "projection_product_diagnostic",
    "validate_jump_family",
    "__version__",
]
