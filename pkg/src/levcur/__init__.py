"""Sublinear-cost randomized least squares and leverage-score-directed CUR
low-rank approximation, with alternating refinement and a benchmark CLI."""

from .linalg import (
    SvdFactors,
    TruncatedSvd,
    matrix_norms,
    pinv,
    principal_angle_dist,
    svd,
    thin_qr,
    truncate,
)
from .matio import load_matrix, save_matrix
from .random_matrices import (
    FactorGaussianSpec,
    NormBounds,
    factor_gaussian,
    gaussian,
    make_rng,
    norm_bounds,
    perturb,
)
from .sketch import SketchOp, apply_sketch, build_sketch, densify
from .sampling import (
    LeverageScores,
    SampleDist,
    SamplingPlan,
    apply_plan,
    make_dist,
    sample_exact,
    sample_expected,
    scores_from_orthogonal,
    scores_of_lra,
    scores_of_matrix,
    uniform_dist,
)
from .lstsq import LlspInstance, LlspResult, dual_llsp_check, sketch_solve, solve_exact, solve_generalized
from .cur import CurFactors, canonical_cur, cur_error, cur_leverage, nucleus_simple
from .refine import (
    ContractionParams,
    RefinementState,
    contraction_params,
    init_factor,
    refine,
    refine_step,
)
from .estimators import AlternatingRefinement, CurDecomposition, SketchedLeastSquares

__version__ = "0.1.0"

__all__ = [
    "AlternatingRefinement",
    "ContractionParams",
    "CurDecomposition",
    "CurFactors",
    "FactorGaussianSpec",
    "LeverageScores",
    "LlspInstance",
    "LlspResult",
    "NormBounds",
    "RefinementState",
    "SampleDist",
    "SamplingPlan",
    "SketchOp",
    "SketchedLeastSquares",
    "SvdFactors",
    "TruncatedSvd",
    "apply_plan",
    "apply_sketch",
    "build_sketch",
    "canonical_cur",
    "contraction_params",
    "cur_error",
    "cur_leverage",
    "densify",
    "dual_llsp_check",
    "factor_gaussian",
    "gaussian",
    "init_factor",
    "load_matrix",
    "make_dist",
    "make_rng",
    "matrix_norms",
    "norm_bounds",
    "nucleus_simple",
    "perturb",
    "pinv",
    "principal_angle_dist",
    "refine",
    "refine_step",
    "sample_exact",
    "sample_expected",
    "save_matrix",
    "scores_from_orthogonal",
    "scores_of_lra",
    "scores_of_matrix",
    "sketch_solve",
    "solve_exact",
    "solve_generalized",
    "svd",
    "thin_qr",
    "truncate",
    "uniform_dist",
]
