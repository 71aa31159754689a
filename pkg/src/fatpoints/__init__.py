"""Fat points in the projective plane: initial sequences, Waldschmidt bounds,
and Bezout decompositions, computed in exact arithmetic."""

from fatpoints.analyzer import (
    AlphaSequence,
    BetaSequence,
    Classification,
    WaldschmidtInterval,
    alpha,
    alpha_sequence,
    beta_sequence,
    chudnovsky_bound,
    classify,
    ev_check,
    ev_gap_bound,
    waldschmidt_interval,
)
from fatpoints.bezout import (
    BezoutDecomposition,
    CurveClass,
    DivisorClass,
    bezout_decompose,
    bezout_step_scores,
    check_residual_inequality,
    confluence_test,
)
from fatpoints.geometry import (
    PointConfiguration,
    ProjectiveLine,
    ProjectivePoint,
    gen_collinear_plus_point,
    gen_conic_example,
    gen_generic,
    gen_prop42,
    gen_quasi_star,
    gen_star,
)
from fatpoints.interpolation import (
    ConditionMatrix,
    FatPointScheme,
    LinearSystemResult,
    build_condition_matrix,
    rank_modular,
    rank_rational,
    system_dimension,
    verify_multiplicity,
)

__version__ = "0.1.0"
