"""Exact structure analysis for matrix semigroups over Q and GF(p^m).

The public surface: field constructors (GF, QQ, field_from_spec), exact
matrices and polynomials, algebra closures with their structure data
(centralizer, division degree, regular representation, similarity to the
full matrix algebra), the invariant-subspace engine (spin, composition
series, triangularization), semigroup-level theorem checkers, and the
quaternion nilpotent decomposition.
"""

__version__ = "0.1.0"

from semimat.errors import (
    ChopIncomplete,
    DivisionByZero,
    EmptyInput,
    MixedFieldError,
    NonMonicInput,
    NotApplicable,
    NotTriangularizable,
    ParseError,
    SearchExhausted,
    SemimatError,
    ShapeMismatch,
    SingularMatrix,
    StructureViolation,
    UnsupportedField,
    UnsupportedTower,
    ZeroVector,
)
from semimat.fields import (
    GF,
    QQ,
    Field,
    FieldElement,
    Quaternion,
    embed_raw,
    field_from_spec,
    is_subfield,
    raw_in_subfield,
)
from semimat.linalg import (
    EchelonSpan,
    Matrix,
    Polynomial,
    SplitResult,
    Subspace,
    char_poly,
    factor_gf,
    is_triangularizable_single,
    random_invertible,
    random_matrix,
    splits_with_roots,
)
from semimat.algebra import (
    AlgebraBasis,
    DivisionDegree,
    SimilarityResult,
    algebra_closure,
    algebra_from_span,
    centralizer,
    construct_similarity_to_full,
    division_degree,
    find_min_rank_element,
    left_regular_representation,
)
from semimat.modstruct import (
    CompositionFactor,
    InvariantChain,
    IrreducibilityVerdict,
    TriangularizationResult,
    composition_series,
    find_invariant_subspace,
    replay_certificate,
    spin,
    triangularize_family,
)
from semimat.burnside import (
    SemigroupClosure,
    TheoremReport,
    TriangularizabilityScan,
    all_elements_triangularizable,
    check_burnside,
    check_spectra_descent,
    reverify_report,
)
from semimat.quat import (
    NilpotentDecomposition,
    QuaternionMatrix,
    is_nilpotent,
    nilpotent_span_decomposition,
    real_representation,
)

__all__ = [
    "__version__",
    "SemimatError", "MixedFieldError", "DivisionByZero", "UnsupportedField",
    "UnsupportedTower", "ShapeMismatch", "SingularMatrix", "NonMonicInput",
    "ZeroVector", "EmptyInput", "StructureViolation", "SearchExhausted",
    "NotApplicable", "NotTriangularizable", "ChopIncomplete", "ParseError",
    "GF", "QQ", "Field", "FieldElement", "Quaternion", "field_from_spec",
    "is_subfield", "embed_raw", "raw_in_subfield",
    "Matrix", "EchelonSpan", "Subspace", "Polynomial", "SplitResult",
    "char_poly", "splits_with_roots", "factor_gf",
    "is_triangularizable_single", "random_matrix", "random_invertible",
    "AlgebraBasis", "DivisionDegree", "SimilarityResult", "algebra_closure",
    "algebra_from_span", "centralizer", "division_degree",
    "find_min_rank_element", "left_regular_representation",
    "construct_similarity_to_full",
    "IrreducibilityVerdict", "CompositionFactor", "InvariantChain",
    "TriangularizationResult", "spin", "find_invariant_subspace",
    "replay_certificate", "composition_series", "triangularize_family",
    "SemigroupClosure", "TriangularizabilityScan", "TheoremReport",
    "all_elements_triangularizable", "check_burnside",
    "check_spectra_descent", "reverify_report",
    "QuaternionMatrix", "NilpotentDecomposition", "real_representation",
    "is_nilpotent", "nilpotent_span_decomposition",
]
