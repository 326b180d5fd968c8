"""Weighted finite-state transducers with pluggable semirings."""

from .errors import (
    ConvergenceError,
    CycleLimitError,
    DeterminizationLimitError,
    DivisionByZeroError,
    FstParseError,
    InvalidLabelError,
    InvalidStateError,
    InvalidWeightError,
    NoAcceptingPathError,
    SamplingError,
    SemiringMismatchError,
    UnsupportedOperationError,
    WfstError,
)
from .fst import (
    EPSILON,
    Arc,
    Fst,
    Path,
    PathEnumeration,
    enumerate_paths,
    fst_from_sequence,
)
from .semirings import (
    BUILTIN_SEMIRINGS,
    DEFAULT_DELTA,
    AbstractSemiringWeight,
    AxiomReport,
    AxiomViolation,
    BooleanWeight,
    FeaturizedWeight,
    MaxWeight,
    MinWeight,
    RealWeight,
    SemiringDescriptor,
    TropicalWeight,
    check_semiring_axioms,
    featurized_semiring,
)
from .algorithms import (
    ShortestPathResult,
    cast_from_boolean,
    closure,
    compose,
    concat,
    determinize,
    equivalent_by_enumeration,
    invert,
    lift,
    project,
    push,
    random_path,
    remove_epsilon,
    reverse,
    shortest_distance,
    shortest_path,
    sum_paths,
    union,
)
from .autodiff import (
    GradientTape,
    TapeNode,
    backward,
    loglikelihood_loss,
    make_diff_semiring,
    pair_acceptor,
    train,
)
from .io import parse_text, render_dot, render_html, render_text

__version__ = "0.1.0"

__all__ = [
    "AbstractSemiringWeight", "Arc", "AxiomReport", "AxiomViolation",
    "BUILTIN_SEMIRINGS", "BooleanWeight", "ConvergenceError",
    "CycleLimitError", "DEFAULT_DELTA", "DeterminizationLimitError",
    "DivisionByZeroError", "EPSILON", "FeaturizedWeight", "Fst",
    "FstParseError", "GradientTape", "InvalidLabelError",
    "InvalidStateError", "InvalidWeightError", "MaxWeight", "MinWeight",
    "NoAcceptingPathError", "Path", "PathEnumeration", "RealWeight",
    "SamplingError", "SemiringDescriptor", "SemiringMismatchError",
    "ShortestPathResult", "TapeNode", "TropicalWeight",
    "UnsupportedOperationError", "WfstError", "backward",
    "cast_from_boolean", "check_semiring_axioms", "closure", "compose",
    "concat", "determinize", "enumerate_paths",
    "equivalent_by_enumeration", "featurized_semiring",
    "fst_from_sequence", "invert", "lift", "loglikelihood_loss",
    "make_diff_semiring", "pair_acceptor", "parse_text", "project",
    "push", "random_path", "remove_epsilon", "render_dot", "render_html",
    "render_text", "reverse", "shortest_distance", "shortest_path",
    "sum_paths", "train", "union",
]
