"""Quasimartingales on finite filtered probability spaces, in exact
rational arithmetic."""

from .decomp import (
    DoobMeyerDecomposition,
    MinimalityReport,
    RaoDecomposition,
    RieszDecomposition,
    check_rao_minimality,
    doob_meyer,
    rao,
    riesz,
    stricker_projection,
)
from .doleans import (
    DoleansMeasure,
    PredictableAtom,
    doleans_of,
    evaluate_general,
    evaluate_rectangle,
    jordan,
    marginal,
    process_of,
    total_variation,
)
from .errors import (
    LabelError,
    NotAdaptedError,
    PreconditionError,
    QuasimartError,
    SpaceError,
)
from .process import (
    AdaptedProcess,
    NaturalityCheck,
    ProcessClass,
    classify,
    conditional_variation,
    d_variation,
    is_natural,
    q_norm,
    stieltjes_integral,
)
from .space import (
    Cut,
    FilteredSpace,
    PathFunction,
    SimplePredictable,
    conditional_expectation,
    evaluate_simple,
    project_simple,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptedProcess",
    "Cut",
    "DoleansMeasure",
    "DoobMeyerDecomposition",
    "FilteredSpace",
    "LabelError",
    "MinimalityReport",
    "NaturalityCheck",
    "NotAdaptedError",
    "PathFunction",
    "PreconditionError",
    "PredictableAtom",
    "ProcessClass",
    "QuasimartError",
    "RaoDecomposition",
    "RieszDecomposition",
    "SimplePredictable",
    "SpaceError",
    "check_rao_minimality",
    "classify",
    "conditional_expectation",
    "conditional_variation",
    "d_variation",
    "doleans_of",
    "doob_meyer",
    "evaluate_general",
    "evaluate_rectangle",
    "evaluate_simple",
    "is_natural",
    "jordan",
    "marginal",
    "process_of",
    "project_simple",
    "q_norm",
    "rao",
    "riesz",
    "stieltjes_integral",
    "stricker_projection",
    "total_variation",
    "validate_space",
]
