"""Numerics for two-variable generalized quasiarithmetic means.

The package evaluates means built from a generator pair (f, g) and a
probability measure on [0, 1], differentiates them along the diagonal to
arbitrary finite order through exact jet arithmetic, and mechanically
checks the algebraic and differential conditions that characterize when
two such means coincide.
"""

from .errors import (
    BracketFailure,
    DegenerateDenominator,
    DegenerateMeasure,
    DomainViolation,
    IllConditionedFit,
    MeanLabError,
    NonSmooth,
    NotApplicable,
    NotPositive,
    OrderOutOfRange,
    OutOfInterval,
    ParseError,
    QuadratureNonFinite,
    WronskianVanishes,
)
from .expr import FunctionPair, eval_jet, eval_scalar, parse, to_string, validate_pair
from .jets import Jet
from .measures import (
    Density,
    Discrete,
    Lebesgue,
    Measure,
    MomentData,
    Regime,
    RegimeInfo,
    classify,
    measure_from_json,
    measure_to_json,
    moments,
    preset_measure,
)
from .means import MeanSpec, bajraktarevic, cauchy, m_curve, mean_eval, quasiarithmetic
from .calculus import (
    PhiPsi,
    SeqPair,
    closed_form_seq,
    diagonal_derivatives,
    diagonal_derivatives_numeric,
    phi_psi,
    recursion_seq,
    wronskian,
)
from .equality import (
    AssertionResult,
    EqualityReport,
    Matrix2,
    NotEquivalent,
    QuadraticForm,
    antiderivative,
    check_EBM,
    check_ECM,
    check_N3,
    check_N15,
    check_N25,
    check_phi_psi,
    check_power_law_R,
    fit_equivalence,
    make_sincos_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AssertionResult",
    "BracketFailure",
    "Density",
    "DegenerateDenominator",
    "DegenerateMeasure",
    "Discrete",
    "DomainViolation",
    "EqualityReport",
    "FunctionPair",
    "IllConditionedFit",
    "Jet",
    "Lebesgue",
    "Matrix2",
    "MeanLabError",
    "MeanSpec",
    "Measure",
    "MomentData",
    "NonSmooth",
    "NotApplicable",
    "NotEquivalent",
    "NotPositive",
    "OrderOutOfRange",
    "OutOfInterval",
    "ParseError",
    "PhiPsi",
    "QuadratureNonFinite",
    "QuadraticForm",
    "Regime",
    "RegimeInfo",
    "SeqPair",
    "WronskianVanishes",
    "antiderivative",
    "bajraktarevic",
    "cauchy",
    "check_EBM",
    "check_ECM",
    "check_N3",
    "check_N15",
    "check_N25",
    "check_phi_psi",
    "check_power_law_R",
    "classify",
    "closed_form_seq",
    "diagonal_derivatives",
    "diagonal_derivatives_numeric",
    "eval_jet",
    "eval_scalar",
    "fit_equivalence",
    "m_curve",
    "make_sincos_pair",
    "mean_eval",
    "measure_from_json",
    "measure_to_json",
    "moments",
    "parse",
    "phi_psi",
    "preset_measure",
    "quasiarithmetic",
    "recursion_seq",
    "to_string",
    "validate_pair",
    "wronskian",
]
