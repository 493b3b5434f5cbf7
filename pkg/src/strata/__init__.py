"""Groebner strata of monomial ideals over the rationals."""

from .errors import (
    EmptyStratum,
    HypothesisViolation,
    InvalidOrder,
    InvalidSegment,
    NotReliable,
    StrataError,
    UnitIdeal,
    VariableMismatch,
)
from .exact_poly import GenericPolynomial, ParamPoly, ParamRing
from .groebner import MonomialIdeal, buchberger_Q, eliminate, krull_dimension
from .stratum import GenericBasis, ParamIdeal, Parameter, StratumReport, analyze, stratum_ideal
from .term_orders import Allowed, TailSpec, TermOrder, parse_order

__version__ = "0.1.0"
