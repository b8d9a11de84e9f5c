"""Rank-one p-adic differential equations y' = P'(T) y with polynomial P.

Solubility, the residue invariant e^(T), the index chi, the comparison
criterion and the superfluous-factor reduction, computed in exact
cyclotomic arithmetic at tracked precision.
"""

from .errors import (
    ConsistencyError,
    ContextError,
    InsolubleError,
    ParseError,
    PrecisionError,
    RankOneError,
)
from .invariants import (
    AnalysisReport,
    ResidueSeries,
    analyze,
    comparison_iso,
    equivalent,
    index,
    index_p_typical,
    is_soluble,
    lfunction_degree,
    lift,
    ptypical_decompose,
    reduce_comparison,
    residue_invariant,
    shift_V,
    vT,
)
from .numbertheory import Params, make_params
from .parser import format_poly, parse_poly
from .series import InputPoly, etilde
from .witt import ah_series, index_via_witt, witt_factorize

__version__ = "0.1.0"
