"""Exact uniform Chabauty-Coleman bounds: N_p, Newton polygons, tropical graphs."""

from .errors import ChabautyError, InvariantBreach, PreconditionError, SchemaError
from .exact import np_naive, np_upper_bound_remark, np_value
from .newton import ValuationSeries, slope, tropical_eval, verify_annular_bound
from .graphs import MetricGraph, PLFunction, canonical_divisor, divisor_of, genus
from .stable import enumerate_stable_graphs
from .bounds import rational_point_bound, torsion_bound_intro, torsion_bound_theorem

__version__ = "0.1.0"

__all__ = [
    "ChabautyError", "InvariantBreach", "PreconditionError", "SchemaError",
    "np_naive", "np_upper_bound_remark", "np_value",
    "ValuationSeries", "slope", "tropical_eval", "verify_annular_bound",
    "MetricGraph", "PLFunction", "canonical_divisor", "divisor_of", "genus",
    "enumerate_stable_graphs",
    "rational_point_bound", "torsion_bound_intro", "torsion_bound_theorem",
]
