"""Exact inversion of polynomial maps F = X - H via tree sums, with nilpotency
checks and degree-bound certificates."""

from .inversion import (
    BoundCertificate,
    InverseSeries,
    InversionError,
    degree_bound_report,
    g_coefficient_full,
    g_coefficient_truncated,
    invert_fixed_point,
    invert_strongly_nilpotent,
    invert_via_trees,
)
from .mapfile import MapDocument, parse_map, dump_map, read_map, write_map
from .multipoly import Poly, parse_poly, variables
from .nilpotency import NilpotencyReport, nilpotency_report, strong_index, weak_index
from .polymap import HPart, PolyMap, PolyMatrix, jacobian, keller_check, linear_conjugate, map_compose

__version__ = "0.1.0"
