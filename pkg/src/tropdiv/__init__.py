"""tropdiv: exact divisor theory on finite and metric graphs.

Chip-firing, Dhar's burning algorithm and reduced divisors, divisor rank
and tropical Riemann-Roch, Jacobians and the tropical Abel-Jacobi map,
break divisors, Zhang measures, and the Brill-Noether classification on
generic chains of loops.  All arithmetic is exact (integers and
fractions); the hot reduction kernel has a compiled and a pure-Python
implementation selected at import (see tropdiv._kernel).
"""

from ._kernel import kernel_name
from .divisors import (
    Divisor,
    Orientation,
    all_orientations,
    canonical_divisor,
    chip_fire,
    divisor,
    orientation_divisor,
    weighted_canonical,
)
from .functions import (
    PLFunction,
    constant,
    is_in_linear_system,
    min_combination,
    ord_at,
    principal_divisor,
    verify_tropical_dependence,
)
from .graphs import (
    FiniteGraph,
    GraphError,
    GraphPoint,
    MetricGraph,
    Refinement,
    genus,
    refine,
)
from .rank import (
    RankResult,
    brill_noether_rank,
    clifford_check,
    clifford_index,
    gonality,
    is_weierstrass_point,
    midpoint_grid,
    orientation_rank_law,
    rank,
    rank_finite,
    rank_metric,
    riemann_roch_check,
    weighted_rank,
    weighted_rank_via_loops,
    weighted_riemann_roch_check,
)
from .reduction import (
    PreconditionError,
    dhar_unburnt,
    is_equivalent,
    reduce_divisor,
    reduce_via_unit_subdivision,
)

__version__ = "0.1.0"

__all__ = [
    "Divisor",
    "FiniteGraph",
    "GraphError",
    "GraphPoint",
    "MetricGraph",
    "Orientation",
    "PLFunction",
    "PreconditionError",
    "RankResult",
    "Refinement",
    "all_orientations",
    "brill_noether_rank",
    "canonical_divisor",
    "chip_fire",
    "clifford_check",
    "clifford_index",
    "constant",
    "dhar_unburnt",
    "divisor",
    "genus",
    "gonality",
    "is_equivalent",
    "is_in_linear_system",
    "is_weierstrass_point",
    "kernel_name",
    "midpoint_grid",
    "min_combination",
    "ord_at",
    "orientation_divisor",
    "orientation_rank_law",
    "principal_divisor",
    "rank",
    "rank_finite",
    "rank_metric",
    "reduce_divisor",
    "reduce_via_unit_subdivision",
    "refine",
    "riemann_roch_check",
    "verify_tropical_dependence",
    "weighted_canonical",
    "weighted_rank",
    "weighted_rank_via_loops",
    "weighted_riemann_roch_check",
]
