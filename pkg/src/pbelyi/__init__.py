"""Exact arithmetic for Belyi maps on the line over small odd finite fields.

Submodules: field (finite fields and embeddings), poly and factor
(univariate arithmetic and factorization), ratmap (maps of the projective
line), ramification (branch analysis and the covering verifiers), counting
(points, zeta data, symmetric products), bounds (explicit degree bounds),
constructions (recipes that come with fresh verdicts), search (minimal
degree by brute force), cli (the command-line front end).
"""

from .bounds import (
    BoundResult,
    ceil_log_q,
    field_size_check,
    lcm_up_to,
    point_supply_check,
    tame_bound,
    tame_threshold,
    wild_N,
    wild_bound,
)
from .constructions import (
    BelyiInstance,
    ConstructionResult,
    CoveringDescriptor,
    collapse_map,
    fp_span_of_conjugates,
    tame_normalize_small,
    tame_pipeline,
    tame_power_map,
    tame_reduce_recursive,
    wild_belyi_compose,
    wild_h_tower,
    wild_phi,
)
from .counting import (
    Hyperelliptic,
    ProjectiveLine,
    count_points,
    enumerate_effective_divisors,
    hasse_weil_check,
    parse_curve,
    point_counts,
    sym_product_count,
    zeta_fit,
)
from .errors import (
    GuardExceededError,
    InseparableMapError,
    InternalInconsistencyError,
    PreconditionError,
)
from .factor import factor, is_irreducible, roots
from .field import FieldElement, FiniteField, embed, galois_orbit, parse_field
from .poly import Polynomial, parse_poly
from .ramification import (
    BelyiVerdict,
    RamReport,
    analyze,
    is_simple_covering,
    verify_tame_belyi,
    verify_wild_belyi,
)
from .ratmap import (
    P1Point,
    RationalMap,
    p1_points,
    parse_point,
    parse_point_set,
    parse_ratmap,
)
from .search import SearchSpec, enumerate_candidates, minimal_belyi_degree

__version__ = "0.1.0"
