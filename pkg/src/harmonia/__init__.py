"""Search, classification, bounds and certificate traces for harmonious,
unitary harmonious, amicable and anarchy integer tuples, with exact arithmetic
end to end."""

from harmonia.arith import (
    ArithmeticProfile,
    Factorization,
    SegmentationRequired,
    abundancy_ratio,
    factorize,
    ratio_sum,
    sieve_range,
    sigma_of,
    sigma_star_of,
)
from harmonia.bounds import BoundReport, tower, verify_bounds
from harmonia.classify import TupleRecord, classify, record_from_members
from harmonia.induction import run_induction, theorem_trace
from harmonia.search import (
    CheckpointMismatch,
    SearchConfig,
    count_table,
    search_anarchy_pairs,
    search_pairs,
    search_triples,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticProfile",
    "BoundReport",
    "CheckpointMismatch",
    "Factorization",
    "SearchConfig",
    "SegmentationRequired",
    "TupleRecord",
    "abundancy_ratio",
    "classify",
    "count_table",
    "factorize",
    "ratio_sum",
    "record_from_members",
    "run_induction",
    "search_anarchy_pairs",
    "search_pairs",
    "search_triples",
    "sieve_range",
    "sigma_of",
    "sigma_star_of",
    "theorem_trace",
    "tower",
    "verify_bounds",
    "__version__",
]
