"""Tight majorization bounds on Renyi entropies of clustered sources."""

from .aggregate import (
    Aggregation,
    EntropyRange,
    ExhaustiveExtrema,
    HuffmanTrace,
    aggregation_entropy_range,
    exhaustive_extrema,
    flattest_coarsening,
    huffman_aggregation,
    peakiest_coarsening,
)
from .campbell import (
    ClassLength,
    CodeSpec,
    TunstallBound,
    build_prefix_code,
    campbell_bounds,
    campbell_lengths,
    canonical_codewords,
    clustering_cumulant_bounds,
    expected_length,
    scaled_cumulant,
    tunstall_rate_bound,
)
from .errors import (
    DegenerateBoundError,
    DomainError,
    InstanceTooLargeError,
    RenyiBoundsError,
)
from .extremal import (
    BetaWindow,
    ExtremalProfile,
    aggregation_penalty,
    beta_window,
    extremal_pmf,
    interior_maximizer,
    max_entropy_gap,
    max_entropy_gap_limit,
    ratio_class_majorant,
)
from .figures import FigureRequest, emit_figure, example_source, run_example1
from .guess import (
    GuessBoundReport,
    arikan_bounds,
    clustering_gain_bounds,
    exact_guessing_moment,
    ranking_permutation,
)
from .pmf import (
    MassRatioClass,
    Pmf,
    count_type_classes,
    distinct_positive_masses,
    in_ratio_class,
    majorizes,
    parse_pmf,
    partial_sum_curve,
    type_classes,
)
from .renyi import Order, as_order, renyi_divergence, renyi_entropy

__version__ = "0.1.0"

__all__ = [
    "Aggregation",
    "BetaWindow",
    "ClassLength",
    "CodeSpec",
    "DegenerateBoundError",
    "DomainError",
    "EntropyRange",
    "ExhaustiveExtrema",
    "ExtremalProfile",
    "FigureRequest",
    "GuessBoundReport",
    "HuffmanTrace",
    "InstanceTooLargeError",
    "MassRatioClass",
    "Order",
    "Pmf",
    "RenyiBoundsError",
    "TunstallBound",
    "aggregation_entropy_range",
    "aggregation_penalty",
    "arikan_bounds",
    "as_order",
    "beta_window",
    "build_prefix_code",
    "campbell_bounds",
    "campbell_lengths",
    "canonical_codewords",
    "clustering_cumulant_bounds",
    "clustering_gain_bounds",
    "count_type_classes",
    "distinct_positive_masses",
    "emit_figure",
    "exact_guessing_moment",
    "example_source",
    "exhaustive_extrema",
    "expected_length",
    "extremal_pmf",
    "flattest_coarsening",
    "huffman_aggregation",
    "in_ratio_class",
    "interior_maximizer",
    "majorizes",
    "max_entropy_gap",
    "max_entropy_gap_limit",
    "parse_pmf",
    "partial_sum_curve",
    "peakiest_coarsening",
    "ranking_permutation",
    "ratio_class_majorant",
    "renyi_divergence",
    "renyi_entropy",
    "run_example1",
    "scaled_cumulant",
    "tunstall_rate_bound",
    "type_classes",
]
