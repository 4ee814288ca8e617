"""Diversity of intersecting permutation families: exact small-degree tools
and certified arithmetic for the large-degree inequalities."""

__version__ = "0.1.0"

from .bounds import ClaimResult, RationalEnclosure, Verdict
from .certificates import CertificateReport, check_fact22, check_final_chain
from .errors import BudgetExceeded, HypothesisNotMet, InputError, InvariantError, ParseError, PermdivError
from .family import (
    Cell,
    DiversityReport,
    PartialFamily,
    PartialPerm,
    PermFamily,
    Permutation,
    avoidance,
    co_degree,
    derangement_count,
    diversity,
    enumerate_symmetric_group,
    is_intersecting,
    make_star,
    make_triangle_family,
    restriction,
    span,
)
from .search import SearchResult, exact_max_diversity, local_search_max_diversity, verify_triangle_extremal
from .spread import SpreadDecomposition, SpreadParams, is_r_spread, maximal_non_spread, non_spread_sets, spread_decompose
from .stochastic import (
    EstimateReport,
    TrialConfig,
    covers_member,
    disjoint_split_experiment,
    estimate_cover_probability,
    sample_random_subset,
    verify_spread_lemma,
)
from .sunflower import PseudoSunflower, basis_cascade, classify_two_uniform, compress, find_pseudo_sunflower
from .textio import parse_family, serialize_family

__all__ = [
    "BudgetExceeded",
    "Cell",
    "CertificateReport",
    "ClaimResult",
    "DiversityReport",
    "EstimateReport",
    "HypothesisNotMet",
    "InputError",
    "InvariantError",
    "ParseError",
    "PartialFamily",
    "PartialPerm",
    "PermFamily",
    "PermdivError",
    "Permutation",
    "PseudoSunflower",
    "RationalEnclosure",
    "SearchResult",
    "SpreadDecomposition",
    "SpreadParams",
    "TrialConfig",
    "Verdict",
    "avoidance",
    "basis_cascade",
    "check_fact22",
    "check_final_chain",
    "classify_two_uniform",
    "co_degree",
    "compress",
    "covers_member",
    "derangement_count",
    "disjoint_split_experiment",
    "diversity",
    "enumerate_symmetric_group",
    "estimate_cover_probability",
    "exact_max_diversity",
    "find_pseudo_sunflower",
    "is_intersecting",
    "is_r_spread",
    "local_search_max_diversity",
    "make_star",
    "make_triangle_family",
    "maximal_non_spread",
    "non_spread_sets",
    "parse_family",
    "restriction",
    "sample_random_subset",
    "serialize_family",
    "span",
    "spread_decompose",
    "verify_spread_lemma",
    "verify_triangle_extremal",
]
