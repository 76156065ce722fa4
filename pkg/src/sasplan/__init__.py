"""Satisficing planner for SAS+ tasks.

Greedy best-first search with deferred evaluation, delete-relaxation and
landmark-count heuristics, preferred operators, bounded fact-tuple
novelty, and alternation open lists with boosting; plus a benchmark
harness with agile-track scoring.
"""

from .configs import PolicySpec, UnknownConfig, compile_policy, dump_policy, KNOWN_CONFIG_NAMES
from .landmarks import LandmarkGraph, generate_landmark_graph
from .novelty import NoveltyTable, estimate_table_bytes
from .relaxation import HeuristicReport, RelaxationEvaluator, hadd, hff
from .sas import (
    Atom,
    Effect,
    Operator,
    SasError,
    SasRangeError,
    SasSyntaxError,
    Task,
    UnsupportedFeature,
    Variable,
    dump_sas,
    load_sas,
    parse_sas,
)
from .search import (
    SearchLimits,
    SearchResult,
    Statistics,
    applicable_operators,
    apply_operator,
    extract_plan,
    lazy_gbfs,
    validate_plan,
)

__all__ = [
    "Atom", "Effect", "Operator", "Task", "Variable",
    "SasError", "SasRangeError", "SasSyntaxError", "UnsupportedFeature",
    "parse_sas", "load_sas", "dump_sas",
    "hadd", "hff", "HeuristicReport", "RelaxationEvaluator",
    "LandmarkGraph", "generate_landmark_graph",
    "NoveltyTable", "estimate_table_bytes",
    "PolicySpec", "UnknownConfig", "compile_policy", "dump_policy", "KNOWN_CONFIG_NAMES",
    "SearchLimits", "SearchResult", "Statistics",
    "applicable_operators", "apply_operator", "extract_plan", "lazy_gbfs", "validate_plan",
]

__version__ = "0.1.0"
