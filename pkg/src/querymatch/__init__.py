"""querymatch: maximum-weight assignment when weights cost queries.

Producers and consumers come with processing orders that promise bounded
weight ratios between constrained pairs; the algorithms here exploit those
promises to build heavy matchings while inspecting as few weights as
possible, and the analysis tools extract or certify the promised parameters.
"""

from .core import (
    REL_TOL,
    BipartiteInstance,
    Edge,
    InvalidInstanceError,
    MalformedPathError,
    Matching,
    MissingOrderError,
    QuerymatchError,
    SizeLimitError,
    UnknownEdgeError,
    Violation,
    check_instance,
    make_matching,
    matching_weight,
    validate_instance,
)
from .oracle import QueryLedger, ledger_report, query_weight, settle
from .reference import (
    BRUTE_FORCE_EDGE_LIMIT,
    brute_force_matching,
    classic_greedy,
    exact_matching,
    optimal_path,
)
from .discovery import (
    ALGORITHMS,
    WINDOWED,
    DiscoveryResult,
    greedy_local,
    greedy_path,
    l_double_greedy,
    l_greedy_local,
    local_edge,
    naive_edge,
    naive_local,
    path4_saver,
    run_algorithm,
)
from .analysis import (
    IntervalWeights,
    OrderParams,
    OverlapCounts,
    build_interval_order,
    certified_params,
    competitive_bound,
    extract_params,
    overlap_counts,
)
from .extensions import (
    BRUTE_FORCE_BHM_LIMITS,
    STRATEGIES,
    AlphaBandError,
    BhmResult,
    HypergraphInstance,
    brute_force_bhm,
    contract_matching,
    expand_one_to_many,
    extend_p_order,
    solve_bhm,
)
from .generators import (
    FIGURES,
    ORDER_MODELS,
    WEIGHT_MODELS,
    fisher_yates,
    gen_figure,
    gen_random,
    gen_random_hypergraph,
)
from .io import (
    FORMAT_NAME,
    FORMAT_VERSION,
    InstanceFormatError,
    LoadedInstance,
    emit_canonical,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
)
from .harness import (
    BOUND_TOL,
    CSV_COLUMNS,
    EXIT_BOUND_VIOLATION,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    RunReport,
    grid_exit_code,
    realized_ratio,
    report_to_dict,
    reports_to_csv,
    run_experiment,
    run_one,
    strip_isolated,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AlphaBandError",
    "BOUND_TOL",
    "BRUTE_FORCE_BHM_LIMITS",
    "BRUTE_FORCE_EDGE_LIMIT",
    "BhmResult",
    "BipartiteInstance",
    "CSV_COLUMNS",
    "DiscoveryResult",
    "EXIT_BOUND_VIOLATION",
    "EXIT_CONFIG_ERROR",
    "EXIT_OK",
    "Edge",
    "FIGURES",
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "HypergraphInstance",
    "InstanceFormatError",
    "IntervalWeights",
    "InvalidInstanceError",
    "LoadedInstance",
    "MalformedPathError",
    "Matching",
    "MissingOrderError",
    "ORDER_MODELS",
    "OrderParams",
    "OverlapCounts",
    "QueryLedger",
    "QuerymatchError",
    "REL_TOL",
    "RunReport",
    "STRATEGIES",
    "SizeLimitError",
    "UnknownEdgeError",
    "Violation",
    "WEIGHT_MODELS",
    "WINDOWED",
    "brute_force_bhm",
    "brute_force_matching",
    "build_interval_order",
    "certified_params",
    "check_instance",
    "classic_greedy",
    "competitive_bound",
    "contract_matching",
    "emit_canonical",
    "exact_matching",
    "expand_one_to_many",
    "extend_p_order",
    "extract_params",
    "fisher_yates",
    "gen_figure",
    "gen_random",
    "gen_random_hypergraph",
    "greedy_local",
    "greedy_path",
    "grid_exit_code",
    "instance_from_dict",
    "instance_to_dict",
    "l_double_greedy",
    "l_greedy_local",
    "ledger_report",
    "load_instance",
    "local_edge",
    "make_matching",
    "matching_weight",
    "naive_edge",
    "naive_local",
    "optimal_path",
    "overlap_counts",
    "path4_saver",
    "query_weight",
    "realized_ratio",
    "report_to_dict",
    "reports_to_csv",
    "run_algorithm",
    "run_experiment",
    "run_one",
    "save_instance",
    "settle",
    "strip_isolated",
    "validate_instance",
]
