"""Capacitated k-median solver workbench."""

from ._ckm import (
    Assignment,
    Infeasible,
    Instance,
    LogkResult,
    Metric,
    OracleResult,
    ParseFailure,
    PipelineResult,
    RefusedScale,
    TransportResult,
    UncapSolution,
    assignment_cost,
    bicriteria_greedy,
    exact_ckm,
    exact_uncap_kmedian,
    gen_random_instance,
    load_instance,
    local_search_kmedian,
    optimal_mapping,
    save_instance,
    solve_ckm,
    solve_ckm_uniform,
    solve_logk,
    validate_assignment,
    validate_instance,
)

__all__ = [
    "Assignment",
    "Infeasible",
    "Instance",
    "LogkResult",
    "Metric",
    "OracleResult",
    "ParseFailure",
    "PipelineResult",
    "RefusedScale",
    "TransportResult",
    "UncapSolution",
    "assignment_cost",
    "bicriteria_greedy",
    "exact_ckm",
    "exact_uncap_kmedian",
    "gen_random_instance",
    "load_instance",
    "local_search_kmedian",
    "optimal_mapping",
    "save_instance",
    "solve_ckm",
    "solve_ckm_uniform",
    "solve_logk",
    "validate_assignment",
    "validate_instance",
]

__version__ = "0.1.0"
