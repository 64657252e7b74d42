"""Contributor reputation from developer collaboration networks."""

from ._core import (
    ConvergenceError,
    Error,
    InputError,
    Network,
    ValidationError,
    build_network,
    centrality,
    chi_squared,
    fit_review_model,
    generate_network,
    krippendorff_alpha,
    louvain,
    parse_events,
    run_cli,
    scores,
    stratified_sample,
    structural_summary,
)

__all__ = [
    "ConvergenceError",
    "Error",
    "InputError",
    "Network",
    "ValidationError",
    "build_network",
    "centrality",
    "chi_squared",
    "fit_review_model",
    "generate_network",
    "krippendorff_alpha",
    "louvain",
    "parse_events",
    "run_cli",
    "scores",
    "stratified_sample",
    "structural_summary",
]
