"""Penalized Granger-causal graph extraction from joint trajectories."""

from .config import GgmConfig
from .design import DesignMatrix, FlatTarget, build_design_matrix, flatten_target
from .lasso import (
    adaptive_lasso_fit,
    full_shrinkage_lambda,
    kkt_residual,
    mle_estimate,
    soft_threshold,
)
from .model import (
    CausalGraph,
    CoefficientBlock,
    compute_ggm,
    cross_validate_lambda,
    extract_edges,
    information_criteria,
)
from .io import (
    adjacency_to_csv,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    load_graph,
    save_graph,
)

__all__ = [
    "GgmConfig",
    "DesignMatrix",
    "FlatTarget",
    "build_design_matrix",
    "flatten_target",
    "soft_threshold",
    "adaptive_lasso_fit",
    "kkt_residual",
    "full_shrinkage_lambda",
    "mle_estimate",
    "CausalGraph",
    "CoefficientBlock",
    "compute_ggm",
    "cross_validate_lambda",
    "extract_edges",
    "information_criteria",
    "adjacency_to_csv",
    "graph_to_dot",
    "graph_to_json",
    "graph_from_json",
    "save_graph",
    "load_graph",
]
