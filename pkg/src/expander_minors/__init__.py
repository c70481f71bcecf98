"""Embed target graphs as minors of bounded-degree expanders, or certify a
sparse cut showing the host is not an alpha-expander."""
from .embedding import (DegreeReduction, EmbedConfig, Failed, Model,
                        NotAnExpander, embed_minor, good_partition_init,
                        reduce_degree)
from .errors import (CongestionExceeded, ConvergenceError,
                     DisconnectedGraphError, GraphFormatError,
                     OracleBudgetError, ResampleCapExceeded, RoutingError,
                     SizeGuardRejected, TerminalShortage)
from .flows import (Core, Dual, Flow, FlowSolution, InfeasibleEvidence,
                    LengthAssignment, Paths, RoutingParams, SparseCut,
                    hop_limited_distances, layered_cut, low_diameter_core,
                    region_grow_partition, route_matching, routing_params,
                    solve_uniform_mcf)
from .generators import GenSpec, generate
from .graphs import (Cut, Graph, Matching, bfs_distances, bfs_tree,
                     connected_components, cut_of, greedy_matching_across,
                     induced_subgraph, is_connected, is_simple_path,
                     load_graph, make_graph, path_between, save_graph)
from .models import (MinorModel, VerifyResult, Violation, brute_force_is_minor,
                     load_model, save_model, verify_model)
from .partition import (Grouping, balanced_integer_partition,
                        connected_cut_repair, expander_repair,
                        spanning_tree_grouping)
from .paths import PathGroups, lll_select_disjoint, route_group_family
from .spectral import SpectralResult, exact_expansion, lambda2, sweep_cut

__version__ = "0.1.0"

__all__ = [
    "Core", "CongestionExceeded", "ConvergenceError", "Cut",
    "DegreeReduction", "DisconnectedGraphError", "Dual", "EmbedConfig",
    "Failed", "Flow", "FlowSolution", "GenSpec", "Graph", "GraphFormatError",
    "Grouping", "InfeasibleEvidence", "LengthAssignment", "Matching",
    "MinorModel", "Model", "NotAnExpander", "OracleBudgetError",
    "PathGroups", "Paths", "ResampleCapExceeded", "RoutingError",
    "RoutingParams", "SizeGuardRejected", "SparseCut", "SpectralResult",
    "TerminalShortage", "VerifyResult", "Violation",
    "balanced_integer_partition", "bfs_distances", "bfs_tree",
    "brute_force_is_minor", "connected_components", "connected_cut_repair",
    "cut_of", "embed_minor", "exact_expansion", "expander_repair", "generate",
    "good_partition_init", "greedy_matching_across", "hop_limited_distances",
    "induced_subgraph", "is_connected", "is_simple_path", "lambda2",
    "layered_cut", "lll_select_disjoint", "load_graph", "load_model",
    "low_diameter_core", "make_graph", "path_between",
    "reduce_degree", "region_grow_partition", "route_group_family",
    "route_matching", "routing_params", "save_graph", "save_model",
    "solve_uniform_mcf", "spanning_tree_grouping", "sweep_cut", "verify_model",
]
