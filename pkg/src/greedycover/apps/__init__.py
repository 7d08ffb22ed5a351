"""Adapters that build greedy systems and product systems for concrete problems.

The generalized Steiner tree problem also fits the product framework (cut
rows of the remaining forest, witnesses found by contracting the chosen
edges), but no adapter is provided for it.
"""

from .common import check_supermodular, complement, unit_cover_system
from .flow_cover import Candidate, FlowCoverInstance, build_flow_cover_lines
from .knapsack import (
    KnapsackInstance,
    KnapsackItem,
    aggregate_counts,
    build_knapsack_cover,
    copy_layout,
    is_ideal_shaped,
    knapsack_greedy,
)
from .multicut import MulticutInstance, build_multicut_tree, tree_path
from .polymatroid import ContraPolymatroidInstance, build_contra_polymatroid, build_intersection
from .precedence import PrecedenceKnapsackInstance, build_precedence_knapsack, is_ideal, width
from .subset_cover import SubsetCoverInstance, build_subset_cover, is_cover

__all__ = [
    "Candidate",
    "ContraPolymatroidInstance",
    "FlowCoverInstance",
    "KnapsackInstance",
    "KnapsackItem",
    "MulticutInstance",
    "PrecedenceKnapsackInstance",
    "SubsetCoverInstance",
    "aggregate_counts",
    "build_contra_polymatroid",
    "build_flow_cover_lines",
    "build_intersection",
    "build_knapsack_cover",
    "build_multicut_tree",
    "build_precedence_knapsack",
    "build_subset_cover",
    "check_supermodular",
    "complement",
    "copy_layout",
    "is_cover",
    "is_ideal",
    "is_ideal_shaped",
    "knapsack_greedy",
    "tree_path",
    "unit_cover_system",
    "width",
]
