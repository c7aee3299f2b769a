"""Approximation toolkit for the minimum 2-edge-connected spanning subgraph
problem: exact oracles, reduction preprocessing, canonical triangle-free
covers, credit-audited bridge covering / gluing / merging, and a CLI."""

from .graph import MultiGraph
from .params import StructuredParams, desk_params, get_profile, paper_params

__all__ = ["MultiGraph", "StructuredParams", "desk_params", "get_profile",
           "paper_params"]
