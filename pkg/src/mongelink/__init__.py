"""Shortest M-link paths in Monge DAGs in linear space.

>>> from mongelink import convex_sq, shortest_m_link_path
>>> shortest_m_link_path(convex_sq(6), 3).length
9
"""
from .baseline import brute_force, dp_full
from .cc import find_lambda, shortest_m_link_path, solve
from .kernels import available as available_backends
from .monge_core import (ContractedView, CostOracle, ExtendedCost, LinkPath, convex_sq,
                         from_callable, from_dense, gen_convex_gap, gen_random_monge,
                         generate, linear, segmentation_oracle, verify_submodular)
from .parametric import classify, extract_path, swap_minus, swap_plus
from .pbf import pbf
from .smawk import ImplicitMatrix, TieRule, row_minima
from .spt import SptMode, build_spt, depth_of, tree_path
from .workspace import CellAccountant, DpWorkspace

__version__ = "0.1.0"

__all__ = [
    "CellAccountant", "ContractedView", "CostOracle", "DpWorkspace", "ExtendedCost",
    "ImplicitMatrix", "LinkPath", "SptMode", "TieRule", "available_backends",
    "brute_force", "build_spt", "classify", "convex_sq", "depth_of", "dp_full",
    "extract_path", "find_lambda", "from_callable", "from_dense", "gen_convex_gap",
    "gen_random_monge", "generate", "linear", "pbf", "row_minima", "segmentation_oracle",
    "shortest_m_link_path", "solve", "swap_minus", "swap_plus", "tree_path",
    "verify_submodular",
]
