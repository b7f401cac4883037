"""Deadlock-free static routing over allowed turns."""

from __future__ import annotations

from .cdg import (
    VC_COUNT,
    AllowedTurnSet,
    CompleteCdg,
    add_turns,
    base_turns,
    build_cdg,
    cdg_is_acyclic,
    tree_turns,
    vc_variants,
)
from .ilp import LoadProfile, RoutingTable, link_loads, route_ilp
from .io import read_routes, write_load_profile, write_routes
from .paths import PATH_CAP, PathSet, allowed_paths, shortest_paths
from .priority import all_path_turn_frequency, turn_priority_order
from .turns import RoutingResult, allowed_turns, bfs_tree, central_node, route_topology, router_tree
from .vc import assign_vcs, verify_deadlock_free

__all__ = [
    "PATH_CAP",
    "VC_COUNT",
    "AllowedTurnSet",
    "CompleteCdg",
    "LoadProfile",
    "PathSet",
    "RoutingResult",
    "RoutingTable",
    "add_turns",
    "all_path_turn_frequency",
    "allowed_paths",
    "allowed_turns",
    "assign_vcs",
    "base_turns",
    "bfs_tree",
    "build_cdg",
    "cdg_is_acyclic",
    "central_node",
    "link_loads",
    "read_routes",
    "route_ilp",
    "route_topology",
    "router_tree",
    "shortest_paths",
    "tree_turns",
    "turn_priority_order",
    "vc_variants",
    "verify_deadlock_free",
    "write_load_profile",
    "write_routes",
]
