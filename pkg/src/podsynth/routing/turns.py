"""Allowed-turn construction and the end-to-end routing pipeline."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..kernels import apsp_bfs
from ..lp import Budget
from ..pod import CUBE_NODES, Topology, is_translation_invariant
from .cdg import VC_COUNT, AllowedTurnSet, BaseTurn, LabeledTurn, add_turns, build_cdg, tree_turns
from .ilp import LoadProfile, RoutingTable, route_ilp
from .paths import PATH_CAP, PathSet, allowed_paths
from .priority import turn_priority_order
from .vc import VcAssignment, assign_vcs

log = logging.getLogger(__name__)


def central_node(topo: Topology) -> int:
    """Minimum-eccentricity node, lowest index on ties."""
    indptr, indices = topo.csr
    dist = apsp_bfs(indptr, indices)
    if (dist < 0).any():
        raise ValueError("topology is disconnected")
    return int(np.argmin(dist.max(axis=1)))


def bfs_tree(topo: Topology, root: int, allowed: set[tuple[int, int]] | None = None) -> list[tuple[int, int]]:
    """BFS spanning tree edges (neighbours visited in ascending order)."""
    seen = {root}
    q = deque([root])
    edges = []
    while q:
        u = q.popleft()
        for v in topo.out_neighbors[u]:
            if v in seen:
                continue
            if allowed is not None and (min(u, v), max(u, v)) not in allowed:
                continue
            seen.add(v)
            edges.append((u, v))
            q.append(v)
    return edges


def router_tree(topo: Topology, cube_tree_edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lift a cube-level optical tree to a router spanning tree via electrical trees per cube."""
    skel = topo.skeleton
    if skel is None:
        raise ValueError("router trees need a pod topology")
    electrical = set(skel.electrical_edges)
    edges = list(cube_tree_edges)
    for c in range(skel.config.num_cubes):
        edges.extend(bfs_tree(topo, c * CUBE_NODES, electrical))
    return edges


def _symmetry_classes(topo: Topology):
    skel = topo.skeleton
    tables = [skel.translation_table(t) for t in skel.translations]  # type: ignore[union-attr]

    def classes(t: LabeledTurn) -> list[LabeledTurn]:
        i, j, k, a, b = t
        return sorted({(int(tb[i]), int(tb[j]), int(tb[k]), a, b) for tb in tables})

    return classes


def allowed_turns(
    topo: Topology,
    priority: str = "apl",
    robust: bool = False,
    seed: int = 0,
    prior_routing: Mapping[tuple[int, int], Sequence[int]] | None = None,
    symmetry: bool = False,
    vc_count: int = VC_COUNT,
    k: int = PATH_CAP,
) -> tuple[AllowedTurnSet, PathSet]:
    """Greedy deadlock-free turn set and the shortest allowed paths within it.

    1. ``robust``: turns of two OCS-disjoint router trees, forced to VC 0 and VC 1.
    2. Turns of a BFS tree from the most central node, forced to VC 0.
    3. Prioritized turns, at most one VC variant each, then every variant.
    4. Up to ``k`` shortest allowed paths per pair.
    """
    cdg = build_cdg(topo, vc_count)
    A = AllowedTurnSet.empty(cdg)
    classes = None
    if symmetry:
        if topo.skeleton is None or not is_translation_invariant(topo):
            raise ValueError("symmetry mode needs a translation-invariant pod topology")
        classes = _symmetry_classes(topo)
    seeds: list[tuple[list[BaseTurn], int]] = []
    if robust:
        from ..fault import ocs_disjoint_trees

        pair = ocs_disjoint_trees(topo)
        seeds.append((tree_turns(topo, router_tree(topo, pair.tree0)), 0))
        seeds.append((tree_turns(topo, router_tree(topo, pair.tree1)), 1 % vc_count))
    seeds.append((tree_turns(topo, bfs_tree(topo, central_node(topo))), 0))
    for turns, vc in seeds:
        add_turns(A, turns, force_vc=vc, classes=classes)
        if classes is not None:
            # a rejected class may still hold tree turns needed for routability
            add_turns(A, turns, force_vc=vc)
    order = turn_priority_order(topo, priority, prior_routing, seed)
    add_turns(A, order, single_turn=True, classes=classes)
    add_turns(A, order, classes=classes)
    A.translation_invariant = symmetry and _closed(A, classes)
    P = allowed_paths(A, k)
    if P.unreachable:
        raise AssertionError(f"pair {P.unreachable[0]} has no allowed path")
    return A, P


def _closed(A: AllowedTurnSet, classes) -> bool:
    return all(u in A for t in A.admitted for u in classes(t))


@dataclass
class RoutingResult:
    turns: AllowedTurnSet
    paths: PathSet
    table: RoutingTable
    vcs: VcAssignment
    profile: LoadProfile


def route_topology(
    topo: Topology,
    priority: str = "cpl",
    robust: bool = False,
    seed: int = 0,
    balanced: bool = True,
    budget: Budget | None = None,
    method: str = "auto",
    k: int = PATH_CAP,
) -> RoutingResult:
    """Allowed turns, route selection and VC assignment.

    CPL needs a previous routing: an APL pass is routed first and its chosen
    paths set the order for the final pass.
    """
    prior = None
    if priority.lower() == "cpl":
        A0, P0 = allowed_turns(topo, "apl", robust, seed, k=k)
        prior = route_ilp(P0, budget=budget, method=method).routes
    A, P = allowed_turns(topo, priority, robust, seed, prior_routing=prior, k=k)
    table = route_ilp(P, budget=budget, method=method)
    vcs, profile = assign_vcs(table, A, balanced)
    return RoutingResult(A, P, table, vcs, profile)
