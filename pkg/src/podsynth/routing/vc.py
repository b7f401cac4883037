"""VC assignment for chosen routes and deadlock verification."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..pod import Topology
from .cdg import AllowedTurnSet, cdg_is_acyclic
from .ilp import LoadProfile, RoutingTable, link_loads
from .paths import Pair

VcAssignment = dict[Pair, tuple[int, ...]]


def _label_path(path: Sequence[int], A: AllowedTurnSet, prefer: int) -> tuple[int, ...]:
    """VC per hop using only admitted turns, staying on ``prefer`` whenever possible."""
    V = A.vc_count
    hops = len(path) - 1
    if hops <= 0:
        return ()
    # feasible[h][v]: hops h.. can be labeled when hop h uses VC v
    feasible = [[False] * V for _ in range(hops)]
    feasible[hops - 1] = [True] * V
    for h in range(hops - 2, -1, -1):
        i, j, k = path[h], path[h + 1], path[h + 2]
        for a in range(V):
            feasible[h][a] = any(feasible[h + 1][b] and (i, j, k, a, b) in A for b in range(V))
    order = [prefer] + [v for v in range(V) if v != prefer]
    labels: list[int] = []
    cur = next((v for v in order if feasible[0][v]), None)
    if cur is None:
        raise AssertionError(f"path {tuple(path)} has no admitted VC labeling")
    labels.append(cur)
    for h in range(1, hops):
        i, j, k = path[h - 1], path[h], path[h + 1]
        cur = next(v for v in order if feasible[h][v] and (i, j, k, cur, v) in A)
        labels.append(cur)
    return tuple(labels)


def assign_vcs(routing: RoutingTable, A: AllowedTurnSet, balanced: bool = True) -> tuple[VcAssignment, LoadProfile]:
    """Label every route's hops with VCs, pairs in sorted order.

    Balanced: before each route, the VC with the fewest hops so far becomes
    the preferred one (ties to VC 0).  Naive: always prefer VC 0.
    """
    V = A.vc_count
    hops = [0] * V
    vcs: VcAssignment = {}
    for pr in sorted(routing.routes):
        prefer = min(range(V), key=lambda v: (hops[v], v)) if balanced else 0
        labels = _label_path(routing.routes[pr], A, prefer)
        for v in labels:
            hops[v] += 1
        vcs[pr] = labels
    profile = LoadProfile(dict(link_loads(routing.routes.values())), hops)
    return vcs, profile


def verify_deadlock_free(routing: RoutingTable | Mapping[Pair, Sequence[int]], vcs: Mapping[Pair, Sequence[int]], topo: Topology) -> bool:
    """True iff the CDG induced by exactly the used labeled turns is acyclic."""
    routes = routing.routes if isinstance(routing, RoutingTable) else routing
    index = topo.arc_index
    V = 1 + max((max(v) for v in vcs.values() if len(v)), default=0)
    arcs = []
    for pr, path in routes.items():
        labels = vcs[pr]
        if len(labels) != len(path) - 1:
            raise ValueError(f"route {pr} has {len(path) - 1} hops but {len(labels)} VC labels")
        for h in range(len(path) - 1):
            if (path[h], path[h + 1]) not in index:
                raise ValueError(f"route {pr} uses missing link {(path[h], path[h + 1])}")
        for h in range(len(path) - 2):
            cu = index[(path[h], path[h + 1])] * V + labels[h]
            cv = index[(path[h + 1], path[h + 2])] * V + labels[h + 1]
            arcs.append((cu, cv))
    return cdg_is_acyclic(len(topo.arcs) * V, arcs)
