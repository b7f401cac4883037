"""Single-OCS fault tolerance.

An OCS fault removes every optical link switched by that OCS.  Two spanning
trees of the cube graph that use disjoint OCS sets keep the pod connected
under any single fault; the throughput certificate ``lam >= (f+1)/(32 n)``
guarantees enough distinct OCS colors cross every cube partition for such
trees to exist.
"""

from __future__ import annotations

import csv
import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .lp import Budget
from .pod import NUM_OCS, OcsId, Topology, all_ocs, cube_graph_edges
from .routing.cdg import AllowedTurnSet
from .routing.ilp import LoadProfile, RoutingTable, route_ilp
from .routing.paths import PATH_CAP, allowed_paths

MAX_FAULT_BUDGET = NUM_OCS - 1
EXHAUSTIVE_CUBES = 8


class FaultBudgetError(ValueError):
    pass


class TreeConstructionError(RuntimeError):
    def __init__(self, message: str, frontier: tuple[list[int], list[int]]) -> None:
        super().__init__(message)
        self.frontier = frontier


@dataclass(frozen=True)
class Certificate:
    ok: bool
    t_max: int
    required: float


def fault_certificate(lam: float, n: int, f: int) -> Certificate:
    """``lam >= (f+1)/(32 n)``; ``t_max = min(floor(32 n lam), 48)`` disjoint trees are implied."""
    if f < 0 or f > MAX_FAULT_BUDGET:
        raise FaultBudgetError(f"fault budget must lie in [0, {MAX_FAULT_BUDGET}], got {f}")
    if n < 1:
        raise ValueError("n must be positive")
    required = (f + 1) / (32.0 * n)
    t_max = min(math.floor(32.0 * n * lam + 1e-9), NUM_OCS)
    return Certificate(lam >= required, t_max, required)


@dataclass(frozen=True)
class SpanningTreePair:
    """Two cube-graph spanning trees (optical links) with disjoint OCS sets."""

    tree0: tuple[tuple[int, int], ...]
    tree1: tuple[tuple[int, int], ...]
    colors0: frozenset[int]
    colors1: frozenset[int]
    roots: tuple[int, int]


def _cube_links(topo: Topology) -> dict[int, list[tuple[int, tuple[int, int], int]]]:
    """Per cube: (neighbour cube, edge, OCS index), sorted."""
    adj: dict[int, list[tuple[int, tuple[int, int], int]]] = {}
    for ca, cb, e, ocs in cube_graph_edges(topo):
        adj.setdefault(ca, []).append((cb, e, ocs.index))
        adj.setdefault(cb, []).append((ca, e, ocs.index))
    for v in adj.values():
        v.sort()
    return adj


def _cube_distances(num: int, adj) -> np.ndarray:
    dist = np.full((num, num), -1, dtype=np.int64)
    for s in range(num):
        dist[s, s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v, _, _ in adj.get(u, ()):
                if dist[s, v] < 0:
                    dist[s, v] = dist[s, u] + 1
                    q.append(v)
    return dist


def ocs_disjoint_trees(topo: Topology) -> SpanningTreePair:
    """Grow two OCS-disjoint spanning trees of the cube graph concurrently.

    Roots are the lexicographically smallest pair of cubes at maximum hop
    distance.  The trees take turns; each turn expands one cube from that
    tree's BFS queue, claiming links to cubes it has not reached yet whose
    OCS is not owned by the other tree (links on OCSs the tree already owns
    first, then by OCS index and edge).
    """
    skel = topo.skeleton
    if skel is None:
        raise ValueError("OCS trees need a pod topology")
    num = skel.config.num_cubes
    if num == 1:
        return SpanningTreePair((), (), frozenset(), frozenset(), (0, 0))
    adj = _cube_links(topo)
    dist = _cube_distances(num, adj)
    if (dist < 0).any():
        raise TreeConstructionError("cube graph is disconnected", ([], []))
    far = int(dist.max())
    a, b = min((i, j) for i in range(num) for j in range(num) if dist[i, j] == far)
    roots = (a, b)
    reached = [{a}, {b}]
    colors: list[set[int]] = [set(), set()]
    edges: list[list[tuple[int, int]]] = [[], []]
    queues = [deque([a]), deque([b])]
    while len(reached[0]) < num or len(reached[1]) < num:
        moved = False
        for tree in (0, 1):
            if len(reached[tree]) == num or not queues[tree]:
                continue
            u = queues[tree].popleft()
            other = colors[1 - tree]
            options = sorted(
                (c not in colors[tree], c, e, v) for v, e, c in adj.get(u, ()) if v not in reached[tree] and c not in other
            )
            for _, c, e, v in options:
                if v in reached[tree]:
                    continue
                reached[tree].add(v)
                colors[tree].add(c)
                edges[tree].append(e)
                queues[tree].append(v)
            moved = True
        if not moved:
            frontier = ([c for c in range(num) if c not in reached[0]], [c for c in range(num) if c not in reached[1]])
            raise TreeConstructionError("concurrent growth stalled before spanning every cube", frontier)
    return SpanningTreePair(tuple(edges[0]), tuple(edges[1]), frozenset(colors[0]), frozenset(colors[1]), roots)


# ---------------------------------------------------------------------------
# partition condition
# ---------------------------------------------------------------------------


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


@dataclass
class PartitionReport:
    t: int
    checked: int = 0
    exhaustive: bool = True
    violations: list[tuple[tuple[tuple[int, ...], ...], int]] = field(default_factory=list)
    min_margin: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.violations


def nash_williams_check(topo: Topology, t: int = 2, samples: int = 2000, seed: int = 0) -> PartitionReport:
    """Every cube partition into k parts must see >= t(k-1) distinct crossing OCS colors.

    Exhaustive up to 8 cubes; above that ``samples`` random partitions are drawn.
    """
    skel = topo.skeleton
    if skel is None:
        raise ValueError("partition check needs a pod topology")
    num = skel.config.num_cubes
    links = [(ca, cb, ocs.index) for ca, cb, _, ocs in cube_graph_edges(topo)]
    report = PartitionReport(t)

    def check(parts: list[list[int]]) -> None:
        k = len(parts)
        if k < 2:
            return
        label = {c: i for i, p in enumerate(parts) for c in p}
        crossing = {c for ca, cb, c in links if label[ca] != label[cb]}
        need = t * (k - 1)
        report.checked += 1
        margin = len(crossing) - need
        report.min_margin = min(report.min_margin, margin)
        if margin < 0:
            report.violations.append((tuple(tuple(sorted(p)) for p in parts), len(crossing)))

    if num <= EXHAUSTIVE_CUBES:
        for parts in set_partitions(list(range(num))):
            check(parts)
    else:
        report.exhaustive = False
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            k = int(rng.integers(2, num + 1))
            lab = rng.integers(0, k, size=num)
            parts = [list(np.flatnonzero(lab == i)) for i in range(k)]
            check([p for p in parts if p])
    return report


# ---------------------------------------------------------------------------
# routing under faults
# ---------------------------------------------------------------------------


@dataclass
class FaultResult:
    ocs: OcsId | None
    table: RoutingTable | None
    profile: LoadProfile | None
    unreachable: list[tuple[int, int]]

    @property
    def l_max(self) -> int | None:
        return self.profile.l_max if self.profile is not None else None


def failed_arcs(topo: Topology, ocs: OcsId) -> list[tuple[int, int]]:
    out = []
    for e in sorted(topo.optical):
        if topo.ocs_of(e) == ocs:
            out.extend([e, (e[1], e[0])])
    return out


def route_under_faults(
    topo: Topology,
    A_robust: AllowedTurnSet,
    scenarios: Iterable[OcsId | None] | None = None,
    k: int = PATH_CAP,
    budget: Budget | None = None,
    method: str = "auto",
    route: bool = True,
) -> list[FaultResult]:
    """Route every scenario (default: no fault, then each of the 48 OCSs) within ``A_robust``.

    With ``route=False`` only reachability is computed.
    """
    if scenarios is None:
        scenarios = [None, *all_ocs()]
    results = []
    for ocs in scenarios:
        dead = failed_arcs(topo, ocs) if ocs is not None else []
        P = allowed_paths(A_robust, k, dead)
        table = profile = None
        if route and not P.unreachable:
            table = route_ilp(P, budget=budget, method=method)
            profile = table.load_profile()
        results.append(FaultResult(ocs, table, profile, list(P.unreachable)))
    return results


def write_fault_report(results: Sequence[FaultResult], path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "l_max", "inv_l_max", "unreachable"])
        for r in results:
            name = "none" if r.ocs is None else str(r.ocs)
            lm = r.l_max
            w.writerow([name, "" if lm is None else lm, "" if not lm else f"{1.0 / lm:.6g}", len(r.unreachable)])
