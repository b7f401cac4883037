"""Small graph builders shared by the test modules."""

from __future__ import annotations

from collections import Counter

import networkx as nx
import numpy as np

from podsynth.pod import Topology
from podsynth.routing import link_loads
from podsynth.routing.paths import PathSet


def random_connected(n: int, p: float, seed: int, directed: bool = False) -> Topology:
    """Erdos-Renyi graph (strongly) connected by a ring."""
    rng = np.random.default_rng(seed)
    edges = {(i, (i + 1) % n) for i in range(n)}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                edges.add((u, v))
    if not directed:
        edges = {(min(e), max(e)) for e in edges}
    return Topology.generic(n, edges, directed)


def to_nx(topo: Topology):
    g = nx.DiGraph() if topo.directed else nx.Graph()
    g.add_nodes_from(range(topo.n))
    g.add_edges_from(topo.edges)
    return g


def complete(n: int) -> Topology:
    return Topology.generic(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def ring(n: int) -> Topology:
    return Topology.generic(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Topology:
    return Topology.generic(n, [(i, i + 1) for i in range(n - 1)])


def brute_force_lmax(paths: PathSet) -> int:
    """Exhaustive search over path choices (depth-first, pruned by the incumbent)."""
    fixed: Counter = Counter()
    multi = []
    for pr in paths.pairs():
        cands = paths[pr]
        if len(cands) == 1:
            fixed.update(link_loads([cands[0]]))
        else:
            multi.append([list(link_loads([c])) for c in cands])
    best = [10**9]

    def dfs(i: int, load: Counter, cur: int) -> None:
        if cur >= best[0]:
            return
        if i == len(multi):
            best[0] = cur
            return
        for links in multi[i]:
            for l in links:
                load[l] += 1
            dfs(i + 1, load, max(cur, max(load[l] for l in links)))
            for l in links:
                load[l] -= 1

    dfs(0, Counter(fixed), max(fixed.values(), default=0))
    return best[0]
