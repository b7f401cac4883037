"""Pure-Python graph kernels (reference implementation and import fallback)."""

from __future__ import annotations

from collections import deque

import numpy as np


def bfs_multi(indptr: np.ndarray, indices: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Hop distance from the nearest source; -1 where unreachable."""
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    dist = [-1] * n
    q: deque[int] = deque()
    for s in np.asarray(sources).tolist():
        if dist[s] < 0:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for k in range(ip[u], ip[u + 1]):
            v = ix[k]
            if dist[v] < 0:
                dist[v] = du
                q.append(v)
    return np.asarray(dist, dtype=np.int32)


def apsp_bfs(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """All-pairs hop distances, row per source; -1 where unreachable."""
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    out = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for k in range(ip[u], ip[u + 1]):
                    v = ix[k]
                    if dist[v] < 0:
                        dist[v] = d
                        nxt.append(v)
            frontier = nxt
        out[s] = dist
    return out


class DynamicDAG:
    """Directed graph kept acyclic under edge insertions (Pearce-Kelly ordering).

    ``add_edge`` refuses an edge that would close a cycle and leaves the
    graph untouched in that case.  Removals never create cycles, so they only
    update adjacency.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.out: list[set[int]] = [set() for _ in range(n)]
        self.inc: list[set[int]] = [set() for _ in range(n)]
        self.ord = list(range(n))
        self.at = list(range(n))
        self.num_edges = 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out[u]

    def add_edge(self, u: int, v: int) -> bool:
        if v in self.out[u]:
            return True
        if u == v:
            return False
        lb, ub = self.ord[v], self.ord[u]
        if lb < ub:
            # forward search from v within the affected window
            fwd: list[int] = []
            seen = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                fwd.append(x)
                for w in self.out[x]:
                    ow = self.ord[w]
                    if ow == ub:
                        return False
                    if w not in seen and ow < ub:
                        seen.add(w)
                        stack.append(w)
            bwd: list[int] = []
            seen_b = {u}
            stack = [u]
            while stack:
                x = stack.pop()
                bwd.append(x)
                for w in self.inc[x]:
                    if w not in seen_b and self.ord[w] > lb:
                        seen_b.add(w)
                        stack.append(w)
            fwd.sort(key=self.ord.__getitem__)
            bwd.sort(key=self.ord.__getitem__)
            nodes = bwd + fwd
            slots = sorted(self.ord[x] for x in nodes)
            for x, p in zip(nodes, slots):
                self.ord[x] = p
                self.at[p] = x
        self.out[u].add(v)
        self.inc[v].add(u)
        self.num_edges += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        if v in self.out[u]:
            self.out[u].discard(v)
            self.inc[v].discard(u)
            self.num_edges -= 1

    def order(self) -> np.ndarray:
        """Nodes in a topological order."""
        return np.asarray(self.at, dtype=np.int64)
