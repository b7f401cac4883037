"""Candidate path sets: shortest paths, optionally restricted to allowed turns.

Paths are node tuples.  Per pair, at most ``k`` paths are kept, the
lexicographically smallest ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..kernels import apsp_bfs, bfs_multi
from ..pod import Topology
from .cdg import AllowedTurnSet

PATH_CAP = 16

Path = tuple[int, ...]
Pair = tuple[int, int]


@dataclass
class PathSet:
    n: int
    paths: dict[Pair, list[Path]] = field(default_factory=dict)
    unreachable: list[Pair] = field(default_factory=list)

    def pairs(self) -> list[Pair]:
        return sorted(self.paths)

    def __getitem__(self, pair: Pair) -> list[Path]:
        return self.paths[pair]

    def __len__(self) -> int:
        return len(self.paths)

    def total(self) -> int:
        return sum(len(p) for p in self.paths.values())


def _reverse_csr(indptr: np.ndarray, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(indptr) - 1
    tails = np.repeat(np.arange(n), np.diff(indptr))
    order = np.lexsort((tails, indices))
    rptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(rptr, indices.astype(np.int64) + 1, 1)
    np.cumsum(rptr, out=rptr)
    return rptr, tails[order].astype(np.int32)


def shortest_paths(topo: Topology, k: int = PATH_CAP, dead_arcs: Iterable[Pair] = ()) -> PathSet:
    """Up to ``k`` shortest paths per ordered pair with no turn restrictions."""
    dead = set(dead_arcs)
    arcs = [a for a in topo.arcs if a not in dead]
    nbrs: list[list[int]] = [[] for _ in range(topo.n)]
    for u, v in arcs:
        nbrs[u].append(v)
    indptr = np.zeros(topo.n + 1, dtype=np.int64)
    for u, _ in arcs:
        indptr[u + 1] += 1
    np.cumsum(indptr, out=indptr)
    indices = np.array([v for _, v in arcs], dtype=np.int32)
    # distances *to* t: BFS on the reversed graph
    rptr, rind = _reverse_csr(indptr, indices)
    dist_to = apsp_bfs(rptr, rind)  # dist_to[t, u] = hops u -> t
    out = PathSet(topo.n)
    for s in range(topo.n):
        for t in range(topo.n):
            if s == t:
                continue
            dt = dist_to[t]
            if dt[s] < 0:
                out.unreachable.append((s, t))
                continue
            found: list[Path] = []
            stack: list[Path] = [(s,)]
            while stack and len(found) < k:
                p = stack.pop()
                u = p[-1]
                if u == t:
                    found.append(p)
                    continue
                want = dt[u] - 1
                nxt = [v for v in nbrs[u] if dt[v] == want]
                for v in sorted(nxt, reverse=True):
                    stack.append(p + (v,))
            out.paths[(s, t)] = found
    return out


def allowed_paths(A: AllowedTurnSet, k: int = PATH_CAP, dead_arcs: Iterable[Pair] = ()) -> PathSet:
    """Up to ``k`` shortest paths per pair realizable on admitted turns.

    A node path qualifies when some VC labeling of its hops uses only
    admitted turns.  Search runs over channels, so a path may switch VCs.
    """
    topo = A.topo
    V = A.vc_count
    dead = set(dead_arcs)
    indptr, indices = A.channel_graph(dead)
    rptr, rind = _reverse_csr(indptr, indices)
    ip, ix = indptr.tolist(), indices.tolist()
    arcs = topo.arcs
    alive_arc = [a not in dead for a in arcs]
    nc = len(arcs) * V
    head = [arcs[c // V][1] for c in range(nc)]
    out_ch: list[list[int]] = [[] for _ in range(topo.n)]
    in_ch: list[list[int]] = [[] for _ in range(topo.n)]
    for ai, (u, v) in enumerate(arcs):
        if alive_arc[ai]:
            for vc in range(V):
                out_ch[u].append(ai * V + vc)
                in_ch[v].append(ai * V + vc)
    result = PathSet(topo.n)
    for t in range(topo.n):
        h = bfs_multi(rptr, rind, np.asarray(in_ch[t], dtype=np.int64)).tolist()
        for s in range(topo.n):
            if s == t:
                continue
            starts = [c for c in out_ch[s] if h[c] >= 0]
            if not starts:
                result.unreachable.append((s, t))
                continue
            best = min(h[c] for c in starts)
            found: list[Path] = []
            # stack entries: (node path, channels consistent with it at the required distance)
            first: dict[int, list[int]] = {}
            for c in starts:
                if h[c] == best:
                    first.setdefault(head[c], []).append(c)
            stack = [((s, v), first[v]) for v in sorted(first, reverse=True)]
            while stack and len(found) < k:
                p, chans = stack.pop()
                if p[-1] == t:
                    found.append(p)
                    continue
                groups: dict[int, list[int]] = {}
                for c in chans:
                    want = h[c] - 1
                    for q in range(ip[c], ip[c + 1]):
                        c2 = ix[q]
                        if h[c2] == want:
                            groups.setdefault(head[c2], []).append(c2)
                for v in sorted(groups, reverse=True):
                    stack.append((p + (v,), sorted(set(groups[v]))))
            result.paths[(s, t)] = found
    return result
