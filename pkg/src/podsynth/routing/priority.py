"""Turn insertion orders for allowed-turn construction."""

from __future__ import annotations

from collections import Counter
from typing import Mapping, Sequence

import numpy as np

from ..kernels import apsp_bfs
from ..pod import Topology
from .cdg import BaseTurn, base_turns

SCHEMES = ("apl", "cpl", "random")


def path_counts(dist: np.ndarray, nbrs: Sequence[Sequence[int]]) -> np.ndarray:
    """``sigma[s, v]``: number of shortest s -> v paths (float, exact for moderate n)."""
    n = dist.shape[0]
    sigma = np.zeros((n, n))
    for s in range(n):
        order = np.argsort(dist[s], kind="stable")
        sig = sigma[s]
        sig[s] = 1.0
        ds = dist[s]
        for u in order.tolist():
            if ds[u] < 0:
                continue
            su = sig[u]
            for v in nbrs[u]:
                if ds[v] == ds[u] + 1:
                    sig[v] += su
    return sigma


def all_path_turn_frequency(topo: Topology) -> dict[BaseTurn, float]:
    """How many shortest paths (over all ordered pairs) use each base turn.

    Counted exactly: a turn ``i -> j -> k`` lies on ``sigma(s, i) * beta_s(k)``
    shortest paths from ``s``, where ``beta_s(k)`` sums the shortest-path
    counts from ``k`` to every target that ``k`` lies on the way to.
    """
    indptr, indices = topo.csr
    dist = apsp_bfs(indptr, indices).astype(np.int64)
    nbrs = topo.out_neighbors
    sigma = path_counts(dist, nbrs)
    n = topo.n
    # beta[s, k] = sum_t sigma[k, t] * [dist[s, k] + dist[k, t] == dist[s, t]]
    beta = np.zeros((n, n))
    for s in range(n):
        on_way = (dist[s][:, None] + dist) == dist[s][None, :]
        beta[s] = (sigma * on_way).sum(axis=1)
    turns = base_turns(topo)
    if not turns:
        return {}
    T = np.array(turns, dtype=np.int64)
    I, J, K = T[:, 0], T[:, 1], T[:, 2]
    di, dj, dk = dist[:, I], dist[:, J], dist[:, K]
    ok = (dj == di + 1) & (dk == di + 2) & (di >= 0)
    freq = (sigma[:, I] * beta[:, K] * ok).sum(axis=0)
    return {t: float(f) for t, f in zip(turns, freq.tolist())}


def chosen_path_turn_frequency(routes: Mapping[tuple[int, int], Sequence[int]]) -> Counter:
    freq: Counter = Counter()
    for path in routes.values():
        for a in range(len(path) - 2):
            freq[(path[a], path[a + 1], path[a + 2])] += 1
    return freq


def turn_priority_order(
    topo: Topology,
    scheme: str,
    prior_routing: Mapping[tuple[int, int], Sequence[int]] | None = None,
    seed: int = 0,
) -> list[BaseTurn]:
    """Every base turn, most frequent first; ties (and zero counts) in lexicographic order."""
    scheme = scheme.lower()
    turns = base_turns(topo)
    if scheme == "random":
        rng = np.random.default_rng(seed)
        return [turns[i] for i in rng.permutation(len(turns))]
    if scheme == "apl":
        freq = all_path_turn_frequency(topo)
    elif scheme == "cpl":
        if prior_routing is None:
            raise ValueError("CPL ordering needs a prior routing")
        freq = chosen_path_turn_frequency(prior_routing)
    else:
        raise ValueError(f"unknown priority scheme {scheme!r}; expected one of {SCHEMES}")
    return sorted(turns, key=lambda t: (-freq.get(t, 0), t))
