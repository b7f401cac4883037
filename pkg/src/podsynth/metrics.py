"""Analytical topology metrics: hop statistics, MCF and cut bounds.

MCF is reported for uniform demand: one unit per unordered node pair on
undirected graphs (unit capacity per link), one unit per ordered pair on
directed graphs (unit capacity per arc).
"""

from __future__ import annotations

import csv
import itertools
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .kernels import apsp_bfs
from .lp import LinearModel, Status, solve_lp
from .pod import Topology

ORACLE_MAX_NODES = 16


class DisconnectedError(ValueError):
    pass


@dataclass
class SemiMetric:
    """Pairwise distances ``d[i, j]`` (symmetric unless ``directed``)."""

    d: np.ndarray
    directed: bool = False

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def closure(self) -> "SemiMetric":
        """Shortest-path closure (Floyd-Warshall on the current values)."""
        c = self.d.copy()
        for k in range(self.n):
            np.minimum(c, c[:, k : k + 1] + c[k : k + 1, :], out=c)
        return SemiMetric(c, self.directed)

    def max_triangle_violation(self) -> float:
        d = self.d
        worst = 0.0
        for k in range(self.n):
            worst = max(worst, float(np.max(d - d[:, k : k + 1] - d[k : k + 1, :])))
        return worst


@dataclass
class MetricReport:
    name: str = ""
    nodes: int = 0
    diameter: int | None = None
    avg_hops: float | None = None
    mcf: float | None = None
    per_source_injection: float | None = None
    extra: dict[str, float] = field(default_factory=dict)

    def row(self) -> dict[str, object]:
        out = {k: v for k, v in asdict(self).items() if k != "extra"}
        out.update(self.extra)
        return out


def write_reports(reports: Sequence[MetricReport], dest: str | os.PathLike) -> None:
    rows = [r.row() for r in reports]
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    with open(dest, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        w.writerows(rows)


# ---------------------------------------------------------------------------
# hop statistics
# ---------------------------------------------------------------------------


def distance_matrix(topo: Topology) -> np.ndarray:
    indptr, indices = topo.csr
    return apsp_bfs(indptr, indices)


def apsp_stats(topo: Topology) -> MetricReport:
    """Diameter and mean hop count over ordered distinct pairs."""
    if topo.n < 2:
        raise ValueError("hop statistics need at least two nodes")
    dist = distance_matrix(topo)
    bad = np.argwhere(dist < 0)
    if bad.size:
        s, t = (int(x) for x in bad[0])
        raise DisconnectedError(f"node {t} is unreachable from node {s}")
    n = topo.n
    return MetricReport(topo.name, n, int(dist.max()), float(dist.sum()) / (n * (n - 1)))


def evaluate(topo: Topology, with_mcf: bool = True) -> MetricReport:
    from .synth import mcf_of_fixed

    rep = apsp_stats(topo)
    if with_mcf:
        rep.mcf = mcf_of_fixed(topo)
        rep.per_source_injection = rep.mcf * topo.n
    return rep


# ---------------------------------------------------------------------------
# MCF: Leighton-Rao primal and explicit flow oracle
# ---------------------------------------------------------------------------


def _require_connected(topo: Topology) -> None:
    apsp_stats(topo)


def mcf_lr(topo: Topology, one_leg: bool = True, method: str = "highs") -> tuple[float, SemiMetric]:
    """Minimum-volume semi-metric: ``min sum_e d_e`` s.t. ``sum_pairs d = 1`` and triangles.

    With ``one_leg`` the triangle ``d(i,j) <= d(i,k) + d(k,j)`` is kept only
    when ``(i,k)`` is a link.  Returns the optimum (the MCF) and the metric.
    """
    _require_connected(topo)
    n = topo.n
    directed = topo.directed
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = list(itertools.combinations(range(n), 2))
    pid = np.full((n, n), -1, dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        pid[i, j] = k
        if not directed:
            pid[j, i] = k
    model = LinearModel("min", "mcf_lr")
    obj = np.zeros(len(pairs))
    for u, v in topo.edges:
        obj[pid[u, v]] += 1.0
    d = model.add_variables(len(pairs), 0.0, np.inf, obj=obj)
    model.add_row({int(v): 1.0 for v in d}, ">=", 1.0)

    arcs = np.array(topo.arcs, dtype=np.int64).reshape(-1, 2)
    if one_leg:
        I = np.repeat(arcs[:, 0], n)
        K = np.repeat(arcs[:, 1], n)
        J = np.tile(np.arange(n), arcs.shape[0])
    else:
        I, J, K = (a.ravel() for a in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    keep = (I != J) & (J != K) & (I != K)
    I, J, K = I[keep], J[keep], K[keep]
    if not directed:
        # d(i,j) <= d(i,k) + d(k,j) and d(j,i) <= ... coincide; keep one orientation per unordered pair
        if not one_leg:
            keep = I < J
            I, J, K = I[keep], J[keep], K[keep]
    m = I.size
    rows = np.repeat(np.arange(m), 3)
    cols = np.stack([pid[I, J], pid[I, K], pid[K, J]], axis=1).ravel()
    vals = np.tile([1.0, -1.0, -1.0], m)
    if m:
        model.add_rows(rows, d[cols], vals, "<=", 0.0, count=m)
    sol = solve_lp(model, method=method)
    if sol.status != Status.OPTIMAL:
        raise RuntimeError(f"LR program ended with status {sol.status}")
    dm = np.zeros((n, n))
    x = sol.x[d]
    for k, (i, j) in enumerate(pairs):
        dm[i, j] = x[k]
        if not directed:
            dm[j, i] = x[k]
    return float(sol.objective), SemiMetric(dm, directed)


def mcf_flow_oracle(topo: Topology, method: str = "highs") -> float:
    """Maximum concurrent flow from an explicit per-commodity flow LP.

    One commodity per unordered pair (undirected) or ordered pair (directed),
    each shipping ``lam`` units; flow variables on every directed arc.
    """
    n = topo.n
    if n > ORACLE_MAX_NODES:
        raise ValueError(f"flow oracle is limited to {ORACLE_MAX_NODES} nodes, got {n}")
    if n < 2:
        raise ValueError("need at least two nodes")
    _require_connected(topo)
    arcs = list(topo.arcs)
    na = len(arcs)
    if topo.directed:
        comms = [(s, t) for s in range(n) for t in range(n) if s != t]
    else:
        comms = list(itertools.combinations(range(n), 2))
    model = LinearModel("max", "mcf_flow")
    lam = model.add_variable(0.0, np.inf, obj=1.0)
    f = model.add_variables(len(comms) * na, 0.0, np.inf).reshape(len(comms), na)
    tails = np.array([a[0] for a in arcs])
    heads = np.array([a[1] for a in arcs])
    rows, cols, vals, rhs = [], [], [], []
    r = 0
    for c, (s, t) in enumerate(comms):
        # conservation: out - in = lam at s, -lam at t, 0 elsewhere
        for v in range(n):
            out_a = np.flatnonzero(tails == v)
            in_a = np.flatnonzero(heads == v)
            rows += [r] * (len(out_a) + len(in_a))
            cols += f[c, out_a].tolist() + f[c, in_a].tolist()
            vals += [1.0] * len(out_a) + [-1.0] * len(in_a)
            if v == s:
                rows.append(r)
                cols.append(lam)
                vals.append(-1.0)
            elif v == t:
                rows.append(r)
                cols.append(lam)
                vals.append(1.0)
            rhs.append(0.0)
            r += 1
    model.add_rows(np.array(rows), np.array(cols), np.array(vals), "==", np.array(rhs), count=r)
    # capacity: unit per arc (directed) or per undirected link (both orientations share it)
    cap_rows, cap_cols = [], []
    if topo.directed:
        for a in range(na):
            cap_rows += [a] * len(comms)
            cap_cols += f[:, a].tolist()
        ncap = na
    else:
        aidx = topo.arc_index
        for e, (u, v) in enumerate(topo.edges):
            for a in (aidx[(u, v)], aidx[(v, u)]):
                cap_rows += [e] * len(comms)
                cap_cols += f[:, a].tolist()
        ncap = len(topo.edges)
    model.add_rows(np.array(cap_rows), np.array(cap_cols), 1.0, "<=", 1.0, count=ncap)
    sol = solve_lp(model, method=method)
    if sol.status != Status.OPTIMAL:
        raise RuntimeError(f"flow oracle ended with status {sol.status}")
    return float(sol.objective)


# ---------------------------------------------------------------------------
# cuts and bounds
# ---------------------------------------------------------------------------


def cut_sparsity(topo: Topology, subset: Iterable[int]) -> float:
    """Links crossing the cut divided by ``|S| (n - |S|)``."""
    S = set(int(v) for v in subset)
    if not S or len(S) >= topo.n or any(not 0 <= v < topo.n for v in S):
        raise ValueError("cut side must be a nonempty proper subset of the nodes")
    crossing = sum(1 for u, v in topo.edges if (u in S) != (v in S))
    return crossing / (len(S) * (topo.n - len(S)))


def theoretical_bound(n: int, r: int) -> float:
    """Radix-based throughput ceiling ``r / (n log_r n)``."""
    if not (n > r >= 2):
        raise ValueError(f"bound needs n > r >= 2, got n={n}, r={r}")
    return r / (n * math.log(n, r))
