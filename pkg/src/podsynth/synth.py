"""Topology synthesis through the dualized Leighton-Rao program.

For a fixed edge vector ``m`` the program

    max  lam
    s.t. lam - sum_k y[a,b,k] + sum_j y[a,j,b] + sum_i y[i,b,a] <= m[a,b]   (every ordered a != b)
         y >= 0

equals the maximum concurrent flow (uniform unit demand, unit capacity per
undirected link).  ``y[i,j,k]`` prices the triangle ``d(i,j) <= d(i,k) + d(k,j)``
and is only instantiated when ``(i,k)`` is a link or a candidate link (the
one-leg reduction).  Letting ``m`` vary over candidate optical links, subject
to port-matching rows, turns the evaluation LP into a synthesis MILP.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .lp import Budget, LinearModel, Solution, Status, solve_lp, solve_milp
from .kernels import apsp_bfs
from .pod import CUBE_NODES, Edge, PodSkeleton, Topology, is_translation_invariant, validate_topology

log = logging.getLogger(__name__)

TIE_TOL = 1e-9


class SynthesisError(RuntimeError):
    pass


@dataclass(frozen=True)
class TonsOptions:
    symmetry: bool = False
    one_leg: bool = True
    integrality: str = "relaxed-iterative"  # or "milp"
    interval: int = 1
    fault_budget: int = 0
    budget: Budget = field(default_factory=lambda: Budget(max_nodes=200, time_limit=3600.0))
    lp_method: str = "highs-ipm"
    # generic mode only: degree-preserving local search after the relaxation
    polish: bool = True
    polish_steps: int = 200_000
    polish_time: float = 120.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.interval < 1:
            raise ValueError("interval must be >= 1")
        if not 0 <= self.fault_budget <= 47:
            raise ValueError("fault budget must lie in [0, 47]")
        if self.integrality not in ("milp", "relaxed-iterative"):
            raise ValueError(f"unknown integrality mode {self.integrality!r}")


@dataclass
class TonsModel:
    """A built LP/MILP plus the bookkeeping needed to read ``m`` back."""

    model: LinearModel
    lam: int
    n: int
    m_vars: np.ndarray  # model index of each m-variable
    units: list[tuple[Edge, ...]]  # undirected candidate edges governed by each m-variable
    num_y: int
    c4_rows: np.ndarray
    fixed_edges: frozenset[Edge]
    directed: bool = False

    def edge_values(self, sol: Solution) -> list[float]:
        return [float(sol.x[v]) for v in self.m_vars]


# ---------------------------------------------------------------------------
# core assembly
# ---------------------------------------------------------------------------


def _assemble(
    n: int,
    fixed_arcs: np.ndarray,
    cand_arcs: np.ndarray,
    cand_unit: np.ndarray,
    num_units: int,
    sources: np.ndarray,
    canon: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]] | None,
    binary: bool,
    one_leg: bool,
    name: str,
) -> tuple[LinearModel, int, np.ndarray, np.ndarray, int]:
    """Build the dual-LR rows for source set ``sources``.

    ``canon(k, j)`` maps an arbitrary ordered pair to its representative with
    a source in ``sources``; ``None`` means every node is a source.
    """
    model = LinearModel("max", name)
    lam = model.add_variable(0.0, np.inf, obj=1.0, name="lambda")
    m_idx = model.add_variables(num_units, 0.0, 1.0, binary=binary)

    is_source = np.zeros(n, dtype=bool)
    is_source[sources] = True
    src_pos = -np.ones(n, dtype=np.int64)
    src_pos[sources] = np.arange(sources.size)

    def row_of(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # rows ordered by (source position, destination); diagonal excluded
        bb = b - (b > a)
        return src_pos[a] * (n - 1) + bb

    num_rows = sources.size * (n - 1)

    if one_leg:
        legs = np.concatenate([fixed_arcs, cand_arcs]).reshape(-1, 2)
        legs = np.unique(legs, axis=0)
        legs = legs[is_source[legs[:, 0]]]
        I = np.repeat(legs[:, 0], n)
        K = np.repeat(legs[:, 1], n)
        J = np.tile(np.arange(n), legs.shape[0])
    else:
        src = np.repeat(sources, n * n)
        J = np.tile(np.repeat(np.arange(n), n), sources.size)
        K = np.tile(np.arange(n), n * sources.size)
        I = src
    keep = (J != I) & (J != K) & (I != K)
    I, J, K = I[keep], J[keep], K[keep]
    num_y = I.size
    y_idx = model.add_variables(num_y, 0.0, np.inf)

    if canon is None:
        k2, j2 = K, J
    else:
        k2, j2 = canon(K, J)
    rows = np.concatenate([row_of(I, J), row_of(I, K), row_of(k2, j2)])
    cols = np.concatenate([y_idx, y_idx, y_idx])
    vals = np.concatenate([-np.ones(num_y), np.ones(num_y), np.ones(num_y)])

    # lambda in every row
    all_rows = np.arange(num_rows)
    rows = np.concatenate([rows, all_rows])
    cols = np.concatenate([cols, np.full(num_rows, lam)])
    vals = np.concatenate([vals, np.ones(num_rows)])

    # candidate m terms (arcs whose tail is a source)
    if cand_arcs.size:
        sel = is_source[cand_arcs[:, 0]]
        ca = cand_arcs[sel]
        rows = np.concatenate([rows, row_of(ca[:, 0], ca[:, 1])])
        cols = np.concatenate([cols, m_idx[cand_unit[sel]]])
        vals = np.concatenate([vals, -np.ones(ca.shape[0])])

    rhs = np.zeros(num_rows)
    if fixed_arcs.size:
        fa = fixed_arcs[is_source[fixed_arcs[:, 0]]]
        np.add.at(rhs, row_of(fa[:, 0], fa[:, 1]), 1.0)
    c4 = model.add_rows(rows, cols, vals, "<=", rhs, count=num_rows)
    return model, lam, m_idx, c4, num_y


def _both(edges: Iterable[Edge]) -> np.ndarray:
    arr = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
    return np.concatenate([arr, arr[:, ::-1]])


# ---------------------------------------------------------------------------
# pod synthesis
# ---------------------------------------------------------------------------


def edge_orbits(skel: PodSkeleton, edges: Sequence[Edge]) -> list[tuple[Edge, ...]]:
    """Group undirected edges into cube-translation orbits (sorted by representative)."""
    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    if arr.size == 0:
        return []
    images = []
    for t in skel.translations:
        tab = skel.translation_table(t)
        images.append(np.sort(tab[arr], axis=1))
    stack = np.stack(images)  # (G, E, 2)
    key = stack[..., 0] * skel.num_nodes + stack[..., 1]
    rep = key.min(axis=0)
    present = set(map(tuple, arr.tolist()))
    orbits: dict[int, set[Edge]] = {}
    for e_idx, r in enumerate(rep.tolist()):
        for g in range(stack.shape[0]):
            e = (int(stack[g, e_idx, 0]), int(stack[g, e_idx, 1]))
            if e in present:
                orbits.setdefault(r, set()).add(e)
    return [tuple(sorted(orbits[r])) for r in sorted(orbits)]


def _pod_canon(skel: PodSkeleton):
    ncubes = skel.config.num_cubes
    # table[c] maps a node to its image under the translation taking cube c to cube 0
    tables = np.empty((ncubes, skel.num_nodes), dtype=np.int64)
    for t in skel.translations:
        inv = t.inverse(skel)
        cube_node = skel.translate(inv, 0)  # the cube that t^-1 moves to the origin
        tables[skel.cube_of(cube_node)] = skel.translation_table(t)

    def canon(k: np.ndarray, j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        c = k // CUBE_NODES
        return tables[c, k], tables[c, j]

    return canon


def build_tons_model(
    skel: PodSkeleton,
    opts: TonsOptions,
    fixed_optical: Iterable[Edge] = (),
    candidates: Sequence[Edge] | None = None,
    binary: bool | None = None,
) -> TonsModel:
    """Assemble the synthesis program for a pod.

    Electrical links and ``fixed_optical`` enter as constants; each remaining
    candidate optical link (or, with symmetry, each translation orbit of
    candidates) gets one ``m`` variable in [0, 1].
    """
    fixed_optical = frozenset(tuple(sorted(e)) for e in fixed_optical)  # type: ignore[misc]
    if candidates is None:
        used = {p for e in fixed_optical for p in skel.candidate_ports(e)}
        candidates = [e for e in skel.all_l_valid if e not in fixed_optical and not (set(skel.candidate_ports(e)) & used)]
    candidates = sorted(candidates)
    n = skel.num_nodes
    if binary is None:
        binary = opts.integrality == "milp"

    if opts.symmetry:
        units = edge_orbits(skel, candidates)
        sources = np.arange(CUBE_NODES)
        canon = _pod_canon(skel)
    else:
        units = [(e,) for e in candidates]
        sources = np.arange(n)
        canon = None
    unit_of = {e: u for u, es in enumerate(units) for e in es}
    cand_list = [e for es in units for e in es]
    cand_arcs = _both(cand_list)
    cand_unit = np.array([unit_of[e] for e in cand_list] * 2, dtype=np.int64)
    fixed = frozenset(skel.electrical_edges) | fixed_optical
    model, lam, m_idx, c4, num_y = _assemble(
        n,
        _both(sorted(fixed)),
        cand_arcs,
        cand_unit,
        len(units),
        sources,
        canon,
        binary,
        opts.one_leg,
        f"tons{n}",
    )

    # port matching: every port used exactly once
    used = {p for e in fixed_optical for p in skel.candidate_ports(e)}
    port_terms: dict[int, dict[int, float]] = {}
    for u, es in enumerate(units):
        for e in es:
            for p in skel.candidate_ports(e):
                port_terms.setdefault(p, {})
                port_terms[p][u] = port_terms[p].get(u, 0.0) + 1.0
    seen_rows: set[tuple] = set()
    for p, port in enumerate(skel.ports):
        if opts.symmetry and port.node >= CUBE_NODES:
            continue
        if p in used:
            if p in port_terms:
                raise SynthesisError(f"port {p} is consumed but still has candidates")
            continue
        terms = port_terms.get(p)
        if not terms:
            raise SynthesisError(f"port {p} (node {port.node}) has no remaining candidate")
        key = tuple(sorted(terms.items()))
        if key in seen_rows:
            continue
        seen_rows.add(key)
        model.add_row({int(m_idx[u]): c for u, c in terms.items()}, "==", 1.0)

    if opts.fault_budget > 0:
        model.add_row({lam: 1.0}, ">=", (opts.fault_budget + 1) / (32.0 * n), name="fault")
    return TonsModel(model, lam, n, m_idx, units, num_y, c4, fixed)


def solve_tons(model: TonsModel, opts: TonsOptions, skel: PodSkeleton) -> tuple[Topology, float, float | None, Status]:
    """Solve the synthesis MILP and return the chosen topology.

    The reported lambda is the program's objective (a lower bound on the MCF
    of the returned topology); the bound is the solver's best dual bound.
    """
    sol = solve_milp(model.model, opts.budget, method="highs")
    if sol.x is None:
        raise SynthesisError(f"no incumbent found ({sol.status})")
    chosen = [e for v, es in zip(model.m_vars, model.units) if sol.x[v] > 0.5 for e in es]
    topo = Topology.from_pod(skel, set(chosen) | (model.fixed_edges - skel.electrical_set), name=f"tons_milp_{skel.num_nodes}")
    return topo, float(sol.objective), sol.bound, sol.status


@dataclass
class IterationRecord:
    iteration: int
    objective: float
    fixed: tuple[Edge, ...]
    value: float
    seconds: float
    solved: bool


def relax_iterate(
    skel: PodSkeleton,
    opts: TonsOptions,
    log_cb: Callable[[IterationRecord], None] | None = None,
) -> tuple[Topology, list[IterationRecord]]:
    """Greedy rounding of the LP relaxation, ``interval`` candidates per iteration.

    Each iteration fixes the highest-valued remaining candidates (ties go to
    the lexicographically smallest edge) and deletes every candidate that
    shares a consumed port.  A candidate that is the last option at one of
    its ports is 1 in every feasible point, so it is fixed without a solve.
    """
    fixed: set[Edge] = set()
    used_ports: set[int] = set()
    records: list[IterationRecord] = []
    remaining = edge_orbits(skel, skel.all_l_valid) if opts.symmetry else [(e,) for e in skel.all_l_valid]

    def unit_ports(unit: tuple[Edge, ...]) -> set[int]:
        return {p for e in unit for p in skel.candidate_ports(e)}

    it = 0
    while remaining:
        t0 = time.monotonic()
        port_count: dict[int, int] = {}
        for unit in remaining:
            for p in unit_ports(unit):
                port_count[p] = port_count.get(p, 0) + 1
        forced = [i for i, unit in enumerate(remaining) if any(port_count[p] == 1 for p in unit_ports(unit))]
        solved = not forced
        if forced:
            forced_set = set(forced)
            values = [1.0 if i in forced_set else 0.0 for i in range(len(remaining))]
            objective = float("nan")
        else:
            cands = [e for unit in remaining for e in unit]
            tm = build_tons_model(skel, opts, fixed, cands, binary=False)
            sol = solve_lp(tm.model, method=opts.lp_method)
            if sol.status != Status.OPTIMAL:
                raise SynthesisError(f"relaxation {it} ended with status {sol.status}")
            by_rep = {unit[0]: val for unit, val in zip(tm.units, tm.edge_values(sol))}
            values = [by_rep[unit[0]] for unit in remaining]
            objective = sol.objective
        picked: list[Edge] = []
        first_val = float("nan")
        for _ in range(opts.interval):
            if not remaining:
                break
            top = max(values)
            if not solved and top < 1.0:
                break
            best = min((i for i in range(len(remaining)) if values[i] >= top - TIE_TOL), key=lambda i: remaining[i])
            unit = remaining[best]
            if not picked:
                first_val = values[best]
            ports = unit_ports(unit)
            assert not ports & used_ports, "fixing would double-use a port"
            fixed.update(unit)
            used_ports |= ports
            picked.extend(unit)
            keep = [i for i, u in enumerate(remaining) if not unit_ports(u) & used_ports]
            remaining = [remaining[i] for i in keep]
            values = [values[i] for i in keep]
        rec = IterationRecord(it, objective, tuple(picked), first_val, time.monotonic() - t0, solved)
        records.append(rec)
        if log_cb:
            log_cb(rec)
        log.info("iteration %d: objective %.6g fixed %s", it, objective, picked)
        it += 1
    if len(used_ports) != len(skel.ports):
        raise SynthesisError("candidates ran out before every port was matched")
    topo = Topology.from_pod(skel, fixed, name=f"tons_lp{'_sym' if opts.symmetry else ''}_{skel.num_nodes}")
    if not validate_topology(topo):
        raise SynthesisError("relax_iterate produced an infeasible topology")
    return topo, records


# ---------------------------------------------------------------------------
# evaluation with fixed m, and generic (non-pod) synthesis
# ---------------------------------------------------------------------------


def fixed_model(topo: Topology, one_leg: bool = True, symmetry: bool = False) -> TonsModel:
    """The dual program with every ``m`` pinned to the topology's links.

    With ``symmetry`` (translation-invariant pod topologies only) just the
    canonical-cube sources are kept; the program is invariant under the
    translation group, so the optimum is unchanged.
    """
    arcs = np.array(topo.arcs, dtype=np.int64).reshape(-1, 2)
    if symmetry:
        if topo.skeleton is None or not is_translation_invariant(topo):
            raise ValueError("symmetric evaluation needs a translation-invariant pod topology")
        sources, canon = np.arange(CUBE_NODES), _pod_canon(topo.skeleton)
    else:
        sources, canon = np.arange(topo.n), None
    model, lam, m_idx, c4, num_y = _assemble(
        topo.n, arcs, np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64), 0,
        sources, canon, False, one_leg, "mcf_fixed",
    )
    return TonsModel(model, lam, topo.n, m_idx, [], num_y, c4, frozenset(topo.edges), topo.directed)


def mcf_of_fixed(topo: Topology, lp_method: str = "highs-ipm", one_leg: bool = True, symmetry: bool | None = None) -> float:
    """MCF of a fixed topology via the dual program with ``m`` pinned to its links.

    Undirected graphs: unit demand per unordered pair, unit capacity per link.
    Directed graphs: unit demand per ordered pair, unit capacity per arc.
    ``symmetry=None`` uses the canonical-source reduction whenever the
    topology is a translation-invariant pod with more than one cube.
    """
    if topo.n < 2:
        raise ValueError("need at least two nodes")
    if symmetry is None:
        symmetry = topo.skeleton is not None and topo.skeleton.config.num_cubes > 1 and is_translation_invariant(topo)
    tm = fixed_model(topo, one_leg=one_leg, symmetry=symmetry)
    sol = solve_lp(tm.model, method=lp_method)
    if sol.status != Status.OPTIMAL:
        raise SynthesisError(f"evaluation LP ended with status {sol.status}")
    return float(sol.objective)


def _generic_model(n: int, r: int, directed: bool, fixed: set[Edge], banned: set[Edge], binary: bool) -> TonsModel:
    if directed:
        cands = [(a, b) for a in range(n) for b in range(n) if a != b and (a, b) not in fixed and (a, b) not in banned]
        cand_arcs = np.array(cands, dtype=np.int64).reshape(-1, 2)
        cand_unit = np.arange(len(cands))
        units = [(e,) for e in cands]
        fixed_arcs = np.array(sorted(fixed), dtype=np.int64).reshape(-1, 2)
    else:
        cands = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in fixed and (a, b) not in banned]
        cand_arcs = _both(cands)
        cand_unit = np.concatenate([np.arange(len(cands))] * 2) if cands else np.zeros(0, dtype=np.int64)
        units = [(e,) for e in cands]
        fixed_arcs = _both(sorted(fixed))
    model, lam, m_idx, c4, num_y = _assemble(
        n, fixed_arcs, cand_arcs, cand_unit, len(units), np.arange(n), None, binary, True, f"gen{n}"
    )
    deg_fixed_out = np.zeros(n)
    deg_fixed_in = np.zeros(n)
    for a, b in fixed:
        deg_fixed_out[a] += 1
        deg_fixed_in[b] += 1
        if not directed:
            deg_fixed_out[b] += 1
    out_terms: list[dict[int, float]] = [dict() for _ in range(n)]
    in_terms: list[dict[int, float]] = [dict() for _ in range(n)]
    for u, (a, b) in enumerate(cands):
        out_terms[a][int(m_idx[u])] = 1.0
        if directed:
            in_terms[b][int(m_idx[u])] = 1.0
        else:
            out_terms[b][int(m_idx[u])] = 1.0
    for v in range(n):
        if out_terms[v]:
            model.add_row(out_terms[v], "<=", r - deg_fixed_out[v])
        if directed and in_terms[v]:
            model.add_row(in_terms[v], "<=", r - deg_fixed_in[v])
    return TonsModel(model, lam, n, m_idx, units, num_y, c4, frozenset(fixed), directed)


def synth_generic(n: int, r: int, directed: bool = True, opts: TonsOptions | None = None) -> Topology:
    """Degree-bounded synthesis without pod constraints (out/in degree <= r)."""
    opts = opts or TonsOptions()
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")
    if opts.integrality == "milp":
        tm = _generic_model(n, r, directed, set(), set(), binary=True)
        sol = solve_milp(tm.model, opts.budget, method="highs")
        if sol.x is None:
            raise SynthesisError(f"generic MILP found no incumbent ({sol.status})")
        chosen = [es[0] for v, es in zip(tm.m_vars, tm.units) if sol.x[v] > 0.5]
        topo = Topology.generic(n, chosen, directed, name=f"tons_generic_{n}_{r}")
        return polish_generic(topo, opts) if opts.polish else topo

    fixed: set[Edge] = set()
    banned: set[Edge] = set()
    out_deg = np.zeros(n, dtype=int)
    in_deg = np.zeros(n, dtype=int)

    def saturated(a: int, b: int) -> bool:
        if directed:
            return out_deg[a] >= r or in_deg[b] >= r
        return out_deg[a] >= r or out_deg[b] >= r

    while True:
        tm = _generic_model(n, r, directed, fixed, banned, binary=False)
        if not tm.units:
            break
        sol = solve_lp(tm.model, method=opts.lp_method)
        if sol.status != Status.OPTIMAL:
            raise SynthesisError(f"generic relaxation ended with status {sol.status}")
        vals = tm.edge_values(sol)
        order = sorted(range(len(vals)), key=lambda i: (-vals[i], tm.units[i][0]))
        added = 0
        for i in order:
            if added >= opts.interval:
                break
            a, b = tm.units[i][0]
            if saturated(a, b):
                continue
            fixed.add((a, b))
            out_deg[a] += 1
            if directed:
                in_deg[b] += 1
            else:
                out_deg[b] += 1
            added += 1
        if added == 0:
            break
        for e in tm.units:
            a, b = e[0]
            if (a, b) not in fixed and saturated(a, b):
                banned.add((a, b))
    topo = Topology.generic(n, fixed, directed, name=f"tons_generic_{n}_{r}")
    return polish_generic(topo, opts) if opts.polish else topo


def _hop_sum(n: int, edges: Sequence[Edge], directed: bool) -> int | None:
    """Sum of all-pairs hop distances, ``None`` when some pair is unreachable."""
    arcs = np.array(edges, dtype=np.int64).reshape(-1, 2)
    if not directed:
        arcs = np.concatenate([arcs, arcs[:, ::-1]])
    arcs = arcs[np.lexsort((arcs[:, 1], arcs[:, 0]))]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, arcs[:, 0] + 1, 1)
    np.cumsum(indptr, out=indptr)
    dist = apsp_bfs(indptr, arcs[:, 1].astype(np.int32))
    return None if (dist < 0).any() else int(dist.sum())


def _swap(e: Edge, f: Edge, flip: bool, directed: bool) -> tuple[Edge, Edge] | None:
    """Exchange endpoints of two links, keeping every node degree."""
    (a, b), (c, d) = e, f
    if flip:
        c, d = d, c
    if a == d or c == b:
        return None
    g, h = (a, d), (c, b)
    if not directed:
        g, h = (min(g), max(g)), (min(h), max(h))
    return g, h


def polish_generic(topo: Topology, opts: TonsOptions | None = None) -> Topology:
    """Degree-preserving local search on a generic topology.

    Stage 1 anneals the all-pairs hop sum with endpoint swaps (cheap BFS
    scoring).  Stage 2 hill-climbs the concurrent-flow value with first-improvement
    swaps, pruned by ``lam <= links / hop_sum``.  The better of the input and
    the polished graph (by flow value) is returned.
    """
    opts = opts or TonsOptions()
    n, directed = topo.n, topo.directed
    links = float(len(topo.edges) if directed else 2 * len(topo.edges))
    rng = np.random.default_rng(opts.seed)
    edges = sorted(topo.edges)
    m = len(edges)
    if m < 2:
        return topo
    present = set(edges)
    cur = _hop_sum(n, edges, directed)
    best, best_edges = cur, list(edges)
    t_hi, t_lo = 3.0, 0.02
    for step in range(opts.polish_steps):
        i, j = (int(x) for x in rng.integers(0, m, 2))
        if i == j:
            continue
        sw = _swap(edges[i], edges[j], (not directed) and bool(rng.integers(2)), directed)
        if sw is None or sw[0] in present or sw[1] in present or sw[0] == sw[1]:
            continue
        old = edges[i], edges[j]
        edges[i], edges[j] = sw
        nd = _hop_sum(n, edges, directed)
        temp = t_hi * (t_lo / t_hi) ** (step / opts.polish_steps)
        if nd is not None and (cur is None or nd <= cur or rng.random() < math.exp((cur - nd) / temp)):
            present.difference_update(old)
            present.update(sw)
            cur = nd
            if best is None or cur < best:
                best, best_edges = cur, list(edges)
        else:
            edges[i], edges[j] = old
    start_lam = mcf_of_fixed(topo) if best is not None else 0.0
    if best is None:
        return topo
    edges, hops = sorted(best_edges), best
    lam = mcf_of_fixed(Topology.generic(n, edges, directed), lp_method="highs")
    deadline = time.monotonic() + opts.polish_time
    improved = True
    while improved and time.monotonic() < deadline:
        improved = False
        present = set(edges)
        for i in range(m):
            for j in range(i + 1, m):
                for flip in (False, True) if not directed else (False,):
                    sw = _swap(edges[i], edges[j], flip, directed)
                    if sw is None or sw[0] in present or sw[1] in present or sw[0] == sw[1]:
                        continue
                    new = list(edges)
                    new[i], new[j] = sw
                    nd = _hop_sum(n, new, directed)
                    if nd is None or links / nd < lam - TIE_TOL or (nd >= hops and links / nd <= lam + TIE_TOL):
                        continue
                    nl = mcf_of_fixed(Topology.generic(n, new, directed), lp_method="highs")
                    if nl > lam + TIE_TOL or (nl > lam - TIE_TOL and nd < hops):
                        edges, lam, hops, improved = sorted(new), nl, nd, True
                        break
                if improved or time.monotonic() > deadline:
                    break
            if improved or time.monotonic() > deadline:
                break
    if lam < start_lam - TIE_TOL:
        return topo
    return Topology.generic(n, edges, directed, name=topo.name)
