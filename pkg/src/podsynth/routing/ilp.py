"""Single-path route selection minimizing the maximum channel load.

Exact MILP (one binary per candidate path, one choice row per pair, an
``L_max`` variable above every link load) when the instance is small; for
large instances a load-aware greedy pass followed by rip-up-and-reroute,
reported with the LP-relaxation bound and a budget-exhausted status when
the bound is not met.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..lp import Budget, LinearModel, Status, solve_lp, solve_milp
from .paths import Pair, Path, PathSet

MILP_VAR_LIMIT = 20_000


@dataclass
class LoadProfile:
    """Routes per directed link and hops per VC."""

    link_load: dict[Pair, int] = field(default_factory=dict)
    vc_hops: list[int] = field(default_factory=list)

    @property
    def l_max(self) -> int:
        return max(self.link_load.values(), default=0)

    @property
    def throughput(self) -> float:
        return 1.0 / self.l_max if self.l_max else math.inf

    def vc_imbalance(self) -> float:
        """``|h0 - h1| / max(h0, h1)`` over the first two VCs."""
        if len(self.vc_hops) < 2 or max(self.vc_hops[:2]) == 0:
            return 0.0
        h0, h1 = self.vc_hops[:2]
        return abs(h0 - h1) / max(h0, h1)


@dataclass
class RoutingTable:
    """Exactly one node path per ordered pair."""

    n: int
    routes: dict[Pair, Path]
    status: Status = Status.OPTIMAL
    bound: float | None = None

    def load_profile(self) -> LoadProfile:
        return LoadProfile(dict(link_loads(self.routes.values())))

    def total_hops(self) -> int:
        return sum(len(p) - 1 for p in self.routes.values())


def link_loads(paths) -> Counter:
    c: Counter = Counter()
    for p in paths:
        for a in range(len(p) - 1):
            c[(p[a], p[a + 1])] += 1
    return c


def _greedy(pairs: list[Pair], cands: dict[Pair, list[Path]]) -> tuple[dict[Pair, int], Counter]:
    load: Counter = Counter()
    choice: dict[Pair, int] = {}
    order = sorted(pairs, key=lambda p: (len(cands[p]), p))
    for pr in order:
        best, best_key = 0, None
        for idx, path in enumerate(cands[pr]):
            links = [(path[a], path[a + 1]) for a in range(len(path) - 1)]
            worst = max(load[l] for l in links)
            key = (worst, sum(load[l] for l in links), idx)
            if best_key is None or key < best_key:
                best, best_key = idx, key
        choice[pr] = best
        p = cands[pr][best]
        for a in range(len(p) - 1):
            load[(p[a], p[a + 1])] += 1
    return choice, load


def _links(path: Path) -> list[Pair]:
    return [(path[a], path[a + 1]) for a in range(len(path) - 1)]


def _reroute_passes(pairs: list[Pair], cands: dict[Pair, list[Path]], choice: dict[Pair, int], load: Counter, deadline: float, max_passes: int = 10) -> None:
    """Sweep all pairs, moving each to its candidate with the smallest (max, sum) load.

    A move never raises the maximum load and strictly lowers the sum of
    squared loads, so sweeps converge.
    """
    links = {pr: [_links(p) for p in cands[pr]] for pr in pairs if len(cands[pr]) > 1}
    for _ in range(max_passes):
        changed = 0
        for pr, options in links.items():
            cur = choice[pr]
            for l in options[cur]:
                load[l] -= 1
            best = min(range(len(options)), key=lambda i: (max(load[l] for l in options[i]), sum(load[l] for l in options[i]), i != cur, i))
            for l in options[best]:
                load[l] += 1
            if best != cur:
                choice[pr] = best
                changed += 1
        if not changed or time.monotonic() > deadline:
            return


def _improve(pairs: list[Pair], cands: dict[Pair, list[Path]], choice: dict[Pair, int], load: Counter, deadline: float) -> None:
    """Rip up routes crossing a maximum-load link and reroute them below the maximum."""
    users: dict[Pair, set[Pair]] = {}
    for pr in pairs:
        for l in _links(cands[pr][choice[pr]]):
            users.setdefault(l, set()).add(pr)
    while time.monotonic() < deadline:
        lmax = max(load.values())
        hot = sorted(l for l, v in load.items() if v == lmax)
        progress = False
        for link in hot:
            if load[link] < lmax:
                continue
            for pr in sorted(users.get(link, ())):
                cur_links = _links(cands[pr][choice[pr]])
                for l in cur_links:
                    load[l] -= 1
                best, best_key = None, None
                for idx, path in enumerate(cands[pr]):
                    pl = _links(path)
                    worst = max(load[l] for l in pl)
                    if worst + 1 >= lmax:
                        continue
                    key = (worst, sum(load[l] for l in pl), idx)
                    if best_key is None or key < best_key:
                        best, best_key = idx, key
                if best is None:
                    for l in cur_links:
                        load[l] += 1
                    continue
                for l in cur_links:
                    users[l].discard(pr)
                choice[pr] = best
                for l in _links(cands[pr][best]):
                    load[l] += 1
                    users.setdefault(l, set()).add(pr)
                progress = True
                break
        if not progress:
            return


def _model(pairs: list[Pair], cands: dict[Pair, list[Path]], binary: bool) -> tuple[LinearModel, dict[Pair, np.ndarray], int]:
    model = LinearModel("min", "route")
    L = model.add_variable(0.0, np.inf, obj=1.0, name="L_max")
    var_of: dict[Pair, np.ndarray] = {}
    link_id: dict[Pair, int] = {}
    rows, cols = [], []
    choice_rows, choice_cols = [], []
    for r, pr in enumerate(pairs):
        idx = model.add_variables(len(cands[pr]), 0.0, 1.0, binary=binary)
        var_of[pr] = idx
        for v, path in zip(idx.tolist(), cands[pr]):
            choice_rows.append(r)
            choice_cols.append(v)
            for a in range(len(path) - 1):
                l = link_id.setdefault((path[a], path[a + 1]), len(link_id))
                rows.append(l)
                cols.append(v)
    model.add_rows(np.array(choice_rows), np.array(choice_cols), 1.0, "==", 1.0, count=len(pairs))
    nl = len(link_id)
    rows += list(range(nl))
    cols += [L] * nl
    vals = np.concatenate([np.ones(len(rows) - nl), -np.ones(nl)])
    model.add_rows(np.array(rows), np.array(cols), vals, "<=", 0.0, count=nl)
    return model, var_of, L


def route_ilp(
    paths: PathSet,
    k: int | None = None,
    budget: Budget | None = None,
    method: str = "auto",
    with_bound: bool = False,
) -> RoutingTable:
    """Choose one candidate per pair minimizing the maximum directed-link load.

    ``method``: ``"milp"`` (exact, HiGHS branch-and-cut), ``"bnb"`` (in-house
    branch-and-bound), ``"heuristic"`` (greedy plus rip-up-and-reroute) or
    ``"auto"`` (MILP below ``MILP_VAR_LIMIT`` binaries, heuristic above).
    The heuristic reports the LP-relaxation bound when ``with_bound`` is set,
    otherwise the cheap volume bound; status is optimal only when the bound
    certifies the incumbent.
    """
    budget = budget or Budget(max_nodes=10_000, time_limit=300.0)
    cands = {pr: (ps[:k] if k else ps) for pr, ps in paths.paths.items()}
    empty = [pr for pr, ps in cands.items() if not ps]
    if empty:
        raise ValueError(f"pair {empty[0]} has no candidate path")
    pairs = sorted(cands)
    nvars = sum(len(cands[p]) for p in pairs)
    if method == "auto":
        method = "milp" if nvars <= MILP_VAR_LIMIT else "heuristic"
    if method in ("milp", "bnb"):
        model, var_of, _ = _model(pairs, cands, binary=True)
        sol = solve_milp(model, budget, method="highs" if method == "milp" else "bnb")
        if sol.x is None:
            raise RuntimeError(f"route selection found no incumbent ({sol.status})")
        routes = {pr: cands[pr][int(np.argmax(sol.x[var_of[pr]]))] for pr in pairs}
        lmax = max(link_loads(routes.values()).values(), default=0)
        return RoutingTable(paths.n, routes, sol.status, sol.bound if sol.bound is not None else float(lmax))
    if method != "heuristic":
        raise ValueError(f"unknown route method {method!r}")
    deadline = time.monotonic() + budget.time_limit
    choice, load = _greedy(pairs, cands)
    _reroute_passes(pairs, cands, choice, load, deadline)
    _improve(pairs, cands, choice, load, deadline)
    routes = {pr: cands[pr][choice[pr]] for pr in pairs}
    lmax = max(load.values(), default=0)
    bound = lp_bound(pairs, cands) if with_bound else volume_bound(pairs, cands)
    status = Status.OPTIMAL if bound is not None and lmax <= math.ceil(bound - 1e-6) else Status.BUDGET_EXHAUSTED
    return RoutingTable(paths.n, routes, status, bound)


def volume_bound(pairs: list[Pair], cands: dict[Pair, list[Path]]) -> float:
    """Total minimum hops over the number of links the candidates can use."""
    links = {l for pr in pairs for p in cands[pr] for l in _links(p)}
    hops = sum(min(len(p) for p in cands[pr]) - 1 for pr in pairs)
    return hops / max(len(links), 1)


def lp_bound(pairs: list[Pair], cands: dict[Pair, list[Path]]) -> float | None:
    model, _, _ = _model(pairs, cands, binary=False)
    sol = solve_lp(model, method="highs-ipm")
    return float(sol.objective) if sol.ok else None
