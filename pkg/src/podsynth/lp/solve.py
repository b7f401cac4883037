"""LP and MILP solving.

``solve_lp`` runs HiGHS (through scipy) by default and the in-house Bland
simplex with ``method="simplex"``.  ``solve_milp`` is a best-bound
branch-and-bound over LP relaxations; ``method="highs"`` hands the whole
model to the HiGHS MIP solver instead.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .model import FEAS_TOL, GAP_TOL, LinearModel, ModelError, NumericalError, Solution, Status
from .simplex import simplex_solve

log = logging.getLogger(__name__)

INT_TOL = 1e-6


def _split(model: LinearModel):
    A = model.matrix()
    sense = model.row_sense
    rhs = model.rhs
    le, eq, ge = np.flatnonzero(sense == 0), np.flatnonzero(sense == 1), np.flatnonzero(sense == 2)
    ub_rows = np.concatenate([le, ge])
    A_ub = A[ub_rows]
    if ge.size:
        sign = np.concatenate([np.ones(le.size), -np.ones(ge.size)])
        A_ub = A_ub.multiply(sign[:, None]).tocsr()
        b_ub = rhs[ub_rows] * sign
    else:
        sign = np.ones(le.size)
        b_ub = rhs[ub_rows]
    return A_ub, b_ub, ub_rows, sign, A[eq], rhs[eq], eq


def _check(model: LinearModel, x: np.ndarray, tol: float) -> None:
    worst = model.violation(x)
    if worst > tol * max(1.0, float(np.abs(model.rhs).max(initial=1.0))):
        raise NumericalError(f"solution violates feasibility tolerance {tol:g} by {worst:.3g}")


def solve_lp(
    model: LinearModel,
    method: str = "highs",
    tol: float = FEAS_TOL,
    time_limit: float | None = None,
    relax: bool = False,
) -> Solution:
    """Solve a continuous model; duals are d(objective)/d(rhs) in the model's sense.

    Binary variables are rejected unless ``relax`` is set, in which case the
    LP relaxation is solved.
    """
    if model.is_mip() and not relax:
        raise ModelError("model has binary variables; use solve_milp or relax=True")
    if method == "simplex":
        return simplex_solve(model.relaxed() if relax else model, tol=tol)
    if method not in ("highs", "highs-ds", "highs-ipm"):
        raise ModelError(f"unknown LP method {method!r}")
    sign_obj = -1.0 if model.sense == "max" else 1.0
    c = sign_obj * model.objective
    A_ub, b_ub, ub_rows, ub_sign, A_eq, b_eq, eq_rows = _split(model)
    options = {"primal_feasibility_tolerance": tol * 1e-2, "dual_feasibility_tolerance": tol * 1e-2}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = linprog(
        c,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A_eq if A_eq.shape[0] else None,
        b_eq=b_eq if A_eq.shape[0] else None,
        bounds=np.column_stack([model.lb, model.ub]) if model.num_vars else None,
        method=method,
        options=options,
    )
    if res.status == 2:
        return Solution(Status.INFEASIBLE)
    if res.status == 3:
        return Solution(Status.UNBOUNDED)
    if res.status == 1:
        return Solution(Status.BUDGET_EXHAUSTED)
    if res.status != 0:
        raise NumericalError(f"HiGHS failed: {res.message}")
    x = np.asarray(res.x, dtype=float)
    _check(model, x, tol)
    duals = np.zeros(model.num_rows)
    if ub_rows.size:
        duals[ub_rows] = sign_obj * ub_sign * np.asarray(res.ineqlin.marginals)
    if eq_rows.size:
        duals[eq_rows] = sign_obj * np.asarray(res.eqlin.marginals)
    rc = model.objective - model.matrix().T @ duals
    return Solution(Status.OPTIMAL, model.objective_value(x), x, duals, rc)


def dual_objective(model: LinearModel, sol: Solution) -> float:
    """Objective of the dual solution carried by ``sol`` (bounds priced by reduced cost)."""
    if sol.duals is None or sol.reduced_costs is None:
        raise ValueError("solution carries no duals")
    rc = sol.reduced_costs
    lb, ub = model.lb, model.ub
    # minimization: rc > 0 prices the lower bound; maximization mirrors it
    at_lower = rc > 0 if model.sense == "min" else rc < 0
    bound = np.where(at_lower, lb, ub)
    active = np.abs(rc) > 1e-12
    if np.any(~np.isfinite(bound[active])):
        return float("nan")
    return float(model.rhs @ sol.duals + np.sum(rc[active] * bound[active]))


@dataclass
class Budget:
    max_nodes: int = 10_000
    time_limit: float = 600.0


def solve_milp(model: LinearModel, budget: Budget | None = None, method: str = "bnb", lp_method: str = "highs") -> Solution:
    """Branch-and-bound with best-bound selection and most-fractional branching.

    Returns the incumbent and the best dual bound.  Status is
    ``budget-exhausted`` when the node or time limit stops the search before
    the gap closes.
    """
    budget = budget or Budget()
    if method == "highs":
        return _highs_milp(model, budget)
    if method != "bnb":
        raise ModelError(f"unknown MILP method {method!r}")
    start = time.monotonic()
    maximize = model.sense == "max"
    sgn = 1.0 if maximize else -1.0  # work with "larger is better"
    is_int = model.integrality
    base_lb, base_ub = model.lb, model.ub
    relaxed = model.relaxed()

    incumbent: Solution | None = None
    best_val = -np.inf
    counter = 0
    heap: list[tuple] = []

    root = solve_lp(relaxed.with_bounds(base_lb, base_ub), method=lp_method)
    if root.status == Status.INFEASIBLE:
        return Solution(Status.INFEASIBLE, nodes=1)
    if root.status == Status.UNBOUNDED:
        return Solution(Status.UNBOUNDED, nodes=1)
    heapq.heappush(heap, (-sgn * root.objective, counter, base_lb, base_ub, root))
    nodes = 1
    exhausted = False

    def beats(val: float) -> bool:
        return not np.isfinite(best_val) or val > best_val + GAP_TOL * max(1.0, abs(best_val))

    while heap:
        neg_bound, _, lb, ub, sol = heapq.heappop(heap)
        bound = -neg_bound
        if not beats(bound):
            continue
        if nodes >= budget.max_nodes or time.monotonic() - start > budget.time_limit:
            heapq.heappush(heap, (neg_bound, -1, lb, ub, sol))
            exhausted = True
            break
        x = sol.x
        frac = np.abs(x - np.round(x))
        frac[~is_int] = 0.0
        if frac.max(initial=0.0) <= INT_TOL:
            val = sgn * sol.objective
            if val > best_val:
                best_val = val
                xr = x.copy()
                xr[is_int] = np.round(xr[is_int])
                incumbent = Solution(Status.OPTIMAL, model.objective_value(xr), xr)
            continue
        # most fractional; lowest index on ties
        score = np.where(is_int, np.minimum(x - np.floor(x), np.ceil(x) - x), -1.0)
        j = int(np.flatnonzero(score >= score.max() - 1e-12)[0])
        for lo_j, hi_j in ((np.floor(x[j]) + 1.0, base_ub[j]), (base_lb[j], np.floor(x[j]))):
            clb, cub = lb.copy(), ub.copy()
            clb[j], cub[j] = max(lb[j], lo_j), min(ub[j], hi_j)
            if clb[j] > cub[j]:
                continue
            child = solve_lp(relaxed.with_bounds(clb, cub), method=lp_method)
            nodes += 1
            if child.status != Status.OPTIMAL:
                continue
            cval = sgn * child.objective
            if beats(cval):
                counter += 1
                heapq.heappush(heap, (-cval, counter, clb, cub, child))

    open_bound = max((-h[0] for h in heap), default=-np.inf)
    dual_bound = max(open_bound, best_val)
    if incumbent is None:
        status = Status.BUDGET_EXHAUSTED if exhausted else Status.INFEASIBLE
        return Solution(status, bound=sgn * dual_bound if np.isfinite(dual_bound) else None, nodes=nodes)
    incumbent.bound = sgn * dual_bound
    incumbent.nodes = nodes
    if exhausted and dual_bound - best_val > GAP_TOL * max(1.0, abs(best_val)):  # best_val finite here
        incumbent.status = Status.BUDGET_EXHAUSTED
    return incumbent


def _highs_milp(model: LinearModel, budget: Budget) -> Solution:
    sgn = -1.0 if model.sense == "max" else 1.0
    A = model.matrix()
    sense, rhs = model.row_sense, model.rhs
    lo = np.where(sense == 0, -np.inf, rhs)
    hi = np.where(sense == 2, np.inf, rhs)
    cons = [LinearConstraint(A, lo, hi)] if model.num_rows else []
    res = milp(
        sgn * model.objective,
        constraints=cons,
        integrality=model.integrality.astype(int),
        bounds=Bounds(model.lb, model.ub),
        options={"time_limit": budget.time_limit, "node_limit": budget.max_nodes, "mip_rel_gap": GAP_TOL, "disp": False},
    )
    bound = getattr(res, "mip_dual_bound", None)
    bound = sgn * bound if bound is not None and np.isfinite(bound) else None
    if res.x is None:
        if res.status == 2:
            return Solution(Status.INFEASIBLE)
        if res.status == 3:
            return Solution(Status.UNBOUNDED)
        return Solution(Status.BUDGET_EXHAUSTED, bound=bound)
    x = np.asarray(res.x, dtype=float)
    xi = model.integrality
    x[xi] = np.round(x[xi])
    _check(model, x, FEAS_TOL)
    status = Status.OPTIMAL if res.status == 0 else Status.BUDGET_EXHAUSTED
    return Solution(status, model.objective_value(x), x, bound=bound, nodes=int(getattr(res, "mip_node_count", 0) or 0))
