"""Dense two-phase primal simplex with Bland's rule.

This is the self-contained reference solver.  It is exact enough for the
small instances used to cross-check the HiGHS-backed path, and slow on
anything with more than a few hundred rows.
"""

from __future__ import annotations

import numpy as np

from .model import FEAS_TOL, LinearModel, NumericalError, Solution, Status

PIVOT_TOL = 1e-9


class _Standard:
    """``min c.z  s.t.  A z = b, z >= 0`` with a map back to model variables."""

    def __init__(self, model: LinearModel) -> None:
        n = model.num_vars
        lb, ub = model.lb, model.ub
        c_model = model.objective * (-1.0 if model.sense == "max" else 1.0)
        A_model = model.matrix().toarray()
        cols: list[np.ndarray] = []
        cost: list[float] = []
        # x_j = offset_j + sum_k coef_k z_k
        self.var_terms: list[list[tuple[int, float]]] = []
        self.offset = np.zeros(n)
        extra_rows: list[tuple[int, float]] = []  # (std column, ub - lb)
        for j in range(n):
            terms: list[tuple[int, float]] = []
            if np.isfinite(lb[j]):
                self.offset[j] = lb[j]
                terms.append((len(cols), 1.0))
                cols.append(A_model[:, j])
                cost.append(c_model[j])
                if np.isfinite(ub[j]):
                    extra_rows.append((terms[0][0], ub[j] - lb[j]))
            elif np.isfinite(ub[j]):
                self.offset[j] = ub[j]
                terms.append((len(cols), -1.0))
                cols.append(-A_model[:, j])
                cost.append(-c_model[j])
            else:
                terms.append((len(cols), 1.0))
                cols.append(A_model[:, j])
                cost.append(c_model[j])
                terms.append((len(cols), -1.0))
                cols.append(-A_model[:, j])
                cost.append(-c_model[j])
            self.var_terms.append(terms)
        m0 = model.num_rows
        nz = len(cols)
        base = np.column_stack(cols) if cols else np.zeros((m0, 0))
        b0 = model.rhs - A_model @ self.offset
        sense = model.row_sense
        n_slack = int(np.sum(sense != 1)) + len(extra_rows)
        m = m0 + len(extra_rows)
        A = np.zeros((m, nz + n_slack))
        b = np.zeros(m)
        A[:m0, :nz] = base
        b[:m0] = b0
        s = nz
        for r in range(m0):
            if sense[r] == 0:
                A[r, s] = 1.0
                s += 1
            elif sense[r] == 2:
                A[r, s] = -1.0
                s += 1
        for k, (col, width) in enumerate(extra_rows):
            A[m0 + k, col] = 1.0
            A[m0 + k, s] = 1.0
            b[m0 + k] = width
            s += 1
        self.flip = np.where(b < 0, -1.0, 1.0)
        self.A = A * self.flip[:, None]
        self.b = b * self.flip
        self.c = np.concatenate([np.asarray(cost, dtype=float), np.zeros(n_slack)])
        self.m0 = m0
        self.sign = -1.0 if model.sense == "max" else 1.0

    def recover(self, z: np.ndarray) -> np.ndarray:
        x = self.offset.copy()
        for j, terms in enumerate(self.var_terms):
            for k, coef in terms:
                x[j] += coef * z[k]
        return x


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])


def _run(T: np.ndarray, basis: list[int], ncols: int, max_iter: int) -> str:
    """Bland's-rule iterations on tableau ``T`` (last row = reduced costs)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        rc = T[-1, :ncols]
        entering = np.flatnonzero(rc < -PIVOT_TOL)
        if entering.size == 0:
            return "optimal"
        e = int(entering[0])
        colv = T[:m, e]
        pos = colv > PIVOT_TOL
        if not pos.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12)
        leave = min(ties, key=lambda r: basis[r])
        _pivot(T, leave, e)
        basis[leave] = e
    raise NumericalError("simplex iteration limit reached")


def simplex_solve(model: LinearModel, max_iter: int = 50_000, tol: float = FEAS_TOL) -> Solution:
    if model.is_mip():
        raise ValueError("simplex_solve handles continuous models only; use solve_milp")
    std = _Standard(model)
    A, b, c = std.A, std.b, std.c
    m, n = A.shape
    # phase 1: artificials on every row
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run(T, basis, n + m, max_iter)
    if -T[-1, -1] > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
        return Solution(Status.INFEASIBLE)
    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            cand = np.flatnonzero(np.abs(T[r, :n]) > PIVOT_TOL)
            if cand.size:
                _pivot(T, r, int(cand[0]))
                basis[r] = int(cand[0])
                keep.append(r)
        else:
            keep.append(r)
    T2 = np.zeros((len(keep) + 1, n + 1))
    T2[:-1, :n] = T[keep, :n]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[r] for r in keep]
    T2[-1, :n] = c
    for i, bv in enumerate(basis2):
        T2[-1] -= c[bv] * T2[i]
    status = _run(T2, basis2, n, max_iter)
    if status == "unbounded":
        return Solution(Status.UNBOUNDED)
    z = np.zeros(n)
    for i, bv in enumerate(basis2):
        z[bv] = T2[i, -1]
    x = std.recover(z)
    if model.violation(x) > tol * max(1.0, float(np.abs(model.rhs).max(initial=1.0))):
        raise NumericalError(f"simplex solution violates feasibility by {model.violation(x):.3g}")

    # duals from the optimal basis of the full standard-form system
    B = A[:, basis2]
    rows = np.asarray(keep)
    y_std = np.zeros(m)
    if len(basis2):
        y_std[rows] = np.linalg.lstsq(B[rows].T, c[basis2], rcond=None)[0]
    y_std *= std.flip
    duals = std.sign * y_std[: std.m0]
    rc = model.objective - model.matrix().T @ duals
    return Solution(Status.OPTIMAL, model.objective_value(x), x, duals, rc)
