"""Sparse linear / mixed-binary model container."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

FEAS_TOL = 1e-7
GAP_TOL = 1e-6

_SENSES = {"<=": "<=", "L": "<=", "=": "==", "==": "==", "E": "==", ">=": ">=", "G": ">="}


class ModelError(ValueError):
    pass


class NumericalError(RuntimeError):
    """The solver result violates the feasibility tolerance."""


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    BUDGET_EXHAUSTED = "budget-exhausted"

    def __str__(self) -> str:
        return self.value


@dataclass
class Solution:
    status: Status
    objective: float = float("nan")
    x: np.ndarray | None = None
    duals: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    bound: float | None = None
    nodes: int = 0

    @property
    def ok(self) -> bool:
        return self.status == Status.OPTIMAL


@dataclass
class LinearModel:
    """Variables with bounds, sparse rows ``a.x (<=|==|>=) b`` and a linear objective.

    Rows are stored as COO blocks and materialized on demand; duplicate
    ``(row, col)`` entries are summed.
    """

    sense: str = "min"
    name: str = "model"
    _lb: list[np.ndarray] = field(default_factory=list, repr=False)
    _ub: list[np.ndarray] = field(default_factory=list, repr=False)
    _int: list[np.ndarray] = field(default_factory=list, repr=False)
    _obj: list[np.ndarray] = field(default_factory=list, repr=False)
    _rows: list[np.ndarray] = field(default_factory=list, repr=False)
    _cols: list[np.ndarray] = field(default_factory=list, repr=False)
    _vals: list[np.ndarray] = field(default_factory=list, repr=False)
    _rsense: list[np.ndarray] = field(default_factory=list, repr=False)
    _rhs: list[np.ndarray] = field(default_factory=list, repr=False)
    num_vars: int = 0
    num_rows: int = 0
    var_names: dict[int, str] = field(default_factory=dict, repr=False)
    row_names: dict[int, str] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.sense not in ("min", "max"):
            raise ModelError(f"objective sense must be 'min' or 'max', got {self.sense!r}")

    # -- variables ---------------------------------------------------------
    def add_variables(
        self,
        count: int,
        lb: float | np.ndarray = 0.0,
        ub: float | np.ndarray = np.inf,
        binary: bool = False,
        obj: float | np.ndarray = 0.0,
    ) -> np.ndarray:
        count = int(count)
        lo = np.broadcast_to(np.asarray(lb, dtype=float), (count,)).copy()
        hi = np.broadcast_to(np.asarray(ub, dtype=float), (count,)).copy()
        if binary:
            if np.any(lo < 0) or np.any(hi > 1):
                raise ModelError("binary variables need bounds within [0, 1]")
        if np.any(lo > hi):
            raise ModelError("variable lower bound exceeds upper bound")
        idx = np.arange(self.num_vars, self.num_vars + count)
        self._lb.append(lo)
        self._ub.append(hi)
        self._int.append(np.full(count, bool(binary)))
        self._obj.append(np.broadcast_to(np.asarray(obj, dtype=float), (count,)).copy())
        self.num_vars += count
        self._invalidate()
        return idx

    def add_variable(self, lb: float = 0.0, ub: float = np.inf, binary: bool = False, obj: float = 0.0, name: str | None = None) -> int:
        i = int(self.add_variables(1, lb, ub, binary, obj)[0])
        if name:
            self.var_names[i] = name
        return i

    # -- rows --------------------------------------------------------------
    def add_rows(
        self,
        rows: np.ndarray,
        cols: np.ndarray,
        vals: np.ndarray | float,
        sense: str | Iterable[str],
        rhs: np.ndarray | float,
        count: int | None = None,
    ) -> np.ndarray:
        """Add a block of rows given local row ids ``0..count-1`` in COO form."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.broadcast_to(np.asarray(vals, dtype=float), rows.shape).copy()
        if count is None:
            count = int(np.size(rhs)) if np.ndim(rhs) else (int(rows.max()) + 1 if rows.size else 0)
        if rows.size and (rows.min() < 0 or rows.max() >= count):
            raise ModelError("local row index out of range")
        if cols.size and (cols.min() < 0 or cols.max() >= self.num_vars):
            raise ModelError("constraint references a variable that does not exist")
        if isinstance(sense, str):
            code = _sense_code(sense)
            senses = np.full(count, code, dtype=np.int8)
        else:
            senses = np.array([_sense_code(s) for s in sense], dtype=np.int8)
        self._rows.append(rows + self.num_rows)
        self._cols.append(cols)
        self._vals.append(vals)
        self._rsense.append(senses)
        self._rhs.append(np.broadcast_to(np.asarray(rhs, dtype=float), (count,)).copy())
        idx = np.arange(self.num_rows, self.num_rows + count)
        self.num_rows += count
        self._invalidate()
        return idx

    def add_row(self, coeffs: Mapping[int, float] | Iterable[tuple[int, float]], sense: str, rhs: float, name: str | None = None) -> int:
        items = list(coeffs.items()) if isinstance(coeffs, Mapping) else list(coeffs)
        cols = np.array([c for c, _ in items], dtype=np.int64)
        vals = np.array([v for _, v in items], dtype=float)
        r = int(self.add_rows(np.zeros(len(items), dtype=np.int64), cols, vals, sense, [rhs], count=1)[0])
        if name:
            self.row_names[r] = name
        return r

    def set_objective(self, coeffs: Mapping[int, float] | np.ndarray, sense: str | None = None) -> None:
        if sense is not None:
            if sense not in ("min", "max"):
                raise ModelError(f"objective sense must be 'min' or 'max', got {sense!r}")
            self.sense = sense
        c = np.zeros(self.num_vars)
        if isinstance(coeffs, Mapping):
            for k, v in coeffs.items():
                c[int(k)] += v
        else:
            c[:] = np.asarray(coeffs, dtype=float)
        self._obj = [c]

    # -- materialized views ------------------------------------------------
    def _invalidate(self) -> None:
        self.__dict__.pop("_cache", None)

    def _cat(self, parts: list[np.ndarray], dtype) -> np.ndarray:
        return np.concatenate(parts).astype(dtype, copy=False) if parts else np.zeros(0, dtype=dtype)

    @property
    def lb(self) -> np.ndarray:
        return self._cat(self._lb, float)

    @property
    def ub(self) -> np.ndarray:
        return self._cat(self._ub, float)

    @property
    def integrality(self) -> np.ndarray:
        return self._cat(self._int, bool)

    @property
    def objective(self) -> np.ndarray:
        c = self._cat(self._obj, float)
        if c.size < self.num_vars:
            c = np.concatenate([c, np.zeros(self.num_vars - c.size)])
        return c

    @property
    def row_sense(self) -> np.ndarray:
        return self._cat(self._rsense, np.int8)

    @property
    def rhs(self) -> np.ndarray:
        return self._cat(self._rhs, float)

    def matrix(self) -> sp.csr_matrix:
        cache = self.__dict__.get("_cache")
        if cache is None:
            A = sp.coo_matrix(
                (self._cat(self._vals, float), (self._cat(self._rows, np.int64), self._cat(self._cols, np.int64))),
                shape=(self.num_rows, self.num_vars),
            ).tocsr()
            A.sum_duplicates()
            self.__dict__["_cache"] = A
            cache = A
        return cache

    @property
    def nnz(self) -> int:
        return int(self.matrix().nnz)

    def is_mip(self) -> bool:
        return bool(self.integrality.any())

    def relaxed(self) -> "LinearModel":
        m = self.copy()
        m._int = [np.zeros(self.num_vars, dtype=bool)]
        return m

    def copy(self) -> "LinearModel":
        m = LinearModel(self.sense, self.name)
        m._lb, m._ub, m._int, m._obj = [self.lb], [self.ub], [self.integrality], [self.objective]
        A = self.matrix().tocoo()
        m._rows, m._cols, m._vals = [A.row.astype(np.int64)], [A.col.astype(np.int64)], [A.data]
        m._rsense, m._rhs = [self.row_sense], [self.rhs]
        m.num_vars, m.num_rows = self.num_vars, self.num_rows
        m.var_names, m.row_names = dict(self.var_names), dict(self.row_names)
        return m

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> "LinearModel":
        m = self.copy()
        m._lb, m._ub = [np.asarray(lb, float).copy()], [np.asarray(ub, float).copy()]
        return m

    def violation(self, x: np.ndarray) -> float:
        """Largest absolute violation of rows and bounds at ``x``."""
        x = np.asarray(x, dtype=float)
        act = self.matrix() @ x
        rhs, sense = self.rhs, self.row_sense
        v = np.zeros(self.num_rows)
        le, eq, ge = sense == 0, sense == 1, sense == 2
        v[le] = act[le] - rhs[le]
        v[ge] = rhs[ge] - act[ge]
        v[eq] = np.abs(act[eq] - rhs[eq])
        worst = float(max(v.max(initial=0.0), 0.0))
        worst = max(worst, float(np.max(self.lb - x, initial=0.0)), float(np.max(x - self.ub, initial=0.0)))
        return worst

    def objective_value(self, x: np.ndarray) -> float:
        return float(self.objective @ np.asarray(x, dtype=float))


def _sense_code(s: str) -> int:
    try:
        return {"<=": 0, "==": 1, ">=": 2}[_SENSES[s]]
    except KeyError:
        raise ModelError(f"unknown comparator {s!r}") from None


SENSE_SYMBOL = {0: "<=", 1: "==", 2: ">="}
