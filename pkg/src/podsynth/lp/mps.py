"""MPS export and import.

Names are positional (``R0000001``, ``C0000001``) so any model fits the
fixed-format 8-character name fields.  Values are written with full double
precision, which readers that split on whitespace (HiGHS, CPLEX, Gurobi)
accept.  A maximization objective is declared with an ``OBJSENSE`` section.
"""

from __future__ import annotations

import io
import os
from pathlib import Path
from typing import IO

import numpy as np

from .model import SENSE_SYMBOL, LinearModel, ModelError

_ROW_CODE = {0: "L", 1: "E", 2: "G"}


def _num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _write(model: LinearModel, out: IO[str]) -> None:
    A = model.matrix().tocsc()
    obj = model.objective
    lb, ub, is_int = model.lb, model.ub, model.integrality
    rhs, sense = model.rhs, model.row_sense
    rname = [f"R{i:07d}" for i in range(model.num_rows)]
    cname = [f"C{j:07d}" for j in range(model.num_vars)]
    out.write(f"NAME          {model.name[:8] or 'MODEL'}\n")
    if model.sense == "max":
        out.write("OBJSENSE\n    MAX\n")
    out.write("ROWS\n N  OBJ\n")
    for i in range(model.num_rows):
        out.write(f" {_ROW_CODE[int(sense[i])]}  {rname[i]}\n")
    out.write("COLUMNS\n")
    in_int = False
    for j in range(model.num_vars):
        if is_int[j] != in_int:
            tag = "INTORG" if is_int[j] else "INTEND"
            out.write(f"    MARKER                 'MARKER'                 '{tag}'\n")
            in_int = bool(is_int[j])
        start, end = A.indptr[j], A.indptr[j + 1]
        wrote = False
        if obj[j] != 0.0:
            out.write(f"    {cname[j]:<8}  OBJ       {_num(obj[j])}\n")
            wrote = True
        for k in range(start, end):
            if A.data[k] != 0.0:
                out.write(f"    {cname[j]:<8}  {rname[A.indices[k]]:<8}  {_num(A.data[k])}\n")
                wrote = True
        if not wrote:
            out.write(f"    {cname[j]:<8}  OBJ       0\n")
    if in_int:
        out.write("    MARKER                 'MARKER'                 'INTEND'\n")
    out.write("RHS\n")
    for i in np.flatnonzero(rhs != 0.0):
        out.write(f"    RHS       {rname[i]:<8}  {_num(rhs[i])}\n")
    out.write("BOUNDS\n")
    for j in range(model.num_vars):
        lo, hi = lb[j], ub[j]
        n = cname[j]
        if is_int[j] and lo == 0.0 and hi == 1.0:
            out.write(f" BV BND       {n}\n")
        elif lo == hi:
            out.write(f" FX BND       {n:<8}  {_num(lo)}\n")
        elif np.isneginf(lo) and np.isposinf(hi):
            out.write(f" FR BND       {n}\n")
        else:
            if np.isneginf(lo):
                out.write(f" MI BND       {n}\n")
            elif lo != 0.0:
                out.write(f" LO BND       {n:<8}  {_num(lo)}\n")
            if np.isfinite(hi):
                out.write(f" UP BND       {n:<8}  {_num(hi)}\n")
            elif is_int[j]:
                out.write(f" PL BND       {n}\n")
    out.write("ENDATA\n")


def export_standard(model: LinearModel, destination: str | os.PathLike | IO[str]) -> None:
    """Write ``model`` in MPS format to a path or text stream."""
    if hasattr(destination, "write"):
        _write(model, destination)  # type: ignore[arg-type]
        return
    with open(destination, "w", encoding="ascii") as fh:
        _write(model, fh)


write_mps = export_standard


def read_mps(source: str | os.PathLike | IO[str]) -> LinearModel:
    """Parse an MPS file (fixed or free layout, no RANGES / SOS sections)."""
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        text = Path(source).read_text(encoding="ascii")
    model = LinearModel()
    section = None
    obj_row = None
    row_index: dict[str, int] = {}
    row_sense: list[str] = []
    col_index: dict[str, int] = {}
    col_int: list[bool] = []
    obj: dict[int, float] = {}
    entries: list[tuple[int, int, float]] = []
    rhs: dict[int, float] = {}
    bounds: dict[int, list[float]] = {}
    in_int = False
    sense = "min"

    def col(name: str) -> int:
        if name not in col_index:
            col_index[name] = len(col_index)
            col_int.append(in_int)
            bounds[col_index[name]] = [0.0, np.inf]
        return col_index[name]

    for raw in io.StringIO(text):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("*"):
            continue
        if not line[0].isspace():
            head = line.split()
            section = head[0].upper()
            if section == "OBJSENSE" and len(head) > 1:
                sense = "max" if head[1].upper().startswith("MAX") else "min"
            if section == "ENDATA":
                break
            if section in ("RANGES", "SOS"):
                raise ModelError(f"MPS section {section} is not supported")
            continue
        tok = line.split()
        if section == "OBJSENSE":
            sense = "max" if tok[0].upper().startswith("MAX") else "min"
        elif section == "ROWS":
            kind, name = tok[0].upper(), tok[1]
            if kind == "N":
                if obj_row is None:
                    obj_row = name
                continue
            row_index[name] = len(row_sense)
            row_sense.append({"L": "<=", "E": "==", "G": ">="}[kind])
        elif section == "COLUMNS":
            if len(tok) >= 3 and tok[1].strip("'").upper() == "MARKER":
                in_int = tok[2].strip("'").upper() == "INTORG"
                continue
            j = col(tok[0])
            for name, val in zip(tok[1::2], tok[2::2]):
                if name == obj_row:
                    obj[j] = obj.get(j, 0.0) + float(val)
                elif name in row_index:
                    entries.append((row_index[name], j, float(val)))
        elif section == "RHS":
            pairs = tok[1:] if len(tok) % 2 == 1 else tok
            for name, val in zip(pairs[0::2], pairs[1::2]):
                if name in row_index:
                    rhs[row_index[name]] = float(val)
        elif section == "BOUNDS":
            kind = tok[0].upper()
            rest = tok[1:]
            if kind in ("FR", "MI", "PL", "BV"):
                name, val = (rest[1] if len(rest) >= 2 else rest[0]), None
            else:
                name, val = rest[-2], float(rest[-1])
            j = col(name)
            b = bounds[j]
            if kind == "UP":
                b[1] = val  # type: ignore[assignment]
                if val < 0 and b[0] == 0.0:  # type: ignore[operator]
                    b[0] = -np.inf
            elif kind == "LO":
                b[0] = val  # type: ignore[assignment]
            elif kind == "FX":
                b[0] = b[1] = val  # type: ignore[assignment]
            elif kind == "FR":
                b[0], b[1] = -np.inf, np.inf
            elif kind == "MI":
                b[0] = -np.inf
            elif kind == "PL":
                b[1] = np.inf
            elif kind == "BV":
                b[0], b[1] = 0.0, 1.0
                col_int[j] = True
            else:
                raise ModelError(f"unsupported bound type {kind}")

    model.sense = sense
    n = len(col_index)
    for j in range(n):
        lo, hi = bounds[j]
        binary = col_int[j]
        if binary and not (lo >= 0 and hi <= 1):
            raise ModelError("only binary integer variables are supported")
        model.add_variables(1, lo, hi, binary=binary, obj=obj.get(j, 0.0))
    m = len(row_sense)
    if entries:
        r, c, v = map(np.asarray, zip(*entries))
    else:
        r = c = np.zeros(0, dtype=np.int64)
        v = np.zeros(0)
    model.add_rows(r, c, v, row_sense, np.array([rhs.get(i, 0.0) for i in range(m)]), count=m)
    return model


__all__ = ["export_standard", "write_mps", "read_mps", "SENSE_SYMBOL"]
