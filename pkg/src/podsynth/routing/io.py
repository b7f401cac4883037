"""Routing-table files and load-profile CSV.

Routing table: one line per ordered pair, ``src dst : n0 n1 ... nk : v0 ... v(k-1)``
(node sequence, then the VC of each hop), sorted by ``(src, dst)``.
"""

from __future__ import annotations

import csv
import os
from pathlib import Path

from .ilp import LoadProfile, RoutingTable
from .vc import VcAssignment


def dumps_routes(table: RoutingTable, vcs: VcAssignment | None = None) -> str:
    lines = [f"routes {table.n}"]
    for (s, t) in sorted(table.routes):
        path = table.routes[(s, t)]
        rec = f"{s} {t} : {' '.join(map(str, path))}"
        if vcs is not None:
            rec += f" : {' '.join(map(str, vcs[(s, t)]))}"
        lines.append(rec)
    return "\n".join(lines) + "\n"


def loads_routes(text: str) -> tuple[RoutingTable, VcAssignment | None]:
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("#")]
    if not lines or not lines[0].startswith("routes "):
        raise ValueError("missing 'routes <n>' header")
    n = int(lines[0].split()[1])
    routes = {}
    vcs: VcAssignment = {}
    for line in lines[1:]:
        parts = [p.split() for p in line.split(":")]
        s, t = int(parts[0][0]), int(parts[0][1])
        routes[(s, t)] = tuple(int(x) for x in parts[1])
        if len(parts) > 2:
            vcs[(s, t)] = tuple(int(x) for x in parts[2])
    return RoutingTable(n, routes), (vcs if vcs else None)


def write_routes(table: RoutingTable, path: str | os.PathLike, vcs: VcAssignment | None = None) -> None:
    Path(path).write_text(dumps_routes(table, vcs), encoding="ascii")


def read_routes(path: str | os.PathLike) -> tuple[RoutingTable, VcAssignment | None]:
    return loads_routes(Path(path).read_text(encoding="ascii"))


def write_load_profile(profile: LoadProfile, path: str | os.PathLike) -> None:
    """Per-link route counts followed by summary rows (L_max and hops per VC)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["src", "dst", "count"])
        for (u, v) in sorted(profile.link_load):
            w.writerow([u, v, profile.link_load[(u, v)]])
        w.writerow(["summary", "l_max", profile.l_max])
        for vc, hops in enumerate(profile.vc_hops):
            w.writerow(["summary", f"vc{vc}_hops", hops])
