"""Line-oriented topology files.

Pod topologies::

    pod 1 1 2
    name pt_4x4x8
    e 0 0 0 0 0 1 E
    e 0 0 3 0 0 4 O Z 0 0

Each ``e`` record gives both endpoints as global coordinates, the kind
(``E`` electrical, ``O`` optical) and, for optical links, the OCS as axis
plus face position.  Generic graphs use ``generic <n> directed|undirected``
and records ``e <u> <v>``.  Records are sorted by endpoint index so output
is byte-for-byte deterministic.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import os
from pathlib import Path

from .pod import AXES, PodConfig, Topology, build_pod, validate_topology


class TopologyFormatError(ValueError):
    pass


def dumps(topo: Topology) -> str:
    lines: list[str] = []
    skel = topo.skeleton
    if skel is not None:
        lines.append("pod {} {} {}".format(*skel.config.cubes))
    else:
        lines.append(f"generic {topo.n} {'directed' if topo.directed else 'undirected'}")
    if topo.name:
        lines.append(f"name {topo.name}")
    for u, v in topo.edges:
        if skel is None:
            lines.append(f"e {u} {v}")
            continue
        gu = skel.node_id(u).global_coord()
        gv = skel.node_id(v).global_coord()
        rec = "e {} {} {} {} {} {}".format(*gu, *gv)
        ocs = topo.ocs_of((u, v))
        if ocs is None and (u, v) in topo.optical:
            raise TopologyFormatError(f"optical edge {(u, v)} has no OCS")
        if ocs is None:
            lines.append(rec + " E")
        else:
            lines.append(rec + f" O {AXES[ocs.axis]} {ocs.face_pos[0]} {ocs.face_pos[1]}")
    return "\n".join(lines) + "\n"


def loads(text: str, validate: bool = False) -> Topology:
    header = None
    name = ""
    records: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            header = tok
            continue
        if tok[0] == "name":
            name = line[5:].strip()
        elif tok[0] == "e":
            records.append(tok)
        else:
            raise TopologyFormatError(f"line {lineno}: unknown record {tok[0]!r}")
    if header is None:
        raise TopologyFormatError("empty topology file")
    try:
        if header[0] == "pod":
            skel = build_pod(PodConfig(*(int(x) for x in header[1:4])))
            optical = []
            for tok in records:
                u = skel.coord_index(tuple(int(x) for x in tok[1:4]))  # type: ignore[arg-type]
                v = skel.coord_index(tuple(int(x) for x in tok[4:7]))  # type: ignore[arg-type]
                if tok[7] == "O":
                    optical.append((min(u, v), max(u, v)))
                elif tok[7] != "E":
                    raise TopologyFormatError(f"unknown edge kind {tok[7]!r}")
                elif (min(u, v), max(u, v)) not in skel.electrical_set:
                    raise TopologyFormatError(f"edge {tok[1:7]} is not part of the electrical mesh")
            topo = Topology.from_pod(skel, optical, name=name)
        elif header[0] == "generic":
            n = int(header[1])
            directed = header[2] == "directed"
            edges = [(int(t[1]), int(t[2])) for t in records]
            topo = Topology.generic(n, edges, directed, name=name)
        else:
            raise TopologyFormatError(f"unknown header {header[0]!r}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, TopologyFormatError):
            raise
        raise TopologyFormatError(f"malformed topology file: {exc}") from exc
    if validate:
        report = validate_topology(topo)
        if not report:
            raise TopologyFormatError(f"topology fails validation: {sorted(report.codes())}")
    return topo


def write_topology(topo: Topology, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps(topo), encoding="ascii")


def read_topology(path: str | os.PathLike, validate: bool = False) -> Topology:
    return loads(Path(path).read_text(encoding="ascii"), validate=validate)
