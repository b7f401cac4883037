"""Physical pod substrate: cubes, electrical mesh, optical ports and OCS groups.

Nodes are indexed lexicographically on ``(cx, cy, cz, lx, ly, lz)`` where
``(cx, cy, cz)`` is the cube coordinate and ``(lx, ly, lz)`` the position
inside the 4x4x4 cube.  Every index, edge list and file record in the package
uses that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

import numpy as np

CUBE_SIDE = 4
CUBE_NODES = CUBE_SIDE**3
AXES = ("X", "Y", "Z")
LOW, HIGH = 0, 1
NUM_OCS = 3 * CUBE_SIDE * CUBE_SIDE

Edge = tuple[int, int]


class InvalidConfigError(ValueError):
    """Raised for pod shapes that cannot be built."""


@dataclass(frozen=True)
class PodConfig:
    cubes_x: int
    cubes_y: int
    cubes_z: int
    cube_side: int = CUBE_SIDE

    def __post_init__(self) -> None:
        if self.cube_side != CUBE_SIDE:
            raise InvalidConfigError(f"cube side must be {CUBE_SIDE}, got {self.cube_side}")
        for name, val in zip(AXES, self.cubes):
            if int(val) != val or val < 1:
                raise InvalidConfigError(f"cube count along {name} must be a positive integer, got {val}")

    @property
    def cubes(self) -> tuple[int, int, int]:
        return (self.cubes_x, self.cubes_y, self.cubes_z)

    @property
    def num_cubes(self) -> int:
        return self.cubes_x * self.cubes_y * self.cubes_z

    @property
    def num_nodes(self) -> int:
        return CUBE_NODES * self.num_cubes

    @property
    def extents(self) -> tuple[int, int, int]:
        """Global node extent per axis."""
        return tuple(CUBE_SIDE * c for c in self.cubes)  # type: ignore[return-value]


class NodeId(NamedTuple):
    cube: tuple[int, int, int]
    local: tuple[int, int, int]

    def global_coord(self) -> tuple[int, int, int]:
        return tuple(CUBE_SIDE * c + l for c, l in zip(self.cube, self.local))  # type: ignore[return-value]


class OcsId(NamedTuple):
    axis: int
    face_pos: tuple[int, int]

    @property
    def index(self) -> int:
        return self.axis * CUBE_SIDE * CUBE_SIDE + self.face_pos[0] * CUBE_SIDE + self.face_pos[1]

    @classmethod
    def from_index(cls, idx: int) -> "OcsId":
        axis, rest = divmod(idx, CUBE_SIDE * CUBE_SIDE)
        return cls(axis, divmod(rest, CUBE_SIDE))

    def __str__(self) -> str:
        return f"{AXES[self.axis]}{self.face_pos[0]}{self.face_pos[1]}"


def all_ocs() -> list[OcsId]:
    return [OcsId.from_index(i) for i in range(NUM_OCS)]


class OpticalPort(NamedTuple):
    node: int
    axis: int
    side: int
    ocs: OcsId


def _face_pos(local: tuple[int, int, int], axis: int) -> tuple[int, int]:
    others = [local[a] for a in range(3) if a != axis]
    return (others[0], others[1])


@dataclass(frozen=True, eq=False)
class PodSkeleton:
    """Fixed wiring of a pod plus the optical links an OCS could realize."""

    config: PodConfig
    electrical_edges: tuple[Edge, ...]
    ports: tuple[OpticalPort, ...]
    l_valid: dict[int, tuple[Edge, ...]]

    @property
    def num_nodes(self) -> int:
        return self.config.num_nodes

    def node_index(self, node: NodeId) -> int:
        (cx, cy, cz), (lx, ly, lz) = node
        _, ny, nz = self.config.cubes
        return ((((cx * ny + cy) * nz + cz) * CUBE_SIDE + lx) * CUBE_SIDE + ly) * CUBE_SIDE + lz

    def node_id(self, index: int) -> NodeId:
        rest, lz = divmod(index, CUBE_SIDE)
        rest, ly = divmod(rest, CUBE_SIDE)
        rest, lx = divmod(rest, CUBE_SIDE)
        _, ny, nz = self.config.cubes
        rest, cz = divmod(rest, nz)
        cx, cy = divmod(rest, ny)
        return NodeId((cx, cy, cz), (lx, ly, lz))

    def coord_index(self, coord: tuple[int, int, int]) -> int:
        cube = tuple(c // CUBE_SIDE for c in coord)
        local = tuple(c % CUBE_SIDE for c in coord)
        return self.node_index(NodeId(cube, local))  # type: ignore[arg-type]

    def cube_of(self, index: int) -> int:
        """Flat cube index of a node (cube-major ordering)."""
        return index // CUBE_NODES

    @cached_property
    def all_l_valid(self) -> tuple[Edge, ...]:
        return tuple(sorted(e for edges in self.l_valid.values() for e in edges))

    @cached_property
    def candidate_ocs(self) -> dict[Edge, OcsId]:
        return {e: self.ports[self.port_index[(e[0], axis)]].ocs for axis, edges in self.l_valid.items() for e in edges}

    @cached_property
    def port_index(self) -> dict[tuple[int, int], int]:
        return {(p.node, p.axis): i for i, p in enumerate(self.ports)}

    @cached_property
    def electrical_set(self) -> frozenset[Edge]:
        return frozenset(self.electrical_edges)

    def candidate_ports(self, edge: Edge) -> tuple[int, int]:
        """The two port indices a candidate optical edge would consume."""
        ocs = self.candidate_ocs[edge]
        return (self.port_index[(edge[0], ocs.axis)], self.port_index[(edge[1], ocs.axis)])

    @cached_property
    def translations(self) -> tuple["SymmetryTransform", ...]:
        return tuple(SymmetryTransform(s) for s in itertools.product(*(range(c) for c in self.config.cubes)))

    @cached_property
    def _translation_tables(self) -> dict[tuple[int, int, int], np.ndarray]:
        return {t.shift: _translation_table(self, t.shift) for t in self.translations}

    def translate(self, transform: "SymmetryTransform", node: int) -> int:
        return int(self._translation_tables[transform.shift][node])

    def translation_table(self, transform: "SymmetryTransform") -> np.ndarray:
        return self._translation_tables[transform.shift]


@dataclass(frozen=True)
class SymmetryTransform:
    """Cube translation ``cube -> (cube + shift) mod cube counts``."""

    shift: tuple[int, int, int] = (0, 0, 0)

    def is_identity(self) -> bool:
        return not any(self.shift)

    def apply(self, skel: PodSkeleton, node: NodeId) -> NodeId:
        cube = tuple((c + s) % n for c, s, n in zip(node.cube, self.shift, skel.config.cubes))
        return NodeId(cube, node.local)  # type: ignore[arg-type]

    def inverse(self, skel: PodSkeleton) -> "SymmetryTransform":
        return SymmetryTransform(tuple((-s) % n for s, n in zip(self.shift, skel.config.cubes)))  # type: ignore[arg-type]


def _translation_table(skel: PodSkeleton, shift: tuple[int, int, int]) -> np.ndarray:
    nx_, ny, nz = skel.config.cubes
    idx = np.arange(skel.num_nodes)
    cube, local = np.divmod(idx, CUBE_NODES)
    cx, rest = np.divmod(cube, ny * nz)
    cy, cz = np.divmod(rest, nz)
    cx = (cx + shift[0]) % nx_
    cy = (cy + shift[1]) % ny
    cz = (cz + shift[2]) % nz
    return ((cx * ny + cy) * nz + cz) * CUBE_NODES + local


def build_pod(config: PodConfig) -> PodSkeleton:
    """Build the electrical mesh, optical ports and candidate optical links."""
    if not isinstance(config, PodConfig):
        raise InvalidConfigError("expected a PodConfig")
    nx_, ny, nz = config.cubes
    stub = PodSkeleton(config, (), (), {})
    electrical: list[Edge] = []
    ports: list[OpticalPort] = []
    for cube in itertools.product(range(nx_), range(ny), range(nz)):
        for local in itertools.product(range(CUBE_SIDE), repeat=3):
            u = stub.node_index(NodeId(cube, local))
            for axis in range(3):
                if local[axis] < CUBE_SIDE - 1:
                    nb = list(local)
                    nb[axis] += 1
                    electrical.append((u, stub.node_index(NodeId(cube, tuple(nb)))))  # type: ignore[arg-type]
                if local[axis] in (0, CUBE_SIDE - 1):
                    side = LOW if local[axis] == 0 else HIGH
                    ports.append(OpticalPort(u, axis, side, OcsId(axis, _face_pos(local, axis))))

    groups: dict[OcsId, tuple[list[int], list[int]]] = {}
    for p in ports:
        groups.setdefault(p.ocs, ([], []))[p.side].append(p.node)
    l_valid: dict[int, list[Edge]] = {0: [], 1: [], 2: []}
    for ocs, (lows, highs) in groups.items():
        for a, b in itertools.product(lows, highs):
            l_valid[ocs.axis].append((min(a, b), max(a, b)))
    return PodSkeleton(
        config,
        tuple(sorted(electrical)),
        tuple(ports),
        {axis: tuple(sorted(edges)) for axis, edges in l_valid.items()},
    )


def valid_optical_pairs(skel: PodSkeleton, axis: int | str) -> tuple[Edge, ...]:
    if isinstance(axis, str):
        axis = AXES.index(axis.upper())
    return skel.l_valid[axis]


def canonicalize(skel: PodSkeleton, node: NodeId | int) -> tuple[NodeId, SymmetryTransform]:
    """Map ``node`` into cube (0,0,0) and return the translation that does it."""
    if isinstance(node, (int, np.integer)):
        node = skel.node_id(int(node))
    shift = tuple((-c) % n for c, n in zip(node.cube, skel.config.cubes))
    t = SymmetryTransform(shift)  # type: ignore[arg-type]
    return t.apply(skel, node), t


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Topology:
    """A concrete network: undirected (pod or generic) or directed (generic only).

    ``edges`` are normalized ``u < v`` pairs for undirected graphs and
    ``(tail, head)`` arcs for directed ones.  For pod topologies ``optical``
    holds the chosen optical links; every other edge is electrical.
    """

    n: int
    edges: tuple[Edge, ...]
    directed: bool = False
    skeleton: PodSkeleton | None = None
    optical: frozenset[Edge] = field(default_factory=frozenset)
    name: str = ""

    @classmethod
    def from_pod(cls, skel: PodSkeleton, optical_edges: Iterable[Edge], name: str = "") -> "Topology":
        optical = frozenset(_norm(*e) for e in optical_edges)
        edges = tuple(sorted(set(skel.electrical_edges) | optical))
        return cls(skel.num_nodes, edges, False, skel, optical, name)

    @classmethod
    def generic(cls, n: int, edges: Iterable[Edge], directed: bool = False, name: str = "") -> "Topology":
        if directed:
            es = tuple(sorted(set((int(u), int(v)) for u, v in edges)))
        else:
            es = tuple(sorted(set(_norm(int(u), int(v)) for u, v in edges)))
        return cls(n, es, directed, None, frozenset(), name)

    @property
    def is_pod(self) -> bool:
        return self.skeleton is not None

    @cached_property
    def arcs(self) -> tuple[Edge, ...]:
        """Directed arcs, sorted; both orientations for undirected graphs."""
        if self.directed:
            return self.edges
        return tuple(sorted([(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges]))

    @cached_property
    def arc_index(self) -> dict[Edge, int]:
        return {a: i for i, a in enumerate(self.arcs)}

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            nbrs[u].append(v)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Out-adjacency in CSR form ``(indptr, indices)``."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for u, _ in self.arcs:
            indptr[u + 1] += 1
        np.cumsum(indptr, out=indptr)
        indices = np.array([v for _, v in self.arcs], dtype=np.int32)
        return indptr, indices

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if self.directed:
            return (u, v) in self.edge_set
        return _norm(u, v) in self.edge_set

    def kind(self, edge: Edge) -> str:
        return "optical" if _norm(*edge) in self.optical else "electrical"

    def ocs_of(self, edge: Edge) -> OcsId | None:
        e = _norm(*edge)
        if self.skeleton is None or e not in self.optical:
            return None
        return self.skeleton.candidate_ocs.get(e)

    def degree(self, u: int) -> int:
        return len(self.out_neighbors[u])

    def with_edges_removed(self, removed: Iterable[Edge], name: str | None = None) -> "Topology":
        gone = {_norm(*e) for e in removed} if not self.directed else set(removed)
        edges = tuple(e for e in self.edges if e not in gone)
        return Topology(self.n, edges, self.directed, self.skeleton, self.optical - gone, self.name if name is None else name)

    def with_edges_added(self, added: Iterable[Edge], name: str | None = None) -> "Topology":
        new = {_norm(*e) for e in added} if not self.directed else set(added)
        edges = tuple(sorted(set(self.edges) | new))
        return Topology(self.n, edges, self.directed, None, frozenset(), self.name if name is None else name)


@dataclass(frozen=True)
class Finding:
    code: str
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def __bool__(self) -> bool:  # truthy == feasible
        return not self.findings

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def add(self, code: str, message: str) -> None:
        self.findings.append(Finding(code, message))


def validate_topology(topo: Topology) -> ValidationReport:
    """Check reflexivity, symmetry, port usage and OCS membership.

    The report is empty iff the topology is a feasible pod configuration.
    Generic topologies are only checked for self loops and symmetry.
    """
    report = ValidationReport()
    for u, v in topo.edges:
        if u == v:
            report.add("C1", f"self loop at node {u}")
    if topo.directed:
        if topo.is_pod:
            report.add("C2", "pod topologies must be undirected")
        return report
    seen: set[Edge] = set()
    for u, v in topo.edges:
        e = _norm(u, v)
        if e in seen:
            report.add("C2", f"edge {e} listed in both orientations")
        seen.add(e)
    skel = topo.skeleton
    if skel is None:
        return report

    for e in skel.electrical_edges:
        if e not in topo.edge_set:
            report.add("WIRING", f"fixed electrical edge {e} missing")
    for e in topo.edges:
        if e not in topo.optical and e not in skel.electrical_set and e[0] != e[1]:
            report.add("WIRING", f"edge {e} is neither electrical nor optical")

    usage = [0] * len(skel.ports)
    for e in sorted(topo.optical):
        if e[0] == e[1]:
            continue
        if e not in skel.candidate_ocs:
            report.add("OCS", f"optical edge {e} does not join a low and a high port of one OCS")
            continue
        for p in skel.candidate_ports(e):
            usage[p] += 1
    for i, count in enumerate(usage):
        if count != 1:
            p = skel.ports[i]
            report.add("C3", f"port {AXES[p.axis]}{'-+'[p.side]} of node {p.node} (OCS {p.ocs}) matched {count} times")
    return report


def is_translation_invariant(topo: Topology) -> bool:
    """True iff the edge set is closed under every cube translation."""
    skel = topo.skeleton
    if skel is None:
        raise ValueError("translation invariance is defined for pod topologies only")
    edges = np.array(topo.edges, dtype=np.int64).reshape(-1, 2)
    key = set(map(tuple, edges.tolist()))
    for t in skel.translations:
        table = skel.translation_table(t)
        mapped = np.sort(table[edges], axis=1)
        if any(tuple(e) not in key for e in mapped.tolist()):
            return False
    return True


def cube_graph_edges(topo: Topology) -> Iterator[tuple[int, int, Edge, OcsId]]:
    """Inter-cube optical links as ``(cube_a, cube_b, edge, ocs)`` with ``cube_a < cube_b``."""
    skel = topo.skeleton
    if skel is None:
        raise ValueError("cube graph requires a pod topology")
    for e in sorted(topo.optical):
        ca, cb = skel.cube_of(e[0]), skel.cube_of(e[1])
        if ca == cb:
            continue
        ocs = skel.candidate_ocs[e]
        yield (min(ca, cb), max(ca, cb), e, ocs)
