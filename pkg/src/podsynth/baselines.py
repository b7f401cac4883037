"""Comparison topologies: prismatic tori, Kautz graphs, Xpander and Jellyfish."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .pod import CUBE_SIDE, Edge, PodConfig, Topology, build_pod, validate_topology


@dataclass(frozen=True)
class TorusDims:
    """Global node extents; each must be a positive multiple of the cube side."""

    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        for v in (self.x, self.y, self.z):
            if v < CUBE_SIDE or v % CUBE_SIDE:
                raise ValueError(f"torus extents must be positive multiples of {CUBE_SIDE}, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)

    @property
    def config(self) -> PodConfig:
        return PodConfig(self.x // CUBE_SIDE, self.y // CUBE_SIDE, self.z // CUBE_SIDE)

    @classmethod
    def parse(cls, text: str) -> "TorusDims":
        parts = text.lower().replace("x", " ").split()
        if len(parts) != 3:
            raise ValueError(f"expected dims like 4x4x8, got {text!r}")
        return cls(*(int(p) for p in parts))


def _as_dims(dims: TorusDims | tuple[int, int, int] | str) -> TorusDims:
    if isinstance(dims, TorusDims):
        return dims
    if isinstance(dims, str):
        return TorusDims.parse(dims)
    return TorusDims(*dims)


def prismatic_dtt(
    dims: TorusDims | tuple[int, int, int] | str,
    twists: Mapping[int, tuple[int, int]] | None = None,
    name: str | None = None,
) -> Topology:
    """Torus whose wrap-around links along an axis are shifted in the other two axes.

    ``twists[a] = (s1, s2)`` offsets the wrap link leaving the high face of
    axis ``a`` by ``s1`` and ``s2`` along the remaining axes (in X, Y, Z
    order).  Offsets must be multiples of 4 so the link stays inside one OCS
    group.  Without twists this is the plain prismatic torus.
    """
    d = _as_dims(dims)
    twists = dict(twists or {})
    ext = d.as_tuple()
    for axis, shift in twists.items():
        if axis not in (0, 1, 2) or len(shift) != 2:
            raise ValueError(f"twist must map an axis in 0..2 to two offsets, got {axis}: {shift}")
        others = [a for a in range(3) if a != axis]
        for a, s in zip(others, shift):
            if s % CUBE_SIDE:
                raise ValueError(f"twist {s} along axis {a} breaks OCS grouping; use a multiple of {CUBE_SIDE}")
            if not 0 <= s < ext[a]:
                raise ValueError(f"twist {s} outside axis extent {ext[a]}")
    skel = build_pod(d.config)
    optical: list[Edge] = []
    for g in itertools.product(*(range(e) for e in ext)):
        for axis in range(3):
            if g[axis] % CUBE_SIDE != CUBE_SIDE - 1:
                continue
            h = list(g)
            h[axis] = (g[axis] + 1) % ext[axis]
            if g[axis] == ext[axis] - 1 and axis in twists:
                others = [a for a in range(3) if a != axis]
                for a, s in zip(others, twists[axis]):
                    h[a] = (h[a] + s) % ext[a]
            u, v = skel.coord_index(g), skel.coord_index(tuple(h))  # type: ignore[arg-type]
            optical.append((min(u, v), max(u, v)))
    label = name or ("pdtt" if any(any(s) for s in twists.values()) else "pt") + "_{}x{}x{}".format(*ext)
    topo = Topology.from_pod(skel, optical, name=label)
    report = validate_topology(topo)
    if not report:
        raise ValueError(f"construction produced an invalid pod: {report.findings[:3]}")
    return topo


def prismatic_torus(dims: TorusDims | tuple[int, int, int] | str) -> Topology:
    """3D torus over the global coordinate grid, wrap links realized optically."""
    return prismatic_dtt(dims, None)


# PT variant used as the normalization reference per node count
BEST_PT = {64: (4, 4, 4), 128: (4, 4, 8), 256: (4, 8, 8), 512: (8, 8, 8)}


# ---------------------------------------------------------------------------
# degree-bounded generic graphs
# ---------------------------------------------------------------------------


def kautz(r: int, m: int) -> Topology:
    """Kautz digraph K(r, m): strings of length m+1 over r+1 symbols, no repeated neighbours."""
    if r < 1 or m < 0:
        raise ValueError("kautz needs r >= 1 and m >= 0")
    words = [w for w in itertools.product(range(r + 1), repeat=m + 1) if all(a != b for a, b in zip(w, w[1:]))]
    index = {w: i for i, w in enumerate(words)}
    arcs = [(index[w], index[w[1:] + (x,)]) for w in words for x in range(r + 1) if x != w[-1]]
    return Topology.generic(len(words), arcs, directed=True, name=f"kautz_{r}_{m}")


def gen_kautz(n: int, r: int) -> Topology:
    """Generalized Kautz (Imase-Itoh) digraph: i -> (-r*i - j) mod n, j = 1..r, loops dropped."""
    if n < 2 or r < 1:
        raise ValueError("gen_kautz needs n >= 2 and r >= 1")
    arcs = {(i, (-r * i - j) % n) for i in range(n) for j in range(1, r + 1)}
    return Topology.generic(n, [a for a in arcs if a[0] != a[1]], directed=True, name=f"gen_kautz_{n}_{r}")


def xpander(r: int, lift_count: int, seed: int = 0) -> Topology:
    """Random ``lift_count``-lift of the complete graph on r+1 vertices (r-regular)."""
    if r < 1 or lift_count < 1:
        raise ValueError("xpander needs r >= 1 and lift_count >= 1")
    rng = np.random.default_rng(seed)
    edges: list[Edge] = []
    for u, v in itertools.combinations(range(r + 1), 2):
        perm = rng.permutation(lift_count)
        edges.extend((u * lift_count + l, v * lift_count + int(perm[l])) for l in range(lift_count))
    return Topology.generic((r + 1) * lift_count, edges, directed=False, name=f"xpander_{r}_{lift_count}_s{seed}")


def _jellyfish_undirected(n: int, r: int, rng: np.random.Generator) -> set[Edge]:
    free = {v: r for v in range(n)}
    edges: set[Edge] = set()

    def join(a: int, b: int) -> None:
        edges.add((min(a, b), max(a, b)))
        free[a] -= 1
        free[b] -= 1

    while True:
        open_nodes = [v for v in range(n) if free[v] > 0]
        pairs = [(a, b) for a, b in itertools.combinations(open_nodes, 2) if (a, b) not in edges]
        if pairs:
            a, b = pairs[int(rng.integers(len(pairs)))]
            join(a, b)
            continue
        stuck = [v for v in open_nodes if free[v] >= 2]
        if not stuck:
            if len(open_nodes) < 2:
                return edges
            # two already-adjacent nodes with one free port each: split a link (x, y) into (a, x), (b, y)
            a, b = open_nodes[0], open_nodes[1]
            options = sorted(
                (x, y)
                for e in edges
                for x, y in (e, e[::-1])
                if len({a, b, x, y}) == 4 and (min(a, x), max(a, x)) not in edges and (min(b, y), max(b, y)) not in edges
            )
            if not options:
                return edges
            x, y = options[int(rng.integers(len(options)))]
            edges.remove((min(x, y), max(x, y)))
            free[x] += 1
            free[y] += 1
            join(a, x)
            join(b, y)
            continue
        v = stuck[0]
        # rewire: break a link (x, y) not touching v and attach both ends to v
        options = sorted(e for e in edges if v not in e and (min(v, e[0]), max(v, e[0])) not in edges and (min(v, e[1]), max(v, e[1])) not in edges)
        if not options:
            return edges
        x, y = options[int(rng.integers(len(options)))]
        edges.remove((x, y))
        free[x] += 1
        free[y] += 1
        join(v, x)
        join(v, y)


def _jellyfish_directed(n: int, r: int, rng: np.random.Generator) -> set[Edge]:
    out_free = {v: r for v in range(n)}
    in_free = {v: r for v in range(n)}
    arcs: set[Edge] = set()
    for _ in range(100 * n * r):
        tails = [v for v in range(n) if out_free[v] > 0]
        heads = [v for v in range(n) if in_free[v] > 0]
        pairs = [(a, b) for a in tails for b in heads if a != b and (a, b) not in arcs]
        if pairs:
            a, b = pairs[int(rng.integers(len(pairs)))]
        elif tails and heads:
            # rewire: split an arc (x, y) into (a, y) and (x, b)
            a, b = tails[0], heads[0]
            options = sorted(e for e in arcs if e[0] != a and e[1] != b and (a, e[1]) not in arcs and (e[0], b) not in arcs and e[1] != a and e[0] != b)
            if not options:
                break
            x, y = options[int(rng.integers(len(options)))]
            arcs.remove((x, y))
            out_free[x] += 1
            in_free[y] += 1
            arcs.add((a, y))
            out_free[a] -= 1
            in_free[y] -= 1
            a, b = x, b
        else:
            break
        arcs.add((a, b))
        out_free[a] -= 1
        in_free[b] -= 1
    return arcs


def jellyfish(n: int, r: int, seed: int = 0, directed: bool = False) -> Topology:
    """Random r-regular graph built by random matching with rewiring (deterministic per seed)."""
    if n < 2 or r < 1 or r >= n:
        raise ValueError("jellyfish needs 1 <= r < n")
    if not directed and (n * r) % 2:
        raise ValueError("undirected jellyfish needs n*r even")
    rng = np.random.default_rng(seed)
    edges = _jellyfish_directed(n, r, rng) if directed else _jellyfish_undirected(n, r, rng)
    return Topology.generic(n, edges, directed=directed, name=f"jellyfish_{n}_{r}_s{seed}")
