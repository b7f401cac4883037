"""Channels, turns and the channel dependency graph (CDG).

A channel is a directed link plus a virtual channel (VC) label; channel
``arc_index * vc_count + vc``.  A base turn is a node triple ``(i, j, k)``
entering ``j`` on ``i -> j`` and leaving on ``j -> k`` (U-turns ``k == i``
are excluded).  A labeled turn adds the two VCs.  Admitted turns are CDG
arcs; the set is kept acyclic by incremental topological ordering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ..kernels import DynamicDAG
from ..pod import Topology

VC_COUNT = 2

BaseTurn = tuple[int, int, int]
LabeledTurn = tuple[int, int, int, int, int]  # i, j, k, vc_in, vc_out


def base_turns(topo: Topology) -> list[BaseTurn]:
    """Every non-U-turn of the topology, sorted lexicographically."""
    nbrs = topo.out_neighbors
    return [(i, j, k) for i in range(topo.n) for j in nbrs[i] for k in nbrs[j] if k != i]


def vc_variants(vc_count: int = VC_COUNT, force_vc: int | None = None) -> list[tuple[int, int]]:
    """VC labelings of one base turn, in lexicographic order."""
    if force_vc is not None:
        if not 0 <= force_vc < vc_count:
            raise ValueError(f"force_vc {force_vc} outside 0..{vc_count - 1}")
        return [(force_vc, force_vc)]
    return [(a, b) for a in range(vc_count) for b in range(vc_count)]


@dataclass
class CompleteCdg:
    """All channels and every geometrically valid labeled turn."""

    topo: Topology
    vc_count: int
    turns: list[BaseTurn]

    @property
    def num_channels(self) -> int:
        return len(self.topo.arcs) * self.vc_count

    @property
    def num_labeled_turns(self) -> int:
        return len(self.turns) * self.vc_count**2

    def channel(self, u: int, v: int, vc: int) -> int:
        return self.topo.arc_index[(u, v)] * self.vc_count + vc

    def channel_arc(self, c: int) -> tuple[int, int, int]:
        a, vc = divmod(c, self.vc_count)
        u, v = self.topo.arcs[a]
        return u, v, vc


def build_cdg(topo: Topology, vc_count: int = VC_COUNT) -> CompleteCdg:
    if vc_count < 1:
        raise ValueError("need at least one VC")
    return CompleteCdg(topo, vc_count, base_turns(topo))


@dataclass
class AllowedTurnSet:
    """Admitted labeled turns plus the acyclic CDG they induce."""

    cdg: CompleteCdg
    dag: object = field(repr=False)
    admitted: list[LabeledTurn] = field(default_factory=list)
    members: set[LabeledTurn] = field(default_factory=set)
    translation_invariant: bool = False

    @classmethod
    def empty(cls, cdg: CompleteCdg) -> "AllowedTurnSet":
        return cls(cdg, DynamicDAG(cdg.num_channels))

    @property
    def topo(self) -> Topology:
        return self.cdg.topo

    @property
    def vc_count(self) -> int:
        return self.cdg.vc_count

    def __len__(self) -> int:
        return len(self.admitted)

    def __contains__(self, turn: LabeledTurn) -> bool:
        return turn in self.members

    def _arc(self, t: LabeledTurn) -> tuple[int, int]:
        i, j, k, a, b = t
        return self.cdg.channel(i, j, a), self.cdg.channel(j, k, b)

    def try_add(self, t: LabeledTurn) -> bool:
        """Admit ``t`` iff the CDG stays acyclic."""
        if t in self.members:
            return True
        cu, cv = self._arc(t)
        if not self.dag.add_edge(cu, cv):  # type: ignore[attr-defined]
            return False
        self.members.add(t)
        self.admitted.append(t)
        return True

    def try_add_class(self, turns: Sequence[LabeledTurn]) -> bool:
        """Admit every turn of a class or none of them."""
        added: list[LabeledTurn] = []
        for t in turns:
            if t in self.members:
                continue
            if not self.try_add(t):
                for u in reversed(added):
                    self.remove(u)
                return False
            added.append(t)
        return True

    def remove(self, t: LabeledTurn) -> None:
        if t in self.members:
            self.members.discard(t)
            self.admitted.remove(t)
            self.dag.remove_edge(*self._arc(t))  # type: ignore[attr-defined]

    def is_acyclic(self) -> bool:
        return cdg_is_acyclic(self.cdg.num_channels, (self._arc(t) for t in self.admitted))

    def channel_graph(self, dead_arcs: Iterable[tuple[int, int]] = ()) -> tuple[np.ndarray, np.ndarray]:
        """CSR over channels whose arcs are the admitted turns, skipping dead links."""
        dead = set()
        for u, v in dead_arcs:
            dead.add((u, v))
        pairs = []
        for t in self.admitted:
            i, j, k, _, _ = t
            if (i, j) in dead or (j, k) in dead:
                continue
            pairs.append(self._arc(t))
        nc = self.cdg.num_channels
        arr = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
        indptr = np.zeros(nc + 1, dtype=np.int64)
        np.add.at(indptr, arr[:, 0] + 1, 1)
        np.cumsum(indptr, out=indptr)
        return indptr, arr[:, 1].astype(np.int32)


def add_turns(
    A: AllowedTurnSet,
    turns: Iterable[BaseTurn],
    single_turn: bool = False,
    force_vc: int | None = None,
    classes: Callable[[LabeledTurn], Sequence[LabeledTurn]] | None = None,
) -> AllowedTurnSet:
    """Guarded insertion of the labeled variants of each base turn.

    Variants are tried in VC order; one is admitted iff the CDG stays
    acyclic.  With ``single_turn`` the scan moves to the next base turn after
    the first admitted variant (an already-present variant counts).  With
    ``classes`` each variant is admitted together with its whole symmetry
    class or rejected.
    """
    variants = vc_variants(A.vc_count, force_vc)
    for i, j, k in turns:
        for a, b in variants:
            t = (i, j, k, a, b)
            ok = A.try_add_class(classes(t)) if classes is not None else A.try_add(t)
            if ok and single_turn:
                break
    return A


def tree_turns(topo: Topology, tree_edges: Iterable[tuple[int, int]]) -> list[BaseTurn]:
    """All non-U-turns that stay on the given tree (acyclic for any VC)."""
    nbrs: dict[int, list[int]] = {}
    for u, v in tree_edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    out = []
    for j in sorted(nbrs):
        for i in sorted(nbrs[j]):
            for k in sorted(nbrs[j]):
                if k != i:
                    out.append((i, j, k))
    return sorted(out)


def cdg_is_acyclic(num_channels: int, arcs: Iterable[tuple[int, int]]) -> bool:
    """Kahn's algorithm on an explicit arc list."""
    out: dict[int, list[int]] = {}
    indeg = [0] * num_channels
    for u, v in set(arcs):
        out.setdefault(u, []).append(v)
        indeg[v] += 1
    q = deque(i for i in range(num_channels) if indeg[i] == 0)
    seen = 0
    while q:
        u = q.popleft()
        seen += 1
        for v in out.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                q.append(v)
    return seen == num_channels
