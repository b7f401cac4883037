from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from podsynth.pod import (
    CUBE_NODES,
    NUM_OCS,
    InvalidConfigError,
    NodeId,
    OcsId,
    PodConfig,
    SymmetryTransform,
    Topology,
    all_ocs,
    build_pod,
    canonicalize,
    is_translation_invariant,
    valid_optical_pairs,
    validate_topology,
)


def mesh_counts(cubes: tuple[int, int, int]) -> tuple[int, int, int]:
    """Independent counting oracle: nodes, electrical edges, optical ports."""
    num = cubes[0] * cubes[1] * cubes[2]
    per_cube_edges = 3 * 4 * 4 * 3
    per_cube_ports = 6 * 4 * 4
    return num * 64, num * per_cube_edges, num * per_cube_ports


@pytest.mark.parametrize("cubes", [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)])
def test_build_pod_counts(cubes):
    skel = build_pod(PodConfig(*cubes))
    nodes, edges, ports = mesh_counts(cubes)
    assert skel.num_nodes == nodes
    assert len(skel.electrical_edges) == edges
    assert len(skel.ports) == ports
    assert len({p.ocs for p in skel.ports}) == NUM_OCS


def test_build_pod_128_example(skel128):
    assert skel128.num_nodes == 128
    assert len(skel128.electrical_edges) == 288
    assert len(skel128.ports) == 192
    assert len(all_ocs()) == 48


@pytest.mark.parametrize("cubes", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
def test_invalid_config(cubes):
    with pytest.raises(InvalidConfigError):
        build_pod(PodConfig(*cubes))


def test_single_cube_has_one_candidate_per_group(skel64):
    for axis in range(3):
        pairs = valid_optical_pairs(skel64, axis)
        groups = [skel64.candidate_ocs[e] for e in pairs]
        assert len(groups) == len(set(groups)) == 16


def test_two_cube_x_group_has_four_candidates(skel128):
    group = OcsId(0, (0, 0))
    pairs = [e for e in valid_optical_pairs(skel128, "X") if skel128.candidate_ocs[e] == group]
    assert len(pairs) == 4


def test_l_valid_equals_low_times_high(skel128):
    lows: dict = {}
    highs: dict = {}
    for p in skel128.ports:
        (lows if p.side == 0 else highs).setdefault(p.ocs, set()).add(p.node)
    expected = sum(len(lows[o]) * len(highs[o]) for o in lows)
    assert len(skel128.all_l_valid) == expected


def test_candidate_edges_join_low_and_high_port_of_one_group(skel128):
    for e in skel128.all_l_valid:
        pa, pb = (skel128.ports[i] for i in skel128.candidate_ports(e))
        assert pa.ocs == pb.ocs == skel128.candidate_ocs[e]
        assert {pa.side, pb.side} == {0, 1}


def test_canonicalize_identity(skel128):
    node = NodeId((0, 0, 0), (3, 1, 2))
    canon, t = canonicalize(skel128, node)
    assert canon == node and t.is_identity()


def test_canonicalize_second_cube(skel128):
    canon, t = canonicalize(skel128, NodeId((0, 0, 1), (1, 2, 3)))
    assert canon == NodeId((0, 0, 0), (1, 2, 3))
    assert t.shift == (0, 0, 1)  # -1 mod 2
    assert t.inverse(skel128).apply(skel128, canon) == NodeId((0, 0, 1), (1, 2, 3))


@given(st.integers(0, 255))
def test_node_index_round_trip(idx):
    skel = build_pod(PodConfig(1, 2, 2))
    assert skel.node_index(skel.node_id(idx)) == idx
    assert skel.cube_of(idx) == idx // CUBE_NODES


def test_node_index_is_lexicographic(skel128):
    ids = [skel128.node_id(i) for i in range(skel128.num_nodes)]
    keys = [(*n.cube, *n.local) for n in ids]
    assert keys == sorted(keys)


def test_pt_translation_invariance_sampled(pt448):
    skel = pt448.skeleton
    rng = np.random.default_rng(0)
    edges = list(pt448.edges)
    for k in rng.integers(0, len(edges), 1000):
        u, v = edges[int(k)]
        canon_u, t = canonicalize(skel, u)
        mapped = skel.node_index(t.apply(skel, skel.node_id(v)))
        assert pt448.has_edge(skel.node_index(canon_u), mapped)
    assert is_translation_invariant(pt448)


def test_translation_table_is_permutation(skel128):
    for t in skel128.translations:
        table = skel128.translation_table(t)
        assert sorted(table.tolist()) == list(range(128))


def test_validate_pt_is_clean(pt448):
    assert validate_topology(pt448)
    assert not validate_topology(pt448).findings


def test_validate_detects_double_matched_port(pt448):
    skel = pt448.skeleton
    used = pt448.optical
    extra = next(e for e in skel.all_l_valid if e not in used)
    bad = Topology.from_pod(skel, set(used) | {extra})
    assert "C3" in validate_topology(bad).codes()


def test_validate_detects_self_loop(pt448):
    bad = Topology(pt448.n, pt448.edges + ((5, 5),), False, pt448.skeleton, pt448.optical)
    assert "C1" in validate_topology(bad).codes()


def test_validate_detects_missing_electrical(pt448):
    e = pt448.skeleton.electrical_edges[0]
    bad = Topology(pt448.n, tuple(x for x in pt448.edges if x != e), False, pt448.skeleton, pt448.optical)
    assert "WIRING" in validate_topology(bad).codes()


def test_validate_detects_wrong_group(skel128):
    lows = [p for p in skel128.ports if p.side == 0 and p.ocs == OcsId(0, (0, 0))]
    highs = [p for p in skel128.ports if p.side == 1 and p.ocs == OcsId(0, (1, 1))]
    e = (min(lows[0].node, highs[0].node), max(lows[0].node, highs[0].node))
    bad = Topology.from_pod(skel128, [e])
    assert "OCS" in validate_topology(bad).codes()


def test_ocs_index_round_trip():
    assert [o.index for o in all_ocs()] == list(range(NUM_OCS))
    assert str(OcsId(2, (1, 3))) == "Z13"


def test_translation_of_identity_shift():
    t = SymmetryTransform()
    assert t.is_identity()


def test_generic_topology_normalizes_edges():
    t = Topology.generic(4, [(1, 0), (0, 1), (2, 3)])
    assert t.edges == ((0, 1), (2, 3))
    d = Topology.generic(3, [(1, 0), (0, 1)], directed=True)
    assert d.edges == ((0, 1), (1, 0))
    assert all(validate_topology(x) for x in (t, d))


def test_every_port_appears_in_candidates(skel128):
    seen = set(itertools.chain.from_iterable(skel128.candidate_ports(e) for e in skel128.all_l_valid))
    assert seen == set(range(len(skel128.ports)))
