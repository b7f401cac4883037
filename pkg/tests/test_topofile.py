from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_connected
from podsynth.baselines import kautz, prismatic_dtt, prismatic_torus
from podsynth.pod import PodConfig, Topology, build_pod
from podsynth.topofile import TopologyFormatError, dumps, loads, read_topology, write_topology


def _same(a: Topology, b: Topology) -> None:
    assert (a.n, a.edges, a.directed, a.optical, a.name) == (b.n, b.edges, b.directed, b.optical, b.name)


@pytest.mark.parametrize("topo", [prismatic_torus((4, 4, 8)), prismatic_dtt((4, 4, 8), {0: (0, 4)}), kautz(4, 1)], ids=["pt", "pdtt", "kautz"])
def test_round_trip(topo, tmp_path):
    write_topology(topo, tmp_path / "t.topo")
    back = read_topology(tmp_path / "t.topo", validate=topo.is_pod)
    _same(topo, back)
    assert dumps(back) == dumps(topo)


@given(st.integers(2, 15), st.floats(0, 0.5), st.integers(0, 1000), st.booleans())
def test_generic_round_trip(n, p, seed, directed):
    topo = random_connected(n, p, seed, directed)
    _same(loads(dumps(topo)), topo)


def test_pod_records_carry_ocs():
    text = dumps(prismatic_torus((4, 4, 8)))
    assert text.startswith("pod 1 1 2\nname pt_4x4x8\n")
    optical = [l for l in text.splitlines() if l.startswith("e ") and not l.endswith(" E")]
    # 32 wrap links per axis
    assert len(optical) == 96 and all(" O " in l for l in optical)


@pytest.mark.parametrize(
    "text",
    ["", "torus 4 4 4\n", "generic 3 undirected\nx 0 1\n", "pod 1 1 1\ne 0 0 0 0 0 2 E\n", "pod 1 1 1\ne 0 0 0 0 0 1 Q\n", "generic three undirected\n"],
)
def test_malformed_files(text):
    with pytest.raises(TopologyFormatError):
        loads(text)


def test_validation_on_load():
    skel = build_pod(PodConfig(1, 1, 2))
    partial = Topology.from_pod(skel, skel.all_l_valid[:1])
    loads(dumps(partial))
    with pytest.raises(TopologyFormatError):
        loads(dumps(partial), validate=True)


def test_comments_are_ignored():
    topo = loads("# header\ngeneric 2 undirected\n# edge\ne 0 1\n")
    assert topo.edges == ((0, 1),)
