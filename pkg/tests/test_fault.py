from __future__ import annotations

import math

import pytest

from podsynth.baselines import prismatic_torus
from podsynth.fault import (
    FaultBudgetError,
    TreeConstructionError,
    failed_arcs,
    fault_certificate,
    nash_williams_check,
    ocs_disjoint_trees,
    route_under_faults,
    set_partitions,
    write_fault_report,
)
from podsynth.metrics import apsp_stats
from podsynth.pod import NUM_OCS, OcsId, PodConfig, Topology, all_ocs, build_pod, cube_graph_edges
from podsynth.routing import allowed_paths, allowed_turns, route_ilp


def test_certificate_examples():
    c = fault_certificate(0.00636, 256, 1)
    assert c.ok and c.t_max == 48
    c = fault_certificate(0.00781, 128, 1)
    assert c.ok and c.required == pytest.approx(2 / 4096)
    assert c.t_max == math.floor(32 * 128 * 0.00781)


def test_certificate_boundary():
    req = 2 / (32 * 128)
    assert fault_certificate(req, 128, 1).ok
    assert not fault_certificate(req * (1 - 1e-9), 128, 1).ok


def test_certificate_budget_cap():
    assert fault_certificate(1.0, 128, 47).ok
    with pytest.raises(FaultBudgetError):
        fault_certificate(1.0, 128, 48)
    with pytest.raises(FaultBudgetError):
        fault_certificate(1.0, 128, -1)


@pytest.mark.parametrize("n,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (8, 4140)])
def test_set_partitions_count(n, bell):
    parts = list(set_partitions(list(range(n))))
    assert len(parts) == bell
    assert all(sorted(x for p in ps for x in p) == list(range(n)) for ps in parts)


def test_single_cube_trees_are_empty():
    pair = ocs_disjoint_trees(prismatic_torus((4, 4, 4)))
    assert pair.tree0 == pair.tree1 == ()


def _check_pair(topo: Topology, pair) -> None:
    num = topo.skeleton.config.num_cubes
    assert not pair.colors0 & pair.colors1
    for tree, colors in ((pair.tree0, pair.colors0), (pair.tree1, pair.colors1)):
        assert len(tree) == num - 1
        assert {topo.ocs_of(e).index for e in tree} == set(colors)
        # the tree connects every cube
        comp = {c: c for c in range(num)}

        def find(c: int) -> int:
            while comp[c] != c:
                c = comp[c]
            return c

        for a, b in tree:
            comp[find(topo.skeleton.cube_of(a))] = find(topo.skeleton.cube_of(b))
        assert len({find(c) for c in range(num)}) == 1


def test_two_cube_trees(pt448):
    pair = ocs_disjoint_trees(pt448)
    assert len(pair.tree0) == len(pair.tree1) == 1
    assert pair.colors0 != pair.colors1
    _check_pair(pt448, pair)


@pytest.mark.parametrize("dims", [(4, 8, 8), (8, 8, 8)])
def test_larger_pods_survive_every_fault(dims):
    topo = prismatic_torus(dims)
    pair = ocs_disjoint_trees(topo)
    _check_pair(topo, pair)
    for ocs in all_ocs():
        assert ocs.index not in pair.colors0 or ocs.index not in pair.colors1


def test_disconnected_cube_graph_raises():
    skel = build_pod(PodConfig(1, 1, 2))
    with pytest.raises(TreeConstructionError):
        ocs_disjoint_trees(Topology.from_pod(skel, []))


def test_partition_check_passes_on_tori(pt448):
    rep = nash_williams_check(pt448, t=2)
    assert rep.ok and rep.exhaustive and rep.checked == 1
    rep = nash_williams_check(prismatic_torus((4, 8, 8)), t=2)
    assert rep.ok and rep.checked == 15 - 1


def test_partition_check_fails_on_single_color():
    skel = build_pod(PodConfig(1, 1, 2))
    topo = prismatic_torus((4, 4, 8))
    # synthetic relabeling: every optical link on one OCS
    skel.__dict__["candidate_ocs"] = {e: OcsId.from_index(0) for e in skel.candidate_ocs}
    synthetic = Topology.from_pod(skel, topo.optical)
    assert len({o for *_, o in cube_graph_edges(synthetic)}) == 1
    rep = nash_williams_check(synthetic, t=2)
    assert not rep.ok and rep.violations[0][1] == 1


def test_sampled_partitions_above_exhaustive_limit():
    rep = nash_williams_check(prismatic_torus((8, 8, 16)), t=2, samples=200)
    assert not rep.exhaustive and rep.checked == 200 and rep.ok


def test_certificate_implies_partition_condition(pt448, pt448_mcf):
    assert fault_certificate(pt448_mcf, 128, 1).ok
    assert nash_williams_check(pt448, t=2).ok


def test_failed_arcs_match_ocs(pt448):
    ocs = all_ocs()[0]
    arcs = failed_arcs(pt448, ocs)
    assert arcs and len(arcs) % 2 == 0
    assert all(pt448.ocs_of(a) == ocs for a in arcs)
    assert sum(len(failed_arcs(pt448, o)) for o in all_ocs()) == 2 * len(pt448.optical)


@pytest.fixture(scope="module")
def robust_pt(pt448):
    A, _ = allowed_turns(pt448, "apl", robust=True)
    return A


def test_robust_turns_reach_all_pairs_under_every_fault(pt448, robust_pt):
    results = route_under_faults(pt448, robust_pt, route=False)
    assert len(results) == NUM_OCS + 1
    assert results[0].ocs is None
    assert all(not r.unreachable for r in results)
    assert all(r.table is None for r in results)


def test_no_fault_scenario_equals_baseline(pt448, robust_pt, tmp_path):
    ocs = all_ocs()[5]
    results = route_under_faults(pt448, robust_pt, scenarios=[None, ocs])
    base = route_ilp(allowed_paths(robust_pt))
    assert results[0].table.routes == base.routes
    faulted = results[1]
    dead = set(failed_arcs(pt448, ocs))
    for path in faulted.table.routes.values():
        assert all((a, b) not in dead for a, b in zip(path, path[1:]))
    assert faulted.l_max >= results[0].l_max
    write_fault_report(results, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "scenario,l_max,inv_l_max,unreachable"
    assert lines[1].startswith("none,") and lines[2].startswith(str(ocs))


def test_faulted_topology_stays_connected(pt448):
    for ocs in all_ocs():
        dead = {tuple(sorted(a)) for a in failed_arcs(pt448, ocs)}
        assert apsp_stats(pt448.with_edges_removed(dead)).diameter >= 8
