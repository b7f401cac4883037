from __future__ import annotations

import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import complete, path_graph, random_connected, ring, to_nx
from podsynth.baselines import prismatic_torus
from podsynth.metrics import (
    DisconnectedError,
    MetricReport,
    SemiMetric,
    apsp_stats,
    cut_sparsity,
    distance_matrix,
    evaluate,
    mcf_flow_oracle,
    mcf_lr,
    theoretical_bound,
    write_reports,
)
from podsynth.pod import Topology
from podsynth.synth import mcf_of_fixed


def test_pt_448_hop_stats(pt448):
    rep = apsp_stats(pt448)
    assert rep.diameter == 8
    assert rep.avg_hops == pytest.approx(4.032, abs=1e-3)


def test_pt_888_hop_stats():
    rep = apsp_stats(prismatic_torus((8, 8, 8)))
    assert rep.diameter == 12
    assert rep.avg_hops == pytest.approx(6.012, abs=1e-3)


def test_complete_graph_hops():
    rep = apsp_stats(complete(5))
    assert (rep.diameter, rep.avg_hops) == (1, 1.0)


@given(st.integers(3, 14), st.floats(0.0, 0.4), st.integers(0, 10_000), st.booleans())
def test_distance_matrix_matches_networkx(n, p, seed, directed):
    topo = random_connected(n, p, seed, directed)
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(topo)))
    d = distance_matrix(topo)
    for s in range(n):
        for t in range(n):
            assert d[s, t] == ref[s][t]


def test_disconnected_names_pair():
    topo = Topology.generic(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedError, match="unreachable"):
        apsp_stats(topo)


def test_k4_mcf_is_one():
    k4 = complete(4)
    assert mcf_lr(k4)[0] == pytest.approx(1.0, abs=1e-9)
    assert mcf_flow_oracle(k4) == pytest.approx(1.0, abs=1e-9)
    assert mcf_of_fixed(k4) == pytest.approx(1.0, abs=1e-9)


def test_p3_mcf_is_half():
    p3 = path_graph(3)
    assert mcf_lr(p3)[0] == pytest.approx(0.5, abs=1e-9)
    assert mcf_flow_oracle(p3) == pytest.approx(0.5, abs=1e-9)


def test_ring_oracle_matches_lr():
    c4 = ring(4)
    assert mcf_flow_oracle(c4) == pytest.approx(mcf_lr(c4)[0], abs=1e-6)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_ring_closed_form(n):
    # uniform demand on a ring: each link carries sum of distances / n per direction
    dists = [min(k, n - k) for k in range(1, n)]
    expected = 2 * n / (n * sum(dists))
    assert mcf_lr(ring(n))[0] == pytest.approx(expected, abs=1e-9)


def test_lr_metric_is_a_semimetric():
    topo = random_connected(8, 0.25, 3)
    lam, metric = mcf_lr(topo, one_leg=False)
    assert metric.max_triangle_violation() <= 1e-7
    closed = metric.closure()
    np.testing.assert_allclose(closed.d, metric.d, atol=1e-7)


def test_semimetric_closure_matches_networkx():
    rng = np.random.default_rng(1)
    w = rng.uniform(1, 5, (6, 6))
    w = (w + w.T) / 2
    np.fill_diagonal(w, 0)
    g = nx.from_numpy_array(w)
    ref = dict(nx.all_pairs_dijkstra_path_length(g))
    closed = SemiMetric(w).closure()
    for i in range(6):
        for j in range(6):
            assert closed.d[i, j] == pytest.approx(ref[i][j])


def test_cut_sparsity_examples():
    assert cut_sparsity(complete(4), [0]) == pytest.approx(1.0)
    assert cut_sparsity(ring(6), [0, 1, 2]) == pytest.approx(2 / 9)
    with pytest.raises(ValueError):
        cut_sparsity(ring(6), [])


def test_random_cuts_bound_pt_mcf(pt448, pt448_mcf):
    lam = pt448_mcf
    rng = np.random.default_rng(0)
    for _ in range(200):
        k = int(rng.integers(1, pt448.n))
        S = rng.choice(pt448.n, size=k, replace=False)
        assert cut_sparsity(pt448, S) >= lam - 1e-12


def test_theoretical_bound_values():
    assert theoretical_bound(128, 6) == pytest.approx(0.01731, abs=1e-5)
    assert theoretical_bound(20, 4) == pytest.approx(0.0926, abs=1e-4)
    assert theoretical_bound(20, 4) == pytest.approx(4 / (20 * math.log(20, 4)))


@pytest.mark.parametrize("n,mcf", [(128, 0.00781), (128, 0.01403), (256, 0.00636), (512, 0.00195)])
def test_reference_values_below_bound(n, mcf):
    assert mcf <= theoretical_bound(n, 6)


def test_evaluate_and_write(tmp_path):
    rep = evaluate(ring(6))
    assert rep.mcf == pytest.approx(mcf_lr(ring(6))[0])
    assert rep.per_source_injection == pytest.approx(rep.mcf * 6)
    write_reports([rep, MetricReport("x", 2, 1, 1.0)], tmp_path / "r.csv")
    text = (tmp_path / "r.csv").read_text().splitlines()
    assert text[0].startswith("name,nodes,diameter")
    assert len(text) == 3
