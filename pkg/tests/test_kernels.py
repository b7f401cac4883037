from __future__ import annotations

import subprocess
import sys

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_connected, to_nx
from podsynth import _kernels_py, kernels

compiled = pytest.importorskip("podsynth._kernels")

BACKENDS = [_kernels_py, compiled]


def test_compiled_backend_selected():
    assert kernels.BACKEND == "compiled"


def test_env_var_forces_fallback():
    code = "import podsynth.kernels as k; print(k.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], env={"PODSYNTH_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@given(st.integers(2, 25), st.floats(0, 0.3), st.integers(0, 10_000), st.booleans())
def test_apsp_backends_agree_with_networkx(n, p, seed, directed):
    topo = random_connected(n, p, seed, directed)
    indptr, indices = topo.csr
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(topo)))
    want = np.array([[ref[s][t] for t in range(n)] for s in range(n)])
    for mod in BACKENDS:
        np.testing.assert_array_equal(mod.apsp_bfs(indptr, indices), want)


@given(st.integers(2, 25), st.floats(0, 0.3), st.integers(0, 10_000), st.data())
def test_bfs_multi_backends_agree(n, p, seed, data):
    topo = random_connected(n, p, seed)
    indptr, indices = topo.csr
    sources = np.array(sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=4))), dtype=np.int64)
    dist = nx.multi_source_dijkstra_path_length(to_nx(topo), set(sources.tolist()))
    want = np.array([dist[v] for v in range(n)])
    for mod in BACKENDS:
        np.testing.assert_array_equal(mod.bfs_multi(indptr, indices, sources), want)


def test_unreachable_is_minus_one():
    indptr = np.array([0, 1, 1, 1], dtype=np.int64)
    indices = np.array([1], dtype=np.int64)
    for mod in BACKENDS:
        d = mod.apsp_bfs(indptr, indices)
        assert d[0, 1] == 1 and d[0, 2] == -1 and d[1, 0] == -1


@given(st.integers(2, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=60))
def test_dynamic_dag_matches_reference(n, ops):
    dags = [mod.DynamicDAG(n) for mod in BACKENDS]
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    for u, v in ops:
        u, v = u % n, v % n
        if g.has_edge(u, v):
            expect = True
        elif u == v:
            expect = False
        else:
            g.add_edge(u, v)
            expect = nx.is_directed_acyclic_graph(g)
            if not expect:
                g.remove_edge(u, v)
        for dag in dags:
            assert dag.add_edge(u, v) == expect
    for dag in dags:
        pos = {int(x): i for i, x in enumerate(dag.order())}
        assert all(pos[a] < pos[b] for a, b in g.edges)
        assert dag.num_edges == g.number_of_edges()


def test_dynamic_dag_removal_reopens_edge():
    for mod in BACKENDS:
        dag = mod.DynamicDAG(3)
        assert dag.add_edge(0, 1) and dag.add_edge(1, 2)
        assert not dag.add_edge(2, 0)
        dag.remove_edge(1, 2)
        assert dag.add_edge(2, 0)
        assert not dag.has_edge(1, 2)
