from __future__ import annotations

import io
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from podsynth.lp import (
    Budget,
    LinearModel,
    ModelError,
    Status,
    dual_objective,
    export_standard,
    read_mps,
    solve_lp,
    solve_milp,
)

LP_METHODS = ["highs", "highs-ds", "highs-ipm", "simplex"]


@pytest.mark.parametrize("method", LP_METHODS)
def test_single_bound(method):
    m = LinearModel("max")
    x = m.add_variable(obj=1.0)
    m.add_row({x: 1.0}, "<=", 3.0)
    sol = solve_lp(m, method=method)
    assert sol.status == Status.OPTIMAL
    assert sol.objective == pytest.approx(3.0, abs=1e-9)


@pytest.mark.parametrize("method", LP_METHODS)
def test_cover(method):
    m = LinearModel("min")
    x, y = m.add_variables(2, obj=1.0)
    m.add_row({x: 1.0, y: 1.0}, ">=", 1.0)
    assert solve_lp(m, method=method).objective == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("method", LP_METHODS)
def test_infeasible(method):
    m = LinearModel("min")
    x = m.add_variable(obj=1.0)
    m.add_row({x: 1.0}, "<=", 0.0)
    m.add_row({x: 1.0}, ">=", 1.0)
    assert solve_lp(m, method=method).status == Status.INFEASIBLE


@pytest.mark.parametrize("method", LP_METHODS)
def test_unbounded(method):
    m = LinearModel("max")
    x = m.add_variable(obj=1.0)
    m.add_row({x: 1.0}, ">=", 1.0)
    assert solve_lp(m, method=method).status == Status.UNBOUNDED


def test_binary_requires_milp():
    m = LinearModel("max")
    m.add_variable(ub=1.0, binary=True, obj=1.0)
    with pytest.raises(ModelError):
        solve_lp(m)
    assert solve_lp(m, relax=True).objective == pytest.approx(1.0)


def test_bad_row_reference():
    m = LinearModel()
    m.add_variable()
    with pytest.raises(ModelError):
        m.add_row({3: 1.0}, "<=", 1.0)


@pytest.mark.parametrize("method", ["bnb", "highs"])
def test_binary_pair(method):
    m = LinearModel("max")
    x, y = m.add_variables(2, 0.0, 1.0, binary=True, obj=1.0)
    m.add_row({x: 1.0, y: 1.0}, "<=", 1.0)
    sol = solve_milp(m, method=method)
    assert sol.status == Status.OPTIMAL
    assert sol.objective == pytest.approx(1.0)


def knapsack(values, weights, cap) -> LinearModel:
    m = LinearModel("max")
    idx = m.add_variables(len(values), 0.0, 1.0, binary=True, obj=np.asarray(values, float))
    m.add_row(dict(zip(idx.tolist(), weights)), "<=", cap)
    return m


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("method", ["bnb", "highs"])
def test_knapsack_matches_enumeration(seed, method):
    rng = np.random.default_rng(seed)
    values = rng.integers(1, 30, 10).tolist()
    weights = rng.integers(1, 20, 10).tolist()
    cap = int(sum(weights) * 0.4)
    best = max(
        sum(v for v, b in zip(values, bits) if b)
        for bits in itertools.product((0, 1), repeat=10)
        if sum(w for w, b in zip(weights, bits) if b) <= cap
    )
    sol = solve_milp(knapsack(values, weights, cap), Budget(100_000, 60), method=method)
    assert sol.status == Status.OPTIMAL
    assert sol.objective == pytest.approx(best)


def random_packing(seed: int) -> LinearModel:
    rng = np.random.default_rng(seed)
    n, k = 6, 4
    m = LinearModel("max")
    idx = m.add_variables(n, 0.0, 1.0, binary=True, obj=rng.integers(1, 10, n).astype(float))
    for _ in range(k):
        m.add_row(dict(zip(idx.tolist(), rng.integers(0, 6, n).astype(float))), "<=", float(rng.integers(3, 12)))
    return m


def test_relaxation_bounds_milp_on_50_instances():
    for seed in range(50):
        m = random_packing(seed)
        lp = solve_lp(m, relax=True)
        ip = solve_milp(m, method="bnb")
        assert ip.status == Status.OPTIMAL
        assert lp.objective >= ip.objective - 1e-9


def test_bnb_agrees_with_highs_milp():
    for seed in range(20):
        m = random_packing(seed)
        assert solve_milp(m, method="bnb").objective == pytest.approx(solve_milp(m, method="highs").objective)


def test_node_budget_reports_exhaustion():
    rng = np.random.default_rng(3)
    values = rng.integers(10, 40, 30).tolist()
    weights = rng.integers(10, 40, 30).tolist()
    sol = solve_milp(knapsack(values, weights, sum(weights) // 2), Budget(max_nodes=2, time_limit=10), method="bnb")
    assert sol.status == Status.BUDGET_EXHAUSTED
    assert sol.bound is not None
    full = solve_milp(knapsack(values, weights, sum(weights) // 2), method="highs")
    assert sol.bound >= full.objective - 1e-9
    if sol.x is not None:
        assert sol.bound >= sol.objective - 1e-9


@st.composite
def feasible_lps(draw):
    n = draw(st.integers(1, 5))
    k = draw(st.integers(1, 5))
    A = np.array(draw(st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n), min_size=k, max_size=k)), float)
    b = np.array(draw(st.lists(st.integers(1, 10), min_size=k, max_size=k)), float)
    c = np.array(draw(st.lists(st.integers(-3, 5), min_size=n, max_size=n)), float)
    return A, b, c


@given(feasible_lps())
def test_simplex_matches_highs_and_strong_duality(data):
    A, b, c = data
    m = LinearModel("max")
    idx = m.add_variables(A.shape[1], 0.0, 4.0, obj=c)
    for row, rhs in zip(A, b):
        m.add_row(dict(zip(idx.tolist(), row)), "<=", rhs)
    ref = solve_lp(m, method="highs")
    own = solve_lp(m, method="simplex")
    assert ref.status == own.status == Status.OPTIMAL
    assert own.objective == pytest.approx(ref.objective, abs=1e-7)
    assert dual_objective(m, ref) == pytest.approx(ref.objective, abs=1e-6)


def toy_model() -> LinearModel:
    m = LinearModel("max", "toy")
    x, y = m.add_variables(2, 0.0, [4.0, np.inf], obj=[3.0, 2.0])
    z = m.add_variable(0.0, 1.0, binary=True, obj=1.5)
    m.add_row({x: 1.0, y: 1.0}, "<=", 6.0)
    m.add_row({x: 1.0, y: -1.0, z: 2.0}, ">=", -1.0)
    m.add_row({y: 1.0, z: 1.0}, "==", 2.5)
    return m


def test_mps_round_trip():
    m = toy_model()
    buf = io.StringIO()
    export_standard(m, buf)
    back = read_mps(io.StringIO(buf.getvalue()))
    assert (back.num_vars, back.num_rows) == (m.num_vars, m.num_rows)
    assert back.sense == m.sense
    assert back.is_mip()
    for a, b in [(solve_milp(m, method="highs"), solve_milp(back, method="highs")), (solve_lp(m, relax=True), solve_lp(back, relax=True))]:
        assert a.objective == pytest.approx(b.objective, abs=1e-9)


def test_mps_round_trip_file(tmp_path):
    m = toy_model()
    export_standard(m, tmp_path / "toy.mps")
    back = read_mps(tmp_path / "toy.mps")
    np.testing.assert_allclose(back.matrix().toarray(), m.matrix().toarray())
    np.testing.assert_allclose(back.rhs, m.rhs)


def test_mps_readable_by_external_solver(tmp_path):
    highspy = pytest.importorskip("highspy")
    m = toy_model()
    path = tmp_path / "toy.mps"
    export_standard(m.relaxed(), path)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.getInfo().objective_function_value == pytest.approx(solve_lp(m, relax=True).objective, abs=1e-9)
