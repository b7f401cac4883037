from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import complete, random_connected, ring
from podsynth.baselines import prismatic_torus
from podsynth.lp import Status, solve_lp
from podsynth.metrics import mcf_flow_oracle, mcf_lr
from podsynth.pod import CUBE_NODES, Topology, is_translation_invariant, validate_topology
from podsynth.synth import (
    SynthesisError,
    TonsOptions,
    build_tons_model,
    edge_orbits,
    fixed_model,
    mcf_of_fixed,
    polish_generic,
    relax_iterate,
    solve_tons,
    synth_generic,
)

FAST_POLISH = dict(polish_steps=3000, polish_time=5.0)


def test_options_validation():
    with pytest.raises(ValueError):
        TonsOptions(interval=0)
    with pytest.raises(ValueError):
        TonsOptions(fault_budget=48)
    with pytest.raises(ValueError):
        TonsOptions(integrality="exact")


def test_symmetric_128_row_count(skel128):
    tm = build_tons_model(skel128, TonsOptions(symmetry=True), binary=False)
    assert len(tm.c4_rows) == 64 * 127
    # one variable per translation orbit of candidates
    assert len(tm.units) == len(edge_orbits(skel128, skel128.all_l_valid))


def test_full_128_row_count(skel128):
    tm = build_tons_model(skel128, TonsOptions(), binary=False)
    assert len(tm.c4_rows) == 128 * 127
    assert len(tm.units) == len(skel128.all_l_valid)


def test_fault_row(skel128):
    tm = build_tons_model(skel128, TonsOptions(symmetry=True, fault_budget=1), binary=False)
    rows = [r for r, name in tm.model.row_names.items() if name == "fault"]
    assert len(rows) == 1
    assert tm.model.rhs[rows[0]] == pytest.approx(2 / 4096)


def test_edge_orbits_partition_and_closure(skel128):
    orbits = edge_orbits(skel128, skel128.all_l_valid)
    flat = [e for o in orbits for e in o]
    assert sorted(flat) == sorted(skel128.all_l_valid)
    for orbit in orbits:
        for t in skel128.translations:
            tab = skel128.translation_table(t)
            assert {tuple(sorted((int(tab[a]), int(tab[b])))) for a, b in orbit} == set(orbit)


def test_single_cube_forces_torus(skel64):
    topo, records = relax_iterate(skel64, TonsOptions())
    assert set(topo.edges) == set(prismatic_torus((4, 4, 4)).edges)
    assert len(records) == 48
    assert not any(r.solved for r in records)


@pytest.mark.parametrize("interval", [5, 8, 48])
def test_relax_iterate_progress(skel64, interval):
    _, records = relax_iterate(skel64, TonsOptions(interval=interval))
    assert len(records) == -(-48 // interval)
    assert [len(r.fixed) for r in records[:-1]] == [interval] * (len(records) - 1)


def test_single_cube_milp(skel64):
    opts = TonsOptions(integrality="milp")
    topo, lam, bound, status = solve_tons(build_tons_model(skel64, opts), opts, skel64)
    assert status == Status.OPTIMAL
    assert validate_topology(topo)
    assert set(topo.edges) == set(prismatic_torus((4, 4, 4)).edges)
    assert mcf_of_fixed(topo) >= lam - 1e-6


def test_single_cube_model_is_pt_evaluation(skel64):
    tm = build_tons_model(skel64, TonsOptions(), binary=False)
    sol = solve_lp(tm.model)
    assert sol.objective == pytest.approx(mcf_of_fixed(prismatic_torus((4, 4, 4))), abs=1e-7)


def test_consumed_port_with_candidates_is_rejected(skel128):
    e = skel128.all_l_valid[0]
    with pytest.raises(SynthesisError):
        build_tons_model(skel128, TonsOptions(), fixed_optical=[e], candidates=list(skel128.all_l_valid[:4]))


@pytest.mark.parametrize("seed", range(12))
def test_dual_matches_lr_and_oracle(seed):
    topo = random_connected(7 + seed % 3, 0.2, seed, directed=seed % 2 == 1)
    dual = mcf_of_fixed(topo)
    assert dual == pytest.approx(mcf_lr(topo, one_leg=False)[0], abs=1e-6)
    assert dual == pytest.approx(mcf_flow_oracle(topo), abs=1e-6)


@given(st.integers(4, 9), st.floats(0.05, 0.5), st.integers(0, 10_000))
def test_one_leg_equals_full(n, p, seed):
    topo = random_connected(n, p, seed)
    full = solve_lp(fixed_model(topo, one_leg=False).model).objective
    one = solve_lp(fixed_model(topo, one_leg=True).model).objective
    assert one == pytest.approx(full, abs=1e-6)


def test_known_values():
    assert mcf_of_fixed(complete(4)) == pytest.approx(1.0)
    assert mcf_of_fixed(ring(4)) == pytest.approx(mcf_flow_oracle(ring(4)))


@pytest.mark.slow
def test_symmetric_evaluation_matches_full(pt448, pt448_mcf):
    assert is_translation_invariant(pt448)
    assert pt448_mcf == pytest.approx(0.0078125, abs=1e-7)
    assert mcf_of_fixed(pt448, symmetry=False) == pytest.approx(pt448_mcf, abs=1e-7)


@pytest.mark.parametrize("directed", [True, False])
def test_generic_respects_degree(directed):
    r = 3
    topo = synth_generic(9, r, directed, TonsOptions(**FAST_POLISH))
    out = np.zeros(9, int)
    inn = np.zeros(9, int)
    for a, b in topo.edges:
        out[a] += 1
        inn[b] += 1
    if directed:
        assert out.max() <= r and inn.max() <= r
    else:
        assert (out + inn).max() <= r
    assert mcf_of_fixed(topo) > 0


def test_generic_polish_never_hurts():
    base = synth_generic(8, 3, True, TonsOptions(polish=False))
    polished = polish_generic(base, TonsOptions(**FAST_POLISH))
    assert mcf_of_fixed(polished) >= mcf_of_fixed(base) - 1e-9
    assert sorted(d for _, d in _degrees(polished)) == sorted(d for _, d in _degrees(base))


def _degrees(topo: Topology):
    out: dict[int, tuple[int, int]] = {}
    for a, b in topo.edges:
        o, i = out.get(a, (0, 0))
        out[a] = (o + 1, i)
        o, i = out.get(b, (0, 0))
        out[b] = (o, i + 1)
    return sorted(out.items())


def test_generic_milp_small():
    topo = synth_generic(6, 2, True, TonsOptions(integrality="milp", polish=False))
    relaxed = synth_generic(6, 2, True, TonsOptions(polish=False))
    assert mcf_of_fixed(topo) >= mcf_of_fixed(relaxed) - 1e-6


def test_symmetric_output_is_invariant(skel64):
    topo, _ = relax_iterate(skel64, TonsOptions(symmetry=True))
    assert is_translation_invariant(topo)
    assert all(n < CUBE_NODES for e in topo.optical for n in e)
