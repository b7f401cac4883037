from __future__ import annotations

import csv

import pytest

from podsynth.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, CliError, load_topology, main, report, torus_shapes
from podsynth.topofile import read_topology


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def compare_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("compare")
    assert main(["compare", "--size", "128", "--out", str(out)]) == EXIT_OK
    return out


def test_compare_128_has_reference_pt_row(compare_dir):
    rows = {r["name"]: r for r in _rows(compare_dir / "compare_128.csv")}
    pt = rows["pt_4x4x8"]
    assert int(pt["diameter"]) == 8
    assert float(pt["avg_hops"]) == pytest.approx(4.032, abs=1e-3)
    assert float(pt["mcf"]) == pytest.approx(0.00781, abs=5e-5)
    assert len(rows) == len(torus_shapes(128))


def test_report_normalizes_against_best_pt(compare_dir, tmp_path):
    rows = report(compare_dir)
    best = next(r for r in rows if r["name"] == "pt_4x4x8")
    assert best["mcf_ratio"] == "1.0000" and best["hops_ratio"] == "1.0000"
    assert all(float(r["mcf_ratio"]) <= 1.0 + 1e-9 for r in rows)
    assert main(["report", "--in", str(compare_dir), "--out", str(tmp_path)]) == EXIT_OK
    assert len(_rows(tmp_path / "summary.csv")) == len(rows)


def test_report_ratio_for_better_topology(tmp_path):
    (tmp_path / "compare_128.csv").write_text(
        "name,nodes,diameter,avg_hops,mcf\npt_4x4x8,128,8,4.032,0.00781\ntons,128,6,3.3,0.01403\n"
    )
    rows = {r["name"]: r for r in report(tmp_path)}
    assert float(rows["tons"]["mcf_ratio"]) == pytest.approx(0.01403 / 0.00781, abs=1e-4)


def test_empty_report_dir_fails(tmp_path):
    with pytest.raises(CliError):
        report(tmp_path)
    assert main(["report", "--in", str(tmp_path), "--out", str(tmp_path)]) == EXIT_INFEASIBLE


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["synth", "--out", "x"], ["eval"], ["synth", "--cubes", "1", "1"], ["compare", "--size", "100"]],
)
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE


def test_bad_fault_budget_is_usage_error(tmp_path):
    assert main(["faults", "--in", "pt_4x4x4", "--fault-budget", "48", "--out", str(tmp_path)]) == EXIT_USAGE


def test_named_topologies():
    assert load_topology("pt_4x4x8", 0).n == 128
    assert load_topology("kautz_4_1", 0).n == 20
    assert load_topology("jellyfish_20_4", 3).name.endswith("s3")
    with pytest.raises(CliError):
        load_topology("no_such_thing", 0)


def test_synth_single_cube_round_trips(tmp_path):
    assert main(["synth", "--cubes", "1", "1", "1", "--mode", "lp", "--out", str(tmp_path)]) == EXIT_OK
    topo_files = list(tmp_path.glob("*.topo"))
    assert len(topo_files) == 1
    topo = read_topology(topo_files[0], validate=True)
    assert topo.n == 64
    log = _rows(tmp_path / "synth_64_lp.log.csv")
    assert len(log) == 48


def test_synth_mps_export(tmp_path):
    assert main(["synth", "--cubes", "1", "1", "2", "--mode", "lp-sym", "--solver", "mps-export", "--out", str(tmp_path)]) == EXIT_OK
    text = (tmp_path / "tons_128_lp-sym.mps").read_text()
    assert text.startswith("NAME") and "ENDATA" in text


def test_eval_writes_metrics(tmp_path):
    assert main(["eval", "--in", "kautz_4_1", "--in", "pt_4x4x4", "--out", str(tmp_path)]) == EXIT_OK
    rows = {r["name"]: r for r in _rows(tmp_path / "metrics.csv")}
    assert rows["kautz_4_1"]["diameter"] == "2"
    # uniform MCF of a k-ary torus is 8 / (k_max * n)
    assert float(rows["pt_4x4x4"]["mcf"]) == pytest.approx(8 / (4 * 64), abs=1e-7)


def test_route_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["route", "--in", "pt_4x4x8", "--priority", "cpl", "--out", str(d)]) == EXIT_OK
    names = sorted(p.name for p in a.iterdir())
    assert names == ["pt_4x4x8_cpl.routes", "pt_4x4x8_cpl_load.csv"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_faults_reach_only(tmp_path):
    assert main(["faults", "--in", "pt_4x4x4", "--reach-only", "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "pt_4x4x4_faults.csv")
    assert len(rows) == 49 and all(r["unreachable"] == "0" for r in rows)
