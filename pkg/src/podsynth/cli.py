"""Command-line driver: synthesize, evaluate, route, sweep faults, compare and report.

Exit codes: 0 success, 1 usage, 2 infeasible or failed validation, 3 solver
budget exhausted.  All randomness comes from ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import re
import sys
from pathlib import Path
from typing import Sequence

from .baselines import BEST_PT, TorusDims, gen_kautz, jellyfish, kautz, prismatic_torus, xpander
from .fault import FaultBudgetError, fault_certificate, ocs_disjoint_trees, route_under_faults, write_fault_report
from .lp import Budget, Status, export_standard
from .metrics import DisconnectedError, MetricReport, evaluate, write_reports
from .pod import CUBE_SIDE, InvalidConfigError, PodConfig, Topology, build_pod
from .routing import allowed_turns, route_topology, verify_deadlock_free, write_load_profile, write_routes
from .synth import (
    SynthesisError,
    TonsOptions,
    build_tons_model,
    fixed_model,
    mcf_of_fixed,
    relax_iterate,
    solve_tons,
    synth_generic,
)
from .topofile import TopologyFormatError, read_topology, write_topology

log = logging.getLogger("podsynth")

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INFEASIBLE) -> None:
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# topology lookup
# ---------------------------------------------------------------------------

_NAMED = [
    (re.compile(r"pt_(\d+)x(\d+)x(\d+)$"), lambda g, seed: prismatic_torus(TorusDims(*map(int, g)))),
    (re.compile(r"kautz_(\d+)_(\d+)$"), lambda g, seed: kautz(int(g[0]), int(g[1]))),
    (re.compile(r"genkautz_(\d+)_(\d+)$"), lambda g, seed: gen_kautz(int(g[0]), int(g[1]))),
    (re.compile(r"xpander_(\d+)_(\d+)$"), lambda g, seed: xpander(int(g[0]), int(g[1]), seed)),
    (re.compile(r"jellyfish_(\d+)_(\d+)$"), lambda g, seed: jellyfish(int(g[0]), int(g[1]), seed)),
    (re.compile(r"jellyfishd_(\d+)_(\d+)$"), lambda g, seed: jellyfish(int(g[0]), int(g[1]), seed, directed=True)),
]


def load_topology(spec: str, seed: int = 0) -> Topology:
    """A topology file path, or a baseline name such as ``pt_4x4x8`` or ``kautz_4_1``."""
    path = Path(spec)
    if path.is_file():
        return read_topology(path, validate=True)
    for pattern, make in _NAMED:
        m = pattern.match(spec.lower())
        if m:
            return make(m.groups(), seed)
    raise CliError(f"no topology file or known baseline named {spec!r}", EXIT_USAGE)


def torus_shapes(size: int) -> list[tuple[int, int, int]]:
    """Every sorted ``X <= Y <= Z`` prismatic torus shape with ``size`` nodes."""
    out = []
    for x in range(CUBE_SIDE, size + 1, CUBE_SIDE):
        for y in range(x, size + 1, CUBE_SIDE):
            if size % (x * y):
                continue
            z = size // (x * y)
            if z >= y and z % CUBE_SIDE == 0:
                out.append((x, y, z))
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _options(args) -> TonsOptions:
    return TonsOptions(
        symmetry=args.mode == "lp-sym",
        integrality="milp" if args.mode == "milp" else "relaxed-iterative",
        interval=args.interval,
        fault_budget=args.fault_budget,
        budget=Budget(max_nodes=args.max_nodes, time_limit=args.time_limit),
        seed=args.seed,
    )


def cmd_synth(args) -> int:
    out = _out_dir(args)
    opts = _options(args)
    if args.generic:
        n, r = args.generic
        topo = synth_generic(n, r, directed=not args.undirected, opts=opts)
        return _finish_synth(topo, out, Status.OPTIMAL)
    if not args.cubes:
        raise CliError("synth needs --cubes X Y Z or --generic N R", EXIT_USAGE)
    skel = build_pod(PodConfig(*args.cubes))
    if args.solver == "mps-export":
        tm = build_tons_model(skel, opts, binary=opts.integrality == "milp")
        dest = out / f"tons_{skel.num_nodes}_{args.mode}.mps"
        export_standard(tm.model, dest)
        print(f"wrote {dest}")
        return EXIT_OK
    if opts.integrality == "milp":
        topo, lam, bound, status = solve_tons(build_tons_model(skel, opts, binary=True), opts, skel)
        log.info("milp objective %.6g bound %s status %s", lam, bound, status)
        return _finish_synth(topo, out, status)
    with open(out / f"synth_{skel.num_nodes}_{args.mode}.log.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "objective", "value", "seconds", "solved", "fixed"])

        def record(rec) -> None:
            w.writerow([rec.iteration, f"{rec.objective:.9g}", f"{rec.value:.6g}", f"{rec.seconds:.3f}", int(rec.solved), " ".join(f"{a}-{b}" for a, b in rec.fixed)])
            fh.flush()

        topo, _ = relax_iterate(skel, opts, record)
    return _finish_synth(topo, out, Status.OPTIMAL)


def _finish_synth(topo: Topology, out: Path, status: Status) -> int:
    dest = out / f"{topo.name}.topo"
    write_topology(topo, dest)
    rep = evaluate(topo)
    write_reports([rep], out / f"{topo.name}.csv")
    print(f"wrote {dest}: diameter {rep.diameter} avg_hops {rep.avg_hops:.4f} mcf {rep.mcf:.6g}")
    return EXIT_BUDGET if status == Status.BUDGET_EXHAUSTED else EXIT_OK


def cmd_eval(args) -> int:
    out = _out_dir(args)
    reports = []
    for spec in args.inputs:
        topo = load_topology(spec, args.seed)
        if args.solver == "mps-export":
            dest = out / f"{topo.name}_mcf.mps"
            export_standard(fixed_model(topo).model, dest)
            print(f"wrote {dest}")
            continue
        rep = evaluate(topo, with_mcf=not args.no_mcf)
        reports.append(rep)
        print(_fmt(rep))
    if reports:
        write_reports(reports, out / "metrics.csv")
    return EXIT_OK


def _fmt(rep: MetricReport) -> str:
    mcf = "-" if rep.mcf is None else f"{rep.mcf:.6g}"
    return f"{rep.name}: nodes {rep.nodes} diameter {rep.diameter} avg_hops {rep.avg_hops:.4f} mcf {mcf}"


def cmd_route(args) -> int:
    out = _out_dir(args)
    topo = load_topology(args.inputs[0], args.seed)
    budget = Budget(max_nodes=args.max_nodes, time_limit=args.time_limit)
    res = route_topology(topo, args.priority, args.robust, args.seed, budget=budget)
    if not verify_deadlock_free(res.table, res.vcs, topo):
        raise CliError("final routing is not deadlock free")
    stem = f"{topo.name}_{args.priority}{'_robust' if args.robust else ''}"
    write_routes(res.table, out / f"{stem}.routes", res.vcs)
    write_load_profile(res.profile, out / f"{stem}_load.csv")
    bound = "-" if res.table.bound is None else f"{res.table.bound:.4f}"
    print(f"{stem}: l_max {res.profile.l_max} bound {bound} vc_hops {res.profile.vc_hops}")
    return EXIT_OK


def cmd_faults(args) -> int:
    out = _out_dir(args)
    topo = load_topology(args.inputs[0], args.seed)
    if topo.skeleton is None:
        raise CliError("fault sweeps need a pod topology", EXIT_USAGE)
    lam = mcf_of_fixed(topo)
    cert = fault_certificate(lam, topo.n, args.fault_budget)
    pair = ocs_disjoint_trees(topo)
    A, _ = allowed_turns(topo, "apl", robust=True, seed=args.seed)
    results = route_under_faults(topo, A, budget=Budget(args.max_nodes, args.time_limit), route=not args.reach_only)
    stem = f"{topo.name}_faults"
    write_fault_report(results, out / f"{stem}.csv")
    broken = sum(len(r.unreachable) for r in results)
    print(
        f"{stem}: lam {lam:.6g} certificate {'ok' if cert.ok else 'FAILED'} (t_max {cert.t_max}) "
        f"tree colors {len(pair.colors0)}/{len(pair.colors1)} unreachable {broken}"
    )
    return EXIT_OK if cert.ok and broken == 0 else EXIT_INFEASIBLE


def cmd_compare(args) -> int:
    out = _out_dir(args)
    if args.size % 64:
        raise CliError("--size must be a multiple of 64", EXIT_USAGE)
    reports = []
    for dims in torus_shapes(args.size):
        rep = evaluate(prismatic_torus(dims), with_mcf=not args.no_mcf)
        reports.append(rep)
        print(_fmt(rep))
    for spec in args.inputs or ():
        topo = load_topology(spec, args.seed)
        if topo.n != args.size:
            raise CliError(f"{spec} has {topo.n} nodes, not {args.size}", EXIT_USAGE)
        rep = evaluate(topo, with_mcf=not args.no_mcf)
        reports.append(rep)
        print(_fmt(rep))
    dest = out / f"compare_{args.size}.csv"
    write_reports(reports, dest)
    print(f"wrote {dest}")
    return EXIT_OK


def report(results_dir: str | Path) -> list[dict[str, object]]:
    """Per-size rows normalized to the best prismatic torus of that size."""
    files = sorted(Path(results_dir).glob("compare_*.csv"))
    if not files:
        raise CliError(f"no compare_*.csv files in {results_dir}")
    rows = []
    for f in files:
        with open(f, newline="") as fh:
            recs = list(csv.DictReader(fh))
        if not recs:
            continue
        size = int(recs[0]["nodes"])
        best_name = "pt_{}x{}x{}".format(*BEST_PT[size]) if size in BEST_PT else None
        pts = [r for r in recs if r["name"].startswith("pt_")]
        best = next((r for r in pts if r["name"] == best_name), None)
        if best is None and pts:
            best = max(pts, key=lambda r: float(r["mcf"] or 0.0))
        if best is None:
            raise CliError(f"{f.name} has no prismatic torus row to normalize against")
        for r in recs:
            row = {"size": size, "name": r["name"], "diameter": r["diameter"], "avg_hops": r["avg_hops"], "mcf": r["mcf"]}
            if r["mcf"] and best["mcf"]:
                row["mcf_ratio"] = f"{float(r['mcf']) / float(best['mcf']):.4f}"
            row["hops_ratio"] = f"{float(r['avg_hops']) / float(best['avg_hops']):.4f}"
            rows.append(row)
    return rows


def cmd_report(args) -> int:
    rows = report(args.inputs[0] if args.inputs else args.out)
    out = _out_dir(args)
    fields = ["size", "name", "diameter", "avg_hops", "mcf", "mcf_ratio", "hops_ratio"]
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    for r in rows:
        print(f"{r['size']:>5} {r['name']:<24} mcf_ratio {r.get('mcf_ratio', '-')} hops_ratio {r['hops_ratio']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="podsynth", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--out", default="results", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--time-limit", type=float, default=3600.0, help="solver time limit in seconds")
        sp.add_argument("--max-nodes", type=int, default=10_000, help="branch-and-bound node limit")
        sp.add_argument("--in", dest="inputs", action="append", help="topology file or baseline name (pt_4x4x8, kautz_4_1, ...)")

    s = sub.add_parser("synth", help="synthesize a topology")
    common(s)
    s.add_argument("--cubes", type=int, nargs=3, metavar=("X", "Y", "Z"))
    s.add_argument("--generic", type=int, nargs=2, metavar=("N", "R"), help="degree-bounded synthesis without pod constraints")
    s.add_argument("--undirected", action="store_true")
    s.add_argument("--mode", choices=["milp", "lp", "lp-sym"], default="lp-sym")
    s.add_argument("--interval", type=int, default=1)
    s.add_argument("--fault-budget", type=int, default=0)
    s.add_argument("--solver", choices=["builtin", "mps-export"], default="builtin")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("eval", help="hop statistics and MCF")
    common(e)
    e.add_argument("--no-mcf", action="store_true")
    e.add_argument("--solver", choices=["builtin", "mps-export"], default="builtin")
    e.set_defaults(func=cmd_eval, needs_input=True)

    r = sub.add_parser("route", help="deadlock-free routing")
    common(r)
    r.add_argument("--priority", choices=["apl", "cpl", "random"], default="cpl")
    r.add_argument("--robust", action="store_true")
    r.set_defaults(func=cmd_route, needs_input=True)

    f = sub.add_parser("faults", help="single-OCS fault sweep")
    common(f)
    f.add_argument("--fault-budget", type=int, default=1)
    f.add_argument("--reach-only", action="store_true", help="skip route selection, only check reachability")
    f.set_defaults(func=cmd_faults, needs_input=True)

    c = sub.add_parser("compare", help="prismatic tori (and --in topologies) of one size")
    common(c)
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--no-mcf", action="store_true")
    c.set_defaults(func=cmd_compare)

    rp = sub.add_parser("report", help="normalize compare_*.csv files against the best prismatic torus")
    common(rp)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "needs_input", False) and not args.inputs:
        print(f"podsynth {args.command}: --in is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"podsynth {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidConfigError, FaultBudgetError, TopologyFormatError) as exc:
        print(f"podsynth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SynthesisError, DisconnectedError, ValueError, AssertionError) as exc:
        print(f"podsynth {args.command}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
