"""Compare the compiled kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from podsynth import _kernels_py
from podsynth.baselines import prismatic_torus


def _dag_workload(mod, n: int, ops: np.ndarray) -> int:
    dag = mod.DynamicDAG(n)
    return sum(dag.add_edge(int(u), int(v)) for u, v in ops)


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        from podsynth import _kernels as compiled  # type: ignore[attr-defined]
    except ImportError:
        compiled = None
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    dag_n = 2000
    ops = rng.integers(0, dag_n, size=(20_000, 2))
    cases = []
    for dims in [(4, 4, 8), (4, 8, 8), (8, 8, 8)]:
        indptr, indices = prismatic_torus(dims).csr
        cases.append((f"apsp_bfs pt_{'x'.join(map(str, dims))}", lambda m, a=indptr, b=indices: m.apsp_bfs(a, b)))
        src = np.arange(0, len(indptr) - 1, 64)
        cases.append(
            (f"bfs_multi pt_{'x'.join(map(str, dims))}", lambda m, a=indptr, b=indices, s=src: m.bfs_multi(a, b, s))
        )
    cases.append((f"DynamicDAG {len(ops)} inserts", lambda m: _dag_workload(m, dag_n, ops)))

    print(f"{'kernel':32s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for label, fn in cases:
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:32s} {t_py:10.4f}")
            continue
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        print(f"{label:32s} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
