"""Time the compiled and pure-Python search kernels on the same workloads.

    python bench/bench_kernels.py [--repeat N]

Each workload runs on both backends; the outputs are compared and the
best-of-N wall time and the speed-up are printed.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from milnor import corpus, kernels
from milnor.bundles import _edge_arrays, _edge_order
from milnor.classifying import classifying_stage
from milnor.loops import edge_path_group


def cocycle_workload(name, group):
    X, G = corpus.complexes()[name], corpus.groups()[group]
    rels = [list(b) for b in X.two_cells]
    tails, heads = _edge_arrays(X)

    def run(backend):
        rows = kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(X.one_cells), rels,
                                      order=_edge_order(X), backend=backend)
        labels, n = kernels.gauge_classes(rows, tails, heads, len(X.vertices), G.mul_array, G.inv_array,
                                          backend=backend)
        return len(rows), n

    return f"cocycles+gauge {name}/{group}", run


def hom_workload(group, stage):
    G = corpus.groups()[group]
    pi = edge_path_group(classifying_stage(G, stage).delta)
    idx = pi.generator_index
    rels = [[(idx[g], e) for g, e in r] for r in pi.relators]

    def run(backend):
        rows = kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(pi.generators), rels,
                                      backend=backend)
        return len(rows), int(np.asarray(rows).sum())

    return f"homs pi1(B{group}_{stage}) -> {group}", run


def gauge_search_workload(name, group):
    X, G = corpus.complexes()[name], corpus.groups()[group]
    tails, heads = _edge_arrays(X)
    row = np.zeros(len(X.one_cells), dtype=np.int32)
    other = row.copy()
    other[-1] = G.order - 1  # not gauge-equivalent on a non-simply-connected base: full sweep

    def run(backend):
        t = kernels.first_gauge(row, other, tails, heads, len(X.vertices), G.mul_array, G.inv_array,
                                backend=backend)
        return None if t is None else tuple(t)

    return f"gauge search {name}/{group}", run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    try:
        from milnor.kernels import _core  # noqa: F401
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return 1
    workloads = [
        cocycle_workload("figure_eight", "S3"),
        cocycle_workload("rp2", "S3"),
        cocycle_workload("torus", "Z2xZ2"),
        cocycle_workload("torus", "S3"),
        hom_workload("S3", 3),
        gauge_search_workload("torus", "S3"),
    ]
    print(f"{'workload':42} {'compiled s':>11} {'python s':>10} {'speed-up':>9}")
    for label, run in workloads:
        times, results = {}, {}
        for backend in ("compiled", "python"):
            best = float("inf")
            for _ in range(args.repeat if backend == "compiled" else 1):
                t0 = time.perf_counter()
                results[backend] = run(backend)
                best = min(best, time.perf_counter() - t0)
            times[backend] = best
        same = "" if results["compiled"] == results["python"] else "  OUTPUTS DIFFER"
        print(f"{label:42} {times['compiled']:11.4f} {times['python']:10.4f} "
              f"{times['python'] / times['compiled']:8.1f}x{same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
