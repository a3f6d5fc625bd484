import os
import subprocess
import sys

import numpy as np
import pytest

from milnor import corpus, kernels
from milnor.bundles import _edge_arrays, all_cocycles
from milnor.groups import FinitelyPresentedGroup, parse_word
from oracles import naive_cocycles, naive_gauge_classes, naive_homs

try:
    from milnor.kernels import _core  # noqa: F401
    HAVE_CORE = True
except ImportError:
    HAVE_CORE = False

backends = ["python"] + (["compiled"] if HAVE_CORE else [])


def relator_rows(P, G, backend):
    idx = P.generator_index
    rels = [[(idx[g], e) for g, e in r] for r in P.relators]
    return kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(P.generators), rels, backend=backend)


@pytest.mark.parametrize("backend", backends)
def test_solve_relators_matches_naive(backend, grp):
    P = FinitelyPresentedGroup(("a", "b"), (parse_word("a b A B"), parse_word("a a b")))
    for G in grp.values():
        rows = relator_rows(P, G, backend)
        assert [tuple(r) for r in rows.tolist()] == sorted(naive_homs(P, G))


@pytest.mark.parametrize("backend", backends)
def test_gauge_classes_match_naive(backend, cx, grp):
    for name in ("circle", "disc", "hexagon"):
        X = cx[name]
        for G in (grp["Z2"], grp["S3"]):
            if name == "hexagon" and G.order > 2:
                continue
            rows = all_cocycles(X, G)
            naive_rows, naive_classes = naive_gauge_classes(X, G)
            # edges of a simplicial complex are listed in the same order as one_cells
            assert sorted(map(tuple, rows.tolist())) == sorted(naive_rows)
            tails, heads = _edge_arrays(X)
            labels, n = kernels.gauge_classes(rows, tails, heads, len(X.vertices), G.mul_array, G.inv_array,
                                              backend=backend)
            assert n == len(naive_classes)
            groups = {}
            for r, lab in zip(map(tuple, rows.tolist()), labels.tolist()):
                groups.setdefault(lab, set()).add(r)
            assert sorted(map(sorted, groups.values())) == sorted(map(sorted, naive_classes))


@pytest.mark.skipif(not HAVE_CORE, reason="compiled core not built")
def test_backends_agree(cx, grp):
    X, G = cx["sphere"], grp["S3"]
    rels = [[(e, s) for e, s in b] for b in X.two_cells]
    a = kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(X.one_cells), rels, backend="python")
    b = kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(X.one_cells), rels, backend="compiled")
    assert np.array_equal(a, b)
    tails, heads = _edge_arrays(X)
    la = kernels.gauge_classes(a, tails, heads, 4, G.mul_array, G.inv_array, backend="python")
    lb = kernels.gauge_classes(a, tails, heads, 4, G.mul_array, G.inv_array, backend="compiled")
    assert np.array_equal(la[0], lb[0]) and la[1] == lb[1]
    fa = kernels.first_gauge(a[3], a[-1], tails, heads, 4, G.mul_array, G.inv_array, backend="python")
    fb = kernels.first_gauge(a[3], a[-1], tails, heads, 4, G.mul_array, G.inv_array, backend="compiled")
    assert fa is not None and list(fa) == list(fb)


@pytest.mark.parametrize("backend", backends)
def test_first_gauge_is_lexicographically_first(backend, cx, grp):
    from itertools import product

    from oracles import naive_gauge

    X, G = cx["circle"], grp["S3"]
    rows = [tuple(r) for r in all_cocycles(X, G).tolist()]
    tails, heads = _edge_arrays(X)
    for r1 in rows[:40:7]:
        for r2 in rows[::11]:
            got = kernels.first_gauge(np.array(r1, np.int32), np.array(r2, np.int32), tails, heads, 3,
                                      G.mul_array, G.inv_array, backend=backend)
            want = next((t for t in product(range(6), repeat=3) if naive_gauge(G, X, r1, t) == r2), None)
            assert (None if got is None else tuple(got)) == want


@pytest.mark.parametrize("backend", backends)
def test_cap(backend, grp):
    G = grp["S3"]
    with pytest.raises(kernels.SearchLimitExceeded):
        kernels.solve_relators(G.mul_array, G.inv_array, G.identity, 8, [], cap=1000, backend=backend)


def test_cap_from_environment(monkeypatch, cx, grp):
    monkeypatch.setenv("MILNOR_SEARCH_CAP", "50")
    assert kernels.search_cap() == 50
    with pytest.raises(kernels.SearchLimitExceeded):
        all_cocycles(cx["torus"], grp["S3"])
    monkeypatch.delenv("MILNOR_SEARCH_CAP")
    assert kernels.search_cap() == kernels.DEFAULT_CAP


def test_evaluations_only_count_branches(cx, grp):
    # no triangles: every edge branches, so each level tries every candidate
    X, G = cx["circle"], grp["Z2"]
    all_cocycles(X, G)
    assert kernels.solve_relators.last_evaluations == 2 + 4 + 8


def test_pure_switch():
    env = dict(os.environ, MILNOR_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from milnor import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_naive_cocycle_oracle_sanity(cx, grp):
    # disc: two free edges, the third forced
    assert len(naive_cocycles(cx["disc"], grp["S3"])) == 36
    assert len(corpus.complexes()) >= 6
