"""Pure-Python search kernels.

Same algorithms, same outputs and same evaluation counts as the compiled
``_core`` extension; used when the extension is unavailable or when
``MILNOR_PURE=1``.
"""
from __future__ import annotations

import numpy as np


class SearchLimitExceeded(RuntimeError):
    pass


def solve_relators(mul, inv, identity, n_gens, relators, order, cap):
    """Every assignment of group elements to generators that kills all relators.

    ``relators`` is a list of words ``[(gen, exp), ...]``.  Generators are
    branched on in ``order``; a relator with exactly one unknown letter fixes
    that letter.  Returns ``(rows, evaluations)``, counting the branch
    candidates tried (forced values are deductions, not candidates); rows are
    unsorted.
    """
    mul = [list(map(int, r)) for r in mul]
    inv = [int(x) for x in inv]
    n = len(mul)
    rels = [[(int(g), int(e)) for g, e in r] for r in relators]
    occ = [[] for _ in range(n_gens)]
    letters = [[0] * n_gens for _ in rels]
    for ri, r in enumerate(rels):
        for g, _ in r:
            letters[ri][g] += 1
        for g in sorted({g for g, _ in r}):
            occ[g].append(ri)
    unknown = [len({g for g, _ in r}) for r in rels]
    assign = [-1] * n_gens
    trail: list[int] = []
    out: list[tuple] = []
    evals = 0

    def value(x, e):
        return x if e > 0 else inv[x]

    def evaluate(r):
        acc = identity
        for g, e in r:
            acc = mul[acc][value(assign[g], e)]
        return acc

    def solve_single(ri):
        # relator = A x^e B with x the only unknown letter: x^e = A^-1 B^-1
        r = rels[ri]
        pos = next(k for k, (g, _) in enumerate(r) if assign[g] < 0)
        g, e = r[pos]
        if letters[ri][g] != 1:
            return None
        a = identity
        for h, f in r[:pos]:
            a = mul[a][value(assign[h], f)]
        b = identity
        for h, f in r[pos + 1:]:
            b = mul[b][value(assign[h], f)]
        x = mul[inv[a]][inv[b]]
        return g, (x if e > 0 else inv[x])

    def set_value(g0, v0):
        stack = [(g0, v0)]
        while stack:
            g, v = stack.pop()
            if assign[g] >= 0:
                if assign[g] != v:
                    return False
                continue
            assign[g] = v
            trail.append(g)
            for ri in occ[g]:
                unknown[ri] -= 1
            for ri in occ[g]:
                if unknown[ri] == 0:
                    if evaluate(rels[ri]) != identity:
                        return False
                elif unknown[ri] == 1:
                    forced = solve_single(ri)
                    if forced is not None:
                        stack.append(forced)
        return True

    def undo(mark):
        while len(trail) > mark:
            g = trail.pop()
            assign[g] = -1
            for ri in occ[g]:
                unknown[ri] += 1

    def dfs(depth):
        nonlocal evals
        while depth < n_gens and assign[order[depth]] >= 0:
            depth += 1
        if depth == n_gens:
            out.append(tuple(assign))
            return
        g = order[depth]
        for v in range(n):
            evals += 1
            if evals > cap:
                raise SearchLimitExceeded(f"search exceeded the cap of {cap} candidate evaluations")
            mark = len(trail)
            if set_value(g, v):
                dfs(depth + 1)
            undo(mark)

    dfs(0)
    if evals > cap:
        raise SearchLimitExceeded(f"search exceeded the cap of {cap} candidate evaluations")
    rows = np.array(out, dtype=np.int32).reshape(len(out), n_gens)
    return rows, evals


def _gauged(row, t, tails, heads, mul, inv):
    return tuple(mul[mul[inv[t[a]]][x]][t[b]] for x, a, b in zip(row, tails, heads))


def _gauges(n, n_vertices):
    t = [0] * n_vertices
    while True:
        yield t
        k = n_vertices - 1
        while k >= 0 and t[k] == n - 1:
            t[k] = 0
            k -= 1
        if k < 0:
            return
        t[k] += 1


def gauge_classes(rows, tails, heads, n_vertices, mul, inv, cap):
    """Label each cocycle row by its orbit under all vertex gauges.

    ``rows`` must be closed under gauging.  Classes are numbered by first
    occurrence.  Returns ``(labels, n_classes, evaluations)``.
    """
    mul = [list(map(int, r)) for r in mul]
    inv = [int(x) for x in inv]
    tails = [int(x) for x in tails]
    heads = [int(x) for x in heads]
    n = len(mul)
    keys = [tuple(int(x) for x in r) for r in rows]
    index = {k: i for i, k in enumerate(keys)}
    labels = np.full(len(keys), -1, dtype=np.int32)
    per_class = n ** n_vertices
    evals = 0
    n_classes = 0
    for i, row in enumerate(keys):
        if labels[i] >= 0:
            continue
        if evals + per_class > cap:
            raise SearchLimitExceeded(f"gauge quotient exceeds the cap of {cap} candidate evaluations")
        for t in _gauges(n, n_vertices):
            j = index.get(_gauged(row, t, tails, heads, mul, inv))
            if j is None:
                raise ValueError("cocycle set is not closed under gauge transformations")
            labels[j] = n_classes
        evals += per_class
        n_classes += 1
    return labels, n_classes, evals


def first_gauge(row1, row2, tails, heads, n_vertices, mul, inv, cap):
    """Lexicographically first gauge t with gauge(row1, t) == row2, or None."""
    mul = [list(map(int, r)) for r in mul]
    inv = [int(x) for x in inv]
    tails = [int(x) for x in tails]
    heads = [int(x) for x in heads]
    n = len(mul)
    if n ** n_vertices > cap:
        raise SearchLimitExceeded(f"gauge search exceeds the cap of {cap} candidate evaluations")
    target = tuple(int(x) for x in row2)
    row1 = [int(x) for x in row1]
    for t in _gauges(n, n_vertices):
        if _gauged(row1, t, tails, heads, mul, inv) == target:
            return np.array(t, dtype=np.int32)
    return None
