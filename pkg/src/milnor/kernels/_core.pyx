# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled search kernels; see ``_fallback`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


class SearchLimitExceeded(RuntimeError):
    pass


cdef struct Solver:
    int n               # group order
    int n_gens
    int n_rels
    int identity
    int *mul            # n*n
    int *inv
    int *rel_gen        # flattened letters
    int *rel_exp
    int *rel_start      # n_rels + 1
    int *rel_count      # n_rels * n_gens multiplicities
    int *occ            # CSR: relators containing each generator
    int *occ_start
    int *unknown
    int *assign
    int *trail
    int trail_len
    int *stack_g
    int *stack_v
    int *order
    long long evals
    long long cap
    int overflow


cdef inline int _val(Solver *s, int x, int e) nogil:
    return x if e > 0 else s.inv[x]


cdef int _evaluate(Solver *s, int ri) nogil:
    cdef int acc = s.identity
    cdef int k
    for k in range(s.rel_start[ri], s.rel_start[ri + 1]):
        acc = s.mul[acc * s.n + _val(s, s.assign[s.rel_gen[k]], s.rel_exp[k])]
    return acc


cdef int _solve_single(Solver *s, int ri, int *out_g, int *out_v) nogil:
    cdef int k, pos = -1, g, e, a, b, x
    for k in range(s.rel_start[ri], s.rel_start[ri + 1]):
        if s.assign[s.rel_gen[k]] < 0:
            pos = k
            break
    g = s.rel_gen[pos]
    e = s.rel_exp[pos]
    if s.rel_count[ri * s.n_gens + g] != 1:
        return 0
    a = s.identity
    for k in range(s.rel_start[ri], pos):
        a = s.mul[a * s.n + _val(s, s.assign[s.rel_gen[k]], s.rel_exp[k])]
    b = s.identity
    for k in range(pos + 1, s.rel_start[ri + 1]):
        b = s.mul[b * s.n + _val(s, s.assign[s.rel_gen[k]], s.rel_exp[k])]
    x = s.mul[s.inv[a] * s.n + s.inv[b]]
    out_g[0] = g
    out_v[0] = x if e > 0 else s.inv[x]
    return 1


cdef int _set_value(Solver *s, int g0, int v0) nogil:
    cdef int top = 0, g, v, k, ri, fg = 0, fv = 0
    s.stack_g[0] = g0
    s.stack_v[0] = v0
    top = 1
    while top > 0:
        top -= 1
        g = s.stack_g[top]
        v = s.stack_v[top]
        if s.assign[g] >= 0:
            if s.assign[g] != v:
                return 0
            continue
        s.assign[g] = v
        s.trail[s.trail_len] = g
        s.trail_len += 1
        for k in range(s.occ_start[g], s.occ_start[g + 1]):
            s.unknown[s.occ[k]] -= 1
        for k in range(s.occ_start[g], s.occ_start[g + 1]):
            ri = s.occ[k]
            if s.unknown[ri] == 0:
                if _evaluate(s, ri) != s.identity:
                    return 0
            elif s.unknown[ri] == 1:
                if _solve_single(s, ri, &fg, &fv):
                    s.stack_g[top] = fg
                    s.stack_v[top] = fv
                    top += 1
    return 1


cdef void _undo(Solver *s, int mark) nogil:
    cdef int g, k
    while s.trail_len > mark:
        s.trail_len -= 1
        g = s.trail[s.trail_len]
        s.assign[g] = -1
        for k in range(s.occ_start[g], s.occ_start[g + 1]):
            s.unknown[s.occ[k]] += 1


cdef object _dfs(Solver *s, int depth, list out):
    cdef int g, v, mark
    while depth < s.n_gens and s.assign[s.order[depth]] >= 0:
        depth += 1
    if depth == s.n_gens:
        out.append(bytes((<char *> s.assign)[:s.n_gens * sizeof(int)]))
        return
    g = s.order[depth]
    for v in range(s.n):
        s.evals += 1
        if s.evals > s.cap:
            s.overflow = 1
            return
        mark = s.trail_len
        if _set_value(s, g, v):
            _dfs(s, depth + 1, out)
            if s.overflow:
                return
        _undo(s, mark)


def solve_relators(mul, inv, int identity, int n_gens, relators, order, long long cap):
    cdef cnp.ndarray[int, ndim=2, mode="c"] mul_a = np.ascontiguousarray(mul, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] inv_a = np.ascontiguousarray(inv, dtype=np.intc)
    cdef int n = mul_a.shape[0]
    rels = [[(int(g), int(e)) for g, e in r] for r in relators]
    n_rels = len(rels)
    flat_g = [g for r in rels for g, _ in r]
    flat_e = [e for r in rels for _, e in r]
    starts = [0]
    for r in rels:
        starts.append(starts[-1] + len(r))
    counts = np.zeros((max(n_rels, 1), max(n_gens, 1)), dtype=np.intc)
    occ_lists = [[] for _ in range(n_gens)]
    unknown0 = []
    for ri, r in enumerate(rels):
        for g, _ in r:
            counts[ri, g] += 1
        gs = sorted({g for g, _ in r})
        unknown0.append(len(gs))
        for g in gs:
            occ_lists[g].append(ri)
    occ_flat = [ri for lst in occ_lists for ri in lst]
    occ_start = [0]
    for lst in occ_lists:
        occ_start.append(occ_start[-1] + len(lst))

    cdef cnp.ndarray[int, ndim=1, mode="c"] rel_gen = np.array(flat_g + [0], dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] rel_exp = np.array(flat_e + [0], dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] rel_start = np.array(starts, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] rel_count = np.ascontiguousarray(counts)
    cdef cnp.ndarray[int, ndim=1, mode="c"] occ = np.array(occ_flat + [0], dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] occ_st = np.array(occ_start, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] unknown = np.array(unknown0 + [0], dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] assign = np.full(max(n_gens, 1), -1, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] trail = np.zeros(max(n_gens, 1), dtype=np.intc)
    stack_size = max(n_gens, 1) * (n_rels + 2)
    cdef cnp.ndarray[int, ndim=1, mode="c"] stack_g = np.zeros(stack_size, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] stack_v = np.zeros(stack_size, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] order_a = np.array(list(order) + [0], dtype=np.intc)

    cdef Solver s
    s.n = n
    s.n_gens = n_gens
    s.n_rels = n_rels
    s.identity = identity
    s.mul = &mul_a[0, 0]
    s.inv = &inv_a[0]
    s.rel_gen = &rel_gen[0]
    s.rel_exp = &rel_exp[0]
    s.rel_start = &rel_start[0]
    s.rel_count = &rel_count[0, 0]
    s.occ = &occ[0]
    s.occ_start = &occ_st[0]
    s.unknown = &unknown[0]
    s.assign = &assign[0]
    s.trail = &trail[0]
    s.trail_len = 0
    s.stack_g = &stack_g[0]
    s.stack_v = &stack_v[0]
    s.order = &order_a[0]
    s.evals = 0
    s.cap = cap
    s.overflow = 0

    out = []
    _dfs(&s, 0, out)
    if s.overflow or s.evals > cap:
        raise SearchLimitExceeded(f"search exceeded the cap of {cap} candidate evaluations")
    if out:
        rows = np.frombuffer(b"".join(out), dtype=np.intc).reshape(len(out), n_gens)
    else:
        rows = np.zeros((0, n_gens), dtype=np.intc)
    return rows.astype(np.int32), int(s.evals)


cdef inline int _cmp_row(int *a, int *b, int m) nogil:
    cdef int k
    for k in range(m):
        if a[k] != b[k]:
            return -1 if a[k] < b[k] else 1
    return 0


cdef inline void _apply(int *row, int *t, int *tails, int *heads, int m, int *mul, int *inv, int n, int *out) nogil:
    cdef int k
    for k in range(m):
        out[k] = mul[mul[inv[t[tails[k]]] * n + row[k]] * n + t[heads[k]]]


cdef inline int _next_gauge(int *t, int nv, int n) nogil:
    cdef int k = nv - 1
    while k >= 0 and t[k] == n - 1:
        t[k] = 0
        k -= 1
    if k < 0:
        return 0
    t[k] += 1
    return 1


def gauge_classes(rows, tails, heads, int n_vertices, mul, inv, long long cap):
    cdef cnp.ndarray[int, ndim=2, mode="c"] R = np.ascontiguousarray(rows, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] T = np.ascontiguousarray(tails, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] H = np.ascontiguousarray(heads, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] M = np.ascontiguousarray(mul, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] I = np.ascontiguousarray(inv, dtype=np.intc)
    cdef int k_rows = R.shape[0], m = R.shape[1], n = M.shape[0]
    cdef long long per_class = 1, evals = 0
    cdef int i, j, lo, hi, mid, c, n_classes = 0, found
    for i in range(n_vertices):
        per_class *= n
    # lexicographic order of the rows for binary search
    perm = np.lexsort(R.T[::-1]) if m > 0 else np.arange(k_rows)
    cdef cnp.ndarray[int, ndim=2, mode="c"] S = np.ascontiguousarray(R[perm])
    cdef cnp.ndarray[cnp.int64_t, ndim=1] P = perm.astype(np.int64)
    cdef cnp.ndarray[int, ndim=1, mode="c"] labels = np.full(k_rows, -1, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] t = np.zeros(max(n_vertices, 1), dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] buf = np.zeros(max(m, 1), dtype=np.intc)
    cdef int *sp = &S[0, 0] if k_rows > 0 and m > 0 else NULL
    for i in range(k_rows):
        if labels[i] >= 0:
            continue
        if evals + per_class > cap:
            raise SearchLimitExceeded(f"gauge quotient exceeds the cap of {cap} candidate evaluations")
        for j in range(n_vertices):
            t[j] = 0
        while True:
            if m > 0:
                _apply(&R[i, 0], &t[0], &T[0], &H[0], m, &M[0, 0], &I[0], n, &buf[0])
            lo, hi, found = 0, k_rows - 1, -1
            while lo <= hi:
                mid = (lo + hi) // 2
                c = _cmp_row(sp + mid * m, &buf[0], m) if m > 0 else 0
                if c == 0:
                    found = mid
                    break
                elif c < 0:
                    lo = mid + 1
                else:
                    hi = mid - 1
            if found < 0:
                raise ValueError("cocycle set is not closed under gauge transformations")
            labels[P[found]] = n_classes
            if not _next_gauge(&t[0], n_vertices, n):
                break
        evals += per_class
        n_classes += 1
    return labels.astype(np.int32), n_classes, int(evals)


def first_gauge(row1, row2, tails, heads, int n_vertices, mul, inv, long long cap):
    cdef cnp.ndarray[int, ndim=1, mode="c"] A = np.ascontiguousarray(row1, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] B = np.ascontiguousarray(row2, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] T = np.ascontiguousarray(tails, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] H = np.ascontiguousarray(heads, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2, mode="c"] M = np.ascontiguousarray(mul, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] I = np.ascontiguousarray(inv, dtype=np.intc)
    cdef int m = A.shape[0], n = M.shape[0], j
    cdef long long total = 1
    for j in range(n_vertices):
        total *= n
        if total > cap:
            raise SearchLimitExceeded(f"gauge search exceeds the cap of {cap} candidate evaluations")
    cdef cnp.ndarray[int, ndim=1, mode="c"] t = np.zeros(max(n_vertices, 1), dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1, mode="c"] buf = np.zeros(max(m, 1), dtype=np.intc)
    while True:
        if m > 0:
            _apply(&A[0], &t[0], &T[0], &H[0], m, &M[0, 0], &I[0], n, &buf[0])
        if m == 0 or _cmp_row(&buf[0], &B[0], m) == 0:
            return t[:n_vertices].astype(np.int32)
        if not _next_gauge(&t[0], n_vertices, n):
            return None
