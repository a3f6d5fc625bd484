"""Search kernels behind one interface.

The compiled extension ``_core`` is used when it imports; otherwise (or with
``MILNOR_PURE=1`` in the environment) the pure-Python ``_fallback`` is used.
``BACKEND`` names the active implementation.  Both raise
``SearchLimitExceeded`` once a search passes the cap read from
``MILNOR_SEARCH_CAP`` (default 10**7 candidate evaluations).
"""
from __future__ import annotations

import os

import numpy as np

from . import _fallback

DEFAULT_CAP = 10**7

if os.environ.get("MILNOR_PURE", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"


class SearchLimitExceeded(RuntimeError):
    """A brute-force search would pass the configured evaluation cap."""


def search_cap() -> int:
    raw = os.environ.get("MILNOR_SEARCH_CAP", "")
    return int(raw) if raw.strip() else DEFAULT_CAP


def _run(fn, *args, impl=None):
    impl = impl or _impl
    try:
        return getattr(impl, fn)(*args)
    except (impl.SearchLimitExceeded, _fallback.SearchLimitExceeded) as exc:
        raise SearchLimitExceeded(str(exc)) from None


def _backend(name):
    if name is None:
        return _impl
    if name == "python":
        return _fallback
    from . import _core

    return _core


def solve_relators(mul, inv, identity, n_gens, relators, order=None, cap=None, backend=None):
    """Rows of generator images killing every relator, sorted lexicographically.

    Returns an ``(k, n_gens)`` int32 array.
    """
    order = list(range(n_gens)) if order is None else list(order)
    if sorted(order) != list(range(n_gens)):
        raise ValueError("order must be a permutation of the generators")
    cap = search_cap() if cap is None else cap
    rows, evals = _run("solve_relators", mul, inv, int(identity), n_gens, relators, order, cap,
                       impl=_backend(backend))
    solve_relators.last_evaluations = evals
    if len(rows) and n_gens:
        rows = rows[np.lexsort(rows.T[::-1])]
    return np.ascontiguousarray(rows, dtype=np.int32)


solve_relators.last_evaluations = 0


def gauge_classes(rows, tails, heads, n_vertices, mul, inv, cap=None, backend=None):
    """``(labels, n_classes)`` of the gauge orbits on a gauge-closed set of rows."""
    cap = search_cap() if cap is None else cap
    labels, n_classes, evals = _run("gauge_classes", rows, tails, heads, n_vertices, mul, inv, cap,
                                    impl=_backend(backend))
    gauge_classes.last_evaluations = evals
    return np.asarray(labels, dtype=np.int32), int(n_classes)


gauge_classes.last_evaluations = 0


def first_gauge(row1, row2, tails, heads, n_vertices, mul, inv, cap=None, backend=None):
    """Lexicographically first gauge carrying row1 to row2, or None."""
    cap = search_cap() if cap is None else cap
    return _run("first_gauge", row1, row2, tails, heads, n_vertices, mul, inv, cap,
                impl=_backend(backend))
