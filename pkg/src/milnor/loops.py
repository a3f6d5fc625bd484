"""Milnor paths and loops at vertex level, and the edge-path group.

An :class:`EdgePath` stores its vertices in written order ``(x_n, ..., x_0)``:
the path starts at ``x_0`` (the last entry) and ends at ``x_n`` (the first).
Concatenation ``concat(p, q)`` first runs ``q`` and then ``p``, so the words
read off the written tuple from left to right compose like function
application: ``loop_word(concat(p, q)) == loop_word(p) + loop_word(q)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .complex import ComplexError, SimplicialComplex, TreePaths, tree_paths
from .groups import FinitelyPresentedGroup, Word, free_reduce


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class EdgePath:
    complex: SimplicialComplex
    vertices: tuple

    def __post_init__(self):
        verts = tuple(self.vertices)
        if not verts:
            raise PathError("a path needs at least one vertex")
        K = self.complex
        for v in verts:
            if v not in K.vertex_index:
                raise PathError(f"{v!r} is not a vertex")
        for a, b in zip(verts, verts[1:]):
            if a != b and not K.is_simplex((a, b)):
                raise PathError(f"{a!r} and {b!r} do not lie in a common simplex")
        object.__setattr__(self, "vertices", verts)

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def start(self):
        return self.vertices[-1]

    @property
    def end(self):
        return self.vertices[0]

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    def is_based_loop(self, basepoint=None) -> bool:
        bp = self.complex.require_basepoint(basepoint)
        return self.start == bp and self.end == bp

    @classmethod
    def constant(cls, K: SimplicialComplex, v=None) -> "EdgePath":
        return cls(K, (K.require_basepoint(v),))

    @classmethod
    def from_walk(cls, K: SimplicialComplex, walk: Sequence) -> "EdgePath":
        """Path travelling the vertices of ``walk`` in the given (chronological) order."""
        return cls(K, tuple(reversed(tuple(walk))))

    def walk(self) -> tuple:
        """Vertices in chronological order."""
        return tuple(reversed(self.vertices))


# ---------------------------------------------------------------------------
# reduction


def _deletions(t: tuple) -> list[int]:
    """Positions (in the written tuple) at which one of the two rules applies."""
    n = len(t)
    out = []
    for j in range(n):
        dup = j + 1 < n and t[j] == t[j + 1]
        back = 0 < j < n - 1 and t[j - 1] == t[j + 1]
        if dup or back:
            out.append(j)
    return out


def _delete(t: tuple, j: int) -> tuple:
    return t[:j] + t[j + 1 :]


def rewrite(p: EdgePath, strategy: str = "leftmost") -> EdgePath:
    """Apply single deletions until none applies, choosing the leftmost or rightmost site."""
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    t = p.vertices
    while True:
        sites = _deletions(t)
        if not sites:
            return EdgePath(p.complex, t)
        t = _delete(t, sites[0] if strategy == "leftmost" else sites[-1])


def reduce(p: EdgePath) -> EdgePath:
    """Normal form under the duplicate and backtrack deletions.

    A single left-to-right stack pass: it reaches the same normal form as
    leftmost rewriting, since the rules are confluent.
    """
    stack: list = []
    for v in p.vertices:
        if stack and stack[-1] == v:
            continue
        if len(stack) >= 2 and stack[-2] == v:
            stack.pop()
            continue
        stack.append(v)
    return EdgePath(p.complex, tuple(stack))


def normal_forms(p: EdgePath | tuple, cache: dict | None = None) -> frozenset:
    """Every irreducible tuple reachable from ``p`` by any sequence of deletions.

    ``cache`` may be shared between calls; intermediate tuples met before are
    not explored again.
    """
    start = p.vertices if isinstance(p, EdgePath) else tuple(p)
    seen: dict[tuple, frozenset] = {} if cache is None else cache

    def visit(t):
        if t in seen:
            return seen[t]
        sites = _deletions(t)
        if not sites:
            res = frozenset([t])
        else:
            res = frozenset().union(*(visit(_delete(t, j)) for j in sites))
        seen[t] = res
        return res

    return visit(start)


def is_reduced(p: EdgePath) -> bool:
    return not _deletions(p.vertices)


def concat(p: EdgePath, q: EdgePath) -> EdgePath:
    """Run q, then p.  Requires q to end where p starts."""
    if p.complex != q.complex:
        raise PathError("paths live in different complexes")
    if q.end != p.start:
        raise PathError(f"endpoint mismatch: {q.end!r} vs {p.start!r}")
    return EdgePath(p.complex, p.vertices + q.vertices[1:])


def invert(p: EdgePath) -> EdgePath:
    return EdgePath(p.complex, tuple(reversed(p.vertices)))


# ---------------------------------------------------------------------------
# the edge-path group


@dataclass(frozen=True, eq=False)
class EdgePathGroup(FinitelyPresentedGroup):
    """Edge-path presentation of the fundamental group of a based complex.

    Generators ``x0, x1, ...`` correspond to the non-tree edges in edge order,
    each oriented from its first to its second vertex.  There is one relator
    per 2-cell, its boundary loop with tree edges dropped.
    """

    complex: object = None
    tree: TreePaths | None = field(default=None, repr=False)
    generator_edges: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, EdgePathGroup):
            return NotImplemented
        return (self.complex, self.tree.edges, self.tree.basepoint) == (
            other.complex,
            other.tree.edges,
            other.tree.basepoint,
        )

    def __hash__(self):
        return hash((self.complex, self.tree.edges, self.tree.basepoint))

    def __repr__(self):
        return f"EdgePathGroup{FinitelyPresentedGroup.__repr__(self)}"

    @property
    def basepoint(self):
        return self.tree.basepoint

    @cached_property
    def edge_generator(self) -> dict:
        return {e: g for g, e in zip(self.generators, self.generator_edges)}

    def edge_word(self, edge: int, sign: int = 1) -> Word:
        g = self.edge_generator.get(edge)
        return () if g is None else ((g, sign),)

    def walk_word(self, signed_edges: Iterable) -> Word:
        """Word of a chronological walk given as signed edges."""
        return free_reduce(x for e, s in signed_edges for x in self.edge_word(e, s))

    def tree_word(self, v) -> Word:
        return self.walk_word(self.tree.paths[v])


def edge_path_group(K, basepoint=None, tree: Iterable | None = None) -> EdgePathGroup:
    """Edge-path group of a connected complex (simplicial or Delta).

    ``tree`` optionally names the spanning-tree edges by key; by default the
    breadth-first tree is used.  Raises DisconnectedError when K is disconnected.
    """
    tp = tree_paths(K, basepoint, tree)
    if tree is not None and len(tp.edges) != len(set(tree)):
        raise ComplexError("given edges do not form a spanning tree")
    gen_edges = tuple(i for i in range(len(K.one_cells)) if i not in tp.edges)
    names = tuple(f"x{k}" for k in range(len(gen_edges)))
    lookup = dict(zip(gen_edges, names))
    relators = []
    for boundary in K.two_cells:
        relators.append(tuple((lookup[e], s) for e, s in boundary if e in lookup))
    return EdgePathGroup(names, tuple(relators), "pi1", K, tp, gen_edges)


def walk_edges(K, walk: Sequence) -> list:
    """Signed edges of a chronological vertex walk on a simplicial complex (stays are skipped)."""
    out = []
    for a, b in zip(walk, walk[1:]):
        if a != b:
            out.append(K.oriented_edge(a, b))
    return out


def loop_word(p: EdgePath, group: EdgePathGroup | None = None) -> Word:
    """Coordinates of a based loop in the edge-path group, read along the written tuple."""
    pi = edge_path_group(p.complex) if group is None else group
    if not p.is_based_loop(pi.basepoint):
        raise PathError("loop_word needs a loop at the basepoint")
    return pi.walk_word(walk_edges(p.complex, p.vertices))


def generator_loop(pi: EdgePathGroup, gen: str) -> EdgePath:
    """The based loop for a generator: tree path, the edge, tree path back."""
    K = pi.complex
    e = pi.generator_edges[pi.generator_index[gen]]
    _, u, w = K.one_cells[e]
    walk = pi.tree.walks[u] + tuple(reversed(pi.tree.walks[w]))
    return EdgePath(K, walk)


def universal_cocycle(K, basepoint=None, group: EdgePathGroup | None = None):
    """Cocycle valued in the edge-path group: generators on non-tree edges, identity on the tree."""
    from .bundles import Cocycle

    pi = edge_path_group(K, basepoint) if group is None else group
    values = tuple(pi.edge_word(i) for i in range(len(K.one_cells)))
    return Cocycle(pi.complex, pi, values)
