"""Finite simplicial complexes, Delta-complexes and the maps between them.

Vertex labels are arbitrary hashable values.  Every complex carries a total
order on its vertices (the order in which they were declared); all
enumerations below iterate in that order, so every output is deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

Vertex = Hashable
Simplex = tuple  # vertices listed in the complex's vertex order


class ComplexError(ValueError):
    """Raised for malformed complexes, maps and actions."""


class DisconnectedError(ComplexError):
    pass


# ---------------------------------------------------------------------------
# edge structures
#
# Both SimplicialComplex and DeltaComplex expose the same 1-/2-dimensional
# data, which is all the edge-path and cocycle machinery needs:
#   one_cells  -- list of (key, tail, head), the positive orientation
#   two_cells  -- list of boundary loops [(edge index, +-1), ...]


class _EdgeStructure:
    vertices: tuple
    basepoint: Vertex | None

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict:
        return {key: i for i, (key, _, _) in enumerate(self.one_cells)}

    def edge_key(self, i: int):
        return self.one_cells[i][0]

    @cached_property
    def _adjacency(self) -> dict:
        adj: dict = {v: [] for v in self.vertices}
        for i, (_, a, b) in enumerate(self.one_cells):
            adj[a].append((i, +1, b))
            if a != b:
                adj[b].append((i, -1, a))
        order = self.vertex_index
        for v in adj:
            adj[v].sort(key=lambda t: (order[t[2]], t[0]))
        return adj

    def require_basepoint(self, basepoint=None) -> Vertex:
        bp = self.basepoint if basepoint is None else basepoint
        if bp is None:
            if not self.vertices:
                raise ComplexError("empty complex has no basepoint")
            bp = self.vertices[0]
        if bp not in self.vertex_index:
            raise ComplexError(f"basepoint {bp!r} is not a vertex")
        return bp


def connected_components(complex) -> list[list]:
    """Partition the vertices into connected components (union-find on the 1-skeleton)."""
    ds = DisjointSet(range(len(complex.vertices)))
    idx = complex.vertex_index
    for _, a, b in complex.one_cells:
        ds.merge(idx[a], idx[b])
    comps: dict[int, list] = {}
    for i, v in enumerate(complex.vertices):
        comps.setdefault(ds[i], []).append(v)
    return sorted(comps.values(), key=lambda c: idx[c[0]])


def is_connected(complex) -> bool:
    return len(connected_components(complex)) <= 1


@dataclass(frozen=True)
class TreePaths:
    """Breadth-first spanning tree together with the tree path to every vertex.

    ``paths[v]`` is the list of signed edges ``(edge index, sign)`` walked from
    the basepoint to ``v``; ``walks[v]`` the vertices visited along the way.
    """

    basepoint: Vertex
    edges: frozenset  # edge indices
    paths: Mapping
    walks: Mapping


def tree_paths(complex, basepoint=None, edges: Iterable | None = None) -> TreePaths:
    """Breadth-first tree from the basepoint, optionally restricted to the given edge keys."""
    bp = complex.require_basepoint(basepoint)
    allowed = None if edges is None else {complex.edge_index[k] for k in edges}
    paths = {bp: ()}
    walks = {bp: (bp,)}
    tree = set()
    queue = deque([bp])
    while queue:
        v = queue.popleft()
        for e, sign, w in complex._adjacency[v]:
            if allowed is not None and e not in allowed:
                continue
            if w not in paths:
                paths[w] = paths[v] + ((e, sign),)
                walks[w] = walks[v] + (w,)
                tree.add(e)
                queue.append(w)
    if len(paths) != len(complex.vertices):
        raise DisconnectedError("complex is not connected")
    return TreePaths(bp, frozenset(tree), paths, walks)


def spanning_tree(complex, basepoint=None) -> set:
    """Edge keys of the breadth-first spanning tree rooted at the basepoint.

    Neighbours are visited in vertex order, so the tree is deterministic.
    Raises DisconnectedError when the complex is not connected.
    """
    tp = tree_paths(complex, basepoint)
    return {complex.edge_key(e) for e in tp.edges}


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SimplicialComplex(_EdgeStructure):
    """A finite abstract simplicial complex given by its facets.

    ``facets`` are stored as the maximal simplices of the downward closure,
    each sorted by vertex order; the facet list itself is sorted too.
    """

    vertices: tuple
    facets: tuple
    basepoint: Vertex | None = None

    def __init__(self, vertices: Iterable, facets: Iterable[Iterable], basepoint=None):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise ComplexError("duplicate vertex labels")
        order = {v: i for i, v in enumerate(verts)}
        simplices = set()
        for facet in facets:
            facet = frozenset(facet)
            if not facet:
                raise ComplexError("empty facet")
            unknown = [v for v in facet if v not in order]
            if unknown:
                raise ComplexError(f"facet references unknown vertex {unknown[0]!r}")
            simplices.add(facet)
        if basepoint is not None and basepoint not in order:
            raise ComplexError(f"basepoint {basepoint!r} is not a vertex")
        # isolated vertices are facets too
        covered = set().union(*simplices) if simplices else set()
        simplices.update(frozenset([v]) for v in verts if v not in covered)
        proper = set()
        for s in simplices:
            if len(s) > 1:
                proper.update(frozenset(t) for t in combinations(s, len(s) - 1))
        frontier = list(proper)
        while frontier:
            nxt = []
            for s in frontier:
                if len(s) > 1:
                    for t in combinations(s, len(s) - 1):
                        t = frozenset(t)
                        if t not in proper:
                            proper.add(t)
                            nxt.append(t)
            frontier = nxt
        maximal = [s for s in simplices if s not in proper]
        key = lambda s: (len(s), sorted(order[v] for v in s))
        facets_sorted = tuple(
            tuple(sorted(s, key=order.__getitem__)) for s in sorted(maximal, key=key)
        )
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "facets", facets_sorted)
        object.__setattr__(self, "basepoint", basepoint)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (self.vertices, self.facets, self.basepoint) == (
            other.vertices,
            other.facets,
            other.basepoint,
        )

    def __hash__(self):
        return hash((self.vertices, self.facets, self.basepoint))

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector}, basepoint={self.basepoint!r})"

    @cached_property
    def _simplex_sets(self) -> dict[int, list]:
        order = self.vertex_index
        by_dim: dict[int, set] = {}
        for facet in self.facets:
            for k in range(1, len(facet) + 1):
                for sub in combinations(facet, k):
                    by_dim.setdefault(k - 1, set()).add(sub)
        return {
            d: sorted(s, key=lambda t: [order[v] for v in t]) for d, s in sorted(by_dim.items())
        }

    @cached_property
    def _simplex_lookup(self) -> frozenset:
        return frozenset(frozenset(s) for ss in self._simplex_sets.values() for s in ss)

    @property
    def dim(self) -> int:
        return max(self._simplex_sets, default=-1)

    def simplices(self, dim: int | None = None) -> list:
        if dim is None:
            return [s for d in sorted(self._simplex_sets) for s in self._simplex_sets[d]]
        return list(self._simplex_sets.get(dim, []))

    @property
    def edges(self) -> list:
        return self.simplices(1)

    @property
    def triangles(self) -> list:
        return self.simplices(2)

    @property
    def f_vector(self) -> tuple:
        return tuple(len(self._simplex_sets.get(d, [])) for d in range(self.dim + 1))

    def is_simplex(self, vertices: Iterable) -> bool:
        s = frozenset(vertices)
        return bool(s) and s in self._simplex_lookup

    def sort(self, vertices: Iterable) -> Simplex:
        return tuple(sorted(set(vertices), key=self.vertex_index.__getitem__))

    def with_basepoint(self, basepoint) -> "SimplicialComplex":
        return SimplicialComplex(self.vertices, self.facets, basepoint)

    def skeleton(self, k: int) -> "SimplicialComplex":
        facets = [s for d in range(min(k, self.dim) + 1) for s in self.simplices(d)]
        return SimplicialComplex(self.vertices, facets, self.basepoint)

    # edge-structure protocol
    @cached_property
    def one_cells(self) -> list:
        return [((a, b), a, b) for a, b in self.edges]

    @cached_property
    def two_cells(self) -> list:
        idx = self.edge_index
        return [
            [(idx[(u, v)], 1), (idx[(v, w)], 1), (idx[(u, w)], -1)]
            for u, v, w in self.triangles
        ]

    def oriented_edge(self, u, v) -> tuple[int, int]:
        """Index and sign of the edge traversed from u to v."""
        if (u, v) in self.edge_index:
            return self.edge_index[(u, v)], 1
        if (v, u) in self.edge_index:
            return self.edge_index[(v, u)], -1
        raise ComplexError(f"{u!r}-{v!r} is not an edge")


def validate(complex: SimplicialComplex) -> SimplicialComplex:
    """Return the checked complex: facets replaced by the maximal simplices of the closure."""
    return SimplicialComplex(complex.vertices, complex.simplices(), complex.basepoint)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DeltaComplex(_EdgeStructure):
    """Cells by dimension, each d-cell an ordered (d+1)-tuple of (d-1)-cell indices.

    ``cells[0]`` holds one empty tuple per vertex.  A 1-cell ``(d0, d1)`` runs
    from vertex ``d1`` to vertex ``d0``.  ``labels`` optionally names each cell
    (for orbit quotients: the representative simplex), and ``cell_of`` maps a
    simplex of the covering complex to ``(dim, index)``.
    """

    vertices: tuple
    cells: tuple
    basepoint: Vertex | None = None
    labels: tuple | None = field(default=None, compare=False)
    cell_of: Mapping | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        cells = tuple(tuple(tuple(f) for f in level) for level in self.cells)
        if not cells:
            cells = (tuple(() for _ in self.vertices),)
        object.__setattr__(self, "cells", cells)
        if len(cells[0]) != len(self.vertices) or any(cells[0]):
            raise ComplexError("0-cells must be the vertices, without faces")
        for d in range(1, len(cells)):
            for k, faces in enumerate(cells[d]):
                if len(faces) != d + 1:
                    raise ComplexError(f"{d}-cell {k} needs {d + 1} faces")
                if any(not 0 <= f < len(cells[d - 1]) for f in faces):
                    raise ComplexError(f"{d}-cell {k} references a missing face")
                if d >= 2:
                    for j in range(d + 1):
                        for i in range(j):
                            a = cells[d - 1][faces[j]][i]
                            b = cells[d - 1][faces[i]][j - 1]
                            if a != b:
                                raise ComplexError(f"simplicial identity fails on {d}-cell {k}")
        if self.basepoint is not None and self.basepoint not in self.vertices:
            raise ComplexError(f"basepoint {self.basepoint!r} is not a vertex")

    def __eq__(self, other):
        if not isinstance(other, DeltaComplex):
            return NotImplemented
        return (self.vertices, self.cells, self.basepoint) == (
            other.vertices,
            other.cells,
            other.basepoint,
        )

    def __hash__(self):
        return hash((self.vertices, self.cells, self.basepoint))

    def __repr__(self):
        return f"DeltaComplex(f={self.f_vector}, basepoint={self.basepoint!r})"

    @property
    def dim(self) -> int:
        return max((d for d in range(len(self.cells)) if self.cells[d]), default=-1)

    @property
    def f_vector(self) -> tuple:
        return tuple(len(self.cells[d]) for d in range(self.dim + 1))

    def vertex_tuple(self, d: int, k: int) -> tuple:
        """Vertex indices of a cell, in order."""
        if d == 0:
            return (k,)
        faces = self.cells[d][k]
        # drop the last vertex, then append the last vertex of the 0th face
        head = self.vertex_tuple(d - 1, faces[d])
        return head + (self.vertex_tuple(d - 1, faces[0])[-1],)

    @classmethod
    def from_simplicial(cls, K: SimplicialComplex) -> "DeltaComplex":
        index: dict = {}
        cells = []
        labels = []
        for d in range(K.dim + 1):
            level = []
            for j, s in enumerate(K.simplices(d)):
                index[s] = j
                if d == 0:
                    level.append(())
                else:
                    level.append(tuple(index[s[:i] + s[i + 1 :]] for i in range(d + 1)))
            cells.append(tuple(level))
            labels.append(tuple(K.simplices(d)))
        cell_of = {frozenset(s): (len(s) - 1, j) for s, j in index.items()}
        return cls(K.vertices, tuple(cells), K.basepoint, tuple(labels), cell_of)

    @cached_property
    def one_cells(self) -> list:
        if len(self.cells) < 2:
            return []
        return [(k, self.vertices[t], self.vertices[h]) for k, (h, t) in enumerate(self.cells[1])]

    @cached_property
    def two_cells(self) -> list:
        if len(self.cells) < 3:
            return []
        # loop v0 -> v1 -> v2 -> v0
        return [[(d2, 1), (d0, 1), (d1, -1)] for d0, d1, d2 in self.cells[2]]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    mapping: Mapping
    pointed: bool = False

    def __post_init__(self):
        mapping = dict(self.mapping)
        missing = [v for v in self.source.vertices if v not in mapping]
        if missing:
            raise ComplexError(f"vertex map undefined on {missing[0]!r}")
        for v, w in mapping.items():
            if w not in self.target.vertex_index:
                raise ComplexError(f"{v!r} maps to {w!r}, not a target vertex")
        for facet in self.source.facets:
            image = {mapping[v] for v in facet}
            if not self.target.is_simplex(image):
                raise ComplexError(f"image of {facet} is not a simplex")
        if self.pointed:
            bs, bt = self.source.basepoint, self.target.basepoint
            if bs is None or bt is None or mapping[bs] != bt:
                raise ComplexError("pointed map must send basepoint to basepoint")
        object.__setattr__(self, "mapping", mapping)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.mapping.items(), key=repr))))

    def __call__(self, v):
        return self.mapping[v]

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices}, pointed=K.basepoint is not None)

    @classmethod
    def constant(cls, K: SimplicialComplex, L: SimplicialComplex, w=None) -> "SimplicialMap":
        w = L.require_basepoint() if w is None else w
        pointed = K.basepoint is not None and L.basepoint == w
        return cls(K, L, {v: w for v in K.vertices}, pointed=pointed)

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """self after inner."""
        if inner.target != self.source:
            raise ComplexError("maps are not composable")
        return SimplicialMap(
            inner.source,
            self.target,
            {v: self.mapping[w] for v, w in inner.mapping.items()},
            pointed=self.pointed and inner.pointed,
        )

    def cellular(self) -> "CellMap":
        edge_map = {}
        for i, (_, a, b) in enumerate(self.source.one_cells):
            fa, fb = self.mapping[a], self.mapping[b]
            edge_map[i] = None if fa == fb else self.target.oriented_edge(fa, fb)
        return CellMap(self.source, self.target, self.mapping, edge_map)


@dataclass(frozen=True)
class CellMap:
    """A map on 0- and 1-cells between edge structures.

    ``edge_map[i]`` is ``(target edge index, sign)`` or ``None`` when the
    edge collapses onto a vertex.
    """

    source: object
    target: object
    vertex_map: Mapping
    edge_map: Mapping

    def __post_init__(self):
        for i, (_, a, b) in enumerate(self.source.one_cells):
            img = self.edge_map[i]
            fa, fb = self.vertex_map[a], self.vertex_map[b]
            if img is None:
                if fa != fb:
                    raise ComplexError(f"edge {i} collapses but its ends do not")
                continue
            j, sign = img
            _, ta, tb = self.target.one_cells[j]
            if ((ta, tb) if sign > 0 else (tb, ta)) != (fa, fb):
                raise ComplexError(f"edge {i} image does not match its vertex images")

    def __hash__(self):
        return id(self)

    def compose(self, inner: "CellMap") -> "CellMap":
        edge_map = {}
        for i, img in inner.edge_map.items():
            if img is None:
                edge_map[i] = None
            else:
                outer = self.edge_map[img[0]]
                edge_map[i] = None if outer is None else (outer[0], outer[1] * img[1])
        vmap = {v: self.vertex_map[w] for v, w in inner.vertex_map.items()}
        return CellMap(inner.source, self.target, vmap, edge_map)


def are_contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    """True iff every simplex's images under f and g jointly span a target simplex."""
    if f.source != g.source or f.target != g.target:
        raise ComplexError("contiguity needs a common source and target")
    return all(
        f.target.is_simplex({f(v) for v in s} | {g(v) for v in s}) for s in f.source.facets
    )


def join(A: SimplicialComplex, B: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; vertices are relabelled ``(0, a)`` and ``(1, b)``."""
    va = [(0, v) for v in A.vertices]
    vb = [(1, v) for v in B.vertices]
    fa = [[(0, v) for v in f] for f in A.facets] or [[]]
    fb = [[(1, v) for v in f] for f in B.facets] or [[]]
    facets = [x + y for x in fa for y in fb if x or y]
    bp = (0, A.basepoint) if A.basepoint is not None else None
    return SimplicialComplex(va + vb, facets, bp)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Right action of a finite group on the vertices of a complex.

    ``action`` maps ``(vertex, group element index)`` to a vertex.
    """

    complex: SimplicialComplex
    group: object
    action: Mapping

    def __post_init__(self):
        K, G = self.complex, self.group
        act = self.action
        for v in K.vertices:
            if act[(v, G.identity)] != v:
                raise ComplexError("identity does not act trivially")
            for g in G:
                for h in G:
                    if act[(act[(v, g)], h)] != act[(v, G.mul(g, h))]:
                        raise ComplexError("action is not compatible with multiplication")
        for g in G:
            if len({act[(v, g)] for v in K.vertices}) != len(K.vertices):
                raise ComplexError("group element does not act bijectively")
            for s in K.facets:
                if not K.is_simplex(act[(v, g)] for v in s):
                    raise ComplexError("group element is not a simplicial automorphism")

    def __call__(self, v, g):
        return self.action[(v, g)]

    @cached_property
    def is_free(self) -> bool:
        e = self.group.identity
        return all(self.action[(v, g)] != v for v in self.complex.vertices for g in self.group if g != e)


def quotient_by_action(action: GroupAction, max_dim: int | None = None) -> DeltaComplex:
    """Orbit space of a free action as a Delta-complex.

    Each cell is the orbit of its representative simplex (the first simplex of
    the orbit in enumeration order), and its vertices are ordered as in that
    representative.  Above dimension 1 the action must preserve the vertex order
    of simplices, otherwise the orbit space has no induced Delta-structure.
    """
    if not action.is_free:
        raise ComplexError("action is not free")
    K, G = action.complex, action.group
    top = K.dim if max_dim is None else min(max_dim, K.dim)
    cell_of: dict = {}
    cells, labels = [], []
    vertex_orbit = {}
    for d in range(top + 1):
        level, reps = [], []
        for s in K.simplices(d):
            key = frozenset(s)
            if key in cell_of:
                continue
            k = len(level)
            for g in G:
                image = K.sort(action(v, g) for v in s)
                if d >= 2 and image != tuple(action(v, g) for v in s):
                    raise ComplexError("action does not preserve simplex vertex order")
                cell_of[frozenset(image)] = (d, k)
            if d == 0:
                vertex_orbit[s[0]] = k
                level.append(())
            else:
                faces = tuple(cell_of[frozenset(s[:i] + s[i + 1 :])][1] for i in range(d + 1))
                level.append(faces)
            reps.append(s)
        cells.append(tuple(level))
        labels.append(tuple(reps))
    for v in K.vertices:
        vertex_orbit.setdefault(v, cell_of[frozenset([v])][1])
    vertices = tuple(range(len(cells[0]))) if cells else ()
    bp = vertex_orbit[K.basepoint] if K.basepoint is not None else None
    return DeltaComplex(vertices, tuple(cells), bp, tuple(labels), cell_of)
