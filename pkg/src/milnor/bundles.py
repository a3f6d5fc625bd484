"""Principal bundles with discrete fibre, stored as edge cocycles.

A cocycle assigns a group element to every edge in its positive orientation
(``base.one_cells``); the value on the reversed edge is the inverse.  The
triangle condition ``c(u,v) c(v,w) c(w,u) = e`` on every 2-cell encodes local
triviality over vertex stars.

Gauge transforms are tuples aligned with ``base.vertices`` and act by
``c'(u,v) = t(u)^-1 c(u,v) t(v)``, so ``apply_gauge(apply_gauge(c, s), t)``
equals ``apply_gauge(c, s*t)`` pointwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from . import kernels
from .complex import CellMap, ComplexError, GroupAction, SimplicialComplex, SimplicialMap, tree_paths
from .groups import FiniteGroup, FinitelyPresentedGroup, GroupHom, free_reduce


class CocycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cocycle:
    base: object
    group: object
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.base.one_cells):
            raise CocycleError("one value per edge required")
        if isinstance(self.group, FinitelyPresentedGroup):
            values = tuple(free_reduce(w) for w in values)
        else:
            values = tuple(int(x) for x in values)
            n = self.group.order
            bad = [x for x in values if not 0 <= x < n]
            if bad:
                raise CocycleError(f"{bad[0]} is not a group element")
        object.__setattr__(self, "values", values)

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        return (self.base, self.group, self.values) == (other.base, other.group, other.values)

    def __hash__(self):
        return hash((self.base, self.group, self.values))

    def __repr__(self):
        G = self.group
        if isinstance(G, FiniteGroup):
            shown = [f"{a}{b}:{G.names[x]}" for (_, a, b), x in zip(self.base.one_cells, self.values)
                     if x != G.identity]
        else:
            shown = [f"{a}{b}:{x}" for (_, a, b), x in zip(self.base.one_cells, self.values) if x]
        return f"Cocycle({G.name or G!r}; {', '.join(shown) or 'trivial'})"

    @property
    def is_finite(self) -> bool:
        return isinstance(self.group, FiniteGroup)

    def edge_value(self, i: int, sign: int = 1):
        x = self.values[i]
        return x if sign > 0 else self.group.inv(x)

    def value(self, u, v):
        """Value on the oriented edge from u to v (identity when u == v)."""
        if u == v:
            return self.group.identity
        i, s = self.base.oriented_edge(u, v)
        return self.edge_value(i, s)

    def walk_value(self, signed_edges: Iterable):
        G = self.group
        return G.prod(self.edge_value(e, s) for e, s in signed_edges)

    @classmethod
    def trivial(cls, base, group) -> "Cocycle":
        return cls(base, group, (group.identity,) * len(base.one_cells))

    @classmethod
    def from_triples(cls, base, group, triples: Iterable, default_identity: bool = True) -> "Cocycle":
        """Build from ``(u, v, element)`` triples; unlisted edges default to the identity."""
        vals: dict[int, object] = {}
        for u, v, x in triples:
            try:
                i, s = base.oriented_edge(u, v)
            except ComplexError as exc:
                raise CocycleError(str(exc)) from None
            y = x if s > 0 else group.inv(x)
            if i in vals and vals[i] != y:
                raise CocycleError(f"conflicting values on edge {u!r}-{v!r}")
            vals[i] = y
        if not default_identity:
            missing = [base.one_cells[i][0] for i in range(len(base.one_cells)) if i not in vals]
            if missing:
                raise CocycleError(f"missing value on edge {missing[0]!r}")
        return cls(base, group, tuple(vals.get(i, group.identity) for i in range(len(base.one_cells))))

    def triples(self) -> list:
        return [(a, b, x) for (_, a, b), x in zip(self.base.one_cells, self.values)]

    def as_row(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int32)


def triangle_defects(c: Cocycle) -> list[int]:
    """Indices of the 2-cells whose boundary value is not the identity."""
    G = c.group
    out = []
    for k, boundary in enumerate(c.base.two_cells):
        w = c.walk_value(boundary)
        ok = w == G.identity if c.is_finite else G.is_relator_consequence(w)
        if not ok:
            out.append(k)
    return out


def validate_cocycle(c: Cocycle) -> Cocycle:
    bad = triangle_defects(c)
    if bad:
        K = c.base
        cell = K.triangles[bad[0]] if isinstance(K, SimplicialComplex) else ("2-cell", bad[0])
        raise CocycleError(f"triangle condition fails on {cell}")
    return c


def is_cocycle(c: Cocycle) -> bool:
    return not triangle_defects(c)


# ---------------------------------------------------------------------------
# gauge


def as_gauge(c: Cocycle, t) -> tuple:
    if isinstance(t, Mapping):
        return tuple(t[v] for v in c.base.vertices)
    t = tuple(t)
    if len(t) != len(c.base.vertices):
        raise CocycleError("gauge must give one element per vertex")
    return t


def apply_gauge(c: Cocycle, t) -> Cocycle:
    t = as_gauge(c, t)
    G, idx = c.group, c.base.vertex_index
    values = tuple(
        G.prod((G.inv(t[idx[a]]), x, t[idx[b]])) for (_, a, b), x in zip(c.base.one_cells, c.values)
    )
    return Cocycle(c.base, G, values)


def gauge_product(G, s: Sequence, t: Sequence) -> tuple:
    return tuple(G.mul(a, b) for a, b in zip(s, t))


def gauge_inverse(G, t: Sequence) -> tuple:
    return tuple(G.inv(a) for a in t)


def tree_holonomies(c: Cocycle, tree=None) -> dict:
    """h_v: the product of values along the tree path from the basepoint to v."""
    tp = tree_paths(c.base) if tree is None else tree
    return {v: c.walk_value(path) for v, path in tp.paths.items()}


def tree_normalizing_gauge(c: Cocycle, tree=None) -> tuple:
    """Gauge t = h^-1 after which every tree edge carries the identity."""
    h = tree_holonomies(c, tree)
    return tuple(c.group.inv(h[v]) for v in c.base.vertices)


def _check_comparable(c1: Cocycle, c2: Cocycle):
    if c1.base != c2.base:
        raise CocycleError("cocycles live over different bases")
    if c1.group != c2.group:
        raise CocycleError("cocycles take values in different groups")


def _edge_arrays(base):
    idx = base.vertex_index
    tails = np.array([idx[a] for _, a, _ in base.one_cells], dtype=np.int32)
    heads = np.array([idx[b] for _, _, b in base.one_cells], dtype=np.int32)
    return tails, heads


def gauge_equivalent(c1: Cocycle, c2: Cocycle, oracle: bool = False):
    """A gauge t with apply_gauge(c1, t) == c2, or None.

    The default procedure normalises both cocycles on a spanning tree and then
    searches the |G| constant gauges.  ``oracle=True`` instead tries every
    vertex gauge in lexicographic order and returns the first witness.
    """
    _check_comparable(c1, c2)
    G = c1.group
    if not isinstance(G, FiniteGroup):
        if c1 == c2:
            return (G.identity,) * len(c1.base.vertices)
        raise CocycleError("gauge search needs a finite structure group")
    if oracle:
        tails, heads = _edge_arrays(c1.base)
        t = kernels.first_gauge(c1.as_row(), c2.as_row(), tails, heads, len(c1.base.vertices),
                                G.mul_array, G.inv_array)
        return None if t is None else tuple(int(x) for x in t)
    tp = tree_paths(c1.base)
    t1 = tree_normalizing_gauge(c1, tp)
    t2 = tree_normalizing_gauge(c2, tp)
    n1 = apply_gauge(c1, t1).values
    n2 = apply_gauge(c2, t2).values
    for k in G:
        ki = G.inv(k)
        if all(G.prod((ki, x, k)) == y for x, y in zip(n1, n2)):
            return tuple(G.prod((a, k, G.inv(b))) for a, b in zip(t1, t2))
    return None


# ---------------------------------------------------------------------------
# holonomy, change of group, change of base


def holonomy(c: Cocycle, group=None) -> GroupHom:
    """Homomorphism from the edge-path group of the base into the structure group.

    The generator of a non-tree edge u -> w goes to h_u c(u,w) h_w^-1.
    """
    from .loops import edge_path_group

    pi = edge_path_group(c.base) if group is None else group
    G = c.group
    h = tree_holonomies(c, pi.tree)
    images = []
    for e in pi.generator_edges:
        _, u, w = c.base.one_cells[e]
        images.append(G.prod((h[u], c.values[e], G.inv(h[w]))))
    return GroupHom(pi, G, tuple(images))


def pushforward(a: GroupHom, c: Cocycle) -> Cocycle:
    if a.source != c.group:
        raise CocycleError("homomorphism source is not the structure group")
    return Cocycle(c.base, a.target, tuple(a(x) for x in c.values))


def pullback(f, c: Cocycle) -> Cocycle:
    """Pull back along a SimplicialMap or CellMap; collapsed edges get the identity."""
    if f.target != c.base:
        raise CocycleError("map does not land in the base of the cocycle")
    cm = f.cellular() if isinstance(f, SimplicialMap) else f
    G = c.group
    values = tuple(
        G.identity if img is None else c.edge_value(*img) for i, img in sorted(cm.edge_map.items())
    )
    return Cocycle(f.source, G, values)


def pushforward_pullback_commute(a: GroupHom, f, c: Cocycle) -> bool:
    return pushforward(a, pullback(f, c)) == pullback(f, pushforward(a, c))


# ---------------------------------------------------------------------------
# total spaces


@dataclass(frozen=True, eq=False)
class TotalSpace:
    """Vertices ``(v, g)``; the edge from ``(u, g)`` runs to ``(v, c(v,u) g)``."""

    cocycle: Cocycle
    complex: SimplicialComplex
    action: GroupAction
    projection: SimplicialMap

    @property
    def group(self) -> FiniteGroup:
        return self.cocycle.group

    @property
    def base(self) -> SimplicialComplex:
        return self.cocycle.base

    def fiber(self, v) -> list:
        return [(v, g) for g in self.group]

    def act(self, p, g):
        return (p[0], self.group.mul(p[1], g))

    @cached_property
    def components(self) -> list:
        from .complex import connected_components

        return connected_components(self.complex)


def total_space(c: Cocycle) -> TotalSpace:
    if not c.is_finite:
        raise CocycleError("total spaces need a finite structure group")
    X, G = c.base, c.group
    if not isinstance(X, SimplicialComplex):
        raise CocycleError("total spaces are built over simplicial complexes")
    verts = [(v, g) for v in X.vertices for g in G]
    facets = []
    for s in X.facets:
        v0 = s[0]
        for g in G:
            facets.append([(v0, g)] + [(v, G.mul(c.value(v, v0), g)) for v in s[1:]])
    bp = (X.basepoint, G.identity) if X.basepoint is not None else None
    P = SimplicialComplex(verts, facets, bp)
    action = GroupAction(P, G, {((v, g), k): (v, G.mul(g, k)) for v, g in verts for k in G})
    proj = SimplicialMap(P, X, {p: p[0] for p in verts}, pointed=bp is not None)
    return TotalSpace(c, P, action, proj)


def bundle_morphisms(c1: Cocycle, c2: Cocycle) -> list[dict]:
    """Every equivariant simplicial map of total spaces covering the identity of the base.

    Such a map is ``(v, g) -> (v, k_v g)``; it is simplicial exactly when
    ``k`` intertwines the two cocycles.
    """
    _check_comparable(c1, c2)
    P, E = total_space(c1), total_space(c2)
    X, G = c1.base, c1.group
    out = []
    for ks in product(list(G), repeat=len(X.vertices)):
        k = dict(zip(X.vertices, ks))
        phi = {(v, g): (v, G.mul(k[v], g)) for v, g in P.complex.vertices}
        if all(E.complex.is_simplex(phi[p] for p in s) for s in P.complex.facets):
            out.append(phi)
    return out


def is_bijective(phi: Mapping, codomain: Iterable) -> bool:
    return set(phi.values()) == set(codomain) and len(set(phi.values())) == len(phi)


# ---------------------------------------------------------------------------
# finite G-sets, tensor and cotensor


@dataclass(frozen=True, eq=False)
class FiniteGSet:
    """A finite set with a left or right action; ``act[(x, g)]`` is x.g (or g.x)."""

    elements: tuple
    group: FiniteGroup
    act: Mapping
    side: str = "right"

    def __post_init__(self):
        G = self.group
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        members = set(els)
        for x in els:
            if self.act[(x, G.identity)] != x:
                raise CocycleError("identity does not act trivially")
            for g in G:
                y = self.act[(x, g)]
                if y not in members:
                    raise CocycleError("action leaves the set")
                for h in G:
                    gh = G.mul(g, h) if self.side == "right" else G.mul(h, g)
                    if self.act[(y, h)] != self.act[(x, gh)]:
                        raise CocycleError("action law fails")

    def __call__(self, x, g):
        return self.act[(x, g)]

    def __len__(self):
        return len(self.elements)

    @classmethod
    def regular(cls, G: FiniteGroup, side: str = "right") -> "FiniteGSet":
        op = (lambda x, g: G.mul(x, g)) if side == "right" else (lambda x, g: G.mul(g, x))
        return cls(tuple(G), G, {(x, g): op(x, g) for x in G for g in G}, side)

    @classmethod
    def point(cls, G: FiniteGroup, side: str = "right") -> "FiniteGSet":
        return cls(("*",), G, {("*", g): "*" for g in G}, side)

    @classmethod
    def from_right_action(cls, action: GroupAction) -> "FiniteGSet":
        return cls(action.complex.vertices, action.group, dict(action.action), "right")

    def opposite(self) -> "FiniteGSet":
        """The same set with g acting through g^-1 on the other side."""
        G = self.group
        side = "left" if self.side == "right" else "right"
        return FiniteGSet(self.elements, G, {(x, g): self.act[(x, G.inv(g))] for x in self.elements for g in G}, side)


@dataclass(frozen=True)
class Quotient:
    """Orbit classes of a tensor product; ``index[(m, n)]`` is the class of a pair."""

    classes: tuple
    index: Mapping = field(repr=False)

    def __len__(self):
        return len(self.classes)


def tensor(M: FiniteGSet, N: FiniteGSet) -> Quotient:
    """M (x)_G N: pairs modulo (m.g, n) ~ (m, g.n)."""
    if M.side != "right" or N.side != "left":
        raise CocycleError("tensor needs a right G-set and a left G-set")
    if M.group != N.group:
        raise CocycleError("G-sets over different groups")
    pairs = [(m, n) for m in M.elements for n in N.elements]
    ds = DisjointSet(pairs)
    for m in M.elements:
        for n in N.elements:
            for g in M.group:
                ds.merge((M(m, g), n), (m, N(n, g)))
    pos = {p: i for i, p in enumerate(pairs)}
    classes = sorted((tuple(sorted(s, key=pos.__getitem__)) for s in ds.subsets()), key=lambda s: pos[s[0]])
    classes = tuple(classes)
    index = {p: k for k, s in enumerate(classes) for p in s}
    return Quotient(classes, index)


@dataclass(frozen=True, eq=False)
class FiberedSet:
    """A finite set with a projection to the vertices of a base."""

    elements: tuple
    base: object
    projection: Mapping

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for x in self.elements:
            if self.projection[x] not in self.base.vertex_index:
                raise CocycleError(f"{x!r} projects outside the base")

    def __len__(self):
        return len(self.elements)

    def fiber(self, v) -> list:
        return [x for x in self.elements if self.projection[x] == v]

    @classmethod
    def of_base(cls, X) -> "FiberedSet":
        return cls(X.vertices, X, {v: v for v in X.vertices})

    @classmethod
    def of_total_space(cls, P: TotalSpace) -> "FiberedSet":
        return cls(P.complex.vertices, P.base, {p: p[0] for p in P.complex.vertices})


def cotensor(M: FiberedSet, N: FiberedSet) -> FiberedSet:
    """Fibre product over the common base: pairs with equal projections."""
    if M.base != N.base:
        raise CocycleError("fibred sets over different bases")
    pairs = [(m, n) for m in M.elements for n in N.elements if M.projection[m] == N.projection[n]]
    return FiberedSet(pairs, M.base, {p: M.projection[p[0]] for p in pairs})


def mediating_maps(Z: Sequence, M: FiberedSet, N: FiberedSet, f: Mapping, g: Mapping) -> list[dict]:
    """Every u: Z -> M x_X N with pr1 u = f and pr2 u = g, found by exhaustive search."""
    C = cotensor(M, N)
    Z = list(Z)
    out = []
    for choice in product(C.elements, repeat=len(Z)):
        if all(p[0] == f[z] and p[1] == g[z] for z, p in zip(Z, choice)):
            out.append(dict(zip(Z, choice)))
    return out


# ---------------------------------------------------------------------------
# equivariant maps and sections of the associated bundle


def _associated(Q: TotalSpace, Z: FiniteGSet) -> Quotient:
    if Z.side != "right":
        raise CocycleError("target G-set must carry a right action")
    return tensor(FiniteGSet.from_right_action(Q.action), Z.opposite())


def equivariant_maps(Q: TotalSpace, Z: FiniteGSet, simplicial: bool = False) -> list[dict]:
    """Maps phi with phi(p.g) = phi(p).g.

    With ``simplicial=True`` only maps constant along the edges of Q are kept
    (the continuous ones, Z being discrete).
    """
    G, X = Q.group, Q.base
    out = []
    for zs in product(Z.elements, repeat=len(X.vertices)):
        base_vals = dict(zip(X.vertices, zs))
        phi = {(v, g): Z(base_vals[v], g) for v in X.vertices for g in G}
        if simplicial and any(phi[a] != phi[b] for a, b in Q.complex.edges):
            continue
        out.append(phi)
    return out


def sections_of_associated(Q: TotalSpace, Z: FiniteGSet, simplicial: bool = False) -> list[tuple]:
    """Sections of Q x_G Z over the base, one orbit class per base vertex.

    With ``simplicial=True`` adjacent vertices must receive classes joined by
    an edge of the associated covering complex.
    """
    T = _associated(Q, Z)
    X = Q.base
    fibres = [[k for k, cls in enumerate(T.classes) if cls[0][0][0] == v] for v in X.vertices]
    linked = set()
    if simplicial:
        for p, q in Q.complex.edges:
            for z in Z.elements:
                a, b = T.index[(p, z)], T.index[(q, z)]
                linked.update({(a, b), (b, a)})
    out = []
    vi = X.vertex_index
    for choice in product(*fibres):
        if simplicial and any(
            (choice[vi[u]], choice[vi[v]]) not in linked for u, v in X.edges
        ):
            continue
        out.append(tuple(choice))
    return out


def section_of(Q: TotalSpace, Z: FiniteGSet, phi: Mapping) -> tuple:
    """sigma_phi(v) = [(p, phi(p))] for any p over v."""
    T = _associated(Q, Z)
    e = Q.group.identity
    return tuple(T.index[((v, e), phi[(v, e)])] for v in Q.base.vertices)


def map_of_section(Q: TotalSpace, Z: FiniteGSet, sigma: Sequence) -> dict:
    """Inverse of :func:`section_of`: read phi(v, e) off the unique pair over (v, e)."""
    T = _associated(Q, Z)
    G = Q.group
    phi = {}
    for v, k in zip(Q.base.vertices, sigma):
        (z,) = [z for p, z in T.classes[k] if p == (v, G.identity)]
        for g in G:
            phi[(v, g)] = Z(z, g)
    return phi


# ---------------------------------------------------------------------------
# brute-force oracle


def _edge_order(base) -> list[int]:
    """Branching order for the cocycle search: edges by their later endpoint, then earlier."""
    idx = base.vertex_index
    cells = base.one_cells
    return sorted(range(len(cells)), key=lambda i: (max(idx[cells[i][1]], idx[cells[i][2]]),
                                                    min(idx[cells[i][1]], idx[cells[i][2]]), i))


def all_cocycles(base, G: FiniteGroup) -> np.ndarray:
    """Every edge assignment satisfying the triangle condition, as rows aligned with ``one_cells``."""
    rels = [[(e, s) for e, s in boundary] for boundary in base.two_cells]
    return kernels.solve_relators(G.mul_array, G.inv_array, G.identity, len(base.one_cells), rels,
                                  order=_edge_order(base))


@dataclass(frozen=True)
class BruteForceClassification:
    rows: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    n_classes: int
    representatives: tuple = field(repr=False)


def bruteforce_classes(base, G: FiniteGroup) -> BruteForceClassification:
    """Gauge classes of all cocycles, by exhaustive enumeration of cocycles and gauges."""
    rows = all_cocycles(base, G)
    tails, heads = _edge_arrays(base)
    labels, n = kernels.gauge_classes(rows, tails, heads, len(base.vertices), G.mul_array, G.inv_array)
    first = {}
    for i, lab in enumerate(labels.tolist()):
        first.setdefault(lab, i)
    reps = tuple(Cocycle(base, G, tuple(int(x) for x in rows[first[k]])) for k in range(n))
    return BruteForceClassification(rows, labels, n, reps)
