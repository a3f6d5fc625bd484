"""Finite stages of the join model, classifying maps and the classification.

Stage ``n`` of the join has vertices ``(level, g)`` with ``level`` in
``0..n`` and a simplex for every vertex set with pairwise distinct levels;
``G`` acts on the right by ``(i, g).k = (i, gk)``.  The orbit space is a
Delta-complex whose 1-cell through the lift ``((i, g), (j, h))``, ``i < j``,
carries the universal value ``g h^-1`` (invariant under the right action).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .bundles import (
    Cocycle,
    CocycleError,
    TotalSpace,
    apply_gauge,
    bruteforce_classes,
    gauge_equivalent,
    holonomy,
    pullback,
    pushforward,
    total_space,
    tree_holonomies,
)
from .complex import CellMap, ComplexError, DeltaComplex, GroupAction, SimplicialComplex, SimplicialMap, quotient_by_action
from .groups import (
    FiniteGroup,
    GroupHom,
    are_conjugate,
    compose_homs,
    conjugacy_classes_of_homs,
    enumerate_homs,
    free_reduce,
)
from .loops import (
    EdgePath,
    EdgePathGroup,
    edge_path_group,
    generator_loop,
    loop_word,
    reduce,
    universal_cocycle,
    walk_edges,
)


class ClassifyingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# join stages


@dataclass(frozen=True, eq=False)
class JoinStage:
    group: FiniteGroup
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ClassifyingError("stage must be non-negative")

    def __eq__(self, other):
        return isinstance(other, JoinStage) and (self.group, self.n) == (other.group, other.n)

    def __hash__(self):
        return hash((self.group, self.n))

    def __repr__(self):
        return f"JoinStage({self.group.name}, {self.n})"

    @property
    def vertices(self) -> list:
        return [(i, g) for i in range(self.n + 1) for g in self.group]

    def simplex_count(self, d: int) -> int:
        return comb(self.n + 1, d + 1) * self.group.order ** (d + 1)

    @property
    def f_vector(self) -> tuple:
        return tuple(self.simplex_count(d) for d in range(self.n + 1))

    def is_simplex(self, vertices: Iterable) -> bool:
        vs = set(vertices)
        levels = [i for i, _ in vs]
        return bool(vs) and len(set(levels)) == len(levels) and all(
            0 <= i <= self.n and 0 <= g < self.group.order for i, g in vs
        )

    def act(self, p, k):
        return (p[0], self.group.mul(p[1], k))

    @lru_cache(maxsize=None)
    def skeleton(self, k: int) -> SimplicialComplex:
        """The k-skeleton as a simplicial complex (all vertex sets of k+1 distinct levels)."""
        k = min(k, self.n)
        G = self.group
        facets = [
            [(i, g) for i, g in zip(levels, gs)]
            for levels in combinations(range(self.n + 1), k + 1)
            for gs in product(list(G), repeat=k + 1)
        ]
        return SimplicialComplex(self.vertices, facets, (0, G.identity))

    @property
    def complex(self) -> SimplicialComplex:
        return self.skeleton(self.n)

    @lru_cache(maxsize=None)
    def action(self, k: int | None = None) -> GroupAction:
        K = self.complex if k is None else self.skeleton(k)
        G = self.group
        return GroupAction(K, G, {(p, g): self.act(p, g) for p in K.vertices for g in G})


def milnor_join(G: FiniteGroup, n: int) -> JoinStage:
    return JoinStage(G, n)


@dataclass(frozen=True, eq=False)
class ClassifyingStage:
    join: JoinStage
    delta: DeltaComplex
    universal: Cocycle

    @property
    def group(self) -> FiniteGroup:
        return self.join.group

    @property
    def n(self) -> int:
        return self.join.n

    def vertex_of_level(self, i: int) -> int:
        return self.delta.cell_of[frozenset([(i, self.group.identity)])][1]

    def edge_through(self, p, q) -> tuple[int, int]:
        """1-cell containing the join edge p -- q, with the sign of travelling from p to q."""
        if p[0] == q[0]:
            raise ClassifyingError(f"{p} and {q} lie on the same level")
        _, k = self.delta.cell_of[frozenset([p, q])]
        return k, (1 if p[0] < q[0] else -1)


@lru_cache(maxsize=None)
def _classifying_stage(G: FiniteGroup, n: int, max_dim: int) -> ClassifyingStage:
    J = milnor_join(G, n)
    delta = quotient_by_action(J.action(max_dim), max_dim)
    values = []
    for (i, g), (j, h) in delta.labels[1] if len(delta.labels) > 1 else ():
        values.append(G.mul(g, G.inv(h)))
    return ClassifyingStage(J, delta, Cocycle(delta, G, tuple(values)))


def classifying_stage(G: FiniteGroup, n: int, max_dim: int = 2) -> ClassifyingStage:
    """Orbit space of the join stage (built up to ``max_dim``) with its universal values."""
    if n < 0:
        raise ClassifyingError("stage must be non-negative")
    return _classifying_stage(G, n, max_dim)


# ---------------------------------------------------------------------------
# counit


@dataclass(frozen=True)
class CounitResult:
    hom: GroupHom
    is_isomorphism: bool
    reason: str


def _is_surjective(a: GroupHom) -> bool:
    return len(a.target.generated_subgroup(a.images)) == a.target.order


def counit(G: FiniteGroup, n: int = 2, test_groups: Sequence[FiniteGroup] = ()) -> CounitResult:
    """Holonomy of the universal values on the classifying stage, with an isomorphism check.

    Surjectivity is checked directly.  Injectivity is certified on finite data:
    every homomorphism from the edge-path group into ``G`` and each of
    ``test_groups`` must factor through the counit.
    """
    B = classifying_stage(G, n)
    pi = edge_path_group(B.delta)
    eps = holonomy(B.universal, pi)
    if n < 2:
        return CounitResult(eps, False, f"stage {n} is below 2; the stage is not simply connected enough")
    if not _is_surjective(eps):
        return CounitResult(eps, False, "not surjective")
    for T in [G, *test_groups]:
        through = {compose_homs(b, eps) for b in enumerate_homs(G, T)}
        direct = set(enumerate_homs(pi, T))
        if through != direct:
            return CounitResult(eps, False, f"a homomorphism into {T.name} does not factor through the counit")
    return CounitResult(eps, True, "surjective; every test homomorphism factors through it")


# ---------------------------------------------------------------------------
# equivariant maps into the join


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    """An equivariant vertex map from (part of) a total space into a join stage.

    ``assignment`` may cover only the fibres over some base vertices; the
    checks then apply to the simplices lying over those vertices.
    """

    source: TotalSpace
    target: JoinStage
    assignment: Mapping

    def __post_init__(self):
        P, J, phi = self.source, self.target, dict(self.assignment)
        G = P.group
        if J.group != G:
            raise ClassifyingError("target join is for a different group")
        object.__setattr__(self, "assignment", phi)
        for p, x in phi.items():
            if not J.is_simplex([x]):
                raise ClassifyingError(f"{p} maps to {x}, not a vertex of the stage")
            for k in G:
                q = P.act(p, k)
                if q not in phi or phi[q] != J.act(x, k):
                    raise ClassifyingError(f"map is not equivariant at {p}")
        dom = self.domain
        for s in P.complex.simplices():
            if all(p[0] in dom for p in s) and not J.is_simplex(phi[p] for p in s):
                raise ClassifyingError(f"map is not simplicial on {s}")

    @property
    def domain(self) -> frozenset:
        return frozenset(p[0] for p in self.assignment)

    @property
    def is_total(self) -> bool:
        return self.domain == frozenset(self.source.base.vertices)

    def __call__(self, p):
        return self.assignment[p]

    def level(self, v) -> int:
        return self.assignment[(v, self.source.group.identity)][0]

    def shift(self, v) -> int:
        """k_v with phi(v, g) = (level(v), k_v g)."""
        return self.assignment[(v, self.source.group.identity)][1]

    def restrict(self, vertices: Iterable) -> "EquivariantMap":
        keep = set(vertices)
        return EquivariantMap(self.source, self.target, {p: x for p, x in self.assignment.items() if p[0] in keep})

    def orbit_map(self, stage: ClassifyingStage | None = None) -> CellMap:
        """Induced map from the base to the classifying stage, on 0- and 1-cells."""
        B = classifying_stage(self.target.group, self.target.n) if stage is None else stage
        if not self.is_total:
            raise ClassifyingError("orbit map needs a total equivariant map")
        c, X, G = self.source.cocycle, self.source.base, self.source.group
        e = G.identity
        vmap = {v: B.vertex_of_level(self.level(v)) for v in X.vertices}
        emap = {}
        for i, (_, a, b) in enumerate(X.one_cells):
            p = self.assignment[(a, e)]
            q = self.assignment[(b, c.value(b, a))]
            emap[i] = None if p == q else B.edge_through(p, q)
        return CellMap(X, B.delta, vmap, emap)

    def pulled_back(self, stage: ClassifyingStage | None = None) -> Cocycle:
        B = classifying_stage(self.target.group, self.target.n) if stage is None else stage
        return pullback(self.orbit_map(B), B.universal)


def _levels_basepoint_first(X) -> dict:
    bp = X.require_basepoint()
    order = [bp] + [v for v in X.vertices if v != bp]
    return {v: i for i, v in enumerate(order)}


def classifying_map(c: Cocycle, stage: int | None = None) -> EquivariantMap:
    """phi(v, g) = (level(v), h_v g) into the join stage |V| - 1 (or a larger one).

    Levels are handed out basepoint first, then in vertex order, so the
    basepoint fibre lands on level 0 with the identity shift.
    """
    if not c.is_finite:
        raise CocycleError("classifying maps need a finite structure group")
    X, G = c.base, c.group
    n = len(X.vertices) - 1 if stage is None else stage
    if n < len(X.vertices) - 1:
        raise ClassifyingError(f"stage {n} has fewer levels than the base has vertices")
    P = total_space(c)
    h = tree_holonomies(c)
    level = _levels_basepoint_first(X)
    phi = {(v, g): (level[v], G.mul(h[v], g)) for v in X.vertices for g in G}
    return EquivariantMap(P, milnor_join(G, n), phi)


def extend_classifying_map(c: Cocycle, A, partial: EquivariantMap) -> EquivariantMap:
    """Extend an equivariant map given over the subcomplex A to the whole total space.

    Assignments over A are kept; every other vertex gets a fresh level after
    the largest level in use (in vertex order) and the shift h_v.
    """
    X, G = c.base, c.group
    A_vertices = set(A.vertices) if isinstance(A, SimplicialComplex) else set(A)
    if not A_vertices <= set(X.vertices):
        raise ClassifyingError("A is not a subcomplex of the base")
    if partial.source.cocycle != c:
        raise ClassifyingError("partial map lives on a different bundle")
    if partial.domain != frozenset(A_vertices):
        raise ClassifyingError("partial map must be defined exactly over A")
    outside = [v for v in X.vertices if v not in A_vertices]
    used = max((x[0] for x in partial.assignment.values()), default=-1)
    n = max(partial.target.n, used + len(outside))
    h = tree_holonomies(c)
    phi = dict(partial.assignment)
    for k, v in enumerate(outside):
        for g in G:
            phi[(v, g)] = (used + 1 + k, G.mul(h[v], g))
    try:
        return EquivariantMap(partial.source, milnor_join(G, n), phi)
    except ClassifyingError as exc:
        raise ClassifyingError(f"partial map does not extend: {exc}") from None


# ---------------------------------------------------------------------------
# algebraic equivalence and loops on maps


def algebraically_equivalent(a: GroupHom, b: GroupHom) -> bool:
    """Gauge equivalence of the two pushforwards of the universal cocycle."""
    if a.source != b.source or a.target != b.target:
        raise ClassifyingError("homomorphisms have different source or target")
    pi = a.source
    if not isinstance(pi, EdgePathGroup):
        raise ClassifyingError("source must be an edge-path group")
    U = universal_cocycle(pi.complex, group=pi)
    return gauge_equivalent(pushforward(a, U), pushforward(b, U)) is not None


def omega_on_map(f, source: EdgePathGroup | None = None, target: EdgePathGroup | None = None) -> GroupHom:
    """Induced homomorphism of edge-path groups of a pointed map.

    The generator of the non-tree edge u -> v goes to the word of the reduced
    image of (tree path to u, the edge, tree path back from v).  A CellMap is
    handled on signed edges instead of vertex paths.
    """
    X, Y = f.source, f.target
    vmap = f.mapping if isinstance(f, SimplicialMap) else f.vertex_map
    pX = edge_path_group(X) if source is None else source
    pY = edge_path_group(Y) if target is None else target
    if vmap[pX.basepoint] != pY.basepoint:
        raise ClassifyingError("map is not pointed")
    images = []
    if isinstance(f, SimplicialMap):
        for gen in pX.generators:
            loop = generator_loop(pX, gen)
            image = EdgePath(Y, tuple(vmap[v] for v in loop.vertices))
            images.append(loop_word(reduce(image), pY))
    else:
        for e in pX.generator_edges:
            _, u, w = X.one_cells[e]
            walk = list(pX.tree.paths[u]) + [(e, 1)] + [(i, -s) for i, s in reversed(pX.tree.paths[w])]
            signed = []
            for i, s in walk:
                img = f.edge_map[i]
                if img is not None:
                    signed.append((img[0], img[1] * s))
            images.append(pY.walk_word(signed))
    return GroupHom(pX, pY, tuple(images))


def classifying_stage_map(a: GroupHom, n: int) -> CellMap:
    """The map of classifying stages induced by a: G -> H, (i, g) -> (i, a(g))."""
    BG, BH = classifying_stage(a.source, n), classifying_stage(a.target, n)
    vmap = {BG.vertex_of_level(i): BH.vertex_of_level(i) for i in range(n + 1)}
    emap = {}
    for k, (p, q) in enumerate(BG.delta.labels[1] if len(BG.delta.labels) > 1 else ()):
        emap[k] = BH.edge_through((p[0], a(p[1])), (q[0], a(q[1])))
    return CellMap(BG.delta, BH.delta, vmap, emap)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassRow:
    hom: GroupHom
    class_size: int
    cocycle: Cocycle
    classifying_map: EquivariantMap = field(repr=False)
    pulled_back: Cocycle
    witness: tuple  # gauge carrying the cocycle to the pulled-back one


@dataclass(frozen=True)
class Classification:
    base: SimplicialComplex
    group: FiniteGroup
    rows: tuple
    n_homs: int
    n_hom_classes: int
    n_cocycles: int | None
    n_gauge_classes: int | None
    n_pullback_classes: int
    findings: tuple = ()

    @property
    def consistent(self) -> bool:
        counts = {self.n_hom_classes, self.n_pullback_classes}
        if self.n_gauge_classes is not None:
            counts.add(self.n_gauge_classes)
        return len(counts) == 1 and not self.findings


def _count_gauge_classes(cocycles: Sequence[Cocycle]) -> int:
    reps: list[Cocycle] = []
    for c in cocycles:
        if not any(gauge_equivalent(r, c) is not None for r in reps):
            reps.append(c)
    return len(reps)


def classify_bundles(X: SimplicialComplex, G: FiniteGroup, oracle: bool = True) -> Classification:
    """Classes of G-bundles over X, computed three ways.

    Rows come from conjugacy classes of homomorphisms out of the edge-path
    group; each row carries the pushed-forward universal cocycle and its
    classifying map.  With ``oracle`` every cocycle is enumerated and
    quotiented by every gauge, and each row is matched to exactly one class.
    """
    X = X if X.basepoint is not None else X.with_basepoint(X.require_basepoint())
    pi = edge_path_group(X)
    U = universal_cocycle(X, group=pi)
    homs = enumerate_homs(pi, G)
    classes = conjugacy_classes_of_homs(pi, G, homs)
    findings = []
    rows = []
    for cl in classes:
        c = pushforward(cl.representative, U)
        phi = classifying_map(c)
        pb = phi.pulled_back()
        t = gauge_equivalent(c, pb)
        if t is None:
            findings.append(f"pulled-back cocycle of {cl.representative} is not equivalent to it")
        rows.append(ClassRow(cl.representative, cl.size, c, phi, pb, t))
    n_cocycles = n_gauge = None
    if oracle:
        bf = bruteforce_classes(X, G)
        n_cocycles, n_gauge = len(bf.rows), bf.n_classes
        index = {tuple(int(x) for x in r): i for i, r in enumerate(bf.rows)}
        hit = [bf.labels[index[row.cocycle.values]] for row in rows]
        if sorted(hit) != list(range(n_gauge)):
            findings.append("rows do not match the brute-force gauge classes one to one")
        pulled = [classifying_map(r).pulled_back() for r in bf.representatives]
    else:
        pulled = [row.pulled_back for row in rows]
    n_pb = _count_gauge_classes(pulled)
    return Classification(X, G, tuple(rows), len(homs), len(classes), n_cocycles, n_gauge, n_pb, tuple(findings))


# ---------------------------------------------------------------------------
# naturality


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class NaturalityReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def failures(self) -> list:
        return [ch for ch in self.checks if not ch.passed]


def _unit_witness(f: SimplicialMap, pX: EdgePathGroup, pY: EdgePathGroup) -> tuple:
    """t(v) = word of f(tree path to v), inverted; carries f*U_Y to (omega f)_* U_X."""
    Y = f.target
    out = []
    for v in f.source.vertices:
        image = EdgePath(Y, tuple(f(x) for x in pX.tree.walks[v]))
        word = pY.walk_word(walk_edges(Y, image.vertices))
        out.append(pY.inv(word))
    return tuple(out)


def verify_naturality(X: SimplicialComplex, Y: SimplicialComplex, f: SimplicialMap, G: FiniteGroup,
                      H: FiniteGroup, a: GroupHom, stage: int = 2) -> NaturalityReport:
    """Check the naturality squares, unit and counit identities on one instance.

    Failures are reported as findings, never raised.
    """
    checks: list[Check] = []

    def add(name, ok, detail=""):
        checks.append(Check(name, bool(ok), "" if ok else detail))

    if f.source != X or f.target != Y:
        raise ClassifyingError("map does not go from X to Y")
    if a.source != G or a.target != H:
        raise ClassifyingError("homomorphism does not go from G to H")
    pX, pY = edge_path_group(X), edge_path_group(Y)
    UX, UY = universal_cocycle(X, group=pX), universal_cocycle(Y, group=pY)
    wf = omega_on_map(f, pX, pY)

    # change of base: pull back then classify = classify then precompose
    for b in (cl.representative for cl in conjugacy_classes_of_homs(pY, G)):
        c = pushforward(b, UY)
        lhs = holonomy(pullback(f, c), pX)
        rhs = compose_homs(b, wf)
        add("pullback square", are_conjugate(lhs, rhs) is not None, f"b={b}")
        add("pullback square (gauge)", gauge_equivalent(pullback(f, c), pushforward(rhs, UX)) is not None, f"b={b}")

    # change of group: push forward then classify = classify then postcompose
    for b in (cl.representative for cl in conjugacy_classes_of_homs(pX, G)):
        c = pushforward(b, UX)
        lhs = holonomy(pushforward(a, c), pX)
        rhs = compose_homs(a, holonomy(c, pX))
        add("pushforward square", lhs == rhs, f"b={b}")
        add("pushforward square (gauge)",
            gauge_equivalent(pushforward(a, c), pushforward(rhs, UX)) is not None, f"b={b}")

    # a_*(U_G) versus the pullback of U_H along the induced map of classifying stages
    BG, BH = classifying_stage(G, stage), classifying_stage(H, stage)
    Ba = classifying_stage_map(a, stage)
    pushed = pushforward(a, BG.universal)
    add("universal pushforward vs pullback", gauge_equivalent(pushed, pullback(Ba, BH.universal)) is not None,
        f"stage {stage}")

    # counit: eps_H o omega(Ba) versus a o eps_G
    epsG, epsH = counit(G, stage).hom, counit(H, stage).hom
    lhs = compose_homs(epsH, omega_on_map(Ba, epsG.source, epsH.source))
    rhs = compose_homs(a, epsG)
    add("counit naturality (conjugacy)", are_conjugate(lhs, rhs) is not None, f"stage {stage}")
    add("counit naturality (algebraic)", algebraically_equivalent(lhs, rhs), f"stage {stage}")

    # unit: f*U_Y and (omega f)_* U_X are gauge equivalent by an explicit witness
    t = _unit_witness(f, pX, pY)
    add("unit naturality (witness)", apply_gauge(pullback(f, UY), t) == pushforward(wf, UX))
    for b in enumerate_homs(pY, G):
        lhs_c = pushforward(b, pullback(f, UY))
        rhs_c = pushforward(compose_homs(b, wf), UX)
        add("unit naturality (finite shadow)", gauge_equivalent(lhs_c, rhs_c) is not None, f"b={b}")

    # triangle identity: eps_G o omega(F_c) = hol(c) for the classifying map of each class
    for b in (cl.representative for cl in conjugacy_classes_of_homs(pX, G)):
        c = pushforward(b, UX)
        phi = classifying_map(c)
        B = classifying_stage(G, phi.target.n)
        F = phi.orbit_map(B)
        eps = holonomy(B.universal, edge_path_group(B.delta))
        lhs = compose_homs(eps, omega_on_map(F, pX, eps.source))
        add("triangle identity", lhs == holonomy(c, pX), f"b={b}")

    # unit identity: holonomy of the universal cocycle is the identity presentation map
    add("unit identity", holonomy(UX, pX).images == tuple(pX.gen(g) for g in pX.generators))
    return NaturalityReport(tuple(checks))
