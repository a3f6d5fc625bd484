"""The built-in desk-scale corpus: complexes, groups, maps and homomorphisms.

Vertex labels are strings, matching the file format.
"""
from __future__ import annotations

from functools import lru_cache

from .complex import SimplicialComplex, SimplicialMap
from .groups import FiniteGroup, GroupHom, identity_hom


def _cx(n: int, facets, basepoint: int = 0) -> SimplicialComplex:
    return SimplicialComplex([str(i) for i in range(n)], [[str(v) for v in f] for f in facets], str(basepoint))


@lru_cache(maxsize=None)
def complexes() -> dict[str, SimplicialComplex]:
    torus = [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)] + [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
    rp2 = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
           [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]]
    return {
        "circle": _cx(3, [[0, 1], [1, 2], [0, 2]]),
        "disc": _cx(3, [[0, 1, 2]]),
        "sphere": _cx(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]),
        "hexagon": _cx(6, [[i, (i + 1) % 6] for i in range(6)]),
        "torus": _cx(7, torus),
        "rp2": _cx(6, rp2),
        "figure_eight": _cx(5, [[0, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]]),
    }


@lru_cache(maxsize=None)
def groups() -> dict[str, FiniteGroup]:
    Z2 = FiniteGroup.cyclic(2)
    return {
        "Z2": Z2,
        "Z3": FiniteGroup.cyclic(3),
        "Z4": FiniteGroup.cyclic(4),
        "Z2xZ2": FiniteGroup.direct_product(Z2, Z2),
        "S3": FiniteGroup.symmetric(3),
    }


def _map(src: str, dst: str, images) -> SimplicialMap:
    X, Y = complexes()[src], complexes()[dst]
    return SimplicialMap(X, Y, {v: str(w) for v, w in zip(X.vertices, images)}, pointed=True)


@lru_cache(maxsize=None)
def maps() -> dict[str, SimplicialMap]:
    """Pointed maps between corpus complexes (identities excluded)."""
    return {
        "wrap": _map("hexagon", "circle", [0, 1, 2, 0, 1, 2]),
        "boundary": _map("circle", "disc", [0, 1, 2]),
        "loop_torus": _map("circle", "torus", [0, 1, 2]),
        "loop_rp2": _map("circle", "rp2", [0, 1, 3]),
        "fold": _map("figure_eight", "circle", [0, 1, 2, 1, 2]),
        "first_loop": _map("circle", "figure_eight", [0, 1, 2]),
        "crush": _map("sphere", "circle", [0, 0, 0, 0]),
    }


@lru_cache(maxsize=None)
def contiguous_pairs() -> tuple:
    """Pairs of contiguous maps (f, g) with common source and target."""
    pairs = [
        ("disc", "disc", [0, 1, 2], [1, 1, 2]),
        ("circle", "disc", [0, 1, 2], [0, 0, 0]),
        ("circle", "torus", [0, 1, 2], [0, 1, 6]),
        ("circle", "torus", [0, 1, 4], [0, 3, 4]),
        ("circle", "torus", [0, 1, 3], [0, 0, 0]),
        ("circle", "rp2", [0, 1, 3], [0, 1, 4]),
        ("hexagon", "circle", [0, 0, 0, 0, 1, 2], [0, 0, 0, 1, 1, 2]),
    ]
    out = []
    for src, dst, f, g in pairs:
        X, Y = complexes()[src], complexes()[dst]
        fm = SimplicialMap(X, Y, {v: str(w) for v, w in zip(X.vertices, f)})
        gm = SimplicialMap(X, Y, {v: str(w) for v, w in zip(X.vertices, g)})
        out.append((fm, gm))
    return tuple(out)


@lru_cache(maxsize=None)
def homs() -> dict[str, GroupHom]:
    """Homomorphisms between corpus groups (identities excluded)."""
    G = groups()
    Z2, Z3, Z4, V, S3 = G["Z2"], G["Z3"], G["Z4"], G["Z2xZ2"], G["S3"]
    transposition = next(x for x in S3 if S3.element_order(x) == 2)
    three_cycle = next(x for x in S3 if S3.element_order(x) == 3)
    sign = {x: (0 if S3.element_order(x) != 2 else 1) for x in S3}
    return {
        "z2_into_z4": GroupHom.from_generator_images(Z2, Z4, {1: 2}),
        "z4_onto_z2": GroupHom.from_generator_images(Z4, Z2, {1: 1}),
        "z2_into_s3": GroupHom.from_generator_images(Z2, S3, {1: transposition}),
        "z3_into_s3": GroupHom.from_generator_images(Z3, S3, {1: three_cycle}),
        "sign": GroupHom(S3, Z2, tuple(sign[x] for x in S3)),
        "first_factor": GroupHom.from_generator_images(V, Z2, {V.element("(1,0)"): 1, V.element("(0,1)"): 0}),
        "z3_trivial_z2": GroupHom(Z3, Z2, (0, 0, 0)),
    }


def all_maps() -> list[SimplicialMap]:
    """Corpus maps together with the identity of every complex."""
    return list(maps().values()) + [SimplicialMap.identity(K) for K in complexes().values()]


def all_homs() -> list[GroupHom]:
    return list(homs().values()) + [identity_hom(G) for G in groups().values()]
