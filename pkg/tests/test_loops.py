import random

import pytest

from milnor.bundles import holonomy, is_cocycle
from milnor.complex import DisconnectedError, SimplicialComplex
from milnor.groups import enumerate_homs
from milnor.loops import (
    EdgePath,
    PathError,
    concat,
    edge_path_group,
    generator_loop,
    invert,
    is_reduced,
    loop_word,
    normal_forms,
    reduce,
    rewrite,
    universal_cocycle,
)

C3 = SimplicialComplex([0, 1, 2], [[0, 1], [1, 2], [0, 2]], 0)
DISC = SimplicialComplex([0, 1, 2], [[0, 1, 2]], 0)


def random_walk(K, start, steps, rng):
    walk = [start]
    for _ in range(steps):
        v = walk[-1]
        walk.append(rng.choice([w for w in K.vertices if K.is_simplex((v, w))]))
    return walk


class TestEdgePath:
    def test_invalid(self):
        with pytest.raises(PathError):
            EdgePath(C3, ())
        with pytest.raises(PathError):
            EdgePath(SimplicialComplex([0, 1, 2], [[0, 1], [1, 2]]), (0, 2))

    def test_ends(self):
        p = EdgePath.from_walk(C3, [0, 1, 2])
        assert p.vertices == (2, 1, 0) and p.start == 0 and p.end == 2
        assert p.walk() == (0, 1, 2)


class TestReduce:
    def test_examples(self):
        assert reduce(EdgePath(C3, (0,))).vertices == (0,)
        assert reduce(EdgePath(C3, (1, 0, 0, 1))).vertices == (1,)
        # the literal trace: duplicate, backtrack, duplicate
        t = (1, 0, 0, 1)
        assert rewrite(EdgePath(C3, t)).vertices == (1,)

    def test_strategies_agree_on_random_paths(self):
        rng = random.Random(7)
        for _ in range(200):
            p = EdgePath.from_walk(C3, random_walk(C3, 0, 12, rng))
            left, right = rewrite(p, "leftmost"), rewrite(p, "rightmost")
            assert left == right == reduce(p)
            assert normal_forms(p) == {left.vertices}

    def test_idempotent_and_endpoints(self):
        rng = random.Random(3)
        for _ in range(100):
            p = EdgePath.from_walk(DISC, random_walk(DISC, rng.choice([0, 1, 2]), 9, rng))
            r = reduce(p)
            assert reduce(r) == r and is_reduced(r)
            assert (r.start, r.end) == (p.start, p.end)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            rewrite(EdgePath(C3, (0,)), "middle")


class TestGroupLaws:
    def test_inverse_and_identity(self):
        rng = random.Random(11)
        const = EdgePath.constant(C3)
        for _ in range(50):
            p = EdgePath.from_walk(C3, random_walk(C3, 0, 8, rng) + [0])
            assert reduce(concat(p, invert(p))).vertices == (0,)
            assert reduce(concat(p, const)) == reduce(p)
            assert invert(invert(p)) == p

    def test_endpoint_mismatch(self):
        with pytest.raises(PathError):
            concat(EdgePath(C3, (1, 0)), EdgePath(C3, (2, 1)))


class TestEdgePathGroup:
    def test_examples(self):
        pi = edge_path_group(C3)
        assert pi.generators == ("x0",) and pi.relators == ()
        d = edge_path_group(DISC)
        assert d.generators == ("x0",) and d.relators == ((("x0", 1),),)

    def test_sphere_has_one_hom(self, cx, grp):
        pi = edge_path_group(cx["sphere"])
        for G in grp.values():
            assert len(enumerate_homs(pi, G)) == 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedError):
            edge_path_group(SimplicialComplex([0, 1], [[0], [1]], 0))

    def test_tree_independence(self, cx, grp):
        # a second spanning tree: a path through the vertices where possible
        for name, K in cx.items():
            n = len(K.vertices)
            other = None
            chain = [(K.vertices[i], K.vertices[i + 1]) for i in range(n - 1)]
            if all(K.is_simplex(e) for e in chain):
                other = chain
            if other is None:
                continue
            p1, p2 = edge_path_group(K), edge_path_group(K, tree=other)
            assert p1.tree.edges != p2.tree.edges or name in ("circle", "disc")
            for G in grp.values():
                assert len(enumerate_homs(p1, G)) == len(enumerate_homs(p2, G))


class TestLoopWord:
    def test_examples(self):
        pi = edge_path_group(C3)
        assert loop_word(EdgePath.constant(C3)) == ()
        # words are read off the written tuple, so this traverses 1 -> 2 positively
        once = EdgePath(C3, (0, 1, 2, 0))
        assert loop_word(once) == (("x0", 1),)
        assert loop_word(EdgePath.from_walk(C3, [0, 1, 2, 0])) == (("x0", -1),)
        twice = concat(once, once)
        assert loop_word(twice) == (("x0", 1), ("x0", 1))
        assert loop_word(invert(once), pi) == (("x0", -1),)

    def test_not_based(self):
        with pytest.raises(PathError):
            loop_word(EdgePath(C3, (1, 0)))

    def test_homomorphism(self, cx):
        rng = random.Random(5)
        for K in cx.values():
            pi = edge_path_group(K)
            bp = K.basepoint
            loops = []
            for _ in range(30):
                walk = random_walk(K, bp, 7, rng)
                back = pi.tree.walks[walk[-1]][::-1]
                loops.append(EdgePath.from_walk(K, walk + list(back[1:])))
            for p, q in zip(loops, loops[1:]):
                assert loop_word(concat(p, q), pi) == pi.mul(loop_word(p, pi), loop_word(q, pi))
                assert loop_word(reduce(p), pi) == loop_word(p, pi)

    def test_generator_loops(self, cx):
        for K in cx.values():
            pi = edge_path_group(K)
            for g in pi.generators:
                assert loop_word(generator_loop(pi, g), pi) == ((g, 1),)


class TestUniversalCocycle:
    def test_circle(self):
        U = universal_cocycle(C3)
        pi = U.group
        assert [U.edge_value(i) for i in range(3)] == [pi.edge_word(i) for i in range(3)]
        assert sum(1 for i in range(3) if U.edge_value(i)) == 1

    def test_disc_values_are_trivial_in_every_quotient(self, grp):
        U = universal_cocycle(DISC)
        for G in grp.values():
            for a in enumerate_homs(U.group, G):
                assert all(a(U.edge_value(i)) == G.identity for i in range(3))

    def test_holonomy_is_identity(self, cx):
        for K in cx.values():
            U = universal_cocycle(K)
            assert is_cocycle(U)
            pi = U.group
            assert holonomy(U).images == tuple(pi.gen(g) for g in pi.generators)
