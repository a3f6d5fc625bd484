from itertools import product

import pytest

from milnor.complex import (
    CellMap,
    ComplexError,
    DeltaComplex,
    DisconnectedError,
    GroupAction,
    SimplicialComplex,
    SimplicialMap,
    are_contiguous,
    connected_components,
    join,
    quotient_by_action,
    spanning_tree,
    validate,
)
from milnor.groups import FiniteGroup

Z2 = FiniteGroup.cyclic(2)


def cycle(n):
    return SimplicialComplex(range(n), [[i, (i + 1) % n] for i in range(n)], 0)


class TestValidate:
    def test_triangle_boundary(self):
        K = validate(SimplicialComplex([0, 1, 2], [[0, 1], [1, 2], [0, 2]]))
        assert K.f_vector == (3, 3)

    def test_unknown_vertex(self):
        with pytest.raises(ComplexError, match="unknown vertex"):
            SimplicialComplex([0, 1, 2], [[0, 1, 9]])

    def test_empty_facet(self):
        with pytest.raises(ComplexError, match="empty facet"):
            SimplicialComplex([0, 1], [[]])

    def test_bad_basepoint(self):
        with pytest.raises(ComplexError):
            SimplicialComplex([0, 1], [[0, 1]], basepoint=7)

    def test_closure_of_filled_triangle(self):
        K = SimplicialComplex([0, 1, 2], [[0, 1, 2]])
        assert K.edges == [(0, 1), (0, 2), (1, 2)]
        assert K.is_simplex([2, 0])

    def test_non_maximal_facets_are_dropped(self):
        K = SimplicialComplex([0, 1, 2], [[0, 1, 2], [0, 1], [2]])
        assert K.facets == ((0, 1, 2),)

    def test_isolated_vertex_is_a_facet(self):
        K = SimplicialComplex([0, 1, 2], [[0, 1]])
        assert (2,) in K.facets

    def test_idempotent(self, cx):
        for K in cx.values():
            assert validate(validate(K)) == validate(K) == K

    def test_vertex_order_drives_sorting(self):
        K = SimplicialComplex(["b", "a"], [["a", "b"]])
        assert K.edges == [("b", "a")]


class TestComponentsAndTrees:
    def test_components(self):
        assert len(connected_components(cycle(3))) == 1
        two = SimplicialComplex([0, 1, 2, 3], [[0, 1], [2, 3]])
        assert connected_components(two) == [[0, 1], [2, 3]]
        assert len(connected_components(SimplicialComplex([0], [[0]]))) == 1

    def test_spanning_tree(self):
        assert spanning_tree(cycle(3), 0) == {(0, 1), (0, 2)}
        assert spanning_tree(SimplicialComplex([0], [[0]]), 0) == set()

    def test_spanning_tree_size(self, cx):
        for K in cx.values():
            assert len(spanning_tree(K)) == len(K.vertices) - 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedError):
            spanning_tree(SimplicialComplex([0, 1], [[0], [1]]), 0)


class TestMaps:
    disc = SimplicialComplex([0, 1, 2], [[0, 1, 2]])

    def test_map_must_be_simplicial(self):
        with pytest.raises(ComplexError):
            SimplicialMap(cycle(4), cycle(4), {0: 0, 1: 2, 2: 2, 3: 3})

    def test_pointed(self):
        with pytest.raises(ComplexError):
            SimplicialMap(cycle(3), cycle(3), {0: 1, 1: 2, 2: 0}, pointed=True)

    def test_contiguity_examples(self):
        K = self.disc
        ident = SimplicialMap.identity(K)
        slide = SimplicialMap(K, K, {0: 1, 1: 1, 2: 2})
        assert are_contiguous(ident, ident)
        assert are_contiguous(ident, slide) and are_contiguous(slide, ident)
        L = cycle(4)
        c0 = SimplicialMap(K, L, {v: 0 for v in K.vertices})
        c2 = SimplicialMap(K, L, {v: 2 for v in K.vertices})
        assert not are_contiguous(c0, c2)

    def test_contiguity_brute_force(self):
        # independent check on the filled triangle: all self-maps, simplex condition per facet
        K = self.disc
        maps = [SimplicialMap(K, K, dict(zip(K.vertices, img))) for img in product(K.vertices, repeat=3)]
        for f in maps:
            for g in maps:
                assert are_contiguous(f, g)  # every vertex set of the full simplex is a simplex

    def test_compose_and_cellular(self):
        L = cycle(3)
        wrap = SimplicialMap(cycle(6), L, {i: i % 3 for i in range(6)}, pointed=True)
        ident = SimplicialMap.identity(L)
        assert ident.compose(wrap).mapping == wrap.mapping
        cm = wrap.cellular()
        assert all(img is not None for img in cm.edge_map.values())
        const = SimplicialMap.constant(cycle(6), L)
        assert all(img is None for img in const.cellular().edge_map.values())

    def test_cellmap_checks_endpoints(self):
        L = cycle(3)
        with pytest.raises(ComplexError):
            CellMap(L, L, {0: 0, 1: 1, 2: 2}, {0: (0, -1), 1: (1, 1), 2: (2, 1)})


class TestJoin:
    def test_two_points(self):
        P = SimplicialComplex([0, 1], [[0], [1]])
        J = join(P, P)
        assert J.f_vector == (4, 4)
        assert all(len(connected_components(J)) == 1 for _ in [0])

    def test_cone(self, cx):
        pt = SimplicialComplex(["*"], [["*"]])
        for K in cx.values():
            assert len(join(K, pt).simplices()) == 2 * len(K.simplices()) + 1

    def test_vertex_count_additive(self, cx):
        a, b = cx["circle"], cx["disc"]
        assert len(join(a, b).vertices) == len(a.vertices) + len(b.vertices)

    def test_associative_counts(self, cx):
        a, b, c = cx["circle"], SimplicialComplex([0, 1], [[0], [1]]), cx["disc"]
        assert join(join(a, b), c).f_vector == join(a, join(b, c)).f_vector


def antipodal(n):
    K = cycle(n)
    act = {(v, g): (v + g * n // 2) % n for v in K.vertices for g in Z2}
    return GroupAction(K, Z2, act)


class TestQuotient:
    def test_trivial_group(self, cx):
        T = FiniteGroup.trivial()
        for K in cx.values():
            Q = quotient_by_action(GroupAction(K, T, {(v, 0): v for v in K.vertices}))
            assert Q.f_vector == K.f_vector

    def test_four_cycle(self):
        Q = quotient_by_action(antipodal(4))
        assert Q.f_vector == (2, 2)
        # DERIVED: orbits {01,23} and {12,30} are two distinct edges between the same two vertices
        ends = [frozenset((a, b)) for _, a, b in Q.one_cells]
        assert ends[0] == ends[1] == frozenset((0, 1))

    def test_six_cycle(self):
        Q = quotient_by_action(antipodal(6))
        assert Q.f_vector == (3, 3)
        assert len({frozenset((a, b)) for _, a, b in Q.one_cells}) == 3

    def test_orbit_stabilizer(self):
        for n in (4, 6, 8):
            act = antipodal(n)
            Q = quotient_by_action(act)
            assert [2 * k for k in Q.f_vector] == list(act.complex.f_vector)

    def test_non_free(self):
        K = cycle(4)
        act = GroupAction(K, Z2, {(v, g): (v if g == 0 else (-v) % 4) for v in K.vertices for g in Z2})
        assert not act.is_free
        with pytest.raises(ComplexError):
            quotient_by_action(act)

    def test_bad_action(self):
        K = cycle(4)
        with pytest.raises(ComplexError):
            GroupAction(K, Z2, {(v, g): (v + g) % 4 for v in K.vertices for g in Z2})


class TestDelta:
    def test_from_simplicial(self, cx):
        for K in cx.values():
            D = DeltaComplex.from_simplicial(K)
            assert D.f_vector == K.f_vector
            for k, s in enumerate(K.simplices(2)):
                assert tuple(K.vertices[i] for i in D.vertex_tuple(2, k)) == s

    def test_simplicial_identity_violation(self):
        with pytest.raises(ComplexError):
            DeltaComplex((0, 1, 2), ((), ((1, 0), (2, 1), (2, 0)), ((1, 2, 1),)))
