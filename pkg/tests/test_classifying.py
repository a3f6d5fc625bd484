from itertools import product
from math import comb

import pytest

from milnor import corpus
from milnor.bundles import Cocycle, apply_gauge, gauge_equivalent, holonomy, pushforward
from milnor.classifying import (
    ClassifyingError,
    EquivariantMap,
    algebraically_equivalent,
    classify_bundles,
    classifying_map,
    classifying_stage,
    classifying_stage_map,
    counit,
    extend_classifying_map,
    milnor_join,
    omega_on_map,
    verify_naturality,
)
from milnor.complex import SimplicialComplex, SimplicialMap, connected_components
from milnor.groups import (
    FiniteGroup,
    GroupHom,
    are_conjugate,
    compose_homs,
    enumerate_homs,
    identity_hom,
    trivial_hom,
)
from milnor.loops import edge_path_group, universal_cocycle

CX = corpus.complexes()
GR = corpus.groups()
Z2, Z3, S3 = GR["Z2"], GR["Z3"], GR["S3"]
circle, disc = CX["circle"], CX["disc"]


def twisted(G=Z2, x=1):
    return Cocycle.from_triples(circle, G, [("1", "2", x)])


class TestJoin:
    def test_z2_stage1_is_four_cycle(self):
        J = milnor_join(Z2, 1)
        K = J.complex
        assert K.f_vector == (4, 4)
        assert all(sum(1 for e in K.edges if p in e) == 2 for p in K.vertices)
        assert len(connected_components(K)) == 1

    def test_z2_stage2_octahedron(self):
        J = milnor_join(Z2, 2)
        assert J.complex.f_vector == (6, 12, 8)
        for G in GR.values():
            assert len(enumerate_homs(edge_path_group(J.complex), G)) == 1

    def test_stage0(self):
        for G in GR.values():
            J = milnor_join(G, 0)
            assert J.complex.f_vector == (G.order,)
            assert len(connected_components(J.complex)) == G.order

    def test_counts(self):
        for G in (Z2, Z3, S3):
            for n in range(3):
                J = milnor_join(G, n)
                want = tuple(comb(n + 1, d + 1) * G.order ** (d + 1) for d in range(n + 1))
                assert J.f_vector == want
                if G.order ** (n + 1) <= 300:
                    assert J.complex.f_vector == want

    def test_action_free(self):
        assert milnor_join(S3, 2).action().is_free

    def test_negative(self):
        with pytest.raises(ClassifyingError):
            milnor_join(Z2, -1)


class TestClassifyingStage:
    def test_z2_stage1_circle(self):
        B = classifying_stage(Z2, 1)
        assert B.delta.f_vector == (2, 2)
        pi = edge_path_group(B.delta)
        assert len(pi.generators) == 1 and pi.relators == ()

    def test_z2_stage2(self):
        B = classifying_stage(Z2, 2)
        assert B.delta.f_vector == (3, 6, 4)
        pi = edge_path_group(B.delta)
        # order two, seen through finite targets
        assert len(enumerate_homs(pi, Z2)) == 2
        assert len(enumerate_homs(pi, Z3)) == 1
        assert len(enumerate_homs(pi, GR["Z4"])) == 2

    def test_z3_stage2(self):
        pi = edge_path_group(classifying_stage(Z3, 2).delta)
        assert len(enumerate_homs(pi, Z3)) == 3
        assert len(enumerate_homs(pi, Z2)) == 1

    def test_universal_is_cocycle_and_invariant(self):
        from milnor.bundles import is_cocycle

        for G in GR.values():
            B = classifying_stage(G, 2)
            assert is_cocycle(B.universal)
            # every lift of a 1-cell gives the same value
            for k, ((i, g), (j, h)) in enumerate(B.delta.labels[1]):
                for x in G:
                    gx, hx = G.mul(g, x), G.mul(h, x)
                    assert G.mul(gx, G.inv(hx)) == B.universal.values[k]


class TestCounit:
    def test_isomorphism_at_stage_two(self):
        for G in GR.values():
            r = counit(G, 2, test_groups=list(GR.values()))
            assert r.is_isomorphism, (G, r.reason)
            pi = r.hom.source
            assert len(enumerate_homs(pi, G)) == len(enumerate_homs(G, G))

    def test_stage_one_flagged(self):
        r = counit(Z2, 1)
        assert not r.is_isomorphism and "stage" in r.reason
        assert len(r.hom.source.generators) == 1 and r.hom.source.relators == ()
        assert r.hom.images == (1,)


class TestClassifyingMap:
    def test_trivial(self):
        for G in (Z2, S3):
            phi = classifying_map(Cocycle.trivial(circle, G))
            assert all(phi((v, g)) == (int(v), g) for v in circle.vertices for g in G)

    def test_twisted_circle(self):
        c = twisted()
        phi = classifying_map(c)
        assert [phi.shift(v) for v in circle.vertices] == [0, 0, 0]
        pb = phi.pulled_back()
        assert pb.values[2] == 1 and gauge_equivalent(c, pb) is not None

    def test_simply_connected_bases(self):
        for name in ("disc", "sphere"):
            K = CX[name]
            from milnor.bundles import all_cocycles

            for r in all_cocycles(K, S3)[::41]:
                pb = classifying_map(Cocycle(K, S3, r)).pulled_back()
                assert gauge_equivalent(pb, Cocycle.trivial(K, S3)) is not None

    def test_equivariant_and_simplicial(self):
        for name in ("circle", "figure_eight", "rp2"):
            K = CX[name]
            for a in enumerate_homs(edge_path_group(K), S3)[::7]:
                c = pushforward(a, universal_cocycle(K))
                phi = classifying_map(c)  # construction validates both properties
                assert phi.is_total and phi.target.n == len(K.vertices) - 1

    def test_any_shift_gives_equivalent_pullback(self):
        c = twisted(S3, 3)
        P = classifying_map(c).source
        J = milnor_join(S3, 2)
        h = {"0": 0, "1": 0, "2": 0}
        for ks in product(S3, repeat=2):
            k = {"0": 0, "1": ks[0], "2": ks[1]}
            phi = {(v, g): (int(v), S3.mul(k[v], S3.mul(h[v], g))) for v in circle.vertices for g in S3}
            try:
                m = EquivariantMap(P, J, phi)
            except ClassifyingError:
                continue
            assert gauge_equivalent(c, m.pulled_back()) is not None

    def test_rejects_bad_maps(self):
        c = twisted(S3, 3)
        P = classifying_map(c).source
        J = milnor_join(S3, 2)
        not_equivariant = {(v, g): (int(v), 0) for v in circle.vertices for g in S3}
        with pytest.raises(ClassifyingError):
            EquivariantMap(P, J, not_equivariant)
        same_level = {(v, g): (0, g) for v in circle.vertices for g in S3}
        with pytest.raises(ClassifyingError):
            EquivariantMap(P, J, same_level)

    def test_stage_too_small(self):
        with pytest.raises(ClassifyingError):
            classifying_map(twisted(), stage=1)


class TestExtension:
    def test_from_basepoint(self):
        c = twisted(S3, 3)
        phi = classifying_map(c)
        partial = phi.restrict(["0"])
        ext = extend_classifying_map(c, ["0"], partial)
        assert ext.assignment == phi.assignment

    def test_whole_base(self):
        c = twisted(S3, 3)
        phi = classifying_map(c)
        assert extend_classifying_map(c, circle, phi).assignment == phi.assignment

    def test_one_edge(self):
        c = twisted(S3, 3)
        P = classifying_map(c).source
        J = milnor_join(S3, 2)
        # a chosen trivialisation over the edge 1-2 on levels 0 and 1
        partial = {}
        for g in S3:
            partial[("1", g)] = (0, g)
            partial[("2", S3.mul(c.value("2", "1"), g))] = (1, g)
        ext = extend_classifying_map(c, ["1", "2"], EquivariantMap(P, J, partial))
        assert ext.is_total and ext.restrict(["1", "2"]).assignment == partial
        assert gauge_equivalent(c, ext.pulled_back()) is not None

    def test_non_simplicial_partial(self):
        c = twisted(S3, 3)
        P = classifying_map(c).source
        J = milnor_join(S3, 2)
        partial = {("1", g): (0, g) for g in S3} | {("2", g): (0, g) for g in S3}
        with pytest.raises(ClassifyingError):
            extend_classifying_map(c, ["1", "2"], EquivariantMap(P, J, partial))


class TestAlgebraicEquivalence:
    def test_examples(self):
        pi = edge_path_group(circle)
        threes = [x for x in S3 if S3.element_order(x) == 3]
        a, b = (GroupHom(pi, S3, (x,)) for x in threes)
        assert algebraically_equivalent(a, a)
        assert algebraically_equivalent(a, b)
        homs = enumerate_homs(pi, GR["Z4"])
        for x, y in product(homs, repeat=2):
            assert algebraically_equivalent(x, y) == (x == y)

    def test_requires_edge_path_source(self):
        with pytest.raises(ClassifyingError):
            algebraically_equivalent(identity_hom(Z2), identity_hom(Z2))


class TestOmega:
    def test_identity_and_constant(self):
        for K in CX.values():
            pi = edge_path_group(K)
            assert omega_on_map(SimplicialMap.identity(K)) == identity_hom(pi)
            const = SimplicialMap.constant(K, circle)
            assert omega_on_map(const).is_trivial

    def test_wrap(self):
        w = omega_on_map(corpus.maps()["wrap"])
        assert w.images == ((("x0", 1), ("x0", 1)),)

    def test_pseudofunctorial(self):
        maps = corpus.all_maps()
        for f in maps:
            for g in maps:
                if f.target == g.source:
                    assert omega_on_map(g.compose(f)) == compose_homs(omega_on_map(g), omega_on_map(f))

    def test_cellular_matches_simplicial(self):
        for f in corpus.all_maps():
            assert omega_on_map(f.cellular()) == omega_on_map(f)

    def test_not_pointed(self):
        f = SimplicialMap(circle, circle, {"0": "1", "1": "2", "2": "0"})
        with pytest.raises(ClassifyingError):
            omega_on_map(f)


class TestClassify:
    def test_examples(self):
        assert classify_bundles(circle, Z2).n_hom_classes == 2
        for G in GR.values():
            r = classify_bundles(disc, G)
            assert r.consistent and r.n_hom_classes == 1
        r = classify_bundles(circle, S3)
        assert r.consistent and r.n_gauge_classes == 3
        assert sorted(row.class_size for row in r.rows) == [1, 2, 3]

    def test_rows(self):
        r = classify_bundles(CX["figure_eight"], Z2)
        assert r.consistent
        for row in r.rows:
            assert holonomy(row.cocycle) == row.hom
            assert apply_gauge(row.cocycle, row.witness) == row.pulled_back

    def test_without_oracle(self):
        r = classify_bundles(CX["rp2"], S3, oracle=False)
        assert r.n_gauge_classes is None and r.consistent and r.n_hom_classes == 2

    def test_stage_independence(self):
        c = twisted(S3, 3)
        for n in (2, 3):
            assert gauge_equivalent(c, classifying_map(c, stage=n).pulled_back()) is not None


class TestNaturality:
    def test_identity(self):
        for G in (Z2, S3):
            rep = verify_naturality(circle, circle, SimplicialMap.identity(circle), G, G, identity_hom(G))
            assert rep.passed, rep.failures

    def test_inclusion(self):
        a = corpus.homs()["z2_into_z4"]
        rep = verify_naturality(circle, circle, SimplicialMap.identity(circle), Z2, GR["Z4"], a)
        assert rep.passed
        assert any(ch.name == "pushforward square" for ch in rep.checks)

    def test_stage_map_on_universal(self):
        for a in corpus.all_homs():
            Ba = classifying_stage_map(a, 2)
            from milnor.bundles import pullback

            pushed = pushforward(a, classifying_stage(a.source, 2).universal)
            assert pullback(Ba, classifying_stage(a.target, 2).universal) == pushed

    def test_mismatch(self):
        with pytest.raises(ClassifyingError):
            verify_naturality(circle, disc, SimplicialMap.identity(circle), Z2, Z2, identity_hom(Z2))
