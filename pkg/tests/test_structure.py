import math

import networkx as nx
import pytest

from workbench.errors import NoOuterCycle, NotA6Cycle
from workbench.fixtures import load_fixture
from workbench.plane_graph import canonical_cycle, cycles_of_length
from workbench.structure import (
    F3_MANY,
    F3_ONE,
    F5_MANY,
    F5_ONE,
    INTERNAL,
    OTHER,
    OUTER,
    build_structure_index,
    classify_6cycle,
    face_signature,
    is_class_member,
    is_interior_triangle_of_bad_6cycle,
    matched_triangles,
    matches,
    triangle_distance,
)

from conftest import B9_HEX, planar_upto


class TestMembership:
    def test_b9_is_member(self, b9):
        verdict = is_class_member(b9)
        assert verdict.member
        assert verdict.four_cycle is None and verdict.distance == math.inf

    def test_four_cycle_witness(self):
        verdict = is_class_member(load_fixture("C4"))
        assert not verdict.member and verdict.four_cycle == (1, 2, 3, 4)

    def test_bowtie_triangles_too_close(self):
        verdict = is_class_member(load_fixture("bowtie"))
        assert not verdict.member
        assert verdict.four_cycle is None and verdict.distance == 0

    def test_spacer_distance_two(self):
        g = load_fixture("bowtie_spacer")
        assert triangle_distance(g) == 2
        assert is_class_member(g).member

    def test_k4_minus_edge(self):
        g = load_fixture("K4_minus_edge")
        assert triangle_distance(g) == 0
        assert not is_class_member(g).member

    def test_triangle_distance_matches_networkx(self):
        for g in planar_upto(7):
            tris = cycles_of_length(g, 3)
            if len(tris) < 2:
                assert triangle_distance(g) == math.inf
                continue
            lengths = dict(nx.all_pairs_shortest_path_length(nx.Graph(g.edges())))
            best = min(
                lengths[a].get(b, math.inf)
                for i, s in enumerate(tris)
                for t in tris[i + 1:]
                for a in s
                for b in t
            )
            assert triangle_distance(g) == best


class TestBadSixCycles:
    def test_b9_hexagon_is_bad(self, b9):
        assert classify_6cycle(b9, [1, 2, 3, 4, 5, 6]) == "bad"
        others = [c for c in cycles_of_length(b9, 6) if c != (1, 2, 3, 4, 5, 6)]
        assert len(others) == 3
        assert all(classify_6cycle(b9, c) == "good" for c in others)

    def test_c6_is_good(self):
        assert classify_6cycle(load_fixture("C6"), [1, 2, 3, 4, 5, 6]) == "good"

    def test_not_a_six_cycle(self, b9):
        with pytest.raises(NotA6Cycle):
            classify_6cycle(b9, [1, 2, 3, 4, 5])
        with pytest.raises(NotA6Cycle):
            classify_6cycle(b9, [1, 3, 2, 4, 5, 6])

    def test_interior_only_respects_outer(self, b9):
        hexagon = [1, 2, 3, 4, 5, 6]
        assert classify_6cycle(b9.with_outer(hexagon), hexagon) == "bad"
        five = next(f for f in b9.faces if f.degree == 5)
        redrawn = b9.with_outer(list(five.vertices))
        # with a 5-face outside, the triangle sits outside the hexagon
        assert classify_6cycle(redrawn, hexagon) == "good"
        assert classify_6cycle(redrawn, hexagon, interior_only=False) == "bad"

    def test_interior_triangle(self, b9):
        assert is_interior_triangle_of_bad_6cycle(b9, [7, 8, 9])
        assert not is_interior_triangle_of_bad_6cycle(load_fixture("K3"), [1, 2, 3])

    def test_matching_oracle(self):
        # an alternate class and a disjoint triangle are matched exactly
        # when their bipartite edge graph has a perfect matching
        checked = 0
        for g in planar_upto(9):
            if g.n < 9 or not is_class_member(g).member:
                continue
            tris = cycles_of_length(g, 3)
            for cyc in cycles_of_length(g, 6):
                expected = []
                for tri in tris:
                    if set(tri) & set(cyc):
                        continue
                    for side in (cyc[0::2], cyc[1::2]):
                        b = nx.Graph()
                        b.add_nodes_from(("c", v) for v in side)
                        b.add_edges_from(
                            (("c", a), ("t", t)) for a in side for t in tri if g.has_edge(a, t)
                        )
                        top = [("c", v) for v in side]
                        if len(nx.bipartite.maximum_matching(b, top_nodes=top)) == 6:
                            expected.append(tri)
                            break
                got = matched_triangles(g, cyc, interior_only=False)
                assert sorted(got) == sorted(expected)
                checked += 1
        assert checked > 0


class TestSignatures:
    @pytest.mark.parametrize(
        "sig,pattern,ok",
        [
            ((3, 3, 4), "3,4-,4", True),
            ((3, 3, 3), "3,4-,4", False),
            ((3, 3, 5), "3,3,5-", True),
            ((3, 3, 4), "3,3,5-", True),
            ((3, 5, 5), "3,3,5-", False),
            ((3, 4, 4), "3,4,4", True),
            ((3, 6, 7), "3,5+,5+", True),
            ((3, 3), "3,3,3", False),
        ],
    )
    def test_matches(self, sig, pattern, ok):
        assert matches(sig, pattern) is ok

    def test_face_signature(self, b9):
        sigs = sorted(face_signature(b9, f) for f in b9.faces)
        assert sigs[0] == (2, 2, 2, 3, 3, 3)
        assert (3, 3, 3) in sigs


class TestIndex:
    def test_needs_outer(self, b9):
        with pytest.raises(NoOuterCycle):
            build_structure_index(b9)

    def test_b9(self, b9_hex):
        ix = build_structure_index(b9_hex)
        classes = sorted(fi.f_class for fi in ix.faces)
        assert classes == sorted([OUTER, F5_MANY, F5_MANY, F5_MANY, INTERNAL])
        tri = next(fi for fi in ix.faces if fi.degree == 3)
        assert tri.internal and tri.signature == (3, 3, 3)
        assert [(d, x) for d, x, _f in ix.pendant] == [(1, 7), (3, 8), (5, 9)]
        assert ix.pendant_special == []
        for v in (7, 8, 9):
            info = ix.vertices[v]
            assert info.triangular and info.potentially_special and not info.special
        assert all(ix.vertices[v].on_outer for v in range(1, 7))

    def test_special_gadget(self):
        g = load_fixture("special_gadget")
        ix = build_structure_index(g)
        v, x = g.vertex_id("v"), g.vertex_id("x")
        assert ix.vertices[v].special and ix.vertices[v].potentially_special
        (fid,) = ix.vertices[v].special_faces
        assert ix.faces[fid].degree == 5 and ix.faces[fid].internal
        assert (x, v, fid) in ix.pendant_special
        assert not ix.vertices[x].special

    def test_to_dict_is_json_ready(self, b9_hex):
        import json

        d = build_structure_index(b9_hex).to_dict()
        assert json.loads(json.dumps(d)) == d
        assert d["outer"] == [1, 2, 3, 4, 5, 6]

    def test_properties_on_corpus(self):
        seen = 0
        for g in planar_upto(8):
            if not is_class_member(g).member:
                continue
            for f in g.faces:
                if f.degree not in (3, 5, 6) or len(f.vertex_set) != f.degree:
                    continue
                h = g.with_outer(list(f.vertices))
                ix = build_structure_index(h)
                on_c = set(h.outer.vertices)
                for fi in ix.faces:
                    k = len(set(h.faces[fi.id].vertices) & on_c)
                    if fi.id == h.outer.face:
                        assert fi.f_class == OUTER
                    elif k == 0:
                        assert fi.f_class == INTERNAL and fi.internal
                    elif fi.degree == 3:
                        assert fi.f_class == (F3_ONE if k == 1 else F3_MANY)
                    elif fi.degree == 5:
                        assert fi.f_class == (F5_ONE if k == 1 else F5_MANY)
                    else:
                        assert fi.f_class == OTHER
                for w, info in ix.vertices.items():
                    if info.special:
                        assert info.potentially_special
                    if info.potentially_special:
                        assert info.degree == 3 and not info.on_outer
                for donor, three, fid in ix.pendant:
                    assert h.degree(three) == 3 and h.has_edge(donor, three)
                    assert donor not in h.faces[fid].vertex_set
                seen += 1
        assert seen > 100
