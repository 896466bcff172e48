import itertools
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from workbench.coloring import (
    NICELY_COLORED,
    ONE_SATURATED,
    SPEC_200,
    ColorSpec,
    cycle_precolorings,
    enumerate_all,
    is_superextendable,
    is_superextension,
    nicely_recolor,
    peel_order,
    recolor_with_one,
    recolor_with_one_feasible,
    saturation_status,
    solve,
    superextend,
    verify,
)
from workbench.errors import (
    InvalidPrecoloring,
    LimitError,
    NotACycle,
    PartialColoring,
    PreconditionError,
    TooManyColoredNeighbors,
    Uncolored,
)
from workbench.fixtures import load_fixture
from workbench.plane_graph import PlaneGraph, cycles_of_length
from workbench.structure import is_class_member

from conftest import B9_HEX, planar_upto
from lemma_cases import blocked_by_lemma, generate, outer_choices

SPECS = [ColorSpec.parse(s) for s in ("0,0,0", "1,0,0", "2,0,0", "2,2,2")]


def path3():
    return PlaneGraph([[2], [1, 3], [2]])


def star(k):
    return PlaneGraph([list(range(2, k + 2))] + [[1]] * k)


def brute(g, spec):
    # every assignment, filtered by the definition
    out = []
    for colors in itertools.product(range(1, spec.k + 1), repeat=g.n):
        col = dict(zip(g.vertices, colors))
        if all(sum(col[w] == col[v] for w in g.neighbors(v)) <= spec.cap(col[v]) for v in g.vertices):
            out.append(col)
    return out


class TestSpec:
    def test_parse(self):
        spec = ColorSpec.parse("2,0,0")
        assert spec == SPEC_200 and spec.k == 3 and spec.cap(1) == 2 and spec.cap(3) == 0
        assert str(spec) == "2,0,0"

    @pytest.mark.parametrize("text", ["", "a,b", "-1,0", "1,,2"])
    def test_bad_spec(self, text):
        with pytest.raises(ValueError):
            ColorSpec.parse(text)


class TestVerify:
    def test_k3_examples(self):
        k3 = load_fixture("K3")
        assert verify(k3, SPEC_200, {1: 1, 2: 1, 3: 2}).valid
        v = verify(k3, ColorSpec.parse("0,0,0"), {1: 1, 2: 1, 3: 2})
        assert not v.valid and v.violators == (1, 2)

    def test_partial_is_rejected(self):
        with pytest.raises(PartialColoring):
            verify(load_fixture("K3"), SPEC_200, {1: 1})

    def test_color_out_of_range(self):
        with pytest.raises(PreconditionError):
            verify(load_fixture("K3"), SPEC_200, {1: 1, 2: 2, 3: 4})


class TestSolve:
    def test_k4_proper_unsat(self):
        res = solve(load_fixture("K4"), ColorSpec.parse("0,0,0"))
        assert not res.sat and res.exhaustive

    def test_k3_proper(self):
        res = solve(load_fixture("K3"), ColorSpec.parse("0,0,0"))
        assert res.coloring == {1: 1, 2: 2, 3: 3}

    def test_b9_sat(self, b9):
        res = solve(b9, SPEC_200)
        assert res.sat and verify(b9, SPEC_200, res.coloring).valid

    def test_partial_respected(self, b9):
        res = solve(b9, SPEC_200, {7: 3, 8: 2})
        assert res.coloring[7] == 3 and res.coloring[8] == 2

    def test_deterministic(self, b9):
        runs = {tuple(sorted(solve(b9, spec).coloring.items())) for spec in [SPEC_200] * 3}
        assert len(runs) == 1

    def test_symmetry_flag_same_verdict(self):
        for g in planar_upto(6):
            for spec in SPECS:
                assert solve(g, spec, symmetry=True).sat == solve(g, spec).sat

    def test_agrees_with_enumeration(self):
        for g in planar_upto(7):
            for spec in SPECS:
                res = solve(g, spec)
                assert res.sat == bool(enumerate_all(g, spec))
                if res.sat:
                    assert verify(g, spec, res.coloring).valid

    def test_monotone(self):
        order = [("0,0,0", "1,0,0"), ("1,0,0", "2,0,0"), ("2,0,0", "2,2,2")]
        for g in planar_upto(7):
            for lo, hi in order:
                if solve(g, ColorSpec.parse(lo)).sat:
                    assert solve(g, ColorSpec.parse(hi)).sat


class TestEnumerate:
    def test_counts(self):
        assert len(enumerate_all(PlaneGraph([[]]), SPEC_200)) == 3
        assert len(enumerate_all(load_fixture("K3"), ColorSpec.parse("0,0,0"))) == 6
        c5 = load_fixture("C5")
        assert enumerate_all(c5, SPEC_200) == brute(c5, SPEC_200)

    def test_limit(self):
        ring = PlaneGraph([[(i - 1) % 13 + 1, (i + 1) % 13 + 1] for i in range(13)])
        with pytest.raises(LimitError):
            enumerate_all(ring, SPEC_200)

    @pytest.mark.parametrize("name", ["K4", "B9", "bowtie", "C6", "double_pyramid"])
    def test_matches_direct_filter(self, name):
        g = load_fixture(name)
        for spec in SPECS:
            assert enumerate_all(g, spec) == brute(g, spec)


class TestSuperextend:
    def test_b9_outer_unsat(self, b9):
        pre = {1: 1, 3: 1, 5: 1, 2: 2, 4: 2, 6: 2}
        assert not superextend(b9, B9_HEX_IDS, pre).sat

    def test_b9_outer_not_superextendable(self, b9):
        v = is_superextendable(b9, B9_HEX_IDS)
        assert not v.superextendable
        w = v.witness
        assert w[1] == w[3] == w[5] == 1

    def test_k3_returns_precoloring(self):
        k3 = load_fixture("K3")
        assert superextend(k3, [1, 2, 3], {1: 1, 2: 2, 3: 3}).coloring == {1: 1, 2: 2, 3: 3}
        assert is_superextendable(k3, [1, 2, 3]).superextendable

    def test_b9_triangle_sat(self, b9):
        res = superextend(b9, [7, 8, 9], {7: 1, 8: 2, 9: 3})
        assert res.sat and is_superextension(b9, [7, 8, 9], res.coloring)

    def test_invalid_precoloring(self, b9):
        with pytest.raises(InvalidPrecoloring):
            superextend(b9, [7, 8, 9], {7: 2, 8: 2, 9: 3})
        with pytest.raises(InvalidPrecoloring):
            superextend(b9, [7, 8, 9], {7: 1, 8: 2})

    def test_not_a_cycle(self, b9):
        with pytest.raises(NotACycle):
            is_superextendable(b9, [1, 2, 4])

    def test_precolorings_are_valid_on_cycle(self):
        c5 = load_fixture("C5")
        pres = list(cycle_precolorings(c5, [1, 2, 3, 4, 5]))
        assert len(pres) == len(brute(c5, SPEC_200))

    def test_unsat_claims_rechecked_by_enumeration(self):
        # every UNSAT verdict is confirmed by filtering all colorings
        unsat = 0
        for g in planar_upto(7):
            for cyc in cycles_of_length(g, 3) + cycles_of_length(g, 5) + cycles_of_length(g, 6):
                everything = None
                for pre in cycle_precolorings(g, cyc):
                    res = superextend(g, cyc, pre)
                    if res.sat:
                        assert is_superextension(g, cyc, res.coloring)
                        assert all(res.coloring[v] == c for v, c in pre.items())
                        continue
                    if everything is None:
                        everything = enumerate_all(g, SPEC_200)
                    assert not any(
                        all(col[v] == c for v, c in pre.items()) and is_superextension(g, cyc, col)
                        for col in everything
                    )
                    unsat += 1
        assert unsat > 0

    def test_reduction_agrees_with_plain_search(self):
        rng = random.Random(3)
        graphs = rng.sample(planar_upto(9), 400)
        for g in graphs:
            for cyc in cycles_of_length(g, 3) + cycles_of_length(g, 5):
                for pre in cycle_precolorings(g, cyc):
                    a = superextend(g, cyc, pre, reduce=True)
                    b = superextend(g, cyc, pre, reduce=False)
                    assert a.sat == b.sat
                    if a.sat:
                        assert is_superextension(g, cyc, a.coloring)

    def test_peel_order(self):
        g = load_fixture("gadget_L1")
        order = peel_order(g, set(g.outer.vertices))
        assert set(order) == {6, 7}


B9_HEX_IDS = [1, 2, 3, 4, 5, 6]


class TestSaturation:
    def test_path(self):
        p = path3()
        assert saturation_status(p, {1: 1, 2: 1, 3: 1}, 2) == ONE_SATURATED
        assert saturation_status(p, {1: 1, 2: 2, 3: 1}, 2) == NICELY_COLORED

    def test_star(self):
        assert saturation_status(star(3), {1: 1, 2: 1, 3: 1, 4: 2}, 1) == ONE_SATURATED

    def test_uncolored(self):
        with pytest.raises(Uncolored):
            saturation_status(path3(), {1: 1}, 2)


class TestNicelyRecolor:
    def test_free_color(self):
        out = nicely_recolor(star(3), {1: 1, 2: 1, 3: 1, 4: 3}, 1)
        assert out[1] == 2

    def test_keep_one(self):
        out = nicely_recolor(star(3), {1: 1, 2: 2, 3: 3, 4: 1}, 1)
        assert out[1] == 1

    def test_some_branch_always_applies(self):
        # blocking both 2 and 3 leaves room for at most one 1-neighbour
        for k in range(4):
            for colors in itertools.product((1, 2, 3), repeat=k):
                col = {1: 1, **{i + 2: c for i, c in enumerate(colors)}}
                out = nicely_recolor(star(3), col, 1)
                assert out is not None
                assert out[1] in (2, 3) or colors.count(1) <= 1

    def test_too_many_neighbours(self):
        with pytest.raises(TooManyColoredNeighbors):
            nicely_recolor(star(4), {2: 1, 3: 1, 4: 2, 5: 3}, 1)

    def test_keeps_superextension(self):
        # a vertex off C that is nicely recolored leaves a superextension intact
        checked = 0
        for g in planar_upto(7):
            for cyc in cycles_of_length(g, 3) + cycles_of_length(g, 5):
                for pre in itertools.islice(cycle_precolorings(g, cyc), 4):
                    res = superextend(g, cyc, pre)
                    if not res.sat:
                        continue
                    for v in g.vertices:
                        if v in cyc or g.degree(v) > 3:
                            continue
                        out = nicely_recolor(g, res.coloring, v)
                        if out is not None:
                            assert is_superextension(g, cyc, out)
                            checked += 1
        assert checked > 1000


def blocking_instance(adjacent=True):
    """v1 and v2 adjacent with degrees 5 and 4 and a coloring that pins them."""
    pts = {
        1: (0.5, 1.0),    # v
        2: (0.0, 0.0),    # v1
        3: (1.0, 0.0),    # v2
        4: (-1.0, 0.5),   # a
        5: (-1.0, -0.5),  # b
        6: (0.0, -1.0),   # c
        7: (2.0, 0.5),    # p
        8: (2.0, -0.5),   # q
        9: (0.0, 5.0),    # outer triangle
        10: (-5.0, -4.0),
        11: (5.0, -4.0),
    }
    edges = [(1, 2), (1, 3), (2, 4), (2, 5), (2, 6), (3, 7), (3, 8),
             (9, 10), (10, 11), (11, 9), (5, 10), (8, 11)]
    if adjacent:
        edges.append((2, 3))
    g = PlaneGraph.from_coordinates(pts, edges, outer=[9, 10, 11])
    col = {2: 1, 4: 1, 5: 1, 6: 3, 3: 2, 7: 1, 8: 3, 9: 3, 10: 2, 11: 1}
    return g, col


class TestRecolorWithOne:
    def test_both_colored_two(self):
        g, col = blocking_instance(adjacent=False)
        col[2] = col[3] = 2
        out = recolor_with_one(g, col, 1)
        assert out == {**col, 1: 1}

    def test_blocking_instance(self):
        g, col = blocking_instance()
        assert g.degree(2) == 5 and g.degree(3) == 4
        assert blocked_by_lemma(g, 1, col)
        assert not recolor_with_one_feasible(g, col, 1)

    def test_small_degrees_nonadjacent(self):
        g, col = blocking_instance()
        # drop v1's heavy neighbours from the colouring: v1 now has degree 5 but
        # only one colored neighbour besides v
        lighter = {u: c for u, c in col.items() if u not in (4, 5)}
        assert recolor_with_one_feasible(g, lighter, 1)

    def test_preconditions(self):
        g, col = blocking_instance()
        with pytest.raises(PreconditionError):
            recolor_with_one(g, col, 9)
        with pytest.raises(PreconditionError):
            recolor_with_one(g, {u: c for u, c in col.items() if u != 3}, 1)
        with pytest.raises(PreconditionError):
            recolor_with_one(load_fixture("B9"), {}, 7)
        bad = {**col, 5: 2}
        with pytest.raises(PreconditionError):
            recolor_with_one(g, bad, 1)

    def test_result_is_valid(self):
        pool = outer_choices(planar_upto(7))
        for g, col, v in generate(pool, 500, seed=11):
            out = recolor_with_one(g, col, v)
            if out is not None:
                assert out[v] == 1
                changed = {u for u in col if out[u] != col[u]}
                assert changed <= set(g.neighbors(v))


_POOL = None


def _pool():
    global _POOL
    if _POOL is None:
        _POOL = outer_choices(planar_upto(8))
    return _POOL


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_lemma_recolor_implication(seed):
    rng = random.Random(seed)
    case = None
    while case is None:
        from lemma_cases import draw_case

        case = draw_case(_pool(), rng)
    g, col, v = case
    if not blocked_by_lemma(g, v, col):
        assert recolor_with_one_feasible(g, col, v)


def test_class_graphs_are_200_colorable_small():
    for g in planar_upto(9):
        if is_class_member(g).member:
            assert solve(g, SPEC_200).sat
