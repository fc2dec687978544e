import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcolor.errors import GraphParseError, InstanceTooLarge
from dpcolor.graph import (
    Multigraph,
    chromatic_poly_eval,
    complete,
    count_proper_colorings,
    cycle,
    degeneracy,
    digon,
    dodecahedron,
    edgeless,
    family_generate,
    format_graph,
    girth,
    graph_stats,
    hk,
    is_uniquely_k_colorable,
    parse_graph,
    path,
    theta,
    underlying_simple,
    uniquely_colorable_edge_bound,
    wheel_even,
)

from conftest import brute_proper, random_graph


class TestParse:
    def test_digon(self):
        G = parse_graph("2\n0 1\n0 1")
        assert G.n == 2 and G.edges == ((0, 1), (0, 1))

    def test_edgeless(self):
        assert parse_graph("3\n") == edgeless(3)

    def test_loop_names_line(self):
        with pytest.raises(GraphParseError, match="line 2"):
            parse_graph("2\n0 0")

    @pytest.mark.parametrize(
        "text,line",
        [("2\n0 2", 2), ("3\n0 1\n1 x", 3), ("x\n", 1), ("3\n0 1 2", 2), ("# c\n2\n\n1 -1", 4)],
    )
    def test_errors(self, text, line):
        with pytest.raises(GraphParseError) as exc:
            parse_graph(text)
        assert exc.value.lineno == line

    def test_comments_and_order(self):
        G = parse_graph("# header\n3\n2 1\n# mid\n0 1\n")
        assert G.edges == ((1, 2), (0, 1))

    def test_roundtrip(self):
        G = theta(2, 3, 3, 3, 2)
        assert parse_graph(format_graph(G)) == G
        assert format_graph(parse_graph(format_graph(G))) == format_graph(G)


def test_underlying_simple():
    assert underlying_simple(digon()) == complete(2)
    assert underlying_simple(cycle(4)) == cycle(4)
    tri = Multigraph(3, ((0, 1), (0, 1), (1, 2), (0, 2)))
    assert underlying_simple(tri).edges == ((0, 1), (1, 2), (0, 2))
    assert underlying_simple(underlying_simple(tri)) == underlying_simple(tri)


@pytest.mark.parametrize(
    "G,expected",
    [(edgeless(3), 0), (hk(1), 2), (cycle(4), 2), (digon(), 2), (complete(4), 3), (wheel_even(1), 3)],
)
def test_degeneracy(G, expected):
    assert degeneracy(G) == expected


@pytest.mark.parametrize(
    "G,expected",
    [(digon(), 2), (cycle(5), 5), (path(4), None), (wheel_even(2), 3), (hk(3), 3), (theta(2, 2), 4), (dodecahedron(), 5)],
)
def test_girth(G, expected):
    assert girth(G) == expected


def test_girth_matches_networkx(rng):
    for _ in range(100):
        G = random_graph(rng, max_n=7, simple=True)
        ng = nx.girth(nx.Graph(list(G.edges)) if G.edges else nx.empty_graph(G.n))
        assert girth(G) == (None if ng == math.inf else ng)


def test_stats():
    s = graph_stats(hk(1))
    assert (s.n, s.l, s.degeneracy, s.girth, s.components) == (6, 9, 2, 3, 1)
    assert graph_stats(path(4)).as_dict()["girth"] == "acyclic"


class TestChromatic:
    @pytest.mark.parametrize(
        "G,m,expected",
        [(complete(3), 3, 6), (path(3), 3, 12), (digon(), 3, 6), (cycle(4), 3, 18)],
    )
    def test_examples(self, G, m, expected):
        assert chromatic_poly_eval(G, m) == expected

    def test_c4_oracle(self):
        assert brute_proper(cycle(4), 3) == 18

    def test_closed_forms(self):
        for n in range(1, 7):
            for m in range(1, 6):
                assert chromatic_poly_eval(complete(n), m) == math.prod(m - i for i in range(n))
                assert chromatic_poly_eval(path(n), m) == m * (m - 1) ** (n - 1)

    def test_against_enumeration(self, rng):
        for _ in range(100):
            G = random_graph(rng, max_n=6)
            m = rng.randint(1, 4)
            assert chromatic_poly_eval(G, m) == brute_proper(G, m)
            assert count_proper_colorings(G, m) == brute_proper(G, m)

    def test_theta_two_routes(self):
        T = theta(2, 3, 3, 3, 2)
        assert chromatic_poly_eval(T, 3) == count_proper_colorings(T, 3) == 258

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            count_proper_colorings(edgeless(20), 3)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_parallel_edges_do_not_matter(self, data):
        n = data.draw(st.integers(2, 6))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges = data.draw(st.lists(st.sampled_from(pairs), max_size=12))
        m = data.draw(st.integers(1, 4))
        G = Multigraph(n, tuple(edges))
        assert chromatic_poly_eval(G, m) == chromatic_poly_eval(underlying_simple(G), m)


class TestUniquelyColorable:
    def test_examples(self):
        assert is_uniquely_k_colorable(complete(3), 3)
        assert is_uniquely_k_colorable(hk(1), 3)
        assert not is_uniquely_k_colorable(cycle(4), 3)

    def test_c4_partition_count(self):
        # 18 proper colourings of C4 induce more than one partition
        assert brute_proper(cycle(4), 3) == 18

    def test_edge_bound(self):
        assert uniquely_colorable_edge_bound(6, 3) == 9
        assert uniquely_colorable_edge_bound(8, 3) == 13
        assert uniquely_colorable_edge_bound(3, 3) == 3

    def test_bound_holds_on_uniquely_colorable(self, rng):
        seen = 0
        for _ in range(300):
            G = random_graph(rng, max_n=6, simple=True)
            for k in (2, 3):
                if G.n >= k and is_uniquely_k_colorable(G, k) and chromatic_poly_eval(G, k - 1) == 0:
                    seen += 1
                    assert G.l >= uniquely_colorable_edge_bound(G.n, k)
        assert seen > 0

    def test_unique_forces_k_factorial(self):
        for k in range(1, 4):
            H = hk(k)
            assert chromatic_poly_eval(H, 3) == 6


class TestFamilies:
    def test_hk_sizes(self):
        for k in range(1, 11):
            H = hk(k)
            assert (H.n, H.l) == (2 * k + 4, 4 * k + 5)
            assert H.l == 2 * H.n - 3
            assert girth(H) == 3

    def test_wheel_sizes(self):
        for k in range(1, 11):
            W = wheel_even(k)
            assert (W.n, W.l) == (2 * k + 3, 4 * k + 4)
            assert girth(W) == 3

    def test_theta_sizes(self):
        r = random.Random(3)
        for _ in range(50):
            L = [r.randint(2, 10) for _ in range(r.randint(1, 5))]
            if r.random() < 0.3:
                L.append(1)
            T = theta(*L)
            assert T.n == 2 + sum(x - 1 for x in L)
            assert T.l == sum(L)
        assert (theta(2, 3, 3, 3, 2).n, theta(2, 3, 3, 3, 2).l) == (10, 13)

    def test_hk_structure(self):
        H = hk(1)
        # hub 0 joined to path 1..4, z = 5 joined to path ends
        assert H.edges[:4] == ((0, 1), (0, 2), (0, 3), (0, 4))
        assert H.edges[-2:] == ((1, 5), (4, 5))

    def test_dodecahedron_isomorphic(self):
        D = dodecahedron()
        assert nx.is_isomorphic(nx.Graph(list(D.edges)), nx.dodecahedral_graph())

    def test_family_generate(self):
        assert family_generate("hk", [1]) == hk(1)
        assert family_generate("c5") == cycle(5)
        assert family_generate("theta", [2, 2]) == theta(2, 2)
        with pytest.raises(ValueError):
            family_generate("theta", [1, 1, 2])
        with pytest.raises(ValueError):
            family_generate("hk", [0])
        with pytest.raises(ValueError):
            family_generate("nope")
