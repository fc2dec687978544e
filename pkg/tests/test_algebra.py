import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcolor.algebra import (
    CoverPolynomial,
    LinearFactor,
    ReducedPoly,
    build_polynomial,
    count_nonzeros,
    evaluate,
    expand_reduced,
    factor_to_perm,
    format_factors,
    format_reduced,
    grid,
    observation_holds,
    perm_to_factor,
)
from dpcolor.cover import FullCover, Permutation, all_perms, count_colorings, identity_cover, random_cover
from dpcolor.errors import UnsupportedModulus
from dpcolor.graph import Multigraph, complete, digon, edgeless

from conftest import brute_cover_count, random_graph

ID3 = Permutation.identity(3)
PLUS1 = Permutation.shift(3, 1)


def test_shift_or_reflection_exhaustive():
    for p in all_perms(3):
        diffs = {(z - p[z]) % 3 for z in range(3)}
        sums = {(z + p[z]) % 3 for z in range(3)}
        assert len(diffs) == 1 or len(sums) == 1
        assert observation_holds(Permutation(3, p))


@pytest.mark.parametrize(
    "images,ca",
    [((0, 1, 2), (1, 0)), ((1, 2, 0), (1, 2)), ((1, 0, 2), (0, 1))],
)
def test_perm_to_factor_examples(images, ca):
    f = perm_to_factor(Permutation(3, images), 0, 1)
    assert (f.c, f.a) == ca


def test_factor_zero_set_is_the_matching():
    for p in all_perms(3):
        f = perm_to_factor(Permutation(3, p), 0, 1)
        for x, y in itertools.product(range(3), repeat=2):
            assert (f((x, y)) == 0) == (p[x] == y)


def test_factor_to_perm_examples():
    assert factor_to_perm(LinearFactor(0, 1, 1, 0)) == ID3
    assert factor_to_perm(LinearFactor(0, 1, 0, 0)).images == (0, 2, 1)  # z -> -z


def test_encoding_bijective_and_roundtrip():
    seen = {}
    for p in all_perms(3):
        f = perm_to_factor(Permutation(3, p), 2, 5)
        seen[(f.c, f.a)] = p
        assert factor_to_perm(f).images == p
    assert set(seen) == set(itertools.product((0, 1), range(3)))
    for c, a in itertools.product((0, 1), range(3)):
        f = LinearFactor(0, 1, c, a)
        assert perm_to_factor(factor_to_perm(f), 0, 1) == f


def test_unsupported_modulus():
    with pytest.raises(UnsupportedModulus):
        perm_to_factor(Permutation.identity(4), 0, 1)
    with pytest.raises(UnsupportedModulus):
        build_polynomial(complete(2), identity_cover(complete(2), 2))


class TestBuild:
    def test_k2(self):
        p = build_polynomial(complete(2), identity_cover(complete(2), 3))
        assert p.factors == (LinearFactor(0, 1, 1, 0),)

    def test_digon(self):
        p = build_polynomial(digon(), FullCover(3, (ID3, PLUS1)))
        assert [(f.c, f.a) for f in p.factors] == [(1, 0), (1, 2)]
        assert format_factors(p) == "0 1 1 0\n0 1 1 2\n"

    def test_edgeless(self):
        p = build_polynomial(edgeless(3), FullCover(3, ()))
        assert p.factors == () and evaluate(p, (1, 2, 0)) == 1

    def test_degree_is_edge_count(self, rng):
        for s in range(30):
            G = random_graph(rng, max_n=6)
            assert build_polynomial(G, random_cover(G, 3, s)).degree == G.l


class TestEvaluate:
    def test_examples(self):
        p = CoverPolynomial(2, (LinearFactor(0, 1, 1, 0),))
        assert evaluate(p, (1, 1)) == 0
        assert evaluate(p, (1, 2)) == 2
        d = build_polynomial(digon(), FullCover(3, (ID3, PLUS1)))
        assert ((0 - 2) % 3) * ((0 - 2 - 2) % 3) % 3 == 2
        assert evaluate(d, (0, 2)) == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(CoverPolynomial(2, ()), (0,))


class TestCountNonzeros:
    def test_examples(self):
        # x0 alone is not a product of edge factors, so count it in reduced form
        x0 = ReducedPoly(1, {(1,): 1})
        assert sum(evaluate(x0, (v,)) != 0 for v in range(3)) == 2
        assert count_nonzeros(CoverPolynomial(2, (LinearFactor(0, 1, 1, 0),))) == 6
        d = build_polynomial(digon(), FullCover(3, (ID3, PLUS1)))
        assert count_nonzeros(d) == 3

    def test_nonzeros_equal_colourings(self, rng):
        for trial in range(500):
            G = random_graph(rng, max_n=6)
            C = random_cover(G, 3, trial)
            assert count_nonzeros(build_polynomial(G, C)) == count_colorings(G, C)

    def test_grid_order(self):
        g = grid(2)
        assert [tuple(r) for r in g] == list(itertools.product(range(3), repeat=2))


class TestExpand:
    def test_difference_of_squares(self):
        p = CoverPolynomial(2, (LinearFactor(0, 1, 1, 0), LinearFactor(0, 1, 0, 0)))
        assert expand_reduced(p) == ReducedPoly(2, {(2, 0): 1, (0, 2): 2})

    def test_cube_reduces(self):
        f = LinearFactor(0, 1, 1, 0)
        r = expand_reduced(CoverPolynomial(2, (f, f, f)))
        assert r == ReducedPoly(2, {(1, 0): 1, (0, 1): 2})
        for pt in itertools.product(range(3), repeat=2):
            assert evaluate(r, pt) == (pt[0] - pt[1]) ** 3 % 3

    def test_empty(self):
        assert expand_reduced(CoverPolynomial(3, ())) == ReducedPoly(3, {(0, 0, 0): 1})

    def test_grid_agreement(self, rng):
        for trial in range(60):
            G = random_graph(rng, max_n=6, max_l=8)
            p = build_polynomial(G, random_cover(G, 3, trial))
            r = expand_reduced(p)
            assert all(max(e) <= 2 for e in r.terms)
            assert all(c in (1, 2) for c in r.terms.values())
            for pt in itertools.product(range(3), repeat=G.n):
                assert evaluate(r, pt) == evaluate(p, pt)

    def test_dump_sorted(self):
        p = CoverPolynomial(2, (LinearFactor(0, 1, 1, 0), LinearFactor(0, 1, 0, 0)))
        assert format_reduced(expand_reduced(p)) == "0 2 : 2\n2 0 : 1\n"


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.data())
def test_nonzeros_equal_colorings_property(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), max_size=8)) if pairs else []
    G = Multigraph(n, tuple(edges))
    ranks = data.draw(st.lists(st.integers(0, 5), min_size=len(edges), max_size=len(edges)))
    C = FullCover.from_ranks(3, ranks)
    assert count_nonzeros(build_polynomial(G, C)) == brute_cover_count(G, C)
