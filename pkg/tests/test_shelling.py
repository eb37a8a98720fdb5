import pytest

from hypermatch.combinatorics import beta
from hypermatch.families import Hypergraph, build_X, matching_complex
from hypermatch.shelling import (NotAPermutation, NotAShelling, NotXn, homology_facets,
                                 homology_ranks_from_shelling, is_shelling, restriction_set,
                                 singleton_count, singleton_shelling_order)
from hypermatch.simplicial import Complex, make_face

from oracles import slow_is_shelling


def fs(*blocks):
    return make_face(blocks)


def test_singleton_order_small():
    order4 = singleton_shelling_order(build_X(4))
    assert order4[0] == fs({1}, {2}, {3}, {4})
    assert {frozenset(f) for f in order4[-3:]} == {fs({1, 2}, {3, 4}), fs({1, 3}, {2, 4}), fs({1, 4}, {2, 3})}
    assert singleton_shelling_order(build_X(3)) == [
        fs({1}, {2}, {3}), fs({1, 2}, {3}), fs({1, 3}, {2}), fs({2, 3}, {1})]
    assert singleton_shelling_order(build_X(2)) == [fs({1}, {2})]


def test_singleton_order_rejects_other_complexes():
    with pytest.raises(NotXn):
        singleton_shelling_order(matching_complex(Hypergraph.complete_graph(4)))


@pytest.mark.parametrize("n", range(2, 8))
def test_singleton_order_is_a_shelling(n):
    x = build_X(n)
    assert is_shelling(x, singleton_shelling_order(x))


def test_reversed_order_fails_with_witness():
    x = build_X(4)
    order = singleton_shelling_order(x)[::-1]
    rep = is_shelling(x, order)
    assert not rep.ok and rep.position is not None and rep.reason
    assert not slow_is_shelling(order)


def test_checker_agrees_with_definitional_oracle():
    import random
    rng = random.Random(7)
    for n in (3, 4):
        x = build_X(n)
        base = singleton_shelling_order(x)
        candidates = [base, base[::-1]]
        for _ in range(40):
            o = list(base)
            rng.shuffle(o)
            candidates.append(o)
        for o in candidates:
            assert bool(is_shelling(x, o)) == slow_is_shelling(o)


def test_single_facet_always_shells():
    x = Complex(3, [fs({1}, {2, 3})])
    assert is_shelling(x, x.facets)


def test_disconnected_points_shell_but_edges_do_not():
    points = Complex(2, [fs({1}), fs({2})])
    assert is_shelling(points, points.facets)
    assert homology_ranks_from_shelling(points, points.facets) == {0: 1}
    edges = Complex(4, [fs({1}, {2}), fs({3}, {4})])
    rep = is_shelling(edges, edges.facets)
    assert not rep.ok and rep.reason == "empty intersection"
    assert not slow_is_shelling(edges.facets)


def test_order_must_be_permutation():
    x = build_X(3)
    with pytest.raises(NotAPermutation):
        is_shelling(x, x.facets[:-1])
    with pytest.raises(NotAPermutation):
        is_shelling(x, x.facets + [x.facets[0]])


def test_restriction_sets_X4():
    x = build_X(4)
    order = singleton_shelling_order(x)
    pos = {frozenset(f): i for i, f in enumerate(order)}
    assert restriction_set(x, order, 0) == frozenset()
    assert restriction_set(x, order, pos[fs({1, 2}, {3, 4})]) == fs({1, 2}, {3, 4})
    assert restriction_set(x, order, pos[fs({1, 2, 3}, {4})]) == frozenset({frozenset({1, 2, 3})})


@pytest.mark.parametrize("n", range(2, 7))
def test_restrictions_match_independent_computation(n):
    x = build_X(n)
    order = singleton_shelling_order(x)
    rep = is_shelling(x, order)
    for t in range(len(order)):
        r = restriction_set(x, order, t)
        assert rep.restrictions[t] == r
        # the restriction is exactly the set of non-singleton blocks
        assert r == frozenset(b for b in order[t] if len(b) > 1)


def test_homology_facets_examples():
    x4 = build_X(4)
    hf = homology_facets(x4, singleton_shelling_order(x4))
    assert set(hf) == {1} and len(hf[1]) == 3
    x5 = build_X(5)
    hf = homology_facets(x5, singleton_shelling_order(x5))
    assert set(hf) == {1} and len(hf[1]) == 10
    assert all(sorted(map(len, f)) == [2, 3] for f in hf[1])
    assert homology_facets(build_X(2), singleton_shelling_order(build_X(2))) == {}


def test_homology_ranks_examples():
    x6 = build_X(6)
    ranks = homology_ranks_from_shelling(x6, singleton_shelling_order(x6))
    assert ranks == {0: 0, 1: 25, 2: 15, 3: 0, 4: 0, 5: 0}
    x7 = build_X(7)
    ranks = homology_ranks_from_shelling(x7, singleton_shelling_order(x7))
    assert ranks[1] == beta(7, 1) == 56 and ranks[2] == 105


def test_homology_facets_refuse_non_shelling():
    x = build_X(4)
    with pytest.raises(NotAShelling):
        homology_facets(x, singleton_shelling_order(x)[::-1])


@pytest.mark.parametrize("n", range(3, 7))
def test_tie_breaks_give_same_homology_facets(n):
    x = build_X(n)
    ref = homology_facets(x, singleton_shelling_order(x))
    for seed in range(4):
        order = singleton_shelling_order(x, seed=seed)
        counts = [singleton_count(f) for f in order]
        assert counts == sorted(counts, reverse=True)
        got = homology_facets(x, order)
        assert {q: set(v) for q, v in got.items()} == {q: set(v) for q, v in ref.items()}
