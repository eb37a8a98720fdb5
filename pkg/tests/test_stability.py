import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.combinatorics import beta, integer_partitions
from hypermatch.families import build_X, build_family, parse_family, surjections
from hypermatch.homology import reduced_homology
from hypermatch.simplicial import boundary_matrix, make_face
from hypermatch.stability import (CharPolyTerm, ImageNotAFace, NoFit, Surjection, chain_map_matrix,
                                  compose, distinct_part_count, divisor_weight, eval_char_poly,
                                  fit_exp_poly, fit_quasipolynomial, identity_class_reduction,
                                  induced_map, induced_map_on_homology, multiplicity_quasipoly,
                                  padded, partition_length_audit, torsion_scan)
from hypermatch.symmetric import cycle_types

GOLDEN = Path(__file__).parent / "golden"


def fs(*blocks):
    return make_face(blocks)


def test_surjection_parse_and_validation():
    f = Surjection.parse("1 2 3 3")
    assert (f.a, f.b) == (4, 3) and f(4) == 3 and str(f) == "1 2 3 3"
    assert Surjection.parse("2,1") == Surjection(2, 2, (2, 1))
    with pytest.raises(ValueError):
        Surjection.parse("1 3 3")
    with pytest.raises(ValueError):
        Surjection(3, 2, (1, 2))
    with pytest.raises(ValueError):
        Surjection.parse("")


def test_compose_order():
    f = Surjection.parse("1 2 3 4 4")
    g = Surjection.parse("1 1 2 3")
    h = compose(g, f)
    assert h.images == (1, 1, 2, 3, 3)
    assert h == f.then(g)
    with pytest.raises(ValueError):
        compose(f, g)


def test_induced_map_example():
    f = Surjection.parse("1 2 3 3")
    x3, x4 = build_X(3), build_X(4)
    m = induced_map(f, x3, x4)
    assert m[fs({1}, {2, 3})] == fs({1}, {2, 3, 4})
    assert m[frozenset()] == frozenset()
    assert len(m) == sum(len(x3.faces(q)) for q in range(-1, x3.dimension + 1))


def test_induced_map_detects_non_faces():
    f = Surjection.parse("1 2 2")
    x2 = build_X(2)
    from hypermatch.simplicial import Complex
    with pytest.raises(ImageNotAFace):
        induced_map(f, x2, Complex(3, [fs({1}, {2})]))


def test_identity_surjection_gives_identity_matrix():
    x = build_X(4)
    for q in range(0, x.dimension + 1):
        m = chain_map_matrix(Surjection.identity(4), x, x, q)
        k = len(x.faces(q))
        assert m.to_dense() == [[int(i == j) for j in range(k)] for i in range(k)]
    hm = induced_map_on_homology(Surjection.identity(5), "X", 1)
    assert hm.matrix.to_dense() == [[int(i == j) for j in range(10)] for i in range(10)]


@pytest.mark.parametrize("a", range(3, 7))
def test_chain_maps_commute_with_boundary(a):
    xa = build_X(a)
    for images in surjections(a, a - 1):
        f = Surjection.from_images(images)
        xb = build_X(a - 1)
        for q in range(1, xb.dimension + 1):
            left = boundary_matrix(xa, q) @ chain_map_matrix(f, xb, xa, q)
            right = chain_map_matrix(f, xb, xa, q - 1) @ boundary_matrix(xb, q)
            assert left == right


@pytest.mark.parametrize("a", range(4, 7))
def test_functoriality(a):
    """``(g o f)^* = f^* g^*`` on chains of the chain ``[a] -> [a-1] -> [a-2]``."""
    xa, xb, xc = build_X(a), build_X(a - 1), build_X(a - 2)
    fs_ = [Surjection.from_images(s) for s in surjections(a, a - 1)][:6]
    gs = [Surjection.from_images(s) for s in surjections(a - 1, a - 2)][:6]
    for f in fs_:
        for g in gs:
            for q in range(0, xc.dimension + 1):
                lhs = chain_map_matrix(compose(g, f), xc, xa, q)
                rhs = chain_map_matrix(f, xb, xa, q) @ chain_map_matrix(g, xc, xb, q)
                assert lhs == rhs


def test_homology_map_golden():
    hm = induced_map_on_homology(Surjection.parse("1 2 3 4 4"), "X", 1)
    expected = json.loads((GOLDEN / "fs_map_5_4_q1.json").read_text())
    assert hm.matrix.to_dense() == expected["matrix"]
    assert (hm.matrix.rows, hm.matrix.cols) == (10, 3)


def test_homology_map_is_functorial():
    f = Surjection.parse("1 2 3 4 4")
    g = Surjection.parse("1 2 3 3")
    gf = induced_map_on_homology(compose(g, f), "X", 1).matrix
    assert gf == induced_map_on_homology(f, "X", 1).matrix @ induced_map_on_homology(g, "X", 1).matrix


def test_fit_beta_n1():
    fit = fit_exp_poly({n: beta(n, 1) for n in range(2, 13)}, 4, 2)
    assert fit.as_json() == {"1": ["-1", "-1"], "2": ["1/2"]}
    assert fit.valid_from == 3
    assert all(fit(n) == beta(n, 1) for n in range(3, 25))
    assert fit(2) != beta(2, 1)


def test_fit_beta_n2():
    fit = fit_exp_poly({n: beta(n, 2) for n in range(2, 15)}, 4, 2)
    assert all(fit(n) == beta(n, 2) for n in range(fit.valid_from, 22))


def test_fit_constant_and_zero():
    fit = fit_exp_poly({n: 7 for n in range(1, 6)}, 3, 1)
    assert fit.as_json() == {"1": ["7"]} and fit.valid_from == 1
    fit = fit_exp_poly({n: 0 for n in range(1, 6)}, 2, 1)
    assert fit.as_json() == {} and fit(10) == 0


def test_no_fit():
    with pytest.raises(NoFit):
        fit_exp_poly({n: n ** 3 for n in range(1, 9)}, 1, 1)
    with pytest.raises(NoFit):
        fit_exp_poly({1: 1, 2: 2}, 2, 1)
    with pytest.raises(ValueError):
        fit_exp_poly({1: 1, 3: 2}, 2, 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.integers(0, 4))
def test_fit_recovers_planted_sequences(coeffs, start):
    a, b, c = coeffs
    f = lambda n: a + b * n + c * 3 ** n
    fit = fit_exp_poly({n: f(n) for n in range(start, start + 12)}, 3, 1)
    assert all(fit(n) == f(n) for n in range(fit.valid_from, start + 30))
    assert fit.valid_from == start


@pytest.mark.parametrize("family", ["X", "skeleton1"])
def test_partition_length_audit(family):
    rep = partition_length_audit(family, 1, range(4, 8))
    assert rep.ok and rep.bound == 4
    assert max(rep.max_length.values()) >= 2


def test_length_audit_X_q2():
    rep = partition_length_audit("X", 2, range(6, 8))
    assert rep.ok and rep.bound == 8


def test_padded():
    assert padded((2,), 5) == (3, 2)
    assert padded((2, 1), 3) is None
    assert padded((), 4) == (4,)


def test_quasipolynomial_cases():
    rep = fit_quasipolynomial({n: 0 for n in range(4, 9)})
    assert rep.status == "fit" and rep.period == 1 and rep.polys == {0: ()}
    rep = fit_quasipolynomial({n: n // 2 for n in range(1, 13)})
    assert rep.status == "fit" and rep.period == 2
    assert rep.polys == {0: (0, Fraction(1, 2)), 1: (Fraction(-1, 2), Fraction(1, 2))}
    rep = fit_quasipolynomial({4: 0, 5: 1, 6: 1, 7: 2, 8: 2})
    assert rep.status == "inconclusive"
    assert rep.as_json()["values"] == {"4": 0, "5": 1, "6": 1, "7": 2, "8": 2}


def test_multiplicity_window_X():
    rep = multiplicity_quasipoly("X", 1, (), range(4, 9))
    assert rep.values == {n: distinct_part_count(n, 2) for n in range(4, 9)}
    assert rep.values == {4: 0, 5: 1, 6: 1, 7: 2, 8: 2}


def test_distinct_part_count():
    # partitions of n into two distinct parts, each at least 2
    for n in range(2, 20):
        brute = sum(1 for lam in integer_partitions(n) if len(lam) == 2 and lam[0] > lam[1] >= 2)
        assert distinct_part_count(n, 2) == brute


def test_char_poly_conventions():
    ones = CharPolyTerm((), (1,))
    assert all(eval_char_poly(ones, ct) == 1 for ct in cycle_types(5))
    fixed = CharPolyTerm((1,), (1,))
    for ct in cycle_types(5):
        assert eval_char_poly(fixed, ct) == ct.count(1)
    assert divisor_weight((2, 1, 1), 4) == 4
    assert divisor_weight((3,), 2) == 0
    # 0**0 = 1: a class with no d-cycles contributes 1 even when s_d(A) = 0
    assert eval_char_poly(CharPolyTerm((), (2,)), (2, 2)) == 4
    assert eval_char_poly(CharPolyTerm((), (2,)), (1,)) == 0
    assert eval_char_poly(CharPolyTerm((2, 2), ()), (2,)) == 0


terms = st.builds(
    CharPolyTerm,
    st.sampled_from([(), (1,), (1, 1), (2,), (2, 1), (1, 1, 1)]),
    st.sampled_from([(), (1,), (2,), (1, 1), (2, 1), (3,)]),
    st.fractions(min_value=-3, max_value=3, max_denominator=4))


@settings(max_examples=60)
@given(terms, st.integers(0, 9))
def test_identity_reduction_matches_evaluation(term, n):
    red = identity_class_reduction(term)
    assert red(n) == eval_char_poly(term, (1,) * n)


def test_torsion_scans():
    scan = torsion_scan("X", 1, range(2, 8))
    assert set(scan.exponents.values()) == {1} and scan.grew_at == []
    scan = torsion_scan("closure:K7@7", 1, range(5, 9))
    assert [scan.exponents[n] for n in range(5, 9)] == [1, 1, 3, 1]
    assert scan.running_lcm[8] == 3 and scan.grew_at == [7]
    assert scan.observed_exponent_bound == 3


def test_closure_homology_at_8():
    x8 = build_family(parse_family("closure:K7@7"), 8)
    assert x8.f_vector() == [1, 84, 770, 1260]
    assert reduced_homology(x8, degrees=[1])[1].torsion == ()
