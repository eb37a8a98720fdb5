import pytest

from hypermatch.combinatorics import bell_number, stirling2
from hypermatch.families import (FamilySpec, Hypergraph, UnknownFamily, build_X, build_family,
                                 canonical_merges, has_symmetric_action, is_fibre_closed,
                                 matching_complex, parse_family, preimage_closure, preimage_face,
                                 surjections)
from hypermatch.simplicial import Complex, make_face, write_facet_file


def fs(*blocks):
    return make_face(blocks)


def test_matching_complex_of_K4():
    m4 = matching_complex(Hypergraph.complete_graph(4))
    assert len(m4.vertices) == 6
    assert len(m4.facets) == 3
    assert m4.dimension == 1


def test_matching_complex_of_K7():
    m7 = matching_complex(Hypergraph.complete_graph(7))
    assert len(m7.vertices) == 21
    assert m7.dimension == 2


def test_single_edge_hypergraph():
    x = matching_complex(Hypergraph(3, [{1, 2}]))
    assert x.facets == [fs({1, 2})]
    assert x.dimension == 0


def test_build_X_small():
    assert len(build_X(4).facets) == bell_number(4) - 1 == 14
    assert set(build_X(3).facets) == {fs({1}, {2}, {3}), fs({1}, {2, 3}), fs({2}, {1, 3}), fs({3}, {1, 2})}
    assert build_X(2).facets == [fs({1}, {2})]
    with pytest.raises(ValueError):
        build_X(1)


@pytest.mark.parametrize("n", range(2, 10))
def test_facets_by_dimension_are_stirling(n):
    x = build_X(n)
    counts = {}
    for f in x.facets:
        counts[len(f)] = counts.get(len(f), 0) + 1
    for k in range(2, n + 1):
        assert counts.get(k, 0) == stirling2(n, k)


def test_two_uniform_complete_hypergraph_is_K_n():
    for n in range(2, 8):
        a = matching_complex(Hypergraph.complete(n, 2))
        b = matching_complex(Hypergraph.complete_graph(n))
        assert a.facet_set() == b.facet_set()


def test_family_members():
    sk = build_family(parse_family("skeleton1"), 4)
    x4 = build_X(4)
    assert sk.faces(0) == x4.faces(0) and sk.faces(1) == x4.faces(1)
    assert sk.dimension == 1
    closure = parse_family("closure:K7@7")
    assert build_family(closure, 6).facets == []
    cv = build_family(parse_family("complete_on_vertices"), 3)
    assert len(cv.faces(0)) == 6 and len(cv.faces(1)) == 15


def test_closure_at_8_has_fibre_vertices():
    x8 = build_family(parse_family("closure:K7@7"), 8)
    sizes = {len(v) for v in x8.vertices}
    assert sizes == {2, 3}
    assert len(x8.vertices) == 28 + 56


def test_parse_family_forms(tmp_path):
    assert parse_family("X").name == "X"
    spec = parse_family("matching:K7")
    assert spec.name == "matching_Kn" and spec.default_n == 7
    spec = parse_family("matching:K(3)8")
    assert spec.param("r") == 3 and spec.default_n == 8
    assert build_family(parse_family("chessboard:2"), 3).n == 5
    path = tmp_path / "m4.facets"
    write_facet_file(str(path), matching_complex(Hypergraph.complete_graph(4)).facets)
    spec = parse_family(f"closure:{path}@4")
    assert len(build_family(spec, 4).facets) == 3
    for bad in ("Y", "closure:nofile", "matching:Q"):
        with pytest.raises(UnknownFamily):
            parse_family(bad)
    with pytest.raises(FileNotFoundError):
        parse_family("closure:/nonexistent/file@4")


def test_surjection_enumeration():
    assert len(list(surjections(4, 2))) == 14
    assert len(list(surjections(5, 3))) == 150
    assert all(len(set(f)) == 3 for f in surjections(5, 3))
    assert list(canonical_merges(3)) == [(1, 1, 2), (1, 2, 1), (1, 2, 2)]


def test_preimage_face():
    assert preimage_face((1, 2, 3, 3), fs({1}, {2, 3})) == fs({1}, {2, 3, 4})


@pytest.mark.parametrize("name", ["X", "skeleton1", "complete_on_vertices"])
def test_fibre_closed_families(name):
    assert is_fibre_closed(parse_family(name), 6)


def test_closure_family_fibre_closed_to_8():
    assert is_fibre_closed(parse_family("closure:K7@7"), 8)


def test_broken_family_reports_witness():
    broken_facet = fs({1, 2}, {3}, {4}, {5})

    def family(n):
        x = build_X(n) if n >= 2 else Complex.empty(n)
        if n == 5:
            x = Complex(5, [f for f in x.facets if f != broken_facet])
        return x

    rep = is_fibre_closed(family, 6)
    assert not rep.ok
    images, face, a, b = rep.witness
    assert a == 5 and preimage_face(images, face) not in family(5)


def test_reduced_audit_catches_missing_merge():
    def family(n):
        x = build_X(n) if n >= 2 else Complex.empty(n)
        if n == 8:
            x = Complex(8, [f for f in x.facets if len(f) < 7])
        return x

    rep = is_fibre_closed(family, 8, exhaustive_max=6)
    assert not rep.ok and rep.witness[2] == 8


def test_preimage_closure_is_smallest():
    m4 = matching_complex(Hypergraph.complete_graph(4))
    x5 = preimage_closure(m4, 5)
    for f in surjections(5, 4):
        for face in m4.facets:
            assert preimage_face(f, face) in x5
    # every facet is some preimage
    pre = {preimage_face(f, face) for f in surjections(5, 4) for face in m4.facets}
    assert set(x5.facets) <= pre


@pytest.mark.parametrize("spec", ["X", "skeleton1", "complete_on_vertices", "matching:K"])
def test_symmetric_action(spec):
    for n in range(2, 6):
        assert has_symmetric_action(build_family(parse_family(spec), n))


def test_symmetric_action_n6():
    assert has_symmetric_action(build_X(6))
    assert has_symmetric_action(build_family(parse_family("skeleton1"), 6))


def test_symmetric_action_detects_asymmetry():
    assert not has_symmetric_action(Complex(3, [fs({1, 2}, {3})]))


def test_family_spec_validation():
    with pytest.raises(UnknownFamily):
        FamilySpec("nope")
    with pytest.raises(ValueError):
        FamilySpec("chessboard", (("m", 0),))
