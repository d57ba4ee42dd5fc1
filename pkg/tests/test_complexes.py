import itertools

import pytest
from hypothesis import given, settings, strategies as st

from zdhom.complexes import (
    Graph,
    SimplicialComplex,
    clique_complex,
    complete_multipartite,
    cone,
    connected_components,
    count_cliques,
    discrete_complex,
    dumps_facets,
    export_facets,
    graph_join,
    import_facets,
    join,
    join_over,
    k0_complex,
    k_complex,
    link,
    link_by_labels,
    loads_facets,
    maximal_cliques,
    simplex,
    surface_check,
    unit_labels,
    zero_divisor_graph,
)
from zdhom.errors import InvalidParameter, SpecSyntaxError, TooLarge
from zdhom.rings import make_galois_field, make_monomial_quotient, make_univariate_quotient, make_zmod, product

from conftest import brute_faces, octahedron


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges([str(i) for i in range(n)], chosen)


def brute_cliques(g):
    out = set()
    for r in range(g.n + 1):
        for c in itertools.combinations(range(g.n), r):
            if all(b in g.adjacency[a] for a, b in itertools.combinations(c, 2)):
                out.add(frozenset(c))
    return out


def labelled_face_set(K):
    return {frozenset(K.labels[v] for v in f) for f in brute_faces(K)}


# --- graphs ------------------------------------------------------------------


def test_zero_divisor_graph_z6():
    g = zero_divisor_graph(make_zmod(6))
    assert g.labels == ("2", "3", "4")
    assert {frozenset(g.labels[v] for v in e) for e in g.edges()} == {frozenset({"2", "3"}), frozenset({"3", "4"})}


def test_zero_divisor_graph_z25_is_complete():
    g = zero_divisor_graph(make_zmod(25))
    assert g.n == 4 and len(g.edges()) == 6


def test_zero_divisor_graph_z15_is_bipartite():
    g = zero_divisor_graph(make_zmod(15))
    assert g.n == 6 and len(g.edges()) == 8
    assert sorted(g.degree(v) for v in range(g.n)) == [2, 2, 2, 2, 4, 4]


def test_field_has_empty_zero_divisor_graph():
    assert zero_divisor_graph(make_galois_field(2, 3)).n == 0


def test_complete_multipartite():
    g = complete_multipartite([2, 1])
    assert g.labels == ("0.0", "0.1", "1.0")
    assert g.edges() == [(0, 2), (1, 2)]
    assert len(complete_multipartite([2, 3, 4]).edges()) == 2 * 3 + 2 * 4 + 3 * 4


@given(graphs(5), graphs(5))
@settings(max_examples=40, deadline=None)
def test_graph_join_edge_count(g1, g2):
    j = graph_join(g1, g2)
    assert j.n == g1.n + g2.n
    assert len(j.edges()) == len(g1.edges()) + len(g2.edges()) + g1.n * g2.n


# --- cliques -----------------------------------------------------------------


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_maximal_cliques_match_bruteforce(g):
    cliques = brute_cliques(g)
    maximal = {c for c in cliques if not any(c < d for d in cliques)}
    got = {frozenset(c) for c in maximal_cliques(g)}
    if g.n == 0:
        assert got <= {frozenset()}
    else:
        assert got == maximal


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_count_cliques_and_clique_complex_faces(g):
    cliques = brute_cliques(g)
    assert count_cliques(g) == len(cliques)
    K = clique_complex(g)
    if g.n:
        assert brute_faces(K) == cliques


def test_clique_count_limit():
    g = complete_multipartite([1] * 12)
    with pytest.raises(TooLarge):
        clique_complex(g, budget=1000)


def test_vertexless_graph_gives_void_complex():
    assert clique_complex(Graph((), ())).is_void


# --- K and K0 ----------------------------------------------------------------


def test_k_examples():
    K = k_complex(make_zmod(6))
    assert K.labelled_facets() == {frozenset({"2", "3"}), frozenset({"3", "4"})}
    assert k_complex(make_zmod(4)).labelled_facets() == {frozenset({"2"})}
    assert k_complex(make_zmod(25)).dimension == 3
    assert k_complex(make_galois_field(3, 2)).is_void


def test_k0_adds_isolated_units():
    R = make_zmod(6)
    K0 = k0_complex(R)
    assert K0.labelled_facets() == {frozenset({"2", "3"}), frozenset({"3", "4"}), frozenset({"1"}), frozenset({"5"})}
    assert unit_labels(R) == {"1", "5"}
    assert k0_complex(make_zmod(5)).dimension == 0


RINGS = [
    make_zmod(6), make_zmod(12), make_zmod(16), make_zmod(30),
    make_univariate_quotient(2, [0, 0, 0, 1]),
    make_monomial_quotient(2, 2, [[2, 0], [0, 2]]),
    product([make_galois_field(2, 2), make_zmod(3)]),
]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.name)
def test_k0_restricted_to_zero_divisors_is_k(ring):
    K, K0 = k_complex(ring), k0_complex(ring)
    units = unit_labels(ring)
    zd = [v for v, lab in enumerate(K0.labels) if lab not in units]
    assert K0.induced(zd) == K
    for u in units:
        assert K0.labelled_facets() >= {frozenset({u})}


def test_k_of_product_of_fields_is_complete_bipartite():
    K = k_complex(product([make_galois_field(2, 2), make_zmod(5)]))
    assert K.dimension == 1 and len(K.facets) == 3 * 4
    comps = connected_components(K)
    assert len(comps) == 1


# --- basic complexes ---------------------------------------------------------


def test_void_and_empty_are_distinct():
    v, e = SimplicialComplex.void(), SimplicialComplex.empty()
    assert v.is_void and not v.is_empty_complex
    assert e.is_empty_complex and not e.is_void
    assert v != e
    assert v.faces() == {} and e.faces() == {-1: [()]}
    assert v.dimension == e.dimension == -1


def test_facets_absorb_subfaces():
    K = SimplicialComplex(["a", "b", "c"], [[0, 1], [0], [0, 1, 2], [2]])
    assert K.facets == ((0, 1, 2),)
    assert K.f_vector() == {-1: 1, 0: 3, 1: 3, 2: 1}


def test_unused_labels_are_dropped():
    K = SimplicialComplex(["a", "b", "c"], [[0, 2]])
    assert K.labels == ("a", "c")


def test_discrete_and_simplex():
    assert discrete_complex(3).facets == ((0,), (1,), (2,))
    assert simplex(3).facets == ((0, 1, 2),)
    assert simplex(4).face_count() == 2 ** 4


def test_face_budget():
    with pytest.raises(TooLarge):
        simplex(22).faces()
    K = SimplicialComplex([str(i) for i in range(12)], [list(range(12))], budget=100)
    with pytest.raises(TooLarge):
        K.faces()


# --- join, join over, link, cone ---------------------------------------------


def random_complex(draw, prefix, max_n=5):
    n = draw(st.integers(1, max_n))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=3, unique=True), min_size=1, max_size=5))
    return SimplicialComplex([f"{prefix}{i}" for i in range(n)], facets)


@st.composite
def complexes(draw, prefix="v"):
    return random_complex(draw, prefix)


@given(complexes("a"), complexes("b"))
@settings(max_examples=60, deadline=None)
def test_join_face_set(K, L):
    J = join(K, L)
    kf, lf = labelled_face_set(K), labelled_face_set(L)
    expected = {frozenset({"L:" + x for x in a} | {"R:" + y for y in b}) for a in kf for b in lf}
    assert labelled_face_set(J) == expected


@given(complexes("a"), complexes("b"))
@settings(max_examples=40, deadline=None)
def test_join_is_commutative_up_to_relabel(K, L):
    a = {frozenset(x[2:] for x in f) for f in labelled_face_set(join(K, L))}
    b = {frozenset(x[2:] for x in f) for f in labelled_face_set(join(L, K))}
    assert a == b


def test_join_examples():
    J = join(discrete_complex(2), discrete_complex(2))
    assert J.labels == ("L:0", "L:1", "R:0", "R:1")
    assert J.facets == ((0, 2), (0, 3), (1, 2), (1, 3))
    E = SimplicialComplex.empty()
    K = simplex(2)
    assert join(K, E).labelled_facets() == {frozenset({"L:0", "L:1"})}


@st.composite
def complex_with_subcomplex(draw):
    K = random_complex(draw, "k")
    faces = sorted(brute_faces(K) - {frozenset()}, key=sorted)
    chosen = draw(st.lists(st.sampled_from(faces), max_size=3)) if faces else []
    A = SimplicialComplex.from_labelled_facets([[K.labels[v] for v in f] for f in chosen]) if chosen else SimplicialComplex.void()
    return K, A


@given(complex_with_subcomplex(), complexes("m"))
@settings(max_examples=60, deadline=None)
def test_join_over_face_set(KA, L):
    K, A = KA
    J = join_over(K, A, L)
    kf, af, lf = labelled_face_set(K), labelled_face_set(A), labelled_face_set(L)
    expected = {frozenset("L:" + x for x in a) for a in kf} | {frozenset("R:" + y for y in b) for b in lf}
    expected |= {frozenset({"L:" + x for x in a} | {"R:" + y for y in b}) for a in af for b in lf if a and b}
    assert labelled_face_set(J) == expected


def test_join_over_full_subcomplex_is_join():
    K, L = discrete_complex(2), simplex(2)
    assert join_over(K, K, L) == join(K, L)


def test_join_over_rejects_foreign_subcomplex():
    K = discrete_complex(2)
    with pytest.raises(InvalidParameter):
        join_over(K, SimplicialComplex.from_labelled_facets([["0", "1"]]), simplex(1))


def test_link_examples():
    O = octahedron()
    lk = link_by_labels(O, ["a+"])
    assert lk.dimension == 1 and len(lk.facets) == 4
    assert link_by_labels(O, ["a+", "b+"]).labelled_facets() == {frozenset({"c+"}), frozenset({"c-"})}
    assert link(O, []) == O
    assert link_by_labels(O, ["a+", "b+", "c+"]).is_empty_complex
    with pytest.raises(InvalidParameter):
        link_by_labels(O, ["a+", "a-"])


@given(complexes())
@settings(max_examples=40, deadline=None)
def test_link_of_cone_apex_is_base(K):
    C = cone(K)
    assert link_by_labels(C, ["apex"]) == K


def test_connected_components():
    assert len(connected_components(discrete_complex(4))) == 4
    assert len(connected_components(octahedron())) == 1


# --- surface check -----------------------------------------------------------


def test_octahedron_is_a_surface():
    rep = surface_check(octahedron())
    assert rep["is_closed_surface"] and rep["failures"] == []


def test_rp2_is_a_surface(rp2):
    assert surface_check(rp2)["is_closed_surface"]


def test_triangle_is_not_a_surface():
    rep = surface_check(simplex(3))
    codes = {f["code"] for f in rep["failures"]}
    assert not rep["is_closed_surface"]
    assert codes == {"edge-not-in-two-triangles", "vertex-link-not-a-cycle"}
    edge = next(f for f in rep["failures"] if f["code"] == "edge-not-in-two-triangles")
    assert edge["count"] == 3 and edge["examples"][0]["triangles"] == 1


def test_surface_check_reports_every_failure():
    two = SimplicialComplex.from_labelled_facets(
        [[f"{s}{v}" for v in f] for s in "pq" for f in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]])
    rep = surface_check(two)
    assert [f["code"] for f in rep["failures"]] == ["not-connected"]
    rep = surface_check(simplex(2))
    assert "not-2-dimensional" in {f["code"] for f in rep["failures"]}


def test_surface_check_on_zero_divisor_complex():
    K = k_complex(product([make_zmod(3)] * 3))
    rep = surface_check(K)
    codes = {f["code"]: f for f in rep["failures"]}
    assert not rep["is_closed_surface"]
    assert codes["not-pure"]["count"] == 24
    assert "edge-not-in-two-triangles" in codes and "vertex-link-not-a-cycle" in codes


# --- facet-list I/O ----------------------------------------------------------


def test_dumps_format():
    assert dumps_facets(k_complex(make_zmod(6))) == "# vertices: 2\t3\t4\n0 1\n1 2\n"


@pytest.mark.parametrize("K", [
    k_complex(make_zmod(12)), k0_complex(make_zmod(25)), octahedron(), simplex(1),
    SimplicialComplex.void(), SimplicialComplex.empty(), k_complex(product([make_zmod(2)] * 3)),
], ids=str)
def test_facet_roundtrip(K, tmp_path):
    assert loads_facets(dumps_facets(K)) == K
    path = tmp_path / "k.facets"
    export_facets(K, path)
    assert import_facets(path) == K


def test_labels_with_spaces_roundtrip():
    K = k_complex(product([make_zmod(2), make_zmod(3)]))
    assert "(0,1)" in K.labels
    assert loads_facets(dumps_facets(K)) == K


@pytest.mark.parametrize("text", ["0 1\n", "# vertices: a\tb\n0 5\n", "# vertices: a\tb\n0 x\n"])
def test_malformed_facet_files(text):
    with pytest.raises((SpecSyntaxError, InvalidParameter)):
        loads_facets(text)
