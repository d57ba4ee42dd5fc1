import itertools
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from zdhom.complexes import (
    Graph,
    SimplicialComplex,
    clique_complex,
    complete_multipartite,
    cone,
    discrete_complex,
    join,
    k_complex,
    simplex,
)
from zdhom.errors import InvalidParameter
from zdhom.homology import (
    QQ,
    ZZ,
    Coefficients,
    IntMatrix,
    boundary_matrix,
    betti_numbers,
    euler_characteristic,
    homology,
    inclusion_is_zero_on_homology,
    rank,
    rank_mod_p,
    smith_normal_form,
    verify_join_formula,
    verify_join_over_formula,
)
from zdhom.rings import make_zmod, product

from conftest import octahedron, rational_rank, rational_reduced_betti


def det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)) if m[0][j])


def determinantal_invariants(m):
    """Invariant factors via gcds of k x k minors (d_k / d_{k-1})."""
    rows, cols = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


# --- Smith normal form -------------------------------------------------------


def test_snf_examples():
    assert list(smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [3, [2, 6, 12]]
    assert list(smith_normal_form([[2, 0], [0, 3]])) == [2, [1, 6]]
    assert list(smith_normal_form([[0, 0], [0, 0]])) == [0, []]
    assert smith_normal_form([[4, 6]]).torsion == (2,)
    assert smith_normal_form(IntMatrix(0, 3)).rank == 0


@given(int_matrices)
@settings(max_examples=300, deadline=None)
def test_snf_matches_determinantal_divisors(m):
    res = smith_normal_form(m)
    assert list(res.invariant_factors) == determinantal_invariants(m)
    assert res.rank == rational_rank(m)


@given(int_matrices, st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_snf_invariant_under_permutation(m, rnd):
    M = IntMatrix.from_dense(m)
    rp, cp = list(range(M.n_rows)), list(range(M.n_cols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    assert smith_normal_form(M.permuted(rp, cp)) == smith_normal_form(M)


def test_snf_large_entries():
    big = 10 ** 30
    assert list(smith_normal_form([[big, 0], [0, big * 3]])) == [2, [big, 3 * big]]


@given(int_matrices, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=150, deadline=None)
def test_rank_mod_p_from_invariant_factors(m, p):
    res = smith_normal_form(m)
    assert rank_mod_p(m, p) == sum(1 for d in res.invariant_factors if d % p)


def test_int_matrix_helpers():
    A = IntMatrix.from_dense([[1, 0], [2, 3]])
    B = IntMatrix.from_dense([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[0, 1], [3, 2]]
    assert A.nnz == 3 and A.shape == (2, 2) and not A.is_zero()
    assert A == IntMatrix.from_dense([[1, 0], [2, 3]])


def test_coefficients_parse():
    assert Coefficients.parse("Z") == ZZ and Coefficients.parse("Q") == QQ
    assert Coefficients.parse("F3").p == 3 and str(Coefficients.parse("F2")) == "F2"
    for bad in ("F4", "R", "F"):
        with pytest.raises(InvalidParameter):
            Coefficients.parse(bad)


# --- boundary maps -----------------------------------------------------------


def test_boundary_matrix_of_triangle():
    K = simplex(3)
    assert boundary_matrix(K, 0).to_dense() == [[1, 1, 1]]
    assert boundary_matrix(K, 1).to_dense() == [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]
    assert boundary_matrix(K, 2).to_dense() == [[1], [-1], [1]]
    assert boundary_matrix(K, 0, reduced=False).shape == (0, 3)
    assert boundary_matrix(K, 3).shape == (1, 0)


@st.composite
def small_complexes(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True), min_size=1, max_size=6))
    return SimplicialComplex([str(i) for i in range(n)], facets)


@given(small_complexes())
@settings(max_examples=80, deadline=None)
def test_boundary_squares_to_zero(K):
    for n in range(0, K.dimension + 1):
        assert (boundary_matrix(K, n) @ boundary_matrix(K, n + 1)).is_zero()


# --- homology ----------------------------------------------------------------


def test_homology_examples():
    circle = SimplicialComplex.from_labelled_facets([["a", "b"], ["b", "c"], ["a", "c"]])
    assert homology(circle).ranks() == {1: 1}
    assert homology(octahedron()).ranks() == {2: 1}
    assert homology(simplex(4)).is_trivial
    assert homology(discrete_complex(3)).ranks() == {0: 2}
    assert homology(discrete_complex(3), reduced=False).ranks() == {0: 3}
    assert homology(k_complex(make_zmod(15))).ranks() == {1: 3}


def test_void_and_empty_homology():
    assert homology(SimplicialComplex.void()).is_trivial
    e = homology(SimplicialComplex.empty())
    assert e.ranks() == {-1: 1}
    assert homology(SimplicialComplex.empty(), reduced=False).is_trivial


def test_projective_plane_torsion(rp2):
    z = homology(rp2)
    assert z.torsion(1) == (2,) and z.rank(1) == 0 and z.rank(2) == 0
    assert z.has_torsion()
    assert homology(rp2, coefficients=QQ).is_trivial
    assert homology(rp2, coefficients=Coefficients.parse("F3")).is_trivial
    assert homology(rp2, coefficients=Coefficients.parse("F2")).ranks() == {1: 1, 2: 1}
    assert z.to_json() == [{"dim": 1, "rank": 0, "torsion": [2]}]


@given(small_complexes())
@settings(max_examples=80, deadline=None)
def test_homology_matches_rational_oracle(K):
    prof = homology(K, coefficients=QQ)
    assert prof.ranks() == rational_reduced_betti(K)
    assert homology(K).ranks() == prof.ranks() or homology(K).has_torsion()


@given(small_complexes())
@settings(max_examples=80, deadline=None)
def test_euler_characteristic_identity(K):
    b = betti_numbers(K, reduced=False)
    assert sum((-1) ** d * r for d, r in b.items()) == euler_characteristic(K)
    reduced = betti_numbers(K, reduced=True)
    assert sum((-1) ** d * r for d, r in reduced.items()) == euler_characteristic(K) - 1


@given(small_complexes())
@settings(max_examples=60, deadline=None)
def test_reduced_vs_unreduced(K):
    red, unred = homology(K).ranks(), homology(K, reduced=False).ranks()
    expected = dict(red)
    expected[0] = expected.get(0, 0) + 1
    assert unred == expected


@given(small_complexes())
@settings(max_examples=40, deadline=None)
def test_cone_is_acyclic(K):
    assert homology(cone(K)).is_trivial


def test_universal_coefficients_on_rp2_join(rp2):
    # suspension of RP2 shifts the Z/2 up by one
    S = join(rp2, discrete_complex(2))
    assert homology(S).torsion(2) == (2,)


# --- join formulas -----------------------------------------------------------


@st.composite
def graphs(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges([str(i) for i in range(n)], chosen)


def test_join_formula_examples():
    g1 = Graph.from_edges(["a", "b"], [])
    rep = verify_join_formula(g1, g1)
    assert rep == {"direct": {1: 1}, "predicted": {1: 1}, "status": "checked", "agree": True}
    empty = Graph((), ())
    rep = verify_join_formula(empty, g1)
    assert rep["predicted"] == {0: 1} and rep["agree"]


@given(graphs(), graphs())
@settings(max_examples=80, deadline=None)
def test_join_formula_property(g1, g2):
    rep = verify_join_formula(g1, g2)
    assert rep["status"] == "checked"
    assert rep["agree"]


def test_inclusion_zero_map():
    X = simplex(3)
    A = SimplicialComplex.from_labelled_facets([["0"], ["1"]])
    assert inclusion_is_zero_on_homology(X, A) is True
    circle = SimplicialComplex.from_labelled_facets([["0", "1"], ["1", "2"], ["0", "2"]])
    assert inclusion_is_zero_on_homology(circle, circle) is False
    assert inclusion_is_zero_on_homology(circle, SimplicialComplex.from_labelled_facets([["0"], ["1"]])) is True


def test_inclusion_reversed_orientation():
    # vertex order inside A differs from X; the image cycle must still be detected as nonzero
    X = SimplicialComplex(["c", "b", "a"], [[0, 1], [1, 2], [0, 2]])
    A = SimplicialComplex(["a", "b", "c"], [[0, 1], [1, 2], [0, 2]])
    assert inclusion_is_zero_on_homology(X, A) is False


def test_join_over_formula_examples():
    X = simplex(3)
    A = SimplicialComplex.from_labelled_facets([["0"], ["1"]])
    rep = verify_join_over_formula(X, A, 2)
    assert rep["status"] == "checked" and rep["agree"]
    assert rep["direct"] == {1: 2}
    circle = SimplicialComplex.from_labelled_facets([["0", "1"], ["1", "2"], ["0", "2"]])
    assert verify_join_over_formula(circle, circle, 2)["status"] == "hypothesis-not-met"


def test_join_over_formula_torsion_in_x_is_unverified(rp2):
    A = SimplicialComplex.from_labelled_facets([["0"], ["3"]])
    rep = verify_join_over_formula(rp2, A, 1)
    assert rep["status"] == "hypothesis-unverified"


@given(small_complexes(5), st.integers(1, 3), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_join_over_formula_property(X, r, rnd):
    faces = sorted(f for f in X.all_faces() if f)
    chosen = rnd.sample(faces, min(len(faces), rnd.randint(1, 3)))
    A = SimplicialComplex.from_labelled_facets([[X.labels[v] for v in f] for f in chosen])
    rep = verify_join_over_formula(X, A, r)
    assume(rep["status"] == "checked")
    assert rep["agree"]


def test_rank_helper():
    m = [[2, 0], [0, 2]]
    assert rank(m) == 2 and rank(m, QQ) == 2 and rank(m, Coefficients.parse("F2")) == 0


def test_zero_divisor_complex_homology_small():
    assert homology(k_complex(product([make_zmod(2), make_zmod(3)]))).is_trivial
    assert homology(k_complex(product([make_zmod(3), make_zmod(3)]))).ranks() == {1: 1}
    assert homology(k_complex(product([make_zmod(2)] * 3))).is_trivial
