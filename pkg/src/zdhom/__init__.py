"""Homology of clique complexes of zero-divisor graphs of finite commutative rings."""

from .errors import InvalidParameter, SpecSyntaxError, TooLarge, ZDHomError
from .rings import (
    FiniteRing,
    LocalProfile,
    check_axioms,
    decompose_local,
    is_local,
    make_galois_field,
    make_monomial_quotient,
    make_univariate_quotient,
    make_zmod,
    product,
    units,
)
from .complexes import (
    Graph,
    SimplicialComplex,
    clique_complex,
    discrete_complex,
    join,
    join_over,
    k0_complex,
    k_complex,
    link,
    surface_check,
    zero_divisor_graph,
)
from .homology import QQ, ZZ, Coefficients, HomologyProfile, boundary_matrix, homology, smith_normal_form
from .formulas import LocalSummary, betti_allfields, betti_nonfields, k0_ranks, k_ranks, sigma
from .analysis import classify_cm, reisner_cm, surface_obstruction
from .ringspec import build, normalize, parse_spec

__version__ = "0.1.0"
