"""Finite commutative rings as explicit operation tables.

Every ring is a :class:`FiniteRing` holding ``order x order`` addition and
multiplication tables over element indices ``0..order-1``.  Constructors
cover the families needed for zero-divisor complexes: ``Z/n``, Galois
fields, univariate quotients ``F_p[x]/(f)``, monomial quotients
``F_p[x_1..x_m]/(monomials)`` and direct products.  Decomposition into
local factors goes through primitive idempotents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameter, TooLarge

DEFAULT_ORDER_CAP = 512


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative unital ring given by its tables.

    ``labels[i]`` is the display string of element ``i``.  ``name`` is a
    human-readable description of how the ring was built.
    """

    order: int
    add_table: np.ndarray
    mul_table: np.ndarray
    zero: int
    one: int
    labels: tuple
    name: str = ""

    def __post_init__(self):
        n = self.order
        if n < 2:
            raise InvalidParameter("ring must have at least two elements")
        if self.add_table.shape != (n, n) or self.mul_table.shape != (n, n):
            raise InvalidParameter("table shape does not match order")
        if len(self.labels) != n:
            raise InvalidParameter("one label per element required")
        if self.zero == self.one:
            raise InvalidParameter("one must differ from zero")
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)

    def __repr__(self):
        return f"FiniteRing({self.name or '?'}, order={self.order})"

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def index(self, label: str) -> int:
        """Element index for a display label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidParameter(f"no element labelled {label!r}") from None

    @property
    def characteristic(self) -> int:
        x, n = self.one, 1
        while x != self.zero:
            x = self.add(x, self.one)
            n += 1
        return n

    def same_tables(self, other: "FiniteRing") -> bool:
        return (
            self.order == other.order
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.mul_table, other.mul_table)
        )


def check_axioms(ring: FiniteRing, cap: int = DEFAULT_ORDER_CAP, samples: int = 20000, seed: int = 0) -> None:
    """Raise :class:`InvalidParameter` unless the tables form a commutative ring.

    Exhaustive for ``order <= cap``, randomly sampled triples above it.
    """
    A, M, n = ring.add_table, ring.mul_table, ring.order
    idx = np.arange(n)
    if not (np.array_equal(A, A.T) and np.array_equal(M, M.T)):
        raise InvalidParameter("tables are not commutative")
    if not np.array_equal(A[ring.zero], idx):
        raise InvalidParameter("zero is not an additive identity")
    if not np.array_equal(M[ring.one], idx):
        raise InvalidParameter("one is not a multiplicative identity")
    if not np.all((A == ring.zero).any(axis=1)):
        raise InvalidParameter("missing additive inverses")
    if n <= cap:
        for a in range(n):
            if not np.array_equal(A[A[a]], A[a][A]):
                raise InvalidParameter("addition is not associative")
            if not np.array_equal(M[M[a]], M[a][M]):
                raise InvalidParameter("multiplication is not associative")
            # a*(b+c) == a*b + a*c for all b, c
            if not np.array_equal(M[a][A], A[M[a]][:, M[a]]):
                raise InvalidParameter("distributivity fails")
        return
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    if not np.array_equal(A[A[a, b], c], A[a, A[b, c]]):
        raise InvalidParameter("addition is not associative")
    if not np.array_equal(M[M[a, b], c], M[a, M[b, c]]):
        raise InvalidParameter("multiplication is not associative")
    if not np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]]):
        raise InvalidParameter("distributivity fails")


# ---------------------------------------------------------------------------
# constructors


def _check_cap(order, cap):
    if order > cap:
        raise TooLarge("ring order", cap, f"ring order {order} exceeds cap {cap}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def make_zmod(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    """The ring of integers modulo ``n``."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidParameter(f"Z_n needs n >= 2, got {n!r}")
    n = int(n)
    _check_cap(n, cap)
    r = np.arange(n)
    add = (r[:, None] + r[None, :]) % n
    mul = (r[:, None] * r[None, :]) % n
    return FiniteRing(n, add, mul, 0, 1 % n, tuple(str(i) for i in range(n)), f"Z{n}")


def _monomial_str(exps, names):
    parts = []
    for e, v in zip(exps, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "".join(parts)


def _element_label(coeffs, monomials, names):
    # terms listed from the highest monomial down
    terms = []
    for c, mono in sorted(zip(coeffs, monomials), key=lambda t: (sum(t[1]), t[1]), reverse=True):
        if c == 0:
            continue
        m = _monomial_str(mono, names)
        if not m:
            terms.append(str(c))
        elif c == 1:
            terms.append(m)
        else:
            terms.append(f"{c}{m}")
    return "+".join(terms) if terms else "0"


def _algebra_from_structure(p, basis, struct, names, name):
    """Tables for the F_p-algebra with monomial ``basis`` and product tensor.

    ``struct[i, j]`` is the coefficient vector of ``basis[i] * basis[j]``.
    Element index is ``sum(c_i * p**i)``.
    """
    d = len(basis)
    order = p**d
    digits = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64)
    # itertools.product varies the last position fastest; flip so coordinate i has weight p**i
    digits = digits[:, ::-1]
    weights = p ** np.arange(d, dtype=np.int64)
    assert np.array_equal(digits @ weights, np.arange(order))
    add_digits = (digits[:, None, :] + digits[None, :, :]) % p
    add = add_digits @ weights
    prod = np.einsum("ai,bj,ijk->abk", digits, digits, struct) % p
    mul = prod @ weights
    labels = tuple(_element_label(row, basis, names) for row in digits)
    one_vec = [1 if sum(m) == 0 else 0 for m in basis]
    one = int(np.dot(one_vec, weights))
    return FiniteRing(order, add, mul, 0, one, labels, name)


def _var_names(m):
    return ["x", "y", "z", "w"][:m] if m <= 4 else [f"x{i + 1}" for i in range(m)]


def _univariate_structure(p, f):
    d = len(f) - 1
    basis = [(i,) for i in range(d)]
    # x^e mod f for e < 2d - 1, as coefficient vectors
    powers = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(2 * d - 1):
        powers.append(cur[:])
        # multiply by x and reduce with x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        top = cur[-1]
        cur = [0] + cur[:-1]
        for i in range(d):
            cur[i] = (cur[i] - top * f[i]) % p
    struct = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            struct[i, j] = powers[i + j]
    return basis, struct


def _normalize_poly(p, coeffs):
    c = [int(x) % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_to_str(coeffs, var="x"):
    """Caret notation, highest degree first: ``[1, 1, 0, 1] -> 'x^3 + x + 1'``."""
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms) if terms else "0"


def make_univariate_quotient(p: int, f: Sequence[int], cap: int = DEFAULT_ORDER_CAP, name: Optional[str] = None) -> FiniteRing:
    """``F_p[x]/(f)`` for monic ``f`` given low-to-high: ``x^3 + 1 -> [1, 0, 0, 1]``."""
    if not _is_prime(p):
        raise InvalidParameter(f"characteristic {p} is not prime")
    f = _normalize_poly(p, f)
    if len(f) < 2:
        raise InvalidParameter("modulus must have degree >= 1")
    if f[-1] != 1:
        raise InvalidParameter("modulus must be monic")
    d = len(f) - 1
    _check_cap(p**d, cap)
    basis, struct = _univariate_structure(p, f)
    return _algebra_from_structure(p, basis, struct, ["x"], name or f"F{p}[x]/({poly_to_str(f)})")


def _poly_mod(p, a, b):
    a = a[:]
    while len(a) >= len(b):
        c = a[-1]
        if c:
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _is_irreducible(p, f):
    d = len(f) - 1
    for e in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=e):
            if not _poly_mod(p, f, list(low) + [1]):
                return False
    return True


def least_irreducible(p: int, k: int) -> list:
    """Lexicographically least monic irreducible of degree ``k`` over F_p.

    Candidates are compared on their coefficients from ``x^{k-1}`` down to the
    constant term.  Returned low-to-high.
    """
    for high_to_low in itertools.product(range(p), repeat=k):
        f = list(reversed(high_to_low)) + [1]
        if _is_irreducible(p, f):
            return f
    raise AssertionError("an irreducible polynomial always exists")


def make_galois_field(p: int, k: int = 1, cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    """GF(p^k) as ``F_p[x]/(f)`` with ``f`` from :func:`least_irreducible`."""
    if not _is_prime(p):
        raise InvalidParameter(f"{p} is not prime")
    if k < 1:
        raise InvalidParameter("extension degree must be >= 1")
    _check_cap(p**k, cap)
    f = least_irreducible(p, k)
    return make_univariate_quotient(p, f, cap, name=f"GF({p}^{k})")


def make_monomial_quotient(p: int, m: int, gens: Sequence[Sequence[int]], cap: int = DEFAULT_ORDER_CAP, name: Optional[str] = None) -> FiniteRing:
    """``F_p[x_1..x_m]`` modulo the ideal spanned by monomials with exponent vectors ``gens``."""
    if not _is_prime(p):
        raise InvalidParameter(f"characteristic {p} is not prime")
    if m < 1:
        raise InvalidParameter("need at least one variable")
    gens = [tuple(int(e) for e in g) for g in gens]
    if any(len(g) != m or min(g) < 0 for g in gens):
        raise InvalidParameter("each generator needs m nonnegative exponents")
    if any(sum(g) == 0 for g in gens):
        raise InvalidParameter("unit monomial generates the whole ring")
    # cofinite iff every variable has a pure power among the generators
    bounds = []
    for i in range(m):
        pure = [g[i] for g in gens if all(g[j] == 0 for j in range(m) if j != i)]
        if not pure:
            raise InvalidParameter(f"quotient is infinite: no pure power of variable {i + 1}")
        bounds.append(min(pure))

    def standard(mono):
        return not any(all(a >= b for a, b in zip(mono, g)) for g in gens)

    basis = [mono for mono in itertools.product(*(range(b) for b in bounds)) if standard(mono)]
    basis.sort(key=lambda t: (sum(t), tuple(-e for e in t)))
    _check_cap(p ** len(basis), cap)
    pos = {mono: i for i, mono in enumerate(basis)}
    d = len(basis)
    struct = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = tuple(x + y for x, y in zip(a, b))
            if c in pos:
                struct[i, j, pos[c]] = 1
    names = _var_names(m)
    if name is None:
        gen_str = ", ".join(_monomial_str(g, names) for g in gens)
        name = f"F{p}[{','.join(names)}]/({gen_str})"
    return _algebra_from_structure(p, basis, struct, names, name)


def product(factors: Sequence[FiniteRing], cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    """Direct product with componentwise operations; labels are tuples of factor labels."""
    factors = list(factors)
    if not factors:
        raise InvalidParameter("product needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    orders = [r.order for r in factors]
    total = math.prod(orders)
    _check_cap(total, cap)
    coords = np.array(np.unravel_index(np.arange(total), orders))
    strides = [math.prod(orders[i + 1:]) for i in range(len(orders))]
    add = np.zeros((total, total), dtype=np.int64)
    mul = np.zeros((total, total), dtype=np.int64)
    for r, c, s in zip(factors, coords, strides):
        add += r.add_table[c[:, None], c[None, :]] * s
        mul += r.mul_table[c[:, None], c[None, :]] * s
    zero = sum(r.zero * s for r, s in zip(factors, strides))
    one = sum(r.one * s for r, s in zip(factors, strides))
    labels = tuple(
        "(" + ",".join(r.labels[c[e]] for r, c in zip(factors, coords)) + ")" for e in range(total)
    )
    name = " x ".join(r.name or "?" for r in factors)
    return FiniteRing(total, add, mul, int(zero), int(one), labels, name)


# ---------------------------------------------------------------------------
# structure


def units(ring: FiniteRing) -> frozenset:
    return frozenset(np.flatnonzero((ring.mul_table == ring.one).any(axis=1)).tolist())


def zero_divisors(ring: FiniteRing) -> frozenset:
    """All ``x`` with ``xy = 0`` for some nonzero ``y`` (includes 0)."""
    nonzero_cols = np.arange(ring.order) != ring.zero
    hit = (ring.mul_table[:, nonzero_cols] == ring.zero).any(axis=1)
    return frozenset(np.flatnonzero(hit).tolist()) | {ring.zero}


def additive_closure(ring: FiniteRing, elements) -> frozenset:
    """Additive subgroup generated by ``elements``."""
    A = ring.add_table
    closed = {ring.zero} | set(elements)
    gens = list(closed)
    frontier = list(closed)
    while frontier:
        new = set(A[np.ix_(frontier, gens)].ravel().tolist()) - closed
        closed |= new
        frontier = list(new)
    return frozenset(closed)


def ideal_product(ring: FiniteRing, I, J) -> frozenset:
    I, J = list(I), list(J)
    if not I or not J:
        return frozenset({ring.zero})
    prods = set(ring.mul_table[np.ix_(I, J)].ravel().tolist())
    return additive_closure(ring, prods)


@dataclass(frozen=True)
class LocalProfile:
    maximal_ideal: frozenset
    nilpotency_index: int
    unit_count: int
    socle_layer: frozenset
    is_field: bool
    powers: tuple = field(default=(), repr=False, compare=False)


def is_local(ring: FiniteRing) -> Optional[LocalProfile]:
    """LocalProfile if the non-units form an ideal, else ``None``."""
    U = units(ring)
    m = frozenset(range(ring.order)) - U
    ml = sorted(m)
    if not set(ring.add_table[np.ix_(ml, ml)].ravel().tolist()) <= m:
        return None
    powers = [frozenset(range(ring.order)), m]  # m^0, m^1
    while len(powers[-1]) > 1:
        nxt = ideal_product(ring, powers[-1], m)
        if nxt == powers[-1]:
            raise AssertionError("maximal ideal of a finite local ring must be nilpotent")
        powers.append(nxt)
    v = len(powers) - 1
    return LocalProfile(
        maximal_ideal=m,
        nilpotency_index=v,
        unit_count=len(U),
        socle_layer=powers[v - 1],
        is_field=(v == 1),
        powers=tuple(powers),
    )


def idempotents(ring: FiniteRing) -> list:
    M = ring.mul_table
    return [e for e in range(ring.order) if M[e, e] == e]


def restrict(ring: FiniteRing, e: int, name: Optional[str] = None) -> FiniteRing:
    """The ring ``eR`` for an idempotent ``e``, with identity ``e``."""
    members = sorted(set(ring.mul_table[e].tolist()))
    pos = np.full(ring.order, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    sub = np.ix_(members, members)
    add = pos[ring.add_table[sub]]
    mul = pos[ring.mul_table[sub]]
    if (add < 0).any() or (mul < 0).any():
        raise AssertionError("eR is not closed")
    labels = tuple(ring.labels[i] for i in members)
    return FiniteRing(len(members), add, mul, int(pos[ring.zero]), int(pos[e]), labels, name or f"e{ring.labels[e]}R")


def _local_name(r: FiniteRing, idem: str) -> str:
    prof = is_local(r)
    if r.characteristic == r.order:
        base = f"Z{r.order}"
    elif prof.is_field:
        base = f"GF({r.order})"
    else:
        base = f"Local{r.order}"
    return f"{base}[e={idem}]"


def _factor_key(r: FiniteRing):
    prof = is_local(r)
    return (r.order, prof.is_field, prof.unit_count, r.labels)


def decompose_local(ring: FiniteRing) -> list:
    """Local factors ``[R_1, ..., R_k]`` with ``ring ~= R_1 x ... x R_k``.

    Factors are the rings ``eR`` for the primitive idempotents ``e``, sorted by
    (order, is_field, unit_count, labels).  A local ring is returned as ``[ring]``.
    """
    if is_local(ring) is not None:
        return [ring]
    M = ring.mul_table
    nonzero = [e for e in idempotents(ring) if e != ring.zero]
    primitive = [e for e in nonzero if not any(f != e and M[e, f] == f for f in nonzero)]
    factors = [restrict(ring, e) for e in primitive]
    factors = [replace(f, name=_local_name(f, ring.labels[e])) for e, f in zip(primitive, factors)]
    assert math.prod(f.order for f in factors) == ring.order
    for f in factors:
        assert is_local(f) is not None
    return sorted(factors, key=_factor_key)
