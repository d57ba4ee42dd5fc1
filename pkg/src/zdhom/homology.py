"""Exact simplicial homology over Z, Q and F_p.

Boundary matrices are stored sparsely.  Integer Smith normal form first
eliminates unit pivots sparsely (boundary matrices are mostly unimodular),
then finishes the leftover block densely with smallest-absolute-value
pivots.  Everything uses Python integers, so there is no overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .complexes import Graph, SimplicialComplex, clique_complex, discrete_complex, graph_join, join_over
from .errors import InvalidParameter


@dataclass(frozen=True)
class Coefficients:
    """``kind`` is ``"Z"``, ``"Q"`` or ``"Fp"`` (with prime ``p``)."""

    kind: str = "Z"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise InvalidParameter(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "Fp" and (self.p < 2 or any(self.p % d == 0 for d in range(2, math.isqrt(self.p) + 1))):
            raise InvalidParameter(f"F_p needs a prime p, got {self.p}")

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip()
        if t in ("Z", "Q"):
            return cls(t)
        if t.startswith("F") and t[1:].isdigit():
            return cls("Fp", int(t[1:]))
        raise InvalidParameter(f"coefficients must be Z, Q or F<p>, got {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind


ZZ = Coefficients("Z")
QQ = Coefficients("Q")


class IntMatrix:
    """Sparse integer matrix: ``rows`` is a list of ``{col: value}`` dicts with no zero values."""

    def __init__(self, n_rows: int, n_cols: int, rows=None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows = rows if rows is not None else [dict() for _ in range(n_rows)]

    @classmethod
    def from_dense(cls, dense) -> "IntMatrix":
        dense = [list(r) for r in dense]
        n_cols = len(dense[0]) if dense else 0
        return cls(len(dense), n_cols, [{j: int(v) for j, v in enumerate(r) if v} for r in dense])

    def to_dense(self) -> list:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def density(self) -> float:
        cells = self.n_rows * self.n_cols
        return self.nnz / cells if cells else 0.0

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return IntMatrix(self.n_rows, other.n_cols, out)

    def permuted(self, row_perm, col_perm) -> "IntMatrix":
        """Row ``i`` of the result is row ``row_perm[i]``; likewise for columns."""
        inv = {old: new for new, old in enumerate(col_perm)}
        return IntMatrix(self.n_rows, self.n_cols, [{inv[j]: v for j, v in self.rows[i].items()} for i in row_perm])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows


# ---------------------------------------------------------------------------
# Smith normal form


def _sparse_unit_elimination(rows, modulus=None):
    """Pivot on +-1 entries (any nonzero entry if ``modulus`` is a prime).

    ``rows`` is consumed.  Returns ``(n_pivots, remaining_rows)`` where the
    remaining rows no longer involve pivot rows or columns.  Over Z each unit
    pivot contributes an invariant factor 1; over F_p each pivot adds 1 to the rank.
    """
    rows = {i: r for i, r in enumerate(rows) if r}
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)

    def usable(v):
        return v in (1, -1) if modulus is None else v % modulus != 0

    pivots = 0
    progress = True
    while progress and rows:
        progress = False
        for j in sorted(cols, key=lambda c: len(cols[c])):
            col = cols.get(j)
            if not col:
                continue
            best = None
            for i in col:
                v = rows[i][j]
                if usable(v) and (best is None or len(rows[i]) < len(rows[best])):
                    best = i
            if best is None:
                continue
            prow = rows.pop(best)
            pv = prow[j]
            inv = pv if modulus is None else pow(pv, -1, modulus)
            for k in prow:
                cols[k].discard(best)
            for i in list(cols[j]):
                r = rows[i]
                factor = r[j] * inv
                for k, v in prow.items():
                    nv = r.get(k, 0) - factor * v
                    if modulus is not None:
                        nv %= modulus
                    if nv:
                        if k not in r:
                            cols.setdefault(k, set()).add(i)
                        r[k] = nv
                    elif k in r:
                        del r[k]
                        cols[k].discard(i)
                if not r:
                    del rows[i]
            # the pivot column is now zero outside the pivot row, so column
            # operations clear the rest of the pivot row without touching others
            cols.pop(j, None)
            for k in prow:
                if k in cols and not cols[k]:
                    del cols[k]
            pivots += 1
            progress = True
    return pivots, list(rows.values())


def _dense_diagonal(A):
    """Diagonalise a dense integer matrix in place with smallest-|a| pivoting; return diagonal."""
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if A[i][t]:
                        done = False
            rt = A[t]
            for j in range(t + 1, n):
                if rt[j]:
                    q = rt[j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if rt[j]:
                        done = False
            if done:
                break
            # a nonzero remainder is smaller than the pivot: move it into place
            best = None
            for i in range(t, m):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), i, t)
            for j in range(t, n):
                if rt[j] and (best is None or abs(rt[j]) < best[0]):
                    best = (abs(rt[j]), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def invariant_factors_from_diagonal(diag) -> list:
    """Turn any nonzero diagonal into the divisibility chain ``d_1 | d_2 | ...``."""
    d = sorted(x for x in diag if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


@dataclass(frozen=True)
class SmithResult:
    rank: int
    invariant_factors: tuple

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d > 1)

    def __iter__(self):
        return iter((self.rank, list(self.invariant_factors)))


def smith_normal_form(M) -> SmithResult:
    """Rank and invariant factors of an integer matrix (``IntMatrix`` or list of lists)."""
    if not isinstance(M, IntMatrix):
        M = IntMatrix.from_dense(M)
    units, rest = _sparse_unit_elimination([dict(r) for r in M.rows])
    factors = [1] * units
    if rest:
        used = sorted({j for r in rest for j in r})
        pos = {j: k for k, j in enumerate(used)}
        dense = [[0] * len(used) for _ in rest]
        for i, r in enumerate(rest):
            for j, v in r.items():
                dense[i][pos[j]] = v
        factors += invariant_factors_from_diagonal(_dense_diagonal(dense))
    factors = invariant_factors_from_diagonal(factors)
    return SmithResult(len(factors), tuple(factors))


def rank_mod_p(M, p: int) -> int:
    if not isinstance(M, IntMatrix):
        M = IntMatrix.from_dense(M)
    rows = [{j: v % p for j, v in r.items() if v % p} for r in M.rows]
    pivots, rest = _sparse_unit_elimination(rows, modulus=p)
    assert not rest
    return pivots


def rank(M, coefficients: Coefficients = ZZ) -> int:
    """Rank over the coefficient ring (over Z and Q this is the same number)."""
    if coefficients.kind == "Fp":
        return rank_mod_p(M, coefficients.p)
    return smith_normal_form(M).rank


# ---------------------------------------------------------------------------
# chain complexes


def boundary_matrix(K: SimplicialComplex, n: int, reduced: bool = True) -> IntMatrix:
    """Matrix of the boundary map from n-faces to (n-1)-faces.

    Faces are ordered lexicographically by sorted vertex index and oriented by
    ascending vertex order.  With ``reduced`` the map from 0-faces goes to the
    single empty face (the augmentation, all ones).  Out-of-range ``n`` gives
    an empty matrix of the right shape.
    """
    faces = K.faces()
    upper = faces.get(n, [])
    if n < 0 or (n == 0 and not reduced):
        return IntMatrix(0, len(upper) if n >= -1 else 0)
    lower = faces.get(n - 1, [])
    index = {f: i for i, f in enumerate(lower)}
    rows = [dict() for _ in lower]
    for c, face in enumerate(upper):
        for i in range(len(face)):
            sub = face[:i] + face[i + 1:]
            r = index.get(sub)
            if r is not None:
                rows[r][c] = -1 if i % 2 else 1
    return IntMatrix(len(lower), len(upper), rows)


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass(frozen=True)
class HomologyProfile:
    reduced: bool
    coefficients: Coefficients
    groups: dict = field(default_factory=dict)  # dim -> HomologyGroup, nonzero groups only

    def rank(self, n: int) -> int:
        g = self.groups.get(n)
        return g.rank if g else 0

    def torsion(self, n: int) -> tuple:
        g = self.groups.get(n)
        return g.torsion if g else ()

    def ranks(self) -> dict:
        return {n: g.rank for n, g in self.groups.items() if g.rank}

    def has_torsion(self) -> bool:
        return any(g.torsion for g in self.groups.values())

    def is_trivial(self) -> bool:
        return not self.groups

    def to_json(self) -> list:
        return [{"dim": n, "rank": g.rank, "torsion": list(g.torsion)} for n, g in sorted(self.groups.items())]


def homology(K: SimplicialComplex, reduced: bool = True, coefficients: Coefficients = ZZ) -> HomologyProfile:
    """Homology of ``K``; reduced homology uses the augmented chain complex."""
    faces = K.faces()
    if not faces:
        return HomologyProfile(reduced, coefficients, {})
    low = -1 if reduced else 0
    top = max(faces)
    ranks = {}
    torsion = {}
    for n in range(low, top + 2):
        if n == low:
            continue
        M = boundary_matrix(K, n, reduced)
        if coefficients.kind == "Z":
            snf = smith_normal_form(M)
            ranks[n] = snf.rank
            torsion[n - 1] = snf.torsion
        else:
            ranks[n] = rank(M, coefficients)
    groups = {}
    for n in range(low, top + 1):
        count = len(faces.get(n, [])) if n >= 0 or reduced else 0
        b = count - ranks.get(n, 0) - ranks.get(n + 1, 0)
        t = torsion.get(n, ())
        if b or t:
            groups[n] = HomologyGroup(b, tuple(t))
    return HomologyProfile(reduced, coefficients, groups)


def betti_numbers(K: SimplicialComplex, reduced: bool = True, coefficients: Coefficients = ZZ) -> dict:
    return homology(K, reduced, coefficients).ranks()


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** d * len(f) for d, f in K.faces().items() if d >= 0)


# ---------------------------------------------------------------------------
# join formulas


def join_formula_ranks(p1: HomologyProfile, p2: HomologyProfile) -> dict:
    """Free ranks of ``sum_{i+j=n-1} H~_i (x) H~_j`` for torsion-free inputs."""
    out = {}
    for i, g in p1.groups.items():
        for j, h in p2.groups.items():
            r = g.rank * h.rank
            if r:
                out[i + j + 1] = out.get(i + j + 1, 0) + r
    return out


def _reduced_z(K):
    if K.is_void:
        # the join identity is the empty complex, whose only group is H~_{-1} = Z
        return HomologyProfile(True, ZZ, {-1: HomologyGroup(1)})
    return homology(K, True, ZZ)


def verify_join_formula(g1: Graph, g2: Graph) -> dict:
    """Compare ``H~(clique complex of g1 join g2)`` with the tensor formula.

    Instances where either factor has torsion are reported as
    ``hypothesis-not-met`` without a verdict.
    """
    p1 = _reduced_z(clique_complex(g1))
    p2 = _reduced_z(clique_complex(g2))
    direct = _reduced_z(clique_complex(graph_join(g1, g2)))
    predicted = join_formula_ranks(p1, p2)
    report = {"direct": direct.ranks(), "predicted": predicted}
    if p1.has_torsion() or p2.has_torsion():
        report["status"] = "hypothesis-not-met"
        report["agree"] = None
        return report
    report["status"] = "checked"
    report["agree"] = direct.ranks() == predicted and not direct.has_torsion()
    return report


def _rational_kernel(M: IntMatrix) -> list:
    """Basis of the rational null space as integer vectors."""
    dense = [[Fraction(v) for v in row] for row in M.to_dense()]
    n = M.n_cols
    pivot_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(dense)) if dense[i][c] != 0), None)
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        pv = dense[r][c]
        dense[r] = [x / pv for x in dense[r]]
        for i in range(len(dense)):
            if i != r and dense[i][c] != 0:
                f = dense[i][c]
                dense[i] = [a - f * b for a, b in zip(dense[i], dense[r])]
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for row, pc in enumerate(pivot_cols):
            vec[pc] = -dense[row][fcol]
        den = math.lcm(*(x.denominator for x in vec))
        basis.append([int(x * den) for x in vec])
    return basis


def inclusion_is_zero_on_homology(X: SimplicialComplex, A: SimplicialComplex) -> Optional[bool]:
    """Whether ``H~_*(A) -> H~_*(X)`` is the zero map.

    Decided rationally, which is exact when ``H~_*(X)`` is free.  Returns
    ``None`` when ``X`` has torsion (not certified).
    """
    px = homology(X, True, ZZ)
    if px.has_torsion():
        return None
    if A.is_void:
        return True
    xf = X.faces()
    for d, faces in A.faces().items():
        lookup = {f: i for i, f in enumerate(xf.get(d, []))}
        cycles_a = _rational_kernel(boundary_matrix(A, d, True)) if d >= 0 else []
        if not cycles_a:
            continue
        # map A's d-faces into X's d-face basis; images must stay oriented consistently
        img_cols = []
        for cyc in cycles_a:
            col = {}
            for coeff, face in zip(cyc, faces):
                if not coeff:
                    continue
                xface = tuple(X.vertex_index(A.labels[v]) for v in face)
                order = sorted(range(len(xface)), key=lambda k: xface[k])
                sign = _perm_sign(order)
                col[lookup[tuple(sorted(xface))]] = sign * coeff
            img_cols.append(col)
        bnd = boundary_matrix(X, d + 1, True)
        base = smith_normal_form(bnd).rank
        extended = IntMatrix(bnd.n_rows, bnd.n_cols + len(img_cols), [dict(r) for r in bnd.rows])
        for k, col in enumerate(img_cols):
            for i, v in col.items():
                extended.rows[i][bnd.n_cols + k] = v
        if smith_normal_form(extended).rank != base:
            return False
    return True


def _perm_sign(order) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def verify_join_over_formula(X: SimplicialComplex, A: SimplicialComplex, r: int) -> dict:
    """Compare ``H~(X join_A discrete(r))`` with ``H~_n(X) + H~_{n-1}(A)^r``.

    The hypothesis (``H~_*(A)`` free and ``H~_*(A) -> H~_*(X)`` zero) is
    checked first; the status is ``checked``, ``hypothesis-not-met`` or
    ``hypothesis-unverified``.  Both sides are always computed.
    """
    built = join_over(X, A, discrete_complex(r))
    direct = homology(built, True, ZZ)
    px = homology(X, True, ZZ)
    pa = homology(A, True, ZZ)
    predicted = dict(px.ranks())
    for n, g in pa.groups.items():
        if g.rank:
            predicted[n + 1] = predicted.get(n + 1, 0) + r * g.rank
    predicted = {n: v for n, v in predicted.items() if v}
    report = {"direct": direct.ranks(), "predicted": predicted}
    if pa.has_torsion():
        status = "hypothesis-not-met"
    else:
        zero_map = inclusion_is_zero_on_homology(X, A)
        status = {True: "checked", False: "hypothesis-not-met", None: "hypothesis-unverified"}[zero_map]
    report["status"] = status
    report["agree"] = (direct.ranks() == predicted) if status != "hypothesis-not-met" else None
    return report
