"""Betti numbers of K(R) and K_0(R) from local-factor data alone.

A finite commutative ring is a product ``R_1 x ... x R_k`` of local rings;
the reduced homology of its zero-divisor clique complex is free and depends
only on the unit counts ``u_i`` and on which factors are fields.

The recursion used by :func:`k_ranks` (last factor ``R_k``)::

    b_n(K(R_1..R_k)) = sum over nonempty S of {1..k-1}:
                         b_{n-1}(K_0(prod_{i in S} R_i)) * prod_{t not in S} u_t

where the product over the complement always includes ``u_k``, except that
the term for ``S = {1..k-1}`` uses ``u_k - 1`` in place of ``u_k`` when
``R_k`` is a field.  ``K_0`` Betti numbers agree with ``K`` ones above
degree 0; in degree 0 they count the extra isolated unit vertices.  This
reading was fixed by comparing against direct homology of ``K(Z_n)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .rings import FiniteRing, decompose_local, is_local


@dataclass(frozen=True, order=True)
class LocalSummary:
    u: int
    is_field: bool

    def __post_init__(self):
        if self.u < 1:
            raise ValueError("unit count must be positive")


def summarize(ring: FiniteRing) -> list:
    """LocalSummary of each local factor, in :func:`decompose_local` order."""
    out = []
    for f in decompose_local(ring):
        prof = is_local(f)
        out.append(LocalSummary(prof.unit_count, prof.is_field))
    return out


def _key(factors) -> tuple:
    return tuple(sorted((f.u, f.is_field) for f in factors))


def k_ranks(factors: Sequence[LocalSummary]) -> dict:
    """Reduced Betti numbers ``{n: rank}`` of K(R_1 x ... x R_k); zero entries omitted.

    The last entry of ``factors`` plays the role of ``R_k``.
    """
    factors = [f if isinstance(f, LocalSummary) else LocalSummary(*f) for f in factors]
    if not factors:
        raise ValueError("need at least one factor")
    return dict(_k_ranks(tuple((f.u, f.is_field) for f in factors)))


def k0_ranks(factors: Sequence[LocalSummary]) -> dict:
    """Reduced Betti numbers of K_0(R_1 x ... x R_k)."""
    factors = [f if isinstance(f, LocalSummary) else LocalSummary(*f) for f in factors]
    if not factors:
        raise ValueError("need at least one factor")
    return dict(_k0_ranks(_key(factors)))


@lru_cache(maxsize=None)
def _k0_ranks(key) -> tuple:
    ranks = dict(_k_ranks(key))
    total_units = math.prod(u for u, _ in key)
    is_field = len(key) == 1 and key[0][1]
    ranks[0] = total_units - 1 if is_field else total_units
    return tuple(sorted((n, r) for n, r in ranks.items() if r))


@lru_cache(maxsize=None)
def _k_ranks(ordered) -> tuple:
    k = len(ordered)
    if k == 1:
        return ()
    head, (u_k, k_is_field) = ordered[:-1], ordered[-1]
    out = {}
    for size in range(1, k):
        for subset in itertools.combinations(range(k - 1), size):
            inside = tuple(sorted(head[i] for i in subset))
            mult = math.prod(head[i][0] for i in range(k - 1) if i not in subset)
            if size == k - 1 and k_is_field:
                mult *= u_k - 1
            else:
                mult *= u_k
            if not mult:
                continue
            for n, r in _k0_ranks(inside):
                out[n + 1] = out.get(n + 1, 0) + r * mult
    return tuple(sorted((n, r) for n, r in out.items() if r))


def ring_ranks(ring: FiniteRing) -> dict:
    """Formula prediction for ``H~_*(K(ring))`` using its local decomposition."""
    return k_ranks(summarize(ring))


@dataclass(frozen=True)
class TorsionFreeClaim:
    """The claim that every reduced integer homology group of K(R) is free."""

    factors: tuple

    def check(self, profile) -> bool:
        """True if the profile (over Z) has no torsion coefficients."""
        return not profile.has_torsion()

    def expected_ranks(self) -> dict:
        return k_ranks(self.factors)


def torsion_free_assertion(factors: Iterable[LocalSummary]) -> TorsionFreeClaim:
    return TorsionFreeClaim(tuple(factors))


# ---------------------------------------------------------------------------
# closed forms for the all-non-field and all-field cases


@lru_cache(maxsize=None)
def a_coefficient(n: int, k: int) -> int:
    """``a_{0,k} = 1``; ``a_{n,k} = sum_{j=1}^{k-1} C(k-1, j) a_{n-1,j}``; zero when ``n < 0`` or ``n >= k``."""
    if n < 0 or k < 1 or n >= k:
        return 0
    if n == 0:
        return 1
    return sum(math.comb(k - 1, j) * a_coefficient(n - 1, j) for j in range(1, k))


def betti_nonfields(n: int, us: Sequence[int]) -> int:
    """``b_n`` of K(R_1..R_k) when no factor is a field: ``a_{n,k} * prod(u)`` for ``n >= 1``.

    In degree 0 the product formula counts components of K_0, not K; K itself
    is connected, so 0 is returned there.
    """
    if n < 1:
        return 0
    return a_coefficient(n, len(us)) * math.prod(us)


def sigma(j: int, us: Sequence[int]) -> int:
    """Sum over j-subsets I of ``prod_{i in I} (u_i - 1) * prod_{i not in I} u_i``; 0 outside ``0..k``."""
    k = len(us)
    if j < 0 or j > k:
        return 0
    total = 0
    for subset in itertools.combinations(range(k), j):
        total += math.prod(us[i] - 1 for i in subset) * math.prod(us[i] for i in range(k) if i not in subset)
    return total


@lru_cache(maxsize=None)
def big_a(i: int, t: int) -> int:
    """``A_{i,1} = 1``; ``A_{j-1,t} = sum_{m=1}^{j-t} A_{j-m-1,t-1} C(j+t-2, m)``."""
    if t < 1 or i < t - 1:
        return 0
    if t == 1:
        return 1
    j = i + 1
    return sum(big_a(j - m - 1, t - 1) * math.comb(j + t - 2, m) for m in range(1, j - t + 1))


def betti_allfields(n: int, us: Sequence[int]) -> int:
    """``b_n`` of K(F_1 x ... x F_k) for fields with unit counts ``us``.

    ``b_{k-1} = sigma_k`` and, for ``j >= 2``,
    ``b_{k-j} = sum_{t=1}^{j-1} A_{j-1,t} sigma_{k-j-t+1}``.  Degree 0 is
    excluded from the closed form (it would give the K_0 count) and is 0.
    """
    k = len(us)
    if n < 1 or n > k - 1:
        return 0
    if n == k - 1:
        return sigma(k, us)
    j = k - n
    return sum(big_a(j - 1, t) * sigma(k - j - t + 1, us) for t in range(1, j))
