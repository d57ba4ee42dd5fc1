"""Cohen-Macaulay tests (Reisner's criterion) and surface obstructions for K(R)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .complexes import SimplicialComplex, k_complex, link, surface_check
from .errors import InvalidParameter, TooLarge
from .formulas import k_ranks, summarize
from .homology import QQ, Coefficients, homology
from .rings import FiniteRing, decompose_local, is_local


@dataclass(frozen=True)
class Witness:
    face: tuple  # vertex labels
    dim: int  # i with H~_i(lk F) != 0 and i < dim lk F
    rank: int
    link_dimension: int


@dataclass(frozen=True)
class CMVerdict:
    is_cm: bool
    coefficients: Coefficients
    witness: Optional[Witness] = None
    faces_checked: int = 0

    def to_json(self) -> dict:
        w = self.witness
        return {
            "is_cm": self.is_cm,
            "coefficients": str(self.coefficients),
            "witness": None if w is None else {
                "face": list(w.face), "dim": w.dim, "rank": w.rank, "link_dimension": w.link_dimension,
            },
        }


def reisner_cm(K: SimplicialComplex, coefficients: Coefficients = QQ) -> CMVerdict:
    """Cohen-Macaulay test: ``H~_i(lk F; k) = 0`` for every face F and ``i < dim lk F``.

    Faces are visited by dimension, then lexicographically, starting with the
    empty face (whose link is ``K``); the first failure is the witness.  The
    void complex has no faces and passes vacuously.
    """
    if not coefficients.is_field:
        raise InvalidParameter("Reisner's criterion needs field coefficients")
    checked = 0
    seen = {}
    for F in K.all_faces():
        checked += 1
        L = link(K, F)
        d = L.dimension
        if d <= 0:
            continue
        key = L.facets
        if key not in seen:
            seen[key] = homology(L, True, coefficients)
        prof = seen[key]
        for i in range(-1, d):
            r = prof.rank(i)
            if r:
                w = Witness(tuple(K.labels[v] for v in F), i, r, d)
                return CMVerdict(False, coefficients, w, checked)
    return CMVerdict(True, coefficients, None, checked)


CASE_TAGS = ("TwoFields", "Z2X2TimesField", "IsField", "LocalLargeSocle", "BorderlineSocle2", "NotCM")


@dataclass
class CMClassification:
    tag: str
    detail: str
    is_cm: Optional[bool]  # verdict implied by the tag (from Reisner for the borderline case)
    reisner_result: Optional[CMVerdict] = None
    reisner_skipped: bool = False
    factors: list = field(default_factory=list)

    @property
    def discrepancy(self) -> bool:
        if self.reisner_result is None:
            return False
        return self.is_cm != self.reisner_result.is_cm

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "detail": self.detail,
            "is_cm": self.is_cm,
            "reisner": None if self.reisner_result is None else self.reisner_result.to_json(),
            "reisner_skipped": self.reisner_skipped,
            "discrepancy": self.discrepancy,
        }


def _is_order4_nonfield(r: FiniteRing) -> bool:
    prof = is_local(r)
    return r.order == 4 and not prof.is_field and len(prof.maximal_ideal) == 2


def classify_cm(ring: FiniteRing, coefficients: Coefficients = QQ, cross_check: bool = True,
                budget: Optional[int] = None) -> CMClassification:
    """Case analysis for whether K(ring) is Cohen-Macaulay, cross-checked by Reisner.

    Non-local rings are CM only as ``F x F'`` or ``S x F`` with ``S`` local of
    order 4 with a two-element maximal ideal (``Z_4`` or ``F_2[x]/(x^2)``).
    Local rings: fields, and rings whose last nonzero power of the maximal
    ideal has more than two elements, are classed CM; when that power has
    exactly two elements there is no general rule and Reisner decides.
    """
    factors = decompose_local(ring)
    profiles = [is_local(f) for f in factors]
    k = len(factors)
    summary = [f"{f.name}(u={p.unit_count}{', field' if p.is_field else ''})" for f, p in zip(factors, profiles)]
    need_reisner = False
    if k >= 3:
        tag, is_cm, detail = "NotCM", False, f"{k} local factors: K is never Cohen-Macaulay here"
    elif k == 2:
        fields = [p.is_field for p in profiles]
        if all(fields):
            tag, is_cm, detail = "TwoFields", True, "product of two fields: connected complete bipartite graph"
        elif any(fields):
            nonfield = factors[fields.index(False)]
            if _is_order4_nonfield(nonfield):
                tag, is_cm = "Z2X2TimesField", True
                detail = f"non-field factor {nonfield.name} has order 4 and |m| = 2: connected 1-dimensional complex"
            else:
                tag, is_cm = "NotCM", False
                detail = f"non-field factor {nonfield.name} has |m| >= 3: a unit-vertex link is disconnected"
        else:
            tag, is_cm, detail = "NotCM", False, "two non-field factors: H~_1 != 0 with dimension >= 2"
    else:
        p = profiles[0]
        if p.is_field:
            tag, is_cm, detail = "IsField", True, "field: K is void"
        elif len(p.socle_layer) > 2:
            tag, is_cm = "LocalLargeSocle", True
            detail = f"local, v={p.nilpotency_index}, |m^(v-1)| = {len(p.socle_layer)} > 2"
        else:
            tag, is_cm = "BorderlineSocle2", None
            detail = f"local, v={p.nilpotency_index}, |m^(v-1)| = 2: decided per instance by Reisner"
            need_reisner = True
    result = CMClassification(tag, detail, is_cm, factors=summary)
    if cross_check or need_reisner:
        try:
            K = k_complex(ring, budget)
            result.reisner_result = reisner_cm(K, coefficients)
        except TooLarge:
            result.reisner_skipped = True
        if need_reisner and result.reisner_result is not None:
            result.is_cm = result.reisner_result.is_cm
    return result


def surface_obstruction(ring: FiniteRing, budget: Optional[int] = None) -> dict:
    """Why K(ring) cannot triangulate a closed surface.

    Follows the case elimination on the number ``k`` of local factors; for
    ``F_3 x F_3 x F_3``-like rings (three fields with ``u = 2``) the actual
    complex is built and :func:`surface_check` supplies the evidence.
    """
    factors = decompose_local(ring)
    profiles = [is_local(f) for f in factors]
    k = len(factors)
    ranks = k_ranks(summarize(ring))
    report = {"possible": False, "k": k, "predicted_ranks": ranks, "reason": "", "evidence": None}
    if k >= 4:
        report["reason"] = f"k={k} >= 4: dimension >= 3"
    elif k <= 2:
        report["reason"] = f"k={k} <= 2: H~_2 = 0"
    elif any(p.unit_count == 1 for p in profiles):
        report["reason"] = "a factor has u=1: H~_2 = 0"
    elif not all(p.is_field for p in profiles):
        report["reason"] = f"a factor is not a field: b_2 = {ranks.get(2, 0)} > 1"
    elif any(p.unit_count != 2 for p in profiles):
        report["reason"] = f"three fields with b_2 = prod(u_i - 1) = {ranks.get(2, 0)} != 1"
    else:
        try:
            check = surface_check(k_complex(ring, budget))
        except TooLarge:
            check = None
        report["evidence"] = check
        if check is None:
            report["reason"] = "three fields with u=2: complex exceeds budget, surface check skipped"
        elif check["is_closed_surface"]:
            report["possible"] = True
            report["reason"] = "surface check passed"
        else:
            codes = ", ".join(f["code"] for f in check["failures"])
            report["reason"] = f"only candidate genus would be {ranks.get(1, 0) // 2}, but the complex fails: {codes}"
    return report
