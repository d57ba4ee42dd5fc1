"""Zero-divisor graphs, clique complexes and simplicial operations.

A :class:`SimplicialComplex` stores only its facets.  Faces are enumerated
lazily (and cached) when homology needs them, under a face-count budget.

Two degenerate complexes are kept apart on purpose:

* the *void* complex has no faces at all (``facets == ()``);
* the *empty* complex has only the empty face (``facets == ((),)``).

All reduced homology of the void complex vanishes, while the empty complex
has ``H~_{-1} = Z``.  Clique complexes of vertexless graphs are void.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InvalidParameter, SpecSyntaxError, TooLarge
from .rings import FiniteRing, units, zero_divisors

DEFAULT_FACE_BUDGET = int(os.environ.get("ZDHOM_BUDGET", 2_000_000))


@dataclass(frozen=True)
class Graph:
    labels: tuple
    adjacency: tuple  # adjacency[i] = frozenset of neighbours of i

    @classmethod
    def from_edges(cls, labels: Sequence, edges: Iterable) -> "Graph":
        labels = tuple(str(x) for x in labels)
        nbrs = [set() for _ in labels]
        for a, b in edges:
            if a == b:
                raise InvalidParameter("graphs have no loops")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(labels, tuple(frozenset(s) for s in nbrs))

    @property
    def n(self) -> int:
        return len(self.labels)

    def edges(self) -> list:
        return sorted((a, b) for a in range(self.n) for b in self.adjacency[a] if a < b)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def graph_join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union of ``g1`` and ``g2`` plus every edge between them."""
    off = g1.n
    labels = tuple(f"L:{x}" for x in g1.labels) + tuple(f"R:{x}" for x in g2.labels)
    edges = list(g1.edges()) + [(a + off, b + off) for a, b in g2.edges()]
    edges += [(a, off + b) for a in range(g1.n) for b in range(g2.n)]
    return Graph.from_edges(labels, edges)


def complete_multipartite(parts: Sequence[int]) -> Graph:
    labels, part_of = [], []
    for p, m in enumerate(parts):
        for i in range(m):
            labels.append(f"{p}.{i}")
            part_of.append(p)
    edges = [(a, b) for a in range(len(labels)) for b in range(a + 1, len(labels)) if part_of[a] != part_of[b]]
    return Graph.from_edges(labels, edges)


# ---------------------------------------------------------------------------


def _absorb(facets):
    """Drop every set contained in another; return sorted tuple of sorted tuples."""
    uniq = sorted({frozenset(f) for f in facets}, key=len, reverse=True)
    kept = []
    for f in uniq:
        if not any(f <= g for g in kept):
            kept.append(f)
    return tuple(sorted(tuple(sorted(f)) for f in kept))


class SimplicialComplex:
    """Abstract simplicial complex on labelled vertices, stored by facets.

    ``facets`` are given as iterables of vertex indices into ``labels``;
    non-maximal ones are absorbed.  Labels not used by any facet are dropped
    and the remaining vertices re-indexed in their original order.
    """

    def __init__(self, labels: Sequence, facets: Iterable, budget: Optional[int] = None):
        facets = _absorb(facets)
        used = sorted({v for f in facets for v in f})
        if used and (used[0] < 0 or used[-1] >= len(labels)):
            raise InvalidParameter("facet vertex index out of range")
        remap = {old: new for new, old in enumerate(used)}
        self.labels = tuple(str(labels[v]) for v in used)
        self.facets = tuple(sorted(tuple(remap[v] for v in f) for f in facets))
        self.budget = DEFAULT_FACE_BUDGET if budget is None else budget
        self._faces = None
        self._lock = threading.Lock()

    # -- constructors ------------------------------------------------------

    @classmethod
    def void(cls) -> "SimplicialComplex":
        return cls((), ())

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), [()])

    @classmethod
    def from_labelled_facets(cls, facets: Iterable[Iterable], budget: Optional[int] = None) -> "SimplicialComplex":
        """Build from facets given as label collections; vertex order follows first appearance."""
        facets = [list(f) for f in facets]
        labels = []
        seen = {}
        for f in facets:
            for x in f:
                x = str(x)
                if x not in seen:
                    seen[x] = len(labels)
                    labels.append(x)
        return cls(labels, [[seen[str(x)] for x in f] for f in facets], budget)

    # -- basic properties --------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def is_empty_complex(self) -> bool:
        return self.facets == ((),)

    @property
    def dimension(self) -> int:
        """Max facet size minus one; -1 for the empty complex and (by convention) the void one."""
        return max((len(f) for f in self.facets), default=0) - 1

    def labelled_facets(self) -> set:
        return {frozenset(self.labels[v] for v in f) for f in self.facets}

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.labelled_facets() == other.labelled_facets()

    def __hash__(self):
        return hash(frozenset(self.labelled_facets()))

    def __repr__(self):
        return f"SimplicialComplex(vertices={self.n_vertices}, facets={len(self.facets)}, dim={self.dimension})"

    def vertex_index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InvalidParameter(f"no vertex labelled {label!r}") from None

    def is_face(self, face: Iterable[int]) -> bool:
        s = set(face)
        return any(s <= set(f) for f in self.facets)

    # -- faces -------------------------------------------------------------

    def faces(self) -> dict:
        """``{dim: sorted list of faces}`` including ``-1: [()]`` for nonvoid complexes.

        Raises :class:`TooLarge` when the total face count would exceed the budget.
        """
        if self._faces is None:
            with self._lock:
                if self._faces is None:
                    self._faces = self._enumerate_faces()
        return self._faces

    def _enumerate_faces(self):
        if self.is_void:
            return {}
        # cheap upper bound first, exact count while generating
        bound = sum(2 ** len(f) for f in self.facets)
        if bound > 64 * self.budget:
            raise TooLarge("face count", self.budget)
        seen = set()
        for f in self.facets:
            for r in range(len(f) + 1):
                seen.update(itertools.combinations(f, r))
            if len(seen) > self.budget:
                raise TooLarge("face count", self.budget)
        by_dim = {}
        for s in seen:
            by_dim.setdefault(len(s) - 1, []).append(s)
        for v in by_dim.values():
            v.sort()
        return dict(sorted(by_dim.items()))

    def face_count(self) -> int:
        return sum(len(v) for v in self.faces().values())

    def f_vector(self) -> dict:
        return {d: len(v) for d, v in self.faces().items()}

    def all_faces(self) -> list:
        """Faces ordered by dimension, then lexicographically (empty face first)."""
        return [f for d in sorted(self.faces()) for f in self.faces()[d]]

    # -- restriction / relabeling ------------------------------------------

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        keep = set(vertices)
        return SimplicialComplex(self.labels, [[v for v in f if v in keep] for f in self.facets], self.budget) \
            if self.facets else SimplicialComplex.void()

    def relabel(self, prefix: str) -> "SimplicialComplex":
        c = SimplicialComplex([prefix + x for x in self.labels], self.facets, self.budget)
        return c


# ---------------------------------------------------------------------------
# graphs and clique complexes


def zero_divisor_graph(ring: FiniteRing) -> Graph:
    """Nonzero zero-divisors, with ``a ~ b`` iff ``a != b`` and ``ab = 0``."""
    verts = sorted(zero_divisors(ring) - {ring.zero})
    return _annihilation_graph(ring, verts)


def _annihilation_graph(ring, verts):
    M = ring.mul_table
    sub = M[verts][:, verts] == ring.zero
    edges = [(i, j) for i in range(len(verts)) for j in range(i + 1, len(verts)) if sub[i, j]]
    return Graph.from_edges([ring.labels[v] for v in verts], edges)


def count_cliques(graph: Graph, limit: Optional[int] = None) -> int:
    """Number of cliques including the empty one; stops early once above ``limit``."""
    nbr = [sum(1 << u for u in graph.adjacency[v]) for v in range(graph.n)]
    total = 0

    def rec(cand):
        nonlocal total
        total += 1
        if limit is not None and total > limit:
            raise TooLarge("face count", limit)
        while cand:
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            rec(cand & nbr[v])

    rec((1 << graph.n) - 1)
    return total


def maximal_cliques(graph: Graph) -> list:
    """Bron-Kerbosch with Tomita pivoting over integer bitsets."""
    nbr = [sum(1 << u for u in graph.adjacency[v]) for v in range(graph.n)]
    out = []

    def bits(x):
        while x:
            low = x & -x
            yield low.bit_length() - 1
            x ^= low

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        pivot = max(bits(p | x), key=lambda u: bin(p & nbr[u]).count("1"))
        for v in bits(p & ~nbr[pivot]):
            expand(r + [v], p & nbr[v], x & nbr[v])
            p &= ~(1 << v)
            x |= 1 << v

    if graph.n:
        expand([], (1 << graph.n) - 1, 0)
    return out


def clique_complex(graph: Graph, budget: Optional[int] = None) -> SimplicialComplex:
    budget = DEFAULT_FACE_BUDGET if budget is None else budget
    if graph.n == 0:
        return SimplicialComplex.void()
    count_cliques(graph, budget)
    return SimplicialComplex(graph.labels, maximal_cliques(graph), budget)


def k_complex(ring: FiniteRing, budget: Optional[int] = None) -> SimplicialComplex:
    """Clique complex of the zero-divisor graph; void for a field."""
    return clique_complex(zero_divisor_graph(ring), budget)


def k0_complex(ring: FiniteRing, budget: Optional[int] = None) -> SimplicialComplex:
    """Clique complex on all nonzero elements with ``xy = 0`` edges; units are isolated."""
    verts = [x for x in range(ring.order) if x != ring.zero]
    return clique_complex(_annihilation_graph(ring, verts), budget)


def unit_labels(ring: FiniteRing) -> set:
    return {ring.labels[u] for u in units(ring)}


# ---------------------------------------------------------------------------
# simplicial operations


def discrete_complex(r: int) -> SimplicialComplex:
    if r < 0:
        raise InvalidParameter("r must be >= 0")
    return SimplicialComplex([str(i) for i in range(r)], [[i] for i in range(r)])


def simplex(n_vertices: int) -> SimplicialComplex:
    return SimplicialComplex([str(i) for i in range(n_vertices)], [list(range(n_vertices))])


def _merge(K: SimplicialComplex, L: SimplicialComplex, lp: str, rp: str):
    labels = [lp + x for x in K.labels] + [rp + x for x in L.labels]
    off = K.n_vertices
    kf = [tuple(f) for f in K.facets]
    lf = [tuple(v + off for v in f) for f in L.facets]
    return labels, kf, lf


def join(K: SimplicialComplex, L: SimplicialComplex, budget: Optional[int] = None) -> SimplicialComplex:
    """Faces are disjoint unions of a face of ``K`` and a face of ``L``.

    Vertices are relabelled ``L:<label>`` (from ``K``) and ``R:<label>`` (from ``L``).
    """
    labels, kf, lf = _merge(K, L, "L:", "R:")
    return SimplicialComplex(labels, [a + b for a in kf for b in lf], budget or max(K.budget, L.budget))


def join_over(K: SimplicialComplex, A: SimplicialComplex, L: SimplicialComplex, budget: Optional[int] = None) -> SimplicialComplex:
    """Faces of ``K``, faces of ``L``, and unions of a nonempty face of ``A`` with a nonempty face of ``L``.

    ``A`` must be a subcomplex of ``K``; it is matched to ``K`` by vertex label.
    Vertex labels get the same ``L:``/``R:`` prefixes as :func:`join`.
    """
    a_facets = []
    for f in A.facets:
        try:
            mapped = tuple(K.vertex_index(A.labels[v]) for v in f)
        except InvalidParameter:
            raise InvalidParameter("A has a vertex not in K") from None
        if not K.is_face(mapped):
            raise InvalidParameter(f"A's face {[A.labels[v] for v in f]} is not a face of K")
        a_facets.append(mapped)
    labels, kf, lf = _merge(K, L, "L:", "R:")
    off = K.n_vertices
    mixed = [a + tuple(v + off for v in l) for a in a_facets for l in L.facets if a and l]
    return SimplicialComplex(labels, kf + lf + mixed, budget or max(K.budget, L.budget))


def link(K: SimplicialComplex, face: Iterable[int]) -> SimplicialComplex:
    """``{G in K : G u F in K, G n F = {}}``; vertex labels are kept."""
    F = frozenset(face)
    if not K.is_face(F):
        raise InvalidParameter(f"{sorted(F)} is not a face")
    parts = [[v for v in f if v not in F] for f in K.facets if F <= set(f)]
    return SimplicialComplex(K.labels, parts, K.budget)


def link_by_labels(K: SimplicialComplex, labels: Iterable) -> SimplicialComplex:
    return link(K, [K.vertex_index(x) for x in labels])


def cone(K: SimplicialComplex, apex: str = "apex") -> SimplicialComplex:
    labels = list(K.labels) + [apex]
    a = len(K.labels)
    return SimplicialComplex(labels, [tuple(f) + (a,) for f in K.facets] or [(a,)], K.budget)


def connected_components(K: SimplicialComplex) -> list:
    """Vertex sets of the connected components of the 1-skeleton."""
    parent = list(range(K.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in K.facets:
        for v in f[1:]:
            a, b = find(f[0]), find(v)
            if a != b:
                parent[a] = b
    comps = {}
    for v in range(K.n_vertices):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


# ---------------------------------------------------------------------------
# surface check


def surface_check(K: SimplicialComplex, max_examples: int = 5) -> dict:
    """Test whether ``K`` is a closed connected triangulated surface.

    Checks purity in dimension 2, edges in exactly two triangles, vertex links
    that are single cycles, and connectedness.  Every failing check is listed
    with up to ``max_examples`` offending simplices (as labels).
    """
    failures = []

    def lab(face):
        return [K.labels[v] for v in face]

    if K.dimension != 2:
        failures.append({"code": "not-2-dimensional", "detail": f"dimension {K.dimension}", "examples": []})
    low = [f for f in K.facets if len(f) != 3]
    if low:
        failures.append({
            "code": "not-pure",
            "detail": f"{len(low)} facets are not triangles",
            "count": len(low),
            "examples": [lab(f) for f in low[:max_examples]],
        })
    triangles = [f for f in K.facets if len(f) == 3]
    edge_count = {}
    for t in triangles:
        for e in itertools.combinations(t, 2):
            edge_count[e] = edge_count.get(e, 0) + 1
    for f in K.facets:
        if len(f) == 2:
            edge_count.setdefault(tuple(f), 0)
    bad_edges = sorted(e for e, c in edge_count.items() if c != 2)
    if bad_edges:
        failures.append({
            "code": "edge-not-in-two-triangles",
            "detail": f"{len(bad_edges)} edges lie in a number of triangles other than 2",
            "count": len(bad_edges),
            "examples": [{"edge": lab(e), "triangles": edge_count[e]} for e in bad_edges[:max_examples]],
        })
    bad_links = []
    for v in range(K.n_vertices):
        lk = link(K, [v])
        if not _is_single_cycle(lk):
            bad_links.append(v)
    if bad_links:
        failures.append({
            "code": "vertex-link-not-a-cycle",
            "detail": f"{len(bad_links)} vertex links are not a single cycle",
            "count": len(bad_links),
            "examples": [K.labels[v] for v in bad_links[:max_examples]],
        })
    comps = connected_components(K)
    if len(comps) != 1:
        failures.append({"code": "not-connected", "detail": f"{len(comps)} components", "examples": []})
    return {"is_closed_surface": not failures, "failures": failures}


def _is_single_cycle(L: SimplicialComplex) -> bool:
    if L.n_vertices < 3 or any(len(f) != 2 for f in L.facets):
        return False
    deg = [0] * L.n_vertices
    for a, b in L.facets:
        deg[a] += 1
        deg[b] += 1
    return all(d == 2 for d in deg) and len(connected_components(L)) == 1


# ---------------------------------------------------------------------------
# facet-list files


def dumps_facets(K: SimplicialComplex) -> str:
    lines = ["# vertices: " + "\t".join(K.labels)]
    lines += [" ".join(str(v) for v in f) for f in K.facets]
    return "\n".join(lines) + "\n"


def loads_facets(text: str, budget: Optional[int] = None) -> SimplicialComplex:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# vertices:"):
        raise InvalidParameter("facet file must start with '# vertices:'")
    header = lines[0][len("# vertices:"):]
    header = header[1:] if header.startswith(" ") else header
    labels = header.split("\t") if header else []
    # a blank line is the empty facet, so {emptyset} and the void complex differ
    facets = []
    offset = len(lines[0].encode("utf-8")) + 1
    for line in lines[1:]:
        try:
            facets.append([int(tok) for tok in line.split()])
        except ValueError:
            raise SpecSyntaxError(f"bad vertex index in facet line {line!r}", offset) from None
        offset += len(line.encode("utf-8")) + 1
    return SimplicialComplex(labels, facets, budget)


def export_facets(K: SimplicialComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_facets(K))


def import_facets(path, budget: Optional[int] = None) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return loads_facets(fh.read(), budget)
