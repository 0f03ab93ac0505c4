"""Sparsity-pattern graphs and the homogeneous sparse cones they describe.

A graph on ``n`` vertices together with a labelling (a bijection onto
``1..n``) defines the frame with all block sizes one and ``V_ij = R`` exactly
when the vertices labelled ``i`` and ``j`` are adjacent. That cone is
homogeneous for some labelling exactly when the graph has no induced path
or cycle on four vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidLabelling, TooLarge
from .families import full_frame, random_rooted_forest_edges, sparse_frame
from .frame import IshiFrame, verify_axioms

__all__ = [
    "PatternGraph",
    "ChordalResult",
    "HomogeneityResult",
    "is_chordal",
    "find_obstruction",
    "is_homogeneous_chordal",
    "satisfies_ordering_properties",
    "frame_from_graph",
    "Classification",
    "classify_sparse",
    "CatalogEntry",
    "rank4_catalog",
    "GraphClass",
    "canonical_form",
    "enumerate_connected_homogeneous",
    "random_homogeneous_chordal_graph",
]

MAX_ENUMERATION_ORDER = 5


@dataclass(frozen=True)
class PatternGraph:
    """Simple undirected graph on vertices ``1..n``; edges stored as ``(u, v)`` with ``u < v``."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("a graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) references a vertex outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def relabel(self, mapping) -> "PatternGraph":
        """Image under ``v -> mapping[v]`` (a dict or a 1-based sequence)."""
        m = mapping if isinstance(mapping, dict) else {v: mapping[v - 1] for v in self.vertices}
        return PatternGraph(self.n, frozenset((m[u], m[v]) for u, v in self.edges))

    def components(self, subset=None) -> list:
        """Connected components of the subgraph induced on ``subset`` (all vertices by default)."""
        left = set(self.vertices if subset is None else subset)
        out = []
        while left:
            stack = [min(left)]
            comp = set(stack)
            while stack:
                v = stack.pop()
                for w in self.neighbors(v) & left:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            left -= comp
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    @classmethod
    def path(cls, n: int) -> "PatternGraph":
        return cls(n, frozenset((v, v + 1) for v in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "PatternGraph":
        return cls(n, frozenset([(v, v + 1) for v in range(1, n)] + [(1, n)]))

    @classmethod
    def complete(cls, n: int) -> "PatternGraph":
        return cls(n, frozenset(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def star(cls, n: int, center: int | None = None) -> "PatternGraph":
        c = n if center is None else center
        return cls(n, frozenset((v, c) for v in range(1, n + 1) if v != c))


class ChordalResult(NamedTuple):
    chordal: bool
    ordering: tuple | None


class HomogeneityResult(NamedTuple):
    homogeneous: bool
    ordering: tuple | None
    certificate: tuple | None


def _later_neighbors_form_cliques(g: PatternGraph, ordering) -> bool:
    pos = {v: p for p, v in enumerate(ordering)}
    for v in ordering:
        later = [w for w in g.neighbors(v) if pos[w] > pos[v]]
        if any(not g.has_edge(a, b) for a, b in itertools.combinations(later, 2)):
            return False
    return True


def is_chordal(g: PatternGraph) -> ChordalResult:
    """Chordality via maximum cardinality search and a perfect elimination check.

    The returned ordering lists vertices in elimination order: the later
    neighbours of every vertex form a clique.
    """
    weight = {v: 0 for v in g.vertices}
    visited = []
    while weight:
        v = max(weight, key=lambda x: (weight[x], -x))
        visited.append(v)
        del weight[v]
        for w in g.neighbors(v):
            if w in weight:
                weight[w] += 1
    ordering = tuple(reversed(visited))
    if _later_neighbors_form_cliques(g, ordering):
        return ChordalResult(True, ordering)
    return ChordalResult(False, None)


def find_obstruction(g: PatternGraph):
    """First induced four-vertex path or cycle, as ``("P4" | "C4", vertices)``.

    Path vertices are listed in path order and cycle vertices in cyclic order.
    Returns ``None`` if there is none.
    """
    for quad in itertools.combinations(g.vertices, 4):
        sub = [(a, b) for a, b in itertools.combinations(quad, 2) if g.has_edge(a, b)]
        deg = {v: sum(v in e for e in sub) for v in quad}
        if len(sub) == 3 and sorted(deg.values()) == [1, 1, 2, 2]:
            start = min(v for v in quad if deg[v] == 1)
            return "P4", _walk(g, quad, start)
        if len(sub) == 4 and all(d == 2 for d in deg.values()):
            return "C4", _walk(g, quad, quad[0])
    return None


def _walk(g: PatternGraph, quad, start) -> tuple:
    path = [start]
    while len(path) < 4:
        nxt = min(w for w in quad if w not in path and g.has_edge(path[-1], w))
        path.append(nxt)
    return tuple(path)


def _universal_last_ordering(g: PatternGraph, subset) -> list:
    out = []
    for comp in g.components(subset):
        universal = [v for v in comp if len(g.neighbors(v) & set(comp)) == len(comp) - 1]
        if not universal:
            raise AssertionError("connected piece without a universal vertex in a P4/C4-free graph")
        u = max(universal)
        out.extend(_universal_last_ordering(g, [v for v in comp if v != u]))
        out.append(u)
    return out


def satisfies_ordering_properties(g: PatternGraph, ordering) -> bool:
    """Check both ordering properties on the labelled edge set.

    With ``label(ordering[p-1]) = p``: ``(i,j), (j,k)`` edges with ``i<j<k``
    force ``(i,k)``, and ``(i,j), (i,k)`` with ``i<j<k`` force ``(j,k)``.
    """
    label = {v: p for p, v in enumerate(ordering, start=1)}
    E = {(min(label[u], label[v]), max(label[u], label[v])) for u, v in g.edges}
    for i, j, k in itertools.combinations(range(1, g.n + 1), 3):
        if (i, j) in E and (j, k) in E and (i, k) not in E:
            return False
        if (i, j) in E and (i, k) in E and (j, k) not in E:
            return False
    return True


def is_homogeneous_chordal(g: PatternGraph) -> HomogeneityResult:
    """Decide whether ``g`` has neither an induced four-vertex path nor cycle.

    In the positive case the ordering is built by repeatedly placing a
    universal vertex of each connected piece last; it satisfies both
    ordering properties. In the negative case the certificate is the
    offending induced subgraph.
    """
    obs = find_obstruction(g)
    if obs is not None:
        return HomogeneityResult(False, None, obs)
    ordering = tuple(_universal_last_ordering(g, g.vertices))
    assert satisfies_ordering_properties(g, ordering)
    return HomogeneityResult(True, ordering, None)


def frame_from_graph(g: PatternGraph, ordering=None) -> IshiFrame:
    """Sparse frame of ``g`` under a labelling.

    ``ordering[p-1]`` is the vertex receiving label ``p``; the default is the
    identity labelling.
    """
    if ordering is None:
        ordering = tuple(g.vertices)
    ordering = tuple(ordering)
    if sorted(ordering) != list(g.vertices):
        raise InvalidLabelling(f"{ordering!r} is not a permutation of 1..{g.n}")
    label = {v: p for p, v in enumerate(ordering, start=1)}
    return sparse_frame(g.n, [(label[u], label[v]) for u, v in g.edges])


class Classification(NamedTuple):
    verdict: str
    certificate: tuple
    frame: IshiFrame | None


def classify_sparse(g: PatternGraph) -> Classification:
    """``"homogeneous"`` with an ordering, or ``"not_homogeneous"`` with an induced P4/C4."""
    res = is_homogeneous_chordal(g)
    if not res.homogeneous:
        return Classification("not_homogeneous", res.certificate, None)
    frame = frame_from_graph(g, res.ordering)
    report = verify_axioms(frame)
    assert report.ok, f"ordering {res.ordering} does not give an axiom-passing frame"
    return Classification("homogeneous", res.ordering, frame)


class CatalogEntry(NamedTuple):
    name: str
    frame: IshiFrame
    dimension: int
    homogeneous: bool


def rank4_catalog() -> list:
    """The four indecomposable homogeneous sparse frames of rank four and two non-examples.

    Edge sets use the standard labellings: a star centred at 4, a triangle
    on 2-3-4 with a pendant 1-4, ``K_4`` minus the edge 1-2, and ``K_4``;
    then the path 1-2, 1-4, 3-4 and the 4-cycle, which fail the axioms.
    """
    entries = [
        ("K4(7)", sparse_frame(4, [(1, 4), (2, 4), (3, 4)]), True),
        ("K4(8)", sparse_frame(4, [(2, 3), (1, 4), (2, 4), (3, 4)]), True),
        ("K4(9)", sparse_frame(4, [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]), True),
        ("S4", full_frame(4), True),
        ("K(P4)", sparse_frame(4, [(1, 2), (1, 4), (3, 4)]), False),
        ("K(C4)", sparse_frame(4, [(1, 2), (2, 3), (3, 4), (1, 4)]), False),
    ]
    return [CatalogEntry(name, f, f.dimension, hom) for name, f, hom in entries]


@dataclass(frozen=True)
class GraphClass:
    """An isomorphism class of connected homogeneous chordal graphs."""

    representative: PatternGraph
    ordering: tuple
    dimension: int
    labelled_count: int


def canonical_form(g: PatternGraph) -> tuple:
    """Lexicographically least sorted edge list over all relabellings."""
    best = None
    for perm in itertools.permutations(g.vertices):
        m = {v: perm[v - 1] for v in g.vertices}
        key = tuple(sorted((min(m[u], m[v]), max(m[u], m[v])) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return best


def enumerate_connected_homogeneous(n: int) -> list:
    """Isomorphism classes of connected homogeneous chordal graphs on ``n`` vertices.

    Brute force over all labelled graphs, so ``n`` is capped at 5.

    Raises
    ------
    TooLarge
        If ``n > 5``.
    """
    if n > MAX_ENUMERATION_ORDER:
        raise TooLarge(f"enumeration is limited to n <= {MAX_ENUMERATION_ORDER}")
    if n < 1:
        raise ValueError("n must be positive")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    classes = {}
    for mask in range(1 << len(pairs)):
        g = PatternGraph(n, frozenset(p for b, p in enumerate(pairs) if mask >> b & 1))
        if not g.is_connected():
            continue
        res = is_homogeneous_chordal(g)
        if not res.homogeneous:
            continue
        key = canonical_form(g)
        if key in classes:
            rep, order, count = classes[key]
            classes[key] = (rep, order, count + 1)
        else:
            classes[key] = (g, res.ordering, 1)
    out = [GraphClass(rep, order, n + len(rep.edges), count) for rep, order, count in classes.values()]
    return sorted(out, key=lambda c: (c.dimension, canonical_form(c.representative)))


def random_homogeneous_chordal_graph(n: int, rng: np.random.Generator) -> PatternGraph:
    """Random homogeneous chordal graph with shuffled vertex names."""
    edges = random_rooted_forest_edges(n, rng)
    perm = rng.permutation(n) + 1
    return PatternGraph(n, frozenset((int(perm[u - 1]), int(perm[v - 1])) for u, v in edges))
