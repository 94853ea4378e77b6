"""Link graphs S_N(a_0..a_n), girth, polarities and isomorphism search.

The graph S_N has vertex set Z/2N; every even vertex ``v`` is joined to
``v + 2*a_r - 1`` for each term ``a_r``.  Edges remember the index ``r`` of
the term that produced them, so S_N is naturally a multigraph whenever the
sequence fails to be Sidon modulo N.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BadBijectionError,
    IndexOutOfRangeError,
    MalformedInputError,
    ModulusTooSmallError,
    NoExtensionError,
    SizeLimitError,
)
from .sidon import as_sequence

__all__ = [
    "LinkGraph",
    "GraphAutomorphism",
    "build_link",
    "girth",
    "polarity",
    "is_isomorphic",
    "find_isomorphisms",
    "automorphisms",
    "canonical_mk",
    "canonical_heawood",
    "extend_tripod",
    "two_arc_transitive",
    "hexagons",
]


@dataclass(frozen=True, eq=False)
class LinkGraph:
    """A finite multigraph with optional edge and vertex colours.

    ``edges`` holds endpoint pairs; for graphs built by :func:`build_link`
    the first endpoint is the even vertex and ``term_index[e]`` is the
    index ``r`` of the increment ``2*a_r - 1``.
    """

    order: int
    edges: tuple[tuple[int, int], ...]
    edge_colours: tuple[int, ...] | None = None
    vertex_colours: tuple[int, ...] | None = None
    modulus: int | None = None
    sequence: tuple[int, ...] | None = None
    sigma: tuple[int, ...] | None = None
    tau: tuple[int, int] | None = None
    term_index: tuple[int, ...] | None = field(default=None, repr=False)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency[v]`` lists ``(neighbour, edge_id)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.order)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def neighbour_labels(self) -> tuple[dict[int, tuple], ...]:
        """``neighbour_labels[u][w]`` is the sorted tuple of edge colours between u and w."""
        out: list[dict[int, list]] = [{} for _ in range(self.order)]
        for eid, (u, v) in enumerate(self.edges):
            c = self.edge_colour(eid)
            out[u].setdefault(v, []).append(c)
            out[v].setdefault(u, []).append(c)
        return tuple({w: tuple(sorted(cs, key=_sort_key)) for w, cs in d.items()} for d in out)

    def edge_colour(self, eid: int):
        return None if self.edge_colours is None else self.edge_colours[eid]

    def vertex_colour(self, v: int):
        return None if self.vertex_colours is None else self.vertex_colours[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbours(self, v: int) -> list[int]:
        return sorted(self.neighbour_labels[v])

    def edge_between(self, u: int, v: int, colour=None) -> int | None:
        for w, eid in self.adjacency[u]:
            if w == v and (colour is None or self.edge_colour(eid) == colour):
                return eid
        return None

    def is_connected(self) -> bool:
        if self.order == 0:
            return True
        return len(_bfs_distances(self, 0)) == self.order

    def is_bipartite_by_parity(self) -> bool:
        return all((u - v) % 2 == 1 for u, v in self.edges)

    def simple_edges(self) -> set[frozenset[int]]:
        return {frozenset(e) for e in self.edges}

    # serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        if self.modulus is not None:
            return {
                "modulus": self.modulus,
                "sequence": list(self.sequence),
                "sigma": list(self.sigma) if self.sigma is not None else None,
                "tau": list(self.tau) if self.tau is not None else None,
                "edges": [[u, r] for (u, _), r in zip(self.edges, self.term_index)],
            }
        return {
            "order": self.order,
            "edges": [list(e) for e in self.edges],
            "edge_colours": list(self.edge_colours) if self.edge_colours is not None else None,
            "vertex_colours": list(self.vertex_colours) if self.vertex_colours is not None else None,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LinkGraph":
        if "modulus" in obj:
            g = build_link(obj["sequence"], obj["modulus"], obj.get("sigma"), obj.get("tau"))
            listed = sorted((int(v), int(r)) for v, r in obj.get("edges", []))
            if listed and listed != sorted((u, r) for (u, _), r in zip(g.edges, g.term_index)):
                raise MalformedInputError("edge list disagrees with (sequence, modulus)")
            return g
        return cls(
            order=int(obj["order"]),
            edges=tuple((int(u), int(v)) for u, v in obj["edges"]),
            edge_colours=_opt_tuple(obj.get("edge_colours")),
            vertex_colours=_opt_tuple(obj.get("vertex_colours")),
        )

    def to_dot(self, name: str = "S") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.order):
            c = self.vertex_colour(v)
            lines.append(f"  {v}" + (f" [colour={c}];" if c is not None else ";"))
        for eid, (u, v) in enumerate(self.edges):
            c = self.edge_colour(eid)
            lines.append(f"  {u} -- {v}" + (f" [label={c}];" if c is not None else ";"))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _opt_tuple(x):
    return None if x is None else tuple(x)


def _sort_key(c):
    return (c is None, c)


@dataclass(frozen=True)
class GraphAutomorphism:
    mapping: tuple[int, ...]
    preserves_edge_labels: bool
    swaps_parity: bool

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def compose(self, other: "GraphAutomorphism") -> tuple[int, ...]:
        """Mapping of ``self after other``."""
        return tuple(self.mapping[other.mapping[v]] for v in range(len(self.mapping)))

    def is_identity(self) -> bool:
        return all(v == w for v, w in enumerate(self.mapping))


# construction -----------------------------------------------------------


def _check_sigma(sigma, n_terms):
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(n_terms)):
        raise BadBijectionError(f"sigma {list(sigma)} is not a bijection onto 0..{n_terms - 1}")
    return sigma


def _check_tau(tau):
    tau = tuple(int(t) for t in tau)
    if len(tau) != 2 or tau[0] == tau[1]:
        raise BadBijectionError(f"tau {list(tau)} must be two distinct colours")
    return tau


def build_link(
    seq: Sequence[int],
    N: int,
    sigma: Sequence[int] | None = None,
    tau: Sequence[int] | None = None,
) -> LinkGraph:
    """Build S_N(seq) on the residues mod 2N.

    Parameters
    ----------
    seq : increasing nonnegative integers; need not be Sidon.
    N : modulus, at least 2.
    sigma : optional labels, ``sigma[r]`` is the colour of edges with increment ``2*seq[r]-1``.
        Defaults to the identity ``r``.
    tau : optional ``(colour of even vertices, colour of odd vertices)``.
    """
    seq = as_sequence(seq)
    if N < 2:
        raise ModulusTooSmallError(f"modulus must be >= 2, got {N}")
    sigma = _check_sigma(range(len(seq)) if sigma is None else sigma, len(seq))
    tau = None if tau is None else _check_tau(tau)
    two_n = 2 * N
    edges, index = [], []
    for v in range(0, two_n, 2):
        for r, a in enumerate(seq):
            edges.append((v, (v + 2 * a - 1) % two_n))
            index.append(r)
    return LinkGraph(
        order=two_n,
        edges=tuple(edges),
        edge_colours=tuple(sigma[r] for r in index),
        vertex_colours=None if tau is None else tuple(tau[v % 2] for v in range(two_n)),
        modulus=N,
        sequence=seq,
        sigma=sigma,
        tau=tau,
        term_index=tuple(index),
    )


def canonical_mk() -> LinkGraph:
    """The generalized Petersen graph GP(8, 3): outer 0..7, inner 8..15."""
    edges = []
    for i in range(8):
        edges.append((i, (i + 1) % 8))
        edges.append((i, 8 + i))
        edges.append((8 + i, 8 + (i + 3) % 8))
    return LinkGraph(order=16, edges=tuple(edges))


FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def canonical_heawood() -> LinkGraph:
    """Point/line incidence graph of the Fano plane: points 0..6, lines 7..13."""
    edges = [(p, 7 + i) for i, line in enumerate(FANO_LINES) for p in line]
    return LinkGraph(order=14, edges=tuple(edges))


# girth & cycles -----------------------------------------------------------


def _bfs_distances(g: LinkGraph, root: int) -> dict[int, int]:
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, _ in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def girth(g: LinkGraph) -> float:
    """Length of a shortest cycle; parallel edges count as 2-cycles, loops as 1.

    Returns ``math.inf`` for forests.
    """
    best = math.inf
    # translation by 2 acts transitively on even vertices of S_N and every cycle meets one
    roots = [0] if g.modulus is not None else range(g.order)
    for root in roots:
        dist = {root: 0}
        parent_edge = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w, eid in g.adjacency[u]:
                if eid == parent_edge[u]:
                    continue
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent_edge[w] = eid
                    queue.append(w)
                else:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def hexagons(g: LinkGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All simple 6-cycles as ``(vertices, edge_ids)``, each listed once.

    A cycle starts at its least vertex and is traversed towards the smaller
    of its two neighbours on the cycle.
    """
    out = []
    for s in range(g.order):
        stack = [(s, (s,), ())]
        while stack:
            u, path, eids = stack.pop()
            for w, eid in g.adjacency[u]:
                if eid in eids:
                    continue
                if len(path) == 6:
                    if w == s and path[1] < path[5]:
                        out.append((path, eids + (eid,)))
                    continue
                if w <= s or w in path:
                    continue
                stack.append((w, path + (w,), eids + (eid,)))
    out.sort()
    return out


# automorphisms & isomorphism -----------------------------------------------


def polarity(g: LinkGraph, p: int) -> GraphAutomorphism:
    """The involution ``k -> -k + 2*a_p - 1`` of S_N."""
    if g.modulus is None:
        raise MalformedInputError("polarity needs a graph built by build_link")
    if not 0 <= p < len(g.sequence):
        raise IndexOutOfRangeError(f"p={p} outside 0..{len(g.sequence) - 1}")
    two_n = 2 * g.modulus
    shift = 2 * g.sequence[p] - 1
    mapping = tuple((-k + shift) % two_n for k in range(two_n))
    return _as_automorphism(g, mapping)


def _as_automorphism(g: LinkGraph, mapping: Sequence[int]) -> GraphAutomorphism:
    mapping = tuple(mapping)
    if sorted(mapping) != list(range(g.order)):
        raise NoExtensionError("mapping is not a permutation")
    plain, labelled = True, True
    for u in range(g.order):
        for w, cs in g.neighbour_labels[u].items():
            image = g.neighbour_labels[mapping[u]].get(mapping[w])
            if image is None or len(image) != len(cs):
                plain = False
            elif image != cs:
                labelled = False
    if not plain:
        raise NoExtensionError("mapping does not preserve adjacency")
    swaps = all((mapping[v] - v) % 2 == 1 for v in range(g.order)) if g.modulus is not None else False
    return GraphAutomorphism(mapping, labelled, swaps)


def _distance_profile(g: LinkGraph, v: int) -> tuple[int, ...]:
    dist = _bfs_distances(g, v)
    prof = [0] * (max(dist.values()) + 1)
    for d in dist.values():
        prof[d] += 1
    return tuple(prof)


def _invariants(g: LinkGraph, respect_labels: bool, respect_colours: bool) -> list[tuple]:
    cache = g.__dict__.setdefault("_invariant_cache", {})
    key = (respect_labels, respect_colours)
    if key not in cache:
        cache[key] = _compute_invariants(g, respect_labels, respect_colours)
    return cache[key]


def _compute_invariants(g: LinkGraph, respect_labels: bool, respect_colours: bool) -> list[tuple]:
    inv = []
    for v in range(g.order):
        if respect_labels:
            local = tuple(sorted(g.neighbour_labels[v].values(), key=repr))
        else:
            local = tuple(sorted(len(cs) for cs in g.neighbour_labels[v].values()))
        colour = g.vertex_colour(v) if respect_colours else None
        inv.append((colour, local, _distance_profile(g, v)))
    return inv


def _refine(lab1, lab2, col1: list, col2: list) -> tuple[list[int], list[int]] | None:
    """Joint colour refinement of two graphs; ``None`` once their colour histograms differ."""
    n_classes = -1
    while True:
        ids: dict = {}

        def recolour(lab, col):
            out = []
            for v in range(len(col)):
                sig = (col[v], tuple(sorted((c, col[w]) for w, c in lab[v].items())))
                out.append(ids.setdefault(sig, len(ids)))
            return out

        new1 = recolour(lab1, col1)
        new2 = recolour(lab2, col2)
        if Counter(new1) != Counter(new2):
            return None
        col1, col2 = new1, new2
        if len(ids) == n_classes:
            return col1, col2
        n_classes = len(ids)


def find_isomorphisms(
    g1: LinkGraph,
    g2: LinkGraph,
    respect_labels: bool = False,
    seed: Mapping[int, int] | None = None,
    respect_colours: bool | None = None,
) -> Iterator[dict[int, int]]:
    """Yield every isomorphism g1 -> g2 (extending ``seed`` when given).

    With ``respect_labels`` the maps also preserve edge colours;
    ``respect_colours`` (defaulting to ``respect_labels``) additionally
    requires vertex colours to be preserved.

    The search individualises one vertex at a time (the least vertex of the
    smallest ambiguous colour class, images in ascending order) and refines
    both colourings jointly, so the output order is deterministic.
    """
    if g1.order != g2.order or len(g1.edges) != len(g2.edges):
        return
    lab1 = g1.neighbour_labels
    lab2 = g2.neighbour_labels
    if not respect_labels:
        lab1 = tuple({w: len(cs) for w, cs in d.items()} for d in lab1)
        lab2 = tuple({w: len(cs) for w, cs in d.items()} for d in lab2)
    if respect_colours is None:
        respect_colours = respect_labels
    inv1 = _invariants(g1, respect_labels, respect_colours)
    inv2 = _invariants(g2, respect_labels, respect_colours)
    if sorted(inv1, key=repr) != sorted(inv2, key=repr):
        return
    ids: dict = {}
    col1 = [ids.setdefault(x, len(ids)) for x in inv1]
    col2 = [ids.setdefault(x, len(ids)) for x in inv2]
    fresh = itertools.count(len(ids))
    for u, x in (seed or {}).items():
        if not (0 <= u < g1.order and 0 <= x < g2.order) or col1[u] != col2[x]:
            return
        c = next(fresh)
        col1[u] = col2[x] = c
    if seed and len(set(seed.values())) != len(seed):
        return

    def is_map(m: list[int]) -> bool:
        for u in range(g1.order):
            n1, n2 = lab1[u], lab2[m[u]]
            if len(n1) != len(n2):
                return False
            for w, c in n1.items():
                if n2.get(m[w]) != c:
                    return False
        return True

    def search(col1, col2):
        refined = _refine(lab1, lab2, col1, col2)
        if refined is None:
            return
        col1, col2 = refined
        sizes = Counter(col1)
        ambiguous = [c for c, k in sizes.items() if k > 1]
        if not ambiguous:
            where = {c: x for x, c in enumerate(col2)}
            m = [where[c] for c in col1]
            if is_map(m):
                yield dict(enumerate(m))
            return
        target = min(ambiguous, key=lambda c: (sizes[c], col1.index(c)))
        u = col1.index(target)
        mark = max(max(col1), max(col2)) + 1
        for x in range(g2.order):
            if col2[x] != target:
                continue
            c1, c2 = list(col1), list(col2)
            c1[u] = c2[x] = mark
            yield from search(c1, c2)

    yield from search(col1, col2)


def is_isomorphic(g1: LinkGraph, g2: LinkGraph, respect_labels: bool = False) -> dict[int, int] | None:
    """A witness isomorphism (the first in search order), or ``None``."""
    return next(find_isomorphisms(g1, g2, respect_labels), None)


def automorphisms(
    g: LinkGraph, respect_labels: bool = False, respect_colours: bool | None = None
) -> list[GraphAutomorphism]:
    return [
        _as_automorphism(g, [m[v] for v in range(g.order)])
        for m in find_isomorphisms(g, g, respect_labels, respect_colours=respect_colours)
    ]


def _tree_check(g: LinkGraph, tree_edges: Iterable[tuple[int, int]]) -> tuple[set[int], list[tuple[int, int]]]:
    tree_edges = [tuple(e) for e in tree_edges]
    verts = {v for e in tree_edges for v in e}
    for u, v in tree_edges:
        if g.edge_between(u, v) is None:
            raise MalformedInputError(f"({u}, {v}) is not an edge of the graph")
    if len(tree_edges) != len(verts) - 1 or len({frozenset(e) for e in tree_edges}) != len(tree_edges):
        raise MalformedInputError("edge set is not a tree")
    deg: dict[int, int] = {}
    for u, v in tree_edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if max(deg.values(), default=0) < 3:
        raise MalformedInputError("tree must contain a tripod")
    return verts, tree_edges


def extend_tripod(
    g: LinkGraph,
    tree: Iterable[tuple[int, int]],
    tree_image: Iterable[tuple[int, int]],
    phi0: Mapping[int, int],
) -> GraphAutomorphism:
    """Extend a label-preserving tree isomorphism to the unique label-preserving automorphism."""
    verts, edges = _tree_check(g, tree)
    verts2, edges2 = _tree_check(g, tree_image)
    phi0 = {int(k): int(v) for k, v in phi0.items()}
    if set(phi0) != verts or set(phi0.values()) != verts2:
        raise NoExtensionError("phi0 is not a bijection between the two trees")
    image_edges = {frozenset(e) for e in edges2}
    for u, v in edges:
        if frozenset((phi0[u], phi0[v])) not in image_edges:
            raise NoExtensionError("phi0 does not map tree edges to tree edges")
        if g.neighbour_labels[u][v] != g.neighbour_labels[phi0[u]][phi0[v]]:
            raise NoExtensionError("phi0 does not preserve edge labels")
    found = []
    for m in find_isomorphisms(g, g, respect_labels=True, seed=phi0, respect_colours=False):
        found.append(_as_automorphism(g, [m[v] for v in range(g.order)]))
        if len(found) > 1:
            raise NoExtensionError("extension is not unique")
    if not found:
        raise NoExtensionError("phi0 does not extend to a label-preserving automorphism")
    return found[0]


def two_arc_transitive(g: LinkGraph, max_order: int = 64) -> bool:
    """True iff Aut(g) acts transitively on directed paths of length 2."""
    if g.order > max_order:
        raise SizeLimitError(f"graph has {g.order} vertices, limit is {max_order}")
    if not g.is_connected() or g.order == 0:
        return False
    arcs = [
        (u, v, w)
        for v in range(g.order)
        for u in g.neighbours(v)
        for w in g.neighbours(v)
        if u != w
    ]
    if not arcs:
        return False
    base = arcs[0]
    for arc in arcs:
        seed = dict(zip(base, arc))
        if next(find_isomorphisms(g, g, seed=seed), None) is None:
            return False
    return True
