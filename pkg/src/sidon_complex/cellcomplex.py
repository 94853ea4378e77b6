"""Finite balls of the coloured triangle complex attached to three Sidon links.

A ball is grown from a centre vertex: the radius-1 ball is the cone over
the centre's link, and each later layer completes the partial link of every
boundary vertex by embedding it colour-preservingly into the model link of
that vertex's colour.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BadBijectionError,
    IllDefinedParityError,
    InsufficientNeighborhoodError,
    LinkEmbeddingError,
    MalformedInputError,
    NoExtensionError,
    OutOfBallError,
    SpecNotOddError,
)
from .linkgraph import LinkGraph, build_link, canonical_mk, girth, is_isomorphic, polarity
from .puzzle import FaceLabelling, PuzzleInstance, face_vertices, hex_distance, star, vertex_type
from .rings import rings_from_collisions
from .sidon import as_sequence, verify_sidon_mod

__all__ = [
    "ComplexSpec",
    "CellComplexBall",
    "Report",
    "mk_spec",
    "modular_spec",
    "validate_spec",
    "build_ball",
    "verify_ball",
    "root_is_rank2",
    "root_paths",
    "triangle_parities",
    "triangle_is_odd",
    "ball_isomorphism",
    "extend_ball_map",
    "polarity_seed",
    "sign_variants_isomorphic",
    "vertex_transitivity_check",
    "star_seeds",
    "embed_disk",
    "count_extensions",
    "extension_uniqueness_check",
]

COLOURS = (1, 2, 3)


# specs ------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexSpec:
    """Three sequences, moduli, face labellings ``sigma`` and vertex colourings ``tau``.

    ``sigmas[j-1][r]`` is the face label of term ``r`` of sequence ``j``;
    ``taus[j-1]`` gives the colours of the even and odd residues in the
    link of a colour-``j`` vertex.
    """

    sequences: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    moduli: tuple[int, int, int]
    sigmas: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    taus: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    @classmethod
    def make(cls, sequences, moduli, sigmas=None, taus=None) -> "ComplexSpec":
        sequences = tuple(tuple(int(a) for a in s) for s in sequences)
        if sigmas is None:
            sigmas = [tuple(range(len(s))) for s in sequences]
        if taus is None:
            taus = [_increasing_tau(j) for j in COLOURS]
        return cls(
            sequences,
            tuple(int(m) for m in moduli),
            tuple(tuple(int(x) for x in s) for s in sigmas),
            tuple(tuple(int(x) for x in t) for t in taus),
        )

    @property
    def n(self) -> int:
        return len(self.sequences[0]) - 1

    @property
    def signs(self) -> tuple[str, str, str]:
        return tuple("+" if t[0] < t[1] else "-" for t in self.taus)

    def with_signs(self, signs: Sequence[str]) -> "ComplexSpec":
        taus = []
        for j, s in zip(COLOURS, signs):
            lo, hi = _increasing_tau(j)
            taus.append((lo, hi) if s == "+" else (hi, lo))
        return ComplexSpec(self.sequences, self.moduli, self.sigmas, tuple(taus))

    def link(self, j: int) -> LinkGraph:
        cache = self.__dict__.setdefault("_links", {})
        if j not in cache:
            i = j - 1
            cache[j] = build_link(self.sequences[i], self.moduli[i], self.sigmas[i], self.taus[i])
        return cache[j]

    def puzzle_instance(self) -> PuzzleInstance:
        rings = {}
        for j in COLOURS:
            i = j - 1
            rings[j] = frozenset(
                rings_from_collisions(self.sequences[i], self.moduli[i], self.sigmas[i], self.taus[i], j)
            )
        return PuzzleInstance(self.n, rings)

    def to_json(self) -> dict:
        return {
            "sequences": [list(s) for s in self.sequences],
            "moduli": list(self.moduli),
            "sigmas": [list(s) for s in self.sigmas],
            "taus": [list(t) for t in self.taus],
        }

    @classmethod
    def from_json(cls, obj) -> "ComplexSpec":
        try:
            return cls.make(obj["sequences"], obj["moduli"], obj.get("sigmas"), obj.get("taus"))
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad complex spec: {exc}") from exc


def _increasing_tau(j: int) -> tuple[int, int]:
    lo, hi = (c for c in COLOURS if c != j)
    return lo, hi


def _cycle_012(label: int, power: int) -> int:
    return (label + power) % 3 if label < 3 else label


def mk_spec() -> ComplexSpec:
    """The twisted Moebius-Kantor spec on (0, 1, 3) mod 8.

    ``sigma_1`` is increasing and ``sigma_i`` is ``sigma_1`` followed by
    the 3-cycle (0 1 2) applied ``i - 1`` times, so that the labels
    ``sigma_i(0)`` are pairwise distinct.
    """
    seq = (0, 1, 3)
    sigma1 = (0, 1, 2)
    sigmas = [tuple(_cycle_012(s, i) for s in sigma1) for i in range(3)]
    return ComplexSpec.make([seq] * 3, (8, 8, 8), sigmas)


def modular_spec(seq: Sequence[int], moduli: Sequence[int] | None = None) -> ComplexSpec:
    """Increasing sigma and tau; moduli default to the least admissible modulus."""
    from .sidon import n_double_zero

    seq = as_sequence(seq)
    if moduli is None:
        moduli = (n_double_zero(seq),) * 3
    return ComplexSpec.make([seq] * 3, moduli)


@dataclass
class Report:
    ok: bool
    checks: dict[str, bool] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed:
            self.ok = False
            self.violations.append(f"{name}: {detail}" if detail else name)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "violations": self.violations}


def validate_spec(spec: ComplexSpec) -> Report:
    """Check every hypothesis the construction needs; never raises on bad data."""
    rep = Report(True)
    lengths = {len(s) for s in spec.sequences}
    rep.add("equal-lengths", len(lengths) == 1, f"sequence lengths {sorted(lengths)}")
    rep.add("three-of-each", all(len(x) == 3 for x in (spec.sequences, spec.moduli, spec.sigmas, spec.taus)))
    if not rep.checks["three-of-each"]:
        return rep
    for j, seq, N, sigma, tau in zip(COLOURS, spec.sequences, spec.moduli, spec.sigmas, spec.taus):
        try:
            seq = as_sequence(seq)
        except MalformedInputError as exc:
            rep.add(f"sequence-{j}", False, str(exc))
            continue
        if len(seq) < 3:
            rep.add(f"length-{j}", False, "the construction needs n >= 2")
        if N < 2:
            rep.add(f"sidon-mod-{j}", False, f"modulus {N} < 2")
        else:
            rep.add(f"sidon-mod-{j}", verify_sidon_mod(seq, N), f"{list(seq)} is not Sidon mod {N}")
        rep.add(f"sigma-{j}", sorted(sigma) == list(range(len(seq))), f"sigma {list(sigma)} is not a bijection")
        rep.add(
            f"tau-{j}",
            len(tau) == 2 and set(tau) == set(COLOURS) - {j},
            f"tau {list(tau)} is not a bijection onto {sorted(set(COLOURS) - {j})}",
        )
    return rep


# balls --------------------------------------------------------------------------


@dataclass
class CellComplexBall:
    """A finite coloured triangle complex grown around ``center``.

    Faces are stored as sorted vertex triples.  ``layer[v]`` is the
    combinatorial distance of ``v`` from the centre; vertices with
    ``layer < radius`` have complete stars.
    """

    colours: list[int]
    layer: list[int]
    faces: list[tuple[int, int, int]]
    face_labels: list[int]
    center: int
    radius: int
    center_link: dict[int, int] = field(default_factory=dict)

    @cached_property
    def vertex_faces(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.colours]
        for fid, f in enumerate(self.faces):
            for v in f:
                out[v].append(fid)
        return out

    @cached_property
    def edge_faces(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for fid, (a, b, c) in enumerate(self.faces):
            for e in ((a, b), (a, c), (b, c)):
                out.setdefault(e, []).append(fid)
        return out

    @cached_property
    def face_index(self) -> dict[tuple[int, int, int], int]:
        return {f: i for i, f in enumerate(self.faces)}

    @property
    def n_vertices(self) -> int:
        return len(self.colours)

    def faces_at_edge(self, u: int, v: int) -> list[int]:
        return self.edge_faces.get((u, v) if u < v else (v, u), [])

    def is_interior(self, v: int) -> bool:
        return self.layer[v] < self.radius

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.edge_faces)

    def link_adjacency(self, v: int) -> dict[int, dict[int, int]]:
        """``adj[u][w] = label`` for the link of ``v`` (neighbours u, w joined by a face)."""
        adj: dict[int, dict[int, int]] = {}
        for fid in self.vertex_faces[v]:
            u, w = (x for x in self.faces[fid] if x != v)
            adj.setdefault(u, {})[w] = self.face_labels[fid]
            adj.setdefault(w, {})[u] = self.face_labels[fid]
        return adj

    def link_graph(self, v: int) -> tuple[LinkGraph, list[int]]:
        """The link of ``v`` as a coloured graph, plus the ball vertex behind each link vertex."""
        nbrs = sorted({x for fid in self.vertex_faces[v] for x in self.faces[fid] if x != v})
        index = {u: i for i, u in enumerate(nbrs)}
        edges, colours = [], []
        for fid in self.vertex_faces[v]:
            u, w = (x for x in self.faces[fid] if x != v)
            edges.append((index[u], index[w]))
            colours.append(self.face_labels[fid])
        g = LinkGraph(
            order=len(nbrs),
            edges=tuple(edges),
            edge_colours=tuple(colours),
            vertex_colours=tuple(self.colours[u] for u in nbrs),
        )
        return g, nbrs

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "colour": c} for v, c in enumerate(self.colours)],
            "edges": [
                {"v": u, "w": w, "colour": sorted((self.colours[u], self.colours[w]))} for u, w in self.edges()
            ],
            "faces": [
                {"v": a, "w": b, "x": c, "colour": lab} for (a, b, c), lab in zip(self.faces, self.face_labels)
            ],
            "center": self.center,
            "radius": self.radius,
        }

    @classmethod
    def from_json(cls, obj) -> "CellComplexBall":
        colours = [0] * len(obj["vertices"])
        for v in obj["vertices"]:
            colours[int(v["id"])] = int(v["colour"])
        faces = [tuple(sorted((int(f["v"]), int(f["w"]), int(f["x"])))) for f in obj["faces"]]
        labels = [int(f["colour"]) for f in obj["faces"]]
        center = int(obj["center"])
        layer = _layers(len(colours), faces, center)
        return cls(colours, layer, faces, labels, center, int(obj["radius"]))

    def to_dot(self) -> str:
        lines = ["graph X {"]
        for v, c in enumerate(self.colours):
            lines.append(f"  {v} [colour={c}];")
        for u, w in self.edges():
            lines.append(f"  {u} -- {w};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _layers(n: int, faces, center: int) -> list[int]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b, c in faces:
        adj[a] |= {b, c}
        adj[b] |= {a, c}
        adj[c] |= {a, b}
    dist = [-1] * n
    dist[center] = 0
    queue = deque([center])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _colour_step(g: LinkGraph) -> list[dict[int, int]]:
    """``step[x][label]`` is the neighbour of link vertex ``x`` along the edge of that label."""
    step: list[dict[int, int]] = [{} for _ in range(g.order)]
    for eid, (u, v) in enumerate(g.edges):
        c = g.edge_colours[eid]
        if c in step[u] or c in step[v]:
            raise LinkEmbeddingError("link colouring is not complete: repeated edge colour at a vertex")
        step[u][c] = v
        step[v][c] = u
    return step


def _embed_partial_link(
    partial: dict[int, dict[int, int]],
    colours: Sequence[int],
    model: LinkGraph,
    step: list[dict[int, int]],
    rng: random.Random | None,
) -> dict[int, int]:
    """Colour-preserving embedding of a connected partial link into the model link."""
    root = min(partial)
    cands = [x for x in range(model.order) if model.vertex_colours[x] == colours[root]]
    if rng is not None:
        rng.shuffle(cands)
    for x0 in cands:
        emb = {root: x0}
        used = {x0}
        queue = deque([root])
        ok = True
        while queue and ok:
            u = queue.popleft()
            for w, lab in partial[u].items():
                z = step[emb[u]].get(lab)
                if z is None or model.vertex_colours[z] != colours[w]:
                    ok = False
                    break
                if w in emb:
                    if emb[w] != z:
                        ok = False
                        break
                elif z in used:
                    ok = False
                    break
                else:
                    emb[w] = z
                    used.add(z)
                    queue.append(w)
        if ok and len(emb) == len(partial):
            return emb
    raise LinkEmbeddingError("partial link does not embed in the model link")


class _Builder:
    def __init__(self, spec: ComplexSpec):
        self.spec = spec
        self.colours: list[int] = []
        self.layer: list[int] = []
        self.faces: list[tuple[int, int, int]] = []
        self.labels: list[int] = []
        self.face_set: set[tuple[int, int, int]] = set()
        self.vertex_faces: list[list[int]] = []
        self.steps = {j: _colour_step(spec.link(j)) for j in COLOURS}

    def add_vertex(self, colour: int, layer: int) -> int:
        self.colours.append(colour)
        self.layer.append(layer)
        self.vertex_faces.append([])
        return len(self.colours) - 1

    def add_face(self, a: int, b: int, c: int, label: int) -> None:
        f = tuple(sorted((a, b, c)))
        if f in self.face_set:
            raise LinkEmbeddingError(f"face {f} added twice")
        if len({self.colours[a], self.colours[b], self.colours[c]}) != 3:
            raise LinkEmbeddingError(f"face {f} does not carry three vertex colours")
        self.face_set.add(f)
        self.faces.append(f)
        self.labels.append(label)
        for v in f:
            self.vertex_faces[v].append(len(self.faces) - 1)

    def partial_link(self, y: int) -> dict[int, dict[int, int]]:
        adj: dict[int, dict[int, int]] = {}
        for fid in self.vertex_faces[y]:
            u, w = (x for x in self.faces[fid] if x != y)
            adj.setdefault(u, {})[w] = self.labels[fid]
            adj.setdefault(w, {})[u] = self.labels[fid]
        return adj

    def complete(self, y: int, rng: random.Random | None) -> dict[int, int]:
        """Attach the missing cells around ``y``; returns the map model vertex -> ball vertex."""
        k = self.colours[y]
        model = self.spec.link(k)
        partial = self.partial_link(y)
        if partial and not _connected(partial):
            raise LinkEmbeddingError(f"partial link at vertex {y} is disconnected")
        if partial:
            emb = _embed_partial_link(partial, self.colours, model, self.steps[k], rng)
            inv = {x: u for u, x in emb.items()}
        else:
            inv = {}
        new_vertices = [x for x in range(model.order) if x not in inv]
        if rng is not None:
            rng.shuffle(new_vertices)
        for x in new_vertices:
            inv[x] = self.add_vertex(model.vertex_colours[x], self.layer[y] + 1)
        edge_ids = list(range(len(model.edges)))
        if rng is not None:
            rng.shuffle(edge_ids)
        for eid in edge_ids:
            u, w = model.edges[eid]
            a, b = inv[u], inv[w]
            if b not in partial.get(a, {}):
                self.add_face(y, a, b, model.edge_colours[eid])
        return inv


def _connected(adj: Mapping[int, Mapping[int, int]]) -> bool:
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def build_ball(
    spec: ComplexSpec,
    radius: int,
    completion_seed: int | None = None,
    center_colour: int = 1,
) -> CellComplexBall:
    """Grow the radius-``radius`` ball around a centre of colour ``center_colour``.

    With ``completion_seed=None`` the completion is canonical: boundary
    vertices in creation order, each partial link embedded at the least
    admissible model vertex.  An integer seed randomises the processing
    order and every embedding choice.
    """
    rep = validate_spec(spec)
    if not rep.ok:
        raise BadBijectionError("invalid complex spec: " + "; ".join(rep.violations))
    if radius < 1:
        raise MalformedInputError("radius must be >= 1")
    rng = None if completion_seed is None else random.Random(completion_seed)
    b = _Builder(spec)
    center = b.add_vertex(center_colour, 0)
    center_link = b.complete(center, rng)
    for n in range(1, radius):
        boundary = [v for v in range(len(b.colours)) if b.layer[v] == n]
        if rng is not None:
            rng.shuffle(boundary)
        for y in boundary:
            b.complete(y, rng)
    return CellComplexBall(b.colours, b.layer, b.faces, b.labels, center, radius, center_link)


def verify_ball(ball: CellComplexBall, spec: ComplexSpec) -> Report:
    """Complete-colouring axioms, and for interior vertices: link = model link, girth >= 6."""
    rep = Report(True)
    for fid, f in enumerate(ball.faces):
        cols = {ball.colours[v] for v in f}
        if len(cols) != 3:
            rep.add("face-vertex-colours", False, f"face {f} has vertex colours {sorted(cols)}")
    for e, fids in ball.edge_faces.items():
        labels = [ball.face_labels[i] for i in fids]
        if len(set(labels)) != len(labels):
            rep.add("edge-face-labels", False, f"faces on edge {e} repeat a label: {labels}")
        if ball.colours[e[0]] == ball.colours[e[1]]:
            rep.add("edge-endpoint-colours", False, f"edge {e} joins two vertices of one colour")
    for name in ("face-vertex-colours", "edge-face-labels", "edge-endpoint-colours"):
        rep.checks.setdefault(name, True)
    rep.checks.setdefault("interior-links", True)
    rep.checks.setdefault("interior-girth", True)
    for v in range(ball.n_vertices):
        if not ball.is_interior(v):
            continue
        g, _ = ball.link_graph(v)
        model = spec.link(ball.colours[v])
        if is_isomorphic(g, model, respect_labels=True) is None:
            rep.add("interior-links", False, f"link of vertex {v} is not the model link L_{ball.colours[v]}")
        gi = girth(g)
        if gi < 6:
            rep.add("interior-girth", False, f"link of vertex {v} has girth {gi}")
    return rep


# roots and parity -----------------------------------------------------------------


def _adjacency_of(link) -> dict[int, set[int]]:
    if isinstance(link, LinkGraph):
        return {v: set(link.neighbour_labels[v]) for v in range(link.order)}
    return {u: set(ws) for u, ws in link.items()}


def _count_3_paths(adj: Mapping[int, set[int]], s: int, t: int) -> int:
    count = 0
    for a in adj[s]:
        if a == t:
            continue
        for b in adj[a]:
            if b in (s, t):
                continue
            if t in adj[b]:
                count += 1
    return count


def root_is_rank2(link, path: Sequence[int]) -> bool:
    """True iff exactly two other 3-edge paths share the endpoints of ``path``.

    ``link`` is a :class:`LinkGraph` or an adjacency mapping.
    """
    path = list(path)
    adj = _adjacency_of(link)
    if len(path) != 4 or len(set(path)) != 4:
        raise MalformedInputError("a root is a simple path with exactly three edges")
    for u, w in zip(path, path[1:]):
        if w not in adj.get(u, ()):
            raise MalformedInputError(f"({u}, {w}) is not an edge of the link")
    return _count_3_paths(adj, path[0], path[3]) == 3


def root_paths(link: LinkGraph) -> Iterator[tuple[tuple[int, int, int, int], tuple[int, int, int]]]:
    """All simple 3-edge paths (as vertex lists) with their edge labels."""
    for v0 in range(link.order):
        for v1, l1 in link.neighbour_labels[v0].items():
            for v2, l2 in link.neighbour_labels[v1].items():
                if v2 == v0:
                    continue
                for v3, l3 in link.neighbour_labels[v2].items():
                    if v3 in (v0, v1):
                        continue
                    yield (v0, v1, v2, v3), (l1[0], l2[0], l3[0])


def _third(face: tuple[int, int, int], u: int, v: int) -> int:
    return next(x for x in face if x != u and x != v)


def triangle_parities(ball: CellComplexBall, fid: int) -> set[int]:
    """Parities of the rank-2 root count over every choice of adjacent faces."""
    f = ball.faces[fid]
    if not all(ball.is_interior(v) for v in f):
        raise InsufficientNeighborhoodError(f"face {f} has a vertex on the boundary of the ball")
    x, y, z = f
    sides = [(y, z), (x, z), (x, y)]
    options = []
    for u, v in sides:
        others = [g for g in ball.faces_at_edge(u, v) if g != fid]
        if not others:
            raise InsufficientNeighborhoodError(f"side {(u, v)} of face {f} has no other face")
        options.append([_third(ball.faces[g], u, v) for g in others])
    adjs = {v: _adjacency_of(ball.link_adjacency(v)) for v in f}
    parities = set()
    for w1, w2, w3 in itertools.product(*options):
        # w1 across (y,z), w2 across (x,z), w3 across (x,y)
        roots = {x: (w3, y, z, w2), y: (w3, x, z, w1), z: (w2, x, y, w1)}
        rank2 = sum(_count_3_paths(adjs[v], r[0], r[3]) == 3 for v, r in roots.items())
        parities.add(rank2 % 2)
    return parities


def triangle_is_odd(ball: CellComplexBall, fid: int) -> bool:
    """Odd number of rank-2 roots; raises if the parity depends on the adjacent faces chosen."""
    parities = triangle_parities(ball, fid)
    if len(parities) != 1:
        raise IllDefinedParityError(f"face {ball.faces[fid]} has parity depending on choices")
    return parities == {1}


# isomorphisms --------------------------------------------------------------------


def _propagate(
    b1: CellComplexBall,
    b2: CellComplexBall,
    seed: Mapping[int, int],
    start_faces: Iterable[int],
    preserve_colours: bool,
) -> dict[int, int] | None:
    """Extend a vertex map across faces, matching faces by label; ``None`` on any conflict."""
    fwd = dict(seed)
    if len(set(fwd.values())) != len(fwd):
        return None
    bwd = {x: u for u, x in fwd.items()}
    queue = deque(start_faces)
    done = set(queue)
    while queue:
        fid = queue.popleft()
        face = b1.faces[fid]
        for u, v in itertools.combinations(face, 2):
            targets = {b2.face_labels[g]: g for g in b2.faces_at_edge(fwd[u], fwd[v])}
            for g in b1.faces_at_edge(u, v):
                lab = b1.face_labels[g]
                g2 = targets.get(lab)
                if g2 is None:
                    return None
                w = _third(b1.faces[g], u, v)
                w2 = _third(b2.faces[g2], fwd[u], fwd[v])
                if w in fwd:
                    if fwd[w] != w2:
                        return None
                else:
                    if w2 in bwd:
                        return None
                    if preserve_colours and b1.colours[w] != b2.colours[w2]:
                        return None
                    fwd[w] = w2
                    bwd[w2] = w
                if g not in done:
                    done.add(g)
                    queue.append(g)
    if len(fwd) != b1.n_vertices or b1.n_vertices != b2.n_vertices or len(b1.faces) != len(b2.faces):
        return None
    for g, face in enumerate(b1.faces):
        image = tuple(sorted(fwd[v] for v in face))
        g2 = b2.face_index.get(image)
        if g2 is None or b2.face_labels[g2] != b1.face_labels[g]:
            return None
    return fwd


def _face_seeds(b1, b2, fid, preserve_colours):
    """Vertex maps sending face ``fid`` of b1 onto a same-label face at b2's centre."""
    face = b1.faces[fid]
    c1, c2 = b1.center, b2.center
    others1 = [v for v in face if v != c1]
    for g in b2.vertex_faces[c2]:
        if b2.face_labels[g] != b1.face_labels[fid]:
            continue
        others2 = [v for v in b2.faces[g] if v != c2]
        for perm in (others2, others2[::-1]):
            seed = {c1: c2, others1[0]: perm[0], others1[1]: perm[1]}
            if preserve_colours and any(b1.colours[u] != b2.colours[x] for u, x in seed.items()):
                continue
            yield g, seed


def ball_isomorphism(
    b1: CellComplexBall,
    b2: CellComplexBall,
    preserve_colours: bool = True,
    preferred: Iterable[Mapping[int, int]] = (),
) -> dict[int, int] | None:
    """A face-label-preserving isomorphism fixing the centres, or ``None``.

    Every such map is determined by the image of one face at the centre,
    so the search tries ``preferred`` seeds first and then each candidate
    face in ascending order.
    """
    if b1.n_vertices != b2.n_vertices or len(b1.faces) != len(b2.faces):
        return None
    if preserve_colours and b1.colours[b1.center] != b2.colours[b2.center]:
        return None
    fid = min(b1.vertex_faces[b1.center])
    for seed in preferred:
        f = _propagate(b1, b2, seed, [fid], preserve_colours)
        if f is not None:
            return f
    for _, seed in _face_seeds(b1, b2, fid, preserve_colours):
        f = _propagate(b1, b2, seed, [fid], preserve_colours)
        if f is not None:
            return f
    return None


def polarity_seed(
    spec1: ComplexSpec, spec2: ComplexSpec, b1: CellComplexBall, b2: CellComplexBall, p: int = 0
) -> dict[int, int]:
    """Centre-link map induced by polarity ``p`` when the centre's tau differs, else the identity."""
    j = b1.colours[b1.center]
    link = spec1.link(j)
    if spec1.taus[j - 1] != spec2.taus[j - 1]:
        mapping = polarity(link, p).mapping
    else:
        mapping = tuple(range(link.order))
    seed = {b1.center: b2.center}
    for x, u in b1.center_link.items():
        seed[u] = b2.center_link[mapping[x]]
    return seed


def sign_variants_isomorphic(
    spec: ComplexSpec,
    signs1: Sequence[str],
    signs2: Sequence[str],
    radius: int = 2,
    center_colour: int = 1,
) -> bool:
    """Whether the balls of the two sign variants are isomorphic (labels and colours kept)."""
    s1, s2 = spec.with_signs(signs1), spec.with_signs(signs2)
    b1 = build_ball(s1, radius, center_colour=center_colour)
    b2 = build_ball(s2, radius, center_colour=center_colour)
    return ball_isomorphism(b1, b2, preferred=[polarity_seed(s1, s2, b1, b2)]) is not None


def vertex_transitivity_check(spec: ComplexSpec, radius: int = 2) -> bool:
    """Balls around centres of every pair of colours are face-label isomorphic."""
    balls = {j: build_ball(spec, radius, center_colour=j) for j in COLOURS}
    for j, k in itertools.combinations(COLOURS, 2):
        if ball_isomorphism(balls[j], balls[k], preserve_colours=False) is None:
            return False
    return True


# embedding puzzle disks ---------------------------------------------------------


def star_seeds(ball: CellComplexBall, lab: FaceLabelling, center=(0, 0), at: int | None = None) -> list[dict]:
    """Every type- and label-preserving map of the lattice star of ``center`` into the star of ``at``."""
    at = ball.center if at is None else at
    nbrs, faces = star(center)
    if any(f not in lab.labels for f in faces):
        raise MalformedInputError("labelling does not cover the star of the centre")
    if ball.colours[at] != vertex_type(*center):
        return []
    out = []
    for g in ball.vertex_faces[at]:
        if ball.face_labels[g] != lab.labels[faces[0]]:
            continue
        seed = {center: at}
        ok = True
        for p in face_vertices(faces[0]):
            if p == center:
                continue
            match = [w for w in ball.faces[g] if w != at and ball.colours[w] == vertex_type(*p)]
            if len(match) != 1:
                ok = False
                break
            seed[p] = match[0]
        if not ok:
            continue
        try:
            emb = _embed_faces(ball, FaceLabelling({f: lab.labels[f] for f in faces}), seed)
        except NoExtensionError:
            continue
        out.append({p: emb[p] for p in [center, *nbrs]})
    return out


def _embed_faces(ball: CellComplexBall, lab: FaceLabelling, seed: Mapping) -> dict:
    emb = dict(seed)
    used = {}
    for p, w in emb.items():
        if w in used:
            raise NoExtensionError("seed is not injective")
        used[w] = p
    labels = lab.labels
    mapped = [f for f in labels if all(p in emb for p in face_vertices(f))]
    for f in mapped:
        image = tuple(sorted(emb[p] for p in face_vertices(f)))
        g = ball.face_index.get(image)
        if g is None or ball.face_labels[g] != labels[f]:
            raise NoExtensionError(f"seed does not map face {f} onto a face labelled {labels[f]}")
    if not mapped and labels:
        raise NoExtensionError("seed covers no face of the labelling")
    queue = deque(mapped)
    done = set(mapped)
    while queue:
        f = queue.popleft()
        pts = face_vertices(f)
        for p, q in itertools.combinations(pts, 2):
            for nf in _faces_on_lattice_edge(p, q):
                if nf in done or nf not in labels:
                    continue
                r = next(x for x in face_vertices(nf) if x != p and x != q)
                cands = [g for g in ball.faces_at_edge(emb[p], emb[q]) if ball.face_labels[g] == labels[nf]]
                if not cands:
                    if not (ball.is_interior(emb[p]) or ball.is_interior(emb[q])):
                        raise OutOfBallError(f"face {nf} falls outside the ball")
                    raise NoExtensionError(f"no face labelled {labels[nf]} across the image of {(p, q)}")
                if len(cands) > 1:
                    raise AssertionError("two faces with one label on an edge: colouring is not complete")
                w = _third(ball.faces[cands[0]], emb[p], emb[q])
                if r in emb:
                    if emb[r] != w:
                        raise NoExtensionError(f"ring mismatch at lattice vertex {r}")
                else:
                    if w in used:
                        raise NoExtensionError("extension is not injective")
                    if ball.colours[w] != vertex_type(*r):
                        raise NoExtensionError(f"vertex type mismatch at lattice vertex {r}")
                    emb[r] = w
                    used[w] = r
                done.add(nf)
                queue.append(nf)
    return emb


def _faces_on_lattice_edge(p, q) -> list:
    out = []
    for v in (p, q):
        for f in star(v)[1]:
            pts = face_vertices(f)
            if p in pts and q in pts and f not in out:
                out.append(f)
    return out


def embed_disk(ball: CellComplexBall, lab: FaceLabelling, seed: Mapping, center=(0, 0)) -> dict:
    """Extend a label-preserving map of the centre star to the whole labelled disk.

    Every step has at most one candidate face, so a returned embedding is
    the unique extension of ``seed``.
    """
    seed = {tuple(p): int(w) for p, w in seed.items()}
    if tuple(center) not in seed:
        raise MalformedInputError("seed must map the centre of the disk")
    radius = max(hex_distance(p, center) for f in lab.labels for p in face_vertices(f))
    if radius + ball.layer[seed[tuple(center)]] > ball.radius:
        raise OutOfBallError(f"disk of radius {radius} does not fit in a ball of radius {ball.radius}")
    return _embed_faces(ball, lab, seed)


# extension uniqueness ------------------------------------------------------------


def count_extensions(
    b1: CellComplexBall,
    b2: CellComplexBall,
    seed: Mapping[int, int],
    limit: int | None = None,
) -> int:
    """Number of simplicial isomorphisms b1 -> b2 (labels ignored) extending ``seed``."""
    if b1.n_vertices != b2.n_vertices or len(b1.faces) != len(b2.faces):
        return 0
    fwd = dict(seed)
    bwd = {x: u for u, x in fwd.items()}
    if len(bwd) != len(fwd):
        return 0
    nb1 = _vertex_neighbours(b1)
    nb2 = _vertex_neighbours(b2)

    def consistent(w: int, x: int) -> bool:
        if x in bwd or b1.layer[w] != b2.layer[x] or len(b1.vertex_faces[w]) != len(b2.vertex_faces[x]):
            return False
        for fid in b1.vertex_faces[w]:
            others = [v for v in b1.faces[fid] if v != w]
            if all(v in fwd for v in others):
                if tuple(sorted((x, fwd[others[0]], fwd[others[1]]))) not in b2.face_index:
                    return False
        for gid in b2.vertex_faces[x]:
            others = [v for v in b2.faces[gid] if v != x]
            if all(v in bwd for v in others):
                if tuple(sorted((w, bwd[others[0]], bwd[others[1]]))) not in b1.face_index:
                    return False
        return True

    for u, x in seed.items():
        del fwd[u], bwd[x]
        if not consistent(u, x):
            return 0
        fwd[u], bwd[x] = x, u

    def candidates(w: int) -> list[int] | None:
        """Images for ``w`` forced by mapped neighbours; ``None`` when unconstrained."""
        cands = None
        for fid in b1.vertex_faces[w]:
            u, v = (y for y in b1.faces[fid] if y != w)
            if u in fwd and v in fwd:
                opts = {_third(b2.faces[g], fwd[u], fwd[v]) for g in b2.faces_at_edge(fwd[u], fwd[v])}
                cands = opts if cands is None else cands & opts
        if cands is None:
            mapped_nbrs = [u for u in nb1[w] if u in fwd]
            if not mapped_nbrs:
                return None
            cands = set(nb2[fwd[mapped_nbrs[0]]])
            for u in mapped_nbrs[1:]:
                cands &= nb2[fwd[u]]
        return sorted(x for x in cands if consistent(w, x))

    found = 0

    def search() -> bool:
        nonlocal found
        trail = []
        try:
            while True:
                best, best_c = None, None
                for w in range(b1.n_vertices):
                    if w in fwd:
                        continue
                    c = candidates(w)
                    if c is None:
                        continue
                    if best_c is None or len(c) < len(best_c):
                        best, best_c = w, c
                        if len(c) <= 1:
                            break
                if best is None:
                    if len(fwd) == b1.n_vertices:
                        found += 1
                    return limit is not None and found >= limit
                if not best_c:
                    return False
                if len(best_c) == 1:
                    x = best_c[0]
                    fwd[best], bwd[x] = x, best
                    trail.append(best)
                    continue
                for x in best_c:
                    fwd[best], bwd[x] = x, best
                    stop = search()
                    del bwd[fwd.pop(best)]
                    if stop:
                        return True
                return False
        finally:
            for w in trail:
                del bwd[fwd.pop(w)]

    search()
    return found


def _vertex_neighbours(b: CellComplexBall) -> list[set[int]]:
    out: list[set[int]] = [set() for _ in range(b.n_vertices)]
    for a, c in b.edge_faces:
        out[a].add(c)
        out[c].add(a)
    return out


def is_odd_mk_spec(spec: ComplexSpec) -> bool:
    mk = canonical_mk()
    if any(is_isomorphic(spec.link(j), mk) is None for j in COLOURS):
        return False
    for j in COLOURS:
        ball = build_ball(spec, 2, center_colour=j)
        for fid in ball.vertex_faces[ball.center]:
            if not triangle_is_odd(ball, fid):
                return False
    return True


def extension_uniqueness_check(
    spec: ComplexSpec,
    spec2: ComplexSpec,
    radius: int = 2,
    phi1: Mapping[int, int] | None = None,
) -> bool:
    """Exactly one isomorphism of radius balls extends the given 1-ball isomorphism.

    ``phi1`` maps centre-link vertices of ``spec`` (model indices) to
    centre-link vertices of ``spec2`` and must be a graph isomorphism of
    the two links; it defaults to the identity.
    """
    for s in (spec, spec2):
        if not is_odd_mk_spec(s):
            raise SpecNotOddError("extension uniqueness needs odd Moebius-Kantor specs")
    b1 = build_ball(spec, radius)
    b2 = build_ball(spec2, radius)
    link1, link2 = spec.link(1), spec2.link(1)
    if phi1 is None:
        phi1 = {x: x for x in range(link1.order)}
    for u in range(link1.order):
        for w in link1.neighbour_labels[u]:
            if phi1[w] not in link2.neighbour_labels[phi1[u]]:
                raise MalformedInputError("phi1 is not an isomorphism of the centre links")
    seed = {b1.center: b2.center}
    for x, u in b1.center_link.items():
        seed[u] = b2.center_link[phi1[x]]
    return count_extensions(b1, b2, seed, limit=2) == 1


def extend_ball_map(
    b1: CellComplexBall, b2: CellComplexBall, seed: Mapping[int, int], preserve_colours: bool = True
) -> dict[int, int] | None:
    """The face-label-preserving isomorphism determined by ``seed``, if there is one."""
    fids = [f for f, face in enumerate(b1.faces) if all(v in seed for v in face)]
    if not fids:
        raise MalformedInputError("seed must cover at least one face")
    return _propagate(b1, b2, seed, fids[:1], preserve_colours)
