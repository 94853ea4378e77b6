"""Triangle ring puzzles on the standard triangular lattice.

Lattice vertices are integer pairs ``(x, y)`` standing for ``x*e1 + y*e2``
with ``e1 = (1, 0)`` and ``e2 = (1/2, sqrt(3)/2)``.  Faces are
``(x, y, UP)`` with corners ``(x,y), (x+1,y), (x,y+1)`` and
``(x, y, DOWN)`` with corners ``(x+1,y), (x,y+1), (x+1,y+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CoverageError, IncompleteStarError, MalformedInputError
from .rings import Ring, dihedral_images

__all__ = [
    "UP",
    "DOWN",
    "PuzzleInstance",
    "FaceLabelling",
    "PeriodicSolution",
    "vertex_type",
    "face_vertices",
    "star",
    "hex_distance",
    "disk_faces",
    "interior_vertices",
    "check_vertex",
    "check_disk",
    "solve_disk",
    "find_periodic",
    "expand_periodic",
    "render_disk",
]

UP, DOWN = 0, 1
_ORIENT_NAMES = ("up", "down")

Face = tuple[int, int, int]
Vertex = tuple[int, int]

# neighbours of a vertex in counterclockwise order, starting along e1
_NEIGHBOUR_STEPS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
# face between neighbour i and neighbour i+1, as an offset from the vertex
_STAR_FACES = ((0, 0, UP), (-1, 0, DOWN), (-1, 0, UP), (-1, -1, DOWN), (0, -1, UP), (0, -1, DOWN))


def vertex_type(x: int, y: int) -> int:
    """Vertex colour in {1, 2, 3}; the three corners of every face get distinct colours."""
    return (x + 2 * y) % 3 + 1


def face_vertices(face: Face) -> tuple[Vertex, Vertex, Vertex]:
    x, y, o = face
    if o == UP:
        return (x, y), (x + 1, y), (x, y + 1)
    return (x + 1, y), (x, y + 1), (x + 1, y + 1)


def star(v: Vertex) -> tuple[list[Vertex], list[Face]]:
    """The six neighbours and six faces around ``v``, counterclockwise."""
    x, y = v
    nbrs = [(x + dx, y + dy) for dx, dy in _NEIGHBOUR_STEPS]
    faces = [(x + dx, y + dy, o) for dx, dy, o in _STAR_FACES]
    return nbrs, faces


def hex_distance(v: Vertex, w: Vertex = (0, 0)) -> int:
    dx, dy = v[0] - w[0], v[1] - w[1]
    return (abs(dx) + abs(dy) + abs(dx + dy)) // 2


def _centroid(face: Face) -> tuple[float, float]:
    pts = face_vertices(face)
    cx = sum(x + y / 2 for x, y in pts) / 3
    cy = sum(y * math.sqrt(3) / 2 for _, y in pts) / 3
    return cx, cy


def disk_faces(center: Vertex, R: int) -> list[Face]:
    """Faces of the combinatorial R-disk, in spiral order (ring by ring, counterclockwise).

    ``R = 0`` is treated as the star of ``center``.
    """
    R = max(R, 1)
    cx, cy = center
    out = []
    for x in range(cx - R - 1, cx + R + 1):
        for y in range(cy - R - 1, cy + R + 1):
            for o in (UP, DOWN):
                f = (x, y, o)
                if all(hex_distance(v, center) <= R for v in face_vertices(f)):
                    out.append(f)
    ox, oy = cx + cy / 2, cy * math.sqrt(3) / 2

    def spiral_key(f):
        px, py = _centroid(f)
        ring = max(hex_distance(v, center) for v in face_vertices(f))
        angle = math.atan2(py - oy, px - ox) % (2 * math.pi)
        return ring, round(angle, 9), f

    return sorted(out, key=spiral_key)


def interior_vertices(center: Vertex, R: int) -> list[Vertex]:
    cx, cy = center
    return sorted(
        (x, y)
        for x in range(cx - R, cx + R + 1)
        for y in range(cy - R, cy + R + 1)
        if hex_distance((x, y), center) <= R - 1
    )


def _type_pattern(v: Vertex) -> tuple[int, ...]:
    nbrs, _ = star(v)
    return tuple(vertex_type(*n) for n in nbrs)


@dataclass(frozen=True)
class PuzzleInstance:
    """Ring sets keyed by vertex type 1, 2, 3; labels are ``0..n``."""

    n: int
    ring_sets: Mapping[int, frozenset[Ring]]

    def __post_init__(self):
        if set(self.ring_sets) != {1, 2, 3}:
            raise MalformedInputError("ring sets must be keyed exactly by vertex types 1, 2, 3")
        object.__setattr__(self, "ring_sets", {j: frozenset(rs) for j, rs in self.ring_sets.items()})
        for j, rs in self.ring_sets.items():
            for ring in rs:
                if ring.vertex_type != j or any(not 0 <= f <= self.n for f in ring.faces):
                    raise MalformedInputError(f"ring {ring} does not belong to type {j}")

    def allowed_words(self, v: Vertex) -> frozenset[tuple[int, ...]]:
        """Face words (counterclockwise from ``star``) accepted at lattice vertex ``v``."""
        return self._allowed(vertex_type(*v), _type_pattern(v))

    def _allowed(self, j: int, pattern: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
        cache = self.__dict__.setdefault("_cache", {})
        key = (j, pattern)
        if key not in cache:
            words = set()
            for ring in self.ring_sets[j]:
                for f, t in dihedral_images(ring.faces, ring.neighbor_types):
                    if t == pattern:
                        words.add(f)
            cache[key] = frozenset(words)
        return cache[key]

    def relabel(self, perm: Sequence[int]) -> "PuzzleInstance":
        return PuzzleInstance(self.n, {j: frozenset(r.relabel(perm) for r in rs) for j, rs in self.ring_sets.items()})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rings": {str(j): [r.to_json() for r in sorted(rs)] for j, rs in sorted(self.ring_sets.items())},
        }

    @classmethod
    def from_json(cls, obj) -> "PuzzleInstance":
        return cls(int(obj["n"]), {int(j): frozenset(Ring.from_json(r) for r in rs) for j, rs in obj["rings"].items()})


@dataclass
class FaceLabelling:
    labels: dict[Face, int] = field(default_factory=dict)

    @property
    def region(self) -> set[Face]:
        return set(self.labels)

    def __getitem__(self, face: Face) -> int:
        return self.labels[face]

    def relabel(self, perm: Sequence[int]) -> "FaceLabelling":
        return FaceLabelling({f: perm[c] for f, c in self.labels.items()})

    def restrict(self, faces: Iterable[Face]) -> "FaceLabelling":
        return FaceLabelling({f: self.labels[f] for f in faces})

    def key(self) -> tuple:
        return tuple(sorted(self.labels.items()))

    def to_json(self) -> dict:
        faces = sorted(self.labels)
        return {
            "region": [[x, y, _ORIENT_NAMES[o]] for x, y, o in faces],
            "labels": [self.labels[f] for f in faces],
        }

    @classmethod
    def from_json(cls, obj) -> "FaceLabelling":
        region, labels = obj["region"], obj["labels"]
        if len(region) != len(labels):
            raise MalformedInputError("region and labels differ in length")
        out = {}
        for (x, y, o), c in zip(region, labels):
            if o not in _ORIENT_NAMES:
                raise MalformedInputError(f"orientation must be 'up' or 'down', got {o!r}")
            out[(int(x), int(y), _ORIENT_NAMES.index(o))] = int(c)
        return cls(out)


def _star_word(lab: Mapping[Face, int], v: Vertex) -> tuple[int, ...]:
    _, faces = star(v)
    missing = [f for f in faces if f not in lab]
    if missing:
        raise IncompleteStarError(f"vertex {v}: faces {missing} are unlabelled")
    return tuple(lab[f] for f in faces)


def check_vertex(inst: PuzzleInstance, lab: FaceLabelling, v: Vertex) -> bool:
    """True iff the labelled star of ``v`` is an allowed ring of its type."""
    return _star_word(lab.labels, tuple(v)) in inst.allowed_words(tuple(v))


def check_disk(inst: PuzzleInstance, lab: FaceLabelling, center: Vertex, R: int) -> bool:
    """True iff every interior vertex of the R-disk around ``center`` passes :func:`check_vertex`."""
    missing = [f for f in disk_faces(center, R) if f not in lab.labels]
    if missing:
        raise CoverageError(f"{len(missing)} faces of the {R}-disk are unlabelled, e.g. {missing[0]}")
    return all(check_vertex(inst, lab, v) for v in interior_vertices(center, R))


# backtracking ----------------------------------------------------------------


def _search(
    order: Sequence,
    constraints: Mapping,  # constraint id -> (tuple of variables, allowed words)
    domain: Sequence[int],
    fixed: Mapping,
    limit: int | None,
):
    """Assign ``order`` left to right; every constraint's partial word must extend to an allowed word."""
    touching: dict = {}
    for cid, (vars_, _) in constraints.items():
        for var in vars_:
            touching.setdefault(var, []).append(cid)
    assign = dict(fixed)
    live = {cid: list(words) for cid, (_, words) in constraints.items()}

    def filter_for(cid):
        vars_, _ = constraints[cid]
        known = [(i, assign[v]) for i, v in enumerate(vars_) if v in assign]
        return [w for w in live[cid] if all(w[i] == c for i, c in known)]

    for cid in constraints:
        live[cid] = filter_for(cid)
        if not live[cid]:
            return
    free = [v for v in order if v not in assign]
    results = 0

    def rec(i):
        nonlocal results
        if i == len(free):
            results += 1
            yield dict(assign)
            return
        var = free[i]
        for c in domain:
            assign[var] = c
            saved = []
            ok = True
            for cid in touching.get(var, ()):
                new = filter_for(cid)
                saved.append((cid, live[cid]))
                live[cid] = new
                if not new:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
            for cid, old in reversed(saved):
                live[cid] = old
            del assign[var]
            if limit is not None and results >= limit:
                return

    yield from rec(0)


def solve_disk(
    inst: PuzzleInstance,
    R: int,
    max_solutions: int = 1000,
    seed: FaceLabelling | None = None,
    center: Vertex = (0, 0),
) -> list[FaceLabelling]:
    """Enumerate labellings of the R-disk whose interior vertices all carry allowed rings.

    Faces are filled in spiral order with labels in ascending order, so the
    output order is reproducible.  An empty list means unsatisfiable.
    """
    if R < 1:
        raise MalformedInputError("R must be >= 1")
    faces = disk_faces(center, R)
    fixed = {}
    if seed is not None:
        fixed = {f: c for f, c in seed.labels.items() if f in set(faces)}
    constraints = {}
    for v in interior_vertices(center, R):
        constraints[v] = (tuple(star(v)[1]), inst.allowed_words(v))
    out = []
    for sol in _search(faces, constraints, range(inst.n + 1), fixed, max_solutions):
        out.append(FaceLabelling({f: sol[f] for f in faces}))
        if len(out) >= max_solutions:
            break
    return out


# periodic solutions --------------------------------------------------------


def _norm2(v: Vertex) -> int:
    x, y = v
    return x * x + x * y + y * y


def _dot2(u: Vertex, v: Vertex) -> int:
    """Twice the Euclidean inner product of two lattice vectors."""
    return 2 * u[0] * v[0] + u[0] * v[1] + u[1] * v[0] + 2 * u[1] * v[1]


def reduce_basis(u: Vertex, v: Vertex) -> tuple[Vertex, Vertex]:
    """Lagrange-Gauss reduction for the triangular-lattice metric."""
    if _norm2(u) > _norm2(v):
        u, v = v, u
    while True:
        q = round(_dot2(u, v) / (2 * _norm2(u)))
        v = (v[0] - q * u[0], v[1] - q * u[1])
        if _norm2(v) >= _norm2(u):
            return u, v
        u, v = v, u


def _hnf(u: Vertex, v: Vertex) -> tuple[int, int, int]:
    """Hermite form ``(a, b, d)``: the lattice is spanned by ``(a, 0)`` and ``(b, d)``, ``0 <= b < a``."""
    (x1, y1), (x2, y2) = u, v
    # bring the y-coordinates to gcd form
    while y2 != 0:
        q = y1 // y2
        x1, y1, x2, y2 = x2, y2, x1 - q * x2, y1 - q * y2
    if y1 < 0:
        x1, y1 = -x1, -y1
    a = abs(x2)
    if a == 0 or y1 == 0:
        raise MalformedInputError("basis vectors are not independent")
    return a, x1 % a, y1


def _type_preserving(v: Vertex) -> bool:
    return (v[0] + 2 * v[1]) % 3 == 0


@dataclass(frozen=True)
class PeriodicSolution:
    """A doubly periodic labelling: ``fundamental`` covers one fundamental domain."""

    basis: tuple[Vertex, Vertex]
    fundamental: FaceLabelling

    @property
    def hnf(self) -> tuple[int, int, int]:
        return _hnf(*self.basis)

    def label(self, face: Face) -> int:
        return self.fundamental.labels[_reduce_face(face, self.hnf)]

    def to_json(self) -> dict:
        return {"basis": [list(self.basis[0]), list(self.basis[1])], "fundamental": self.fundamental.to_json()}

    @classmethod
    def from_json(cls, obj) -> "PeriodicSolution":
        u, v = obj["basis"]
        return cls((tuple(u), tuple(v)), FaceLabelling.from_json(obj["fundamental"]))


def _reduce_face(face: Face, hnf: tuple[int, int, int]) -> Face:
    a, b, d = hnf
    x, y, o = face
    k = y // d
    x, y = x - k * b, y - k * d
    return x % a, y, o


def _torus_faces(hnf) -> list[Face]:
    a, _, d = hnf
    return [(x, y, o) for y in range(d) for x in range(a) for o in (UP, DOWN)]


def _sublattices(max_period: float):
    """Hermite forms of type-preserving sublattices with a reduced basis of norm <= max_period."""
    bound = int(2 * max_period * max_period / math.sqrt(3)) + 1
    for a in range(3, bound + 1, 3):
        for d in range(1, bound // a + 1):
            for b in range(a):
                if not _type_preserving((b, d)):
                    continue
                u, v = reduce_basis((a, 0), (b, d))
                if _norm2(v) <= max_period * max_period:
                    yield (a, b, d), (u, v)


def _translations(hnf) -> list[Vertex]:
    """Type-preserving translations modulo the lattice (coset representatives)."""
    a, _, d = hnf
    return [(x, y) for y in range(d) for x in range(a) if _type_preserving((x, y))]


def _shift(lab: Mapping[Face, int], t: Vertex, hnf) -> dict[Face, int]:
    return {_reduce_face((x + t[0], y + t[1], o), hnf): c for (x, y, o), c in lab.items()}


def _canonical_torus(lab: Mapping[Face, int], hnf) -> tuple:
    faces = _torus_faces(hnf)
    best = None
    for t in _translations(hnf):
        shifted = _shift(lab, t, hnf)
        word = tuple(shifted[f] for f in faces)
        if best is None or word < best:
            best = word
    return best


def _is_primitive(lab: Mapping[Face, int], hnf) -> bool:
    for t in _translations(hnf):
        if t != (0, 0) and _shift(lab, t, hnf) == lab:
            return False
    return True


def find_periodic(inst: PuzzleInstance, max_period: float, max_solutions: int | None = None) -> list[PeriodicSolution]:
    """Doubly periodic solutions with period lattice inside the type-preserving sublattice.

    Each solution is listed once per exact period lattice and up to
    type-preserving translation; every one is re-verified on a disk covering
    two periods.
    """
    if max_period < 1:
        raise MalformedInputError("max_period must be >= 1")
    out = []
    for hnf, basis in _sublattices(max_period):
        faces = _torus_faces(hnf)
        a, _, d = hnf
        constraints = {}
        for y in range(d):
            for x in range(a):
                v = (x, y)
                vars_ = tuple(_reduce_face(f, hnf) for f in star(v)[1])
                constraints[v] = (vars_, inst.allowed_words(v))
        seen = set()
        for sol in _search(faces, constraints, range(inst.n + 1), {}, None):
            if not _is_primitive(sol, hnf):
                continue
            key = _canonical_torus(sol, hnf)
            if key in seen:
                continue
            seen.add(key)
            periodic = PeriodicSolution(basis, FaceLabelling(dict(zip(faces, key))))
            R = 2 * math.ceil(math.sqrt(_norm2(basis[1]))) + 1
            if not check_disk(inst, expand_periodic(periodic, R), (0, 0), R):
                raise AssertionError("periodic solution fails the disk check")  # solver bug
            out.append(periodic)
            if max_solutions is not None and len(out) >= max_solutions:
                return out
    return out


def expand_periodic(sol: PeriodicSolution, R: int, center: Vertex = (0, 0)) -> FaceLabelling:
    """The R-disk around ``center`` of the plane labelling generated by ``sol``."""
    return FaceLabelling({f: sol.label(f) for f in disk_faces(center, R)})


def transform_face(face: Face, vmap) -> Face:
    """Image of a face under a lattice point map (given as a function on vertices)."""
    pts = sorted(vmap(v) for v in face_vertices(face))
    (x0, y0) = pts[0]
    for cand in ((x0, y0, UP), (x0, y0 - 1, DOWN)):
        if sorted(face_vertices(cand)) == pts:
            return cand
    raise AssertionError(f"{face} has no image face")


def transform_periodic(sol: PeriodicSolution, linear) -> PeriodicSolution:
    """Apply a linear lattice symmetry (a function on vertices fixing the origin)."""
    u, v = (linear(b) for b in sol.basis)
    u, v = reduce_basis(u, v)
    hnf = _hnf(u, v)
    lab = {}
    for f, c in sol.fundamental.labels.items():
        lab[_reduce_face(transform_face(f, linear), hnf)] = c
    key = _canonical_torus(lab, hnf)
    return PeriodicSolution((u, v), FaceLabelling(dict(zip(_torus_faces(hnf), key))))


def render_disk(lab: FaceLabelling) -> str:
    """Rows of face labels, top row first; '.' marks an unlabelled face."""
    faces = lab.labels
    if not faces:
        return ""
    ys = [y for _, y, _ in faces]
    xs = [x for x, _, _ in faces]
    lines = []
    for y in range(max(ys), min(ys) - 1, -1):
        cells = []
        for x in range(min(xs), max(xs) + 1):
            for o in (UP, DOWN):
                c = faces.get((x, y, o))
                cells.append("." if c is None else str(c))
        lines.append(" " * (2 * (y - min(ys))) + " ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
