"""Rings: labelled length-6 cycles in a vertex link.

A ring is stored as two parallel cyclic words.  Going round the cycle
``v_0, e_0, v_1, e_1, ..., v_5, e_5``, ``faces[i]`` is the label of edge
``e_i`` and ``types[i]`` is the colour of vertex ``v_i``.  The dihedral
group acts on both words at once: rotation shifts both, reflection sends
``faces[i] -> faces[-i-1]`` and ``types[i] -> types[-i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MalformedInputError
from .linkgraph import LinkGraph, build_link, hexagons
from .sidon import alternating_collisions, as_sequence

__all__ = [
    "Ring",
    "dihedral_images",
    "canonical_ring",
    "untyped_key",
    "rings_from_collisions",
    "rings_from_hexagons",
    "ring_from_collision",
]

Word = tuple[int, ...]


def _rotate(word: Word, s: int) -> Word:
    return word[s:] + word[:s]


def dihedral_images(faces: Sequence[int], types: Sequence[int]) -> list[tuple[Word, Word]]:
    """All 12 images of ``(faces, types)`` under joint rotation/reflection."""
    faces, types = tuple(faces), tuple(types)
    rf = tuple(faces[(-i - 1) % 6] for i in range(6))
    rt = tuple(types[(-i) % 6] for i in range(6))
    out = []
    for f, t in ((faces, types), (rf, rt)):
        for s in range(6):
            out.append((_rotate(f, s), _rotate(t, s)))
    return out


@dataclass(frozen=True, order=True)
class Ring:
    """A typed ring in canonical form (lexicographically least dihedral image)."""

    vertex_type: int
    faces: Word
    neighbor_types: Word

    @property
    def canonical_key(self) -> bytes:
        return bytes([self.vertex_type, *self.faces, *self.neighbor_types])

    @property
    def untyped(self) -> Word:
        return untyped_key(self.faces)

    def relabel(self, perm: Sequence[int]) -> "Ring":
        return canonical_ring([perm[f] for f in self.faces], self.neighbor_types, self.vertex_type)

    def to_json(self) -> dict:
        return {
            "vertexType": self.vertex_type,
            "faces": list(self.faces),
            "neighborTypes": list(self.neighbor_types),
            "canonicalKey": self.canonical_key.hex(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Ring":
        ring = canonical_ring(obj["faces"], obj["neighborTypes"], obj["vertexType"])
        key = obj.get("canonicalKey")
        if key is not None and bytes.fromhex(key) != ring.canonical_key:
            raise MalformedInputError("canonicalKey does not match the ring words")
        return ring


def canonical_ring(faces: Sequence[int], types: Sequence[int], vertex_type: int = 0) -> Ring:
    faces = tuple(int(f) for f in faces)
    types = tuple(int(t) for t in types)
    if len(faces) != 6 or len(types) != 6:
        raise MalformedInputError("ring words must have length 6")
    k, l = types[0], types[1]
    if k == l or types != (k, l) * 3:
        raise MalformedInputError(f"neighbor types must alternate two values: {types}")
    if vertex_type in (k, l):
        raise MalformedInputError("neighbor types must differ from the vertex type")
    f, t = min(dihedral_images(faces, types))
    return Ring(int(vertex_type), f, t)


def untyped_key(faces: Sequence[int]) -> Word:
    """Dihedral-canonical face word with the vertex marks forgotten."""
    faces = tuple(faces)
    rev = faces[::-1]
    return min(_rotate(w, s) for w in (faces, rev) for s in range(6))


def ring_from_collision(pair, N: int, sigma: Sequence[int], tau: Sequence[int], seq: Sequence[int], vertex_type: int) -> Ring:
    """The ring traced by the two paths of a collision pair, based at vertex 0.

    Also checks that the two paths close up into a simple hexagon of S_N.
    """
    index = {a: r for r, a in enumerate(seq)}
    two_n = 2 * N

    def walk(triple):
        a, b, c = triple
        p1 = (2 * a - 1) % two_n
        p2 = (p1 - (2 * b - 1)) % two_n
        return p1, p2, (p2 + 2 * c - 1) % two_n

    p1, p2, end = walk(pair.first)
    q1, q2, end2 = walk(pair.second)
    if end != end2 or len({0, p1, p2, end, q1, q2}) != 6:
        raise AssertionError(f"collision {pair} does not trace a simple hexagon")
    a, b, c = pair.first
    a2, b2, c2 = pair.second
    faces = [sigma[index[x]] for x in (a, b, c, c2, b2, a2)]
    types = [tau[0], tau[1]] * 3
    return canonical_ring(faces, types, vertex_type)


def rings_from_collisions(
    seq: Sequence[int],
    N: int,
    sigma: Sequence[int] | None = None,
    tau: Sequence[int] | None = None,
    vertex_type: int = 1,
) -> set[Ring]:
    """Rings of type ``vertex_type`` obtained arithmetically from alternating-sum collisions."""
    seq = as_sequence(seq)
    sigma = tuple(range(len(seq))) if sigma is None else tuple(sigma)
    tau = _default_tau(vertex_type) if tau is None else tuple(tau)
    return {
        ring_from_collision(pair, N, sigma, tau, seq, vertex_type)
        for pair in alternating_collisions(seq, N)
    }


def _default_tau(j: int) -> tuple[int, int]:
    others = [c for c in (1, 2, 3) if c != j]
    return others[0], others[1]


def rings_from_hexagons(g: LinkGraph, vertex_type: int = 1) -> set[Ring]:
    """Rings read off every 6-cycle of a coloured link graph."""
    if g.edge_colours is None or g.vertex_colours is None:
        raise MalformedInputError("rings_from_hexagons needs edge and vertex colours")
    out = set()
    for verts, eids in hexagons(g):
        faces = [g.edge_colours[e] for e in eids]
        types = [g.vertex_colours[v] for v in verts]
        out.add(canonical_ring(faces, types, vertex_type))
    return out


def rings_for(seq, N, sigma=None, tau=None, vertex_type=1, method="collisions") -> set[Ring]:
    if method == "collisions":
        return rings_from_collisions(seq, N, sigma, tau, vertex_type)
    tau = _default_tau(vertex_type) if tau is None else tau
    return rings_from_hexagons(build_link(seq, N, sigma, tau), vertex_type)
