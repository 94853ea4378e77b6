"""Sidon sequences, modular thresholds and alternating-sum collisions."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MalformedInputError, ModulusTooSmallError, NotSidonError

__all__ = [
    "CollisionPair",
    "as_sequence",
    "verify_sidon",
    "verify_sidon_mod",
    "greedy_extend",
    "n_zero",
    "n_double_zero",
    "admissible_triples",
    "alternating_collisions",
]

Triple = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class CollisionPair:
    """Two distinct admissible triples with equal alternating sum mod N.

    ``first`` is always the lexicographically smaller triple.
    """

    residue: int
    first: Triple
    second: Triple

    def to_json(self) -> dict:
        return {"residue": self.residue, "first": list(self.first), "second": list(self.second)}

    @classmethod
    def from_json(cls, obj: dict) -> "CollisionPair":
        return cls(int(obj["residue"]), tuple(obj["first"]), tuple(obj["second"]))


def as_sequence(terms: Iterable[int]) -> tuple[int, ...]:
    """Validate and freeze a candidate Sidon sequence."""
    seq = tuple(int(t) for t in terms)
    if not seq:
        raise MalformedInputError("a sequence needs at least one term")
    if seq[0] < 0:
        raise MalformedInputError(f"terms must be nonnegative, got {seq[0]}")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise MalformedInputError(f"terms must be strictly increasing: {seq}")
    return seq


def _pair_sums(seq: Sequence[int]):
    for i, a in enumerate(seq):
        for b in seq[i:]:
            yield a + b


def verify_sidon(seq: Sequence[int]) -> bool:
    """True iff the sums ``a_i + a_j`` (i <= j) are pairwise distinct."""
    seq = as_sequence(seq)
    seen = set()
    for s in _pair_sums(seq):
        if s in seen:
            return False
        seen.add(s)
    return True


def verify_sidon_mod(seq: Sequence[int], N: int) -> bool:
    """True iff the sums ``a_i + a_j`` (i <= j) are pairwise distinct mod ``N``."""
    seq = as_sequence(seq)
    if N < 2:
        raise ModulusTooSmallError(f"modulus must be >= 2, got {N}")
    seen = set()
    for s in _pair_sums(seq):
        r = s % N
        if r in seen:
            return False
        seen.add(r)
    return True


def _require_sidon(seq):
    seq = as_sequence(seq)
    if not verify_sidon(seq):
        raise NotSidonError(f"{list(seq)} is not a Sidon sequence")
    return seq


def greedy_extend(seq: Sequence[int], count: int) -> tuple[int, ...]:
    """Append ``count`` terms, each the least integer keeping the Sidon property.

    Starting from ``(0,)`` this produces the Mian-Chowla sequence.
    """
    terms = list(_require_sidon(seq))
    if count < 0:
        raise MalformedInputError("count must be >= 0")
    sums = set(_pair_sums(terms))
    candidate = terms[-1] + 1
    for _ in range(count):
        while True:
            new = [candidate + t for t in terms]
            new.append(2 * candidate)
            # new sums are pairwise distinct since the terms are; only clashes with old sums matter
            if not sums.intersection(new):
                break
            candidate += 1
        terms.append(candidate)
        sums.update(new)
        candidate += 1
    return tuple(terms)


def n_zero(seq: Sequence[int]) -> int:
    """Least N0 such that ``seq`` is Sidon modulo every N >= N0, i.e. ``2*a_n + 1``."""
    seq = _require_sidon(seq)
    if len(seq) < 2:
        raise MalformedInputError("n_zero needs at least two terms")
    return max(2, 2 * seq[-1] + 1)


def n_double_zero(seq: Sequence[int]) -> int:
    """Least N >= 2 for which ``seq`` is a Sidon sequence modulo N (exhaustive search)."""
    seq = _require_sidon(seq)
    upper = max(2, 2 * seq[-1] + 1)
    for N in range(2, upper + 1):
        if verify_sidon_mod(seq, N):
            return N
    raise AssertionError("unreachable: Sidon mod 2*a_n+1 always holds")  # pragma: no cover


def admissible_triples(seq: Sequence[int]) -> list[Triple]:
    """Triples (a, b, c) of terms with a != b and b != c (a == c allowed)."""
    return [t for t in itertools.product(seq, repeat=3) if t[0] != t[1] and t[1] != t[2]]


def alternating_collisions(seq: Sequence[int], N: int) -> list[CollisionPair]:
    """All unordered pairs of distinct admissible triples with equal ``a - b + c`` mod N.

    Sorted by residue, then by the canonical (lexicographic) pair order.
    """
    seq = as_sequence(seq)
    if not verify_sidon_mod(seq, N):
        raise NotSidonError(f"{list(seq)} is not a Sidon sequence modulo {N}")
    buckets: dict[int, list[Triple]] = defaultdict(list)
    for t in admissible_triples(seq):
        buckets[(t[0] - t[1] + t[2]) % N].append(t)
    out = []
    for residue in sorted(buckets):
        for x, y in itertools.combinations(sorted(buckets[residue]), 2):
            # both follow from Sidon mod N; a violation means the caller's data is corrupt
            assert x[0] != y[0] and x[2] != y[2], (x, y)
            out.append(CollisionPair(residue, x, y))
    return out
