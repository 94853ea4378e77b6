"""The acceptance suite: fourteen exact checks, each with a wall-clock limit."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import cellcomplex as cx
from .linkgraph import (
    automorphisms,
    build_link,
    canonical_heawood,
    canonical_mk,
    extend_tripod,
    girth,
    is_isomorphic,
    polarity,
    two_arc_transitive,
)
from .puzzle import solve_disk
from .rings import rings_from_collisions, rings_from_hexagons
from .sidon import alternating_collisions, greedy_extend, verify_sidon, verify_sidon_mod
from .linkgraph import hexagons

DEFAULT_SEED = 20240601


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f}s / {self.limit:g}s) {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "detail": self.detail,
        }


def random_sidon(rng: random.Random, n: int, max_term: int) -> tuple[int, ...]:
    """A random Sidon sequence 0 = a_0 < ... < a_n built by rejection."""
    while True:
        seq = [0]
        pool = list(range(1, max_term + 1))
        rng.shuffle(pool)
        for x in pool:
            if len(seq) == n + 1:
                break
            cand = sorted(seq + [x])
            if verify_sidon(cand):
                seq = cand
        if len(seq) == n + 1:
            return tuple(seq)


def _random_sidon_mod(rng: random.Random) -> tuple[tuple[int, ...], int]:
    n = rng.randint(2, 4)
    seq = random_sidon(rng, n, 6 * n)
    N = rng.randint(2 * seq[-1] + 1, 2 * seq[-1] + 10)
    return seq, N


def c1(rng):
    checks = [
        verify_sidon((0, 2, 7, 8, 11)),
        all(not verify_sidon_mod((0, 1, 3), N) for N in range(2, 7)),
        verify_sidon_mod((0, 1, 3), 7),
        verify_sidon_mod((0, 1, 3, 7, 20), 35),
        verify_sidon_mod((0, 2, 7), 8),
    ]
    return all(checks), f"{sum(checks)}/5 facts"


def c2(rng):
    got = greedy_extend((0,), 10)
    return got == (0, 1, 3, 7, 12, 20, 30, 44, 65, 80, 96), str(got)


def c3(rng):
    bad = 0
    sidon_count = 0
    cases = 200
    for _ in range(cases):
        n = rng.randint(1, 6)
        N = rng.randint(2, 200)
        top = rng.choice((N, 2 * N, 3 * n + 3))
        seq = tuple(sorted(rng.sample(range(top + n + 1), n + 1)))
        s = verify_sidon_mod(seq, N)
        sidon_count += s
        if s != (girth(build_link(seq, N)) >= 6):
            bad += 1
    return bad == 0, f"{cases} cases, {sidon_count} Sidon mod N, {bad} discrepancies"


def c4(rng):
    bad = 0
    for _ in range(50):
        seq = random_sidon(rng, rng.randint(1, 6), 40)
        top = 2 * seq[-1]
        if verify_sidon_mod(seq, top):
            bad += 1
        bad += sum(not verify_sidon_mod(seq, N) for N in range(top + 1, top + 51))
    return bad == 0, f"50 sequences, {bad} failures"


def c5(rng):
    s8 = build_link((0, 1, 3), 8)
    s7 = build_link((0, 1, 3), 7)
    checks = [
        is_isomorphic(s8, canonical_mk()) is not None,
        is_isomorphic(s7, canonical_heawood()) is not None,
        girth(s8) == 6,
        girth(s7) == 6,
        two_arc_transitive(canonical_mk()),
    ]
    return all(checks), f"{sum(checks)}/5 facts"


def c6(rng):
    specs = [((0, 1, 3), 8), ((0, 1, 3), 7)] + [_random_sidon_mod(rng) for _ in range(20)]
    bad = 0
    for seq, N in specs:
        g = build_link(seq, N)
        for p in range(len(seq)):
            a = polarity(g, p)
            if not (a.compose(a) == tuple(range(g.order)) and a.swaps_parity and a.preserves_edge_labels):
                bad += 1
    g = build_link((0, 1, 3), 8)
    unique = 0
    for _ in range(20):
        v, w = rng.randrange(g.order), rng.randrange(g.order)
        tree, image, phi0 = [], [], {v: w}
        for u, (c,) in g.neighbour_labels[v].items():
            x = next(y for y, cs in g.neighbour_labels[w].items() if cs == (c,))
            tree.append((v, u))
            image.append((w, x))
            phi0[u] = x
        auto = extend_tripod(g, tree, image, phi0)
        unique += all(auto(k) == x for k, x in phi0.items())
    return bad == 0 and unique == 20, f"{len(specs)} specs, {bad} bad polarities, {unique}/20 tripods"


def _pairs_hexagons(seq, N):
    return len(alternating_collisions(seq, N)), len(hexagons(build_link(seq, N)))


def c7(rng):
    specs = [((0, 1, 3), 7), ((0, 1, 3), 8)] + [_random_sidon_mod(rng) for _ in range(20)]
    agree = 0
    for seq, N in specs:
        sigma = list(range(len(seq)))
        rng.shuffle(sigma)
        tau = (2, 3) if rng.random() < 0.5 else (3, 2)
        a = rings_from_collisions(seq, N, sigma, tau, 1)
        b = rings_from_hexagons(build_link(seq, N, sigma, tau), 1)
        agree += a == b
    counts = (_pairs_hexagons((0, 1, 3), 7), _pairs_hexagons((0, 1, 3), 8))
    ok = agree == len(specs) and counts == ((12, 28), (9, 24))
    return ok, f"{agree}/{len(specs)} agree, (pairs, hexagons) mod 7/8 = {counts}"


def c8(rng):
    spec = cx.mk_spec()
    total = bad = 0
    for j in cx.COLOURS:
        link = spec.link(j)
        s0 = spec.sigmas[j - 1][0]
        for path, (b, a, c) in cx.root_paths(link):
            if b != c or a == b:
                continue
            total += 1
            bad += cx.root_is_rank2(link, path) != (a == s0)
    return bad == 0 and total > 0, f"{total} roots, {bad} mismatches"


def c9(rng):
    ball = cx.build_ball(cx.mk_spec(), 2)
    inner = [f for f, face in enumerate(ball.faces) if all(ball.is_interior(v) for v in face)]
    parities = [cx.triangle_parities(ball, f) for f in inner]
    ok = bool(inner) and all(p == {1} for p in parities)
    return ok, f"{len(inner)} interior faces, all odd: {ok}"


def c10(rng):
    spec = cx.mk_spec()
    signs = list(itertools.product("+-", repeat=3))
    good = sum(cx.sign_variants_isomorphic(spec, s, t, 2) for s, t in itertools.combinations(signs, 2))
    return good == 28, f"{good}/28 pairs isomorphic"


def c11(rng):
    spec = cx.modular_spec((0, 1, 3), (7, 7, 7))
    sols = solve_disk(spec.puzzle_instance(), 2, max_solutions=10**6)
    ball = cx.build_ball(spec, 3)
    embedded = 0
    seeds_total = 0
    for lab in sols:
        seeds = cx.star_seeds(ball, lab)
        seeds_total += len(seeds)
        for seed in seeds:
            emb = cx.embed_disk(ball, lab, seed)
            embedded += _is_label_embedding(ball, lab, emb)
    ok = bool(sols) and seeds_total > 0 and embedded == seeds_total and all(cx.star_seeds(ball, lab) for lab in sols)
    return ok, f"{len(sols)} disks, {embedded}/{seeds_total} seeded embeddings"


def _is_label_embedding(ball, lab, emb) -> bool:
    from .puzzle import face_vertices

    if len(set(emb.values())) != len(emb):
        return False
    for f, c in lab.labels.items():
        g = ball.face_index.get(tuple(sorted(emb[p] for p in face_vertices(f))))
        if g is None or ball.face_labels[g] != c:
            return False
    return True


def c12(rng):
    results = []
    for spec in (cx.modular_spec((0, 1, 3), (7, 7, 7)), cx.mk_spec()):
        s1, s2 = rng.sample(range(10**6), 2)
        b1 = cx.build_ball(spec, 2, completion_seed=s1)
        b2 = cx.build_ball(spec, 2, completion_seed=s2)
        results.append(cx.ball_isomorphism(b1, b2, preserve_colours=True) is not None)
    return all(results), f"Heawood {results[0]}, MK {results[1]}"


def c13(rng):
    a = cx.vertex_transitivity_check(cx.modular_spec((0, 1, 3), (7, 7, 7)), 2)
    b = cx.vertex_transitivity_check(cx.modular_spec((0, 1, 3), (7, 7, 8)), 1)
    return a and not b, f"(7,7,7) r=2 {a}, (7,7,8) r=1 {b}"


def c14(rng):
    spec = cx.mk_spec()
    auts = automorphisms(spec.link(1), respect_colours=True)
    chosen = [a for a in auts if a.is_identity()]
    others = [a for a in auts if not a.is_identity()]
    chosen += rng.sample(others, 5)
    counts = [cx.extension_uniqueness_check(spec, spec, 2, dict(enumerate(a.mapping))) for a in chosen]
    return all(counts), f"{sum(counts)}/{len(chosen)} maps with exactly one extension"


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "sidon basics", 1, c1),
    (2, "mian-chowla prefix", 1, c2),
    (3, "sidon-mod-N iff girth >= 6", 10, c3),
    (4, "threshold 2a_n + 1", 10, c4),
    (5, "link identification", 30, c5),
    (6, "polarities and tripods", 30, c6),
    (7, "ring cross-enumeration", 30, c7),
    (8, "root-rank lemma", 10, c8),
    (9, "oddness", 60, c9),
    (10, "sign independence", 120, c10),
    (11, "disk embedding", 120, c11),
    (12, "construction uniqueness", 60, c12),
    (13, "vertex transitivity", 60, c13),
    (14, "extension uniqueness", 120, c14),
]


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> Outcome:
    num, name, limit, fn = CRITERIA[number - 1]
    rng = random.Random(seed * 100 + num)
    start = time.perf_counter()
    try:
        ok, detail = fn(rng)
    except Exception as exc:  # report, do not crash the suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    return Outcome(num, name, ok and elapsed < limit, elapsed, limit, detail)


def run_all(seed: int = DEFAULT_SEED) -> list[Outcome]:
    return [run_criterion(n, seed) for n in range(1, len(CRITERIA) + 1)]
