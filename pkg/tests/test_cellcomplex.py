import itertools
import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from sidon_complex import cellcomplex as cx
from sidon_complex.errors import (
    BadBijectionError,
    InsufficientNeighborhoodError,
    MalformedInputError,
    NoExtensionError,
    OutOfBallError,
    SpecNotOddError,
)
from sidon_complex.linkgraph import automorphisms, girth, is_isomorphic, polarity
from sidon_complex.puzzle import FaceLabelling, disk_faces, face_vertices, solve_disk, star


@pytest.fixture(scope="module")
def mk():
    return cx.mk_spec()


@pytest.fixture(scope="module")
def heawood():
    return cx.modular_spec((0, 1, 3), (7, 7, 7))


@pytest.fixture(scope="module")
def mk_b2(mk):
    return cx.build_ball(mk, 2)


@pytest.fixture(scope="module")
def heawood_b3(heawood):
    return cx.build_ball(heawood, 3)


@pytest.fixture(scope="module")
def mod7_disks(heawood):
    return solve_disk(heawood.puzzle_instance(), 2, max_solutions=10**6)


def skeleton(ball, colours=True):
    g = nx.Graph()
    for v, c in enumerate(ball.colours):
        g.add_node(v, colour=c if colours else 0)
    g.add_edges_from(ball.edges())
    return g


# specs


def test_mk_spec_is_valid(mk):
    rep = cx.validate_spec(mk)
    assert rep.ok and not rep.violations
    assert [s[0] for s in mk.sigmas] == [0, 1, 2]


def test_mod6_spec_is_invalid():
    spec = cx.ComplexSpec.make([(0, 1, 3)] * 3, (6, 7, 7))
    rep = cx.validate_spec(spec)
    assert not rep.ok and not rep.checks["sidon-mod-1"]
    assert rep.checks["sidon-mod-2"]


def test_mismatched_lengths_invalid():
    spec = cx.ComplexSpec.make([(0, 1, 3), (0, 1), (0, 1, 3)], (7, 7, 7), [(0, 1, 2), (0, 1), (0, 1, 2)])
    assert not cx.validate_spec(spec).ok


def test_bad_tau_invalid():
    spec = cx.ComplexSpec.make([(0, 1, 3)] * 3, (7, 7, 7), taus=[(2, 3), (1, 2), (1, 2)])
    rep = cx.validate_spec(spec)
    assert not rep.ok and not rep.checks["tau-2"]


def test_signs_follow_tau(mk):
    assert mk.signs == ("+", "+", "+")
    flipped = mk.with_signs("-+-")
    assert flipped.signs == ("-", "+", "-")
    assert flipped.taus[0] == (3, 2)


def test_spec_json_roundtrip(mk):
    assert cx.ComplexSpec.from_json(mk.to_json()) == mk
    with pytest.raises(MalformedInputError):
        cx.ComplexSpec.from_json({"moduli": [7, 7, 7]})


def test_invalid_spec_refused_by_builder():
    with pytest.raises(BadBijectionError):
        cx.build_ball(cx.ComplexSpec.make([(0, 1, 3)] * 3, (6, 7, 7)), 1)


# balls


def test_radius_one_sizes(mk, heawood):
    b = cx.build_ball(mk, 1)
    assert (b.n_vertices, len(b.faces)) == (17, 24)
    b = cx.build_ball(heawood, 1)
    assert (b.n_vertices, len(b.faces)) == (15, 21)


def test_radius_two_and_three_sizes(mk_b2, heawood, heawood_b3):
    assert (mk_b2.n_vertices, len(mk_b2.faces)) == (161, 312)
    assert (cx.build_ball(heawood, 2).n_vertices, len(cx.build_ball(heawood, 2).faces)) == (113, 231)
    # the radius-3 ball of the order-2 building: 1 + 14 + 98 + 560 vertices
    assert heawood_b3.n_vertices == 673
    assert [heawood_b3.layer.count(k) for k in range(4)] == [1, 14, 98, 560]


def test_radius_must_be_positive(mk):
    with pytest.raises(MalformedInputError):
        cx.build_ball(mk, 0)


@pytest.mark.parametrize("radius", [1, 2, 3])
def test_built_balls_verify(mk, heawood, radius):
    for spec in (mk, heawood):
        rep = cx.verify_ball(cx.build_ball(spec, radius), spec)
        assert rep.ok, rep.violations


def test_interior_links_are_model_links(mk_b2, mk):
    for v in range(mk_b2.n_vertices):
        if mk_b2.is_interior(v):
            g, _ = mk_b2.link_graph(v)
            assert girth(g) >= 6
            assert is_isomorphic(g, mk.link(mk_b2.colours[v]), respect_labels=True) is not None


def test_radius_one_ball_checks_only_the_centre(mk):
    b = cx.build_ball(mk, 1)
    assert [v for v in range(b.n_vertices) if b.is_interior(v)] == [b.center]
    assert cx.verify_ball(b, mk).ok


def test_face_mutation_is_detected(mk):
    b = cx.build_ball(mk, 2)
    rng = random.Random(2)
    for fid in rng.sample(range(len(b.faces)), 10):
        mutated = cx.build_ball(mk, 2)
        mutated.face_labels[fid] = (mutated.face_labels[fid] + 1) % 3
        assert not cx.verify_ball(mutated, mk).ok


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from(["mk", "heawood"]))
def test_completion_order_does_not_matter(s1, s2, which):
    spec = cx.mk_spec() if which == "mk" else cx.modular_spec((0, 1, 3), (7, 7, 7))
    b1 = cx.build_ball(spec, 2, completion_seed=s1)
    b2 = cx.build_ball(spec, 2, completion_seed=s2)
    assert cx.verify_ball(b1, spec).ok
    f = cx.ball_isomorphism(b1, b2)
    assert f is not None
    assert all(b1.colours[v] == b2.colours[f[v]] for v in f)


def test_ball_isomorphism_agrees_with_networkx(heawood):
    b1 = cx.build_ball(heawood, 2, completion_seed=11)
    b2 = cx.build_ball(heawood, 2)
    match = nx.algorithms.isomorphism.categorical_node_match("colour", None)
    assert nx.is_isomorphic(skeleton(b1), skeleton(b2), node_match=match)
    assert cx.ball_isomorphism(b1, b2) is not None


def test_ball_json_roundtrip(mk_b2):
    back = cx.CellComplexBall.from_json(mk_b2.to_json())
    assert back.faces == mk_b2.faces and back.colours == mk_b2.colours
    assert back.layer == mk_b2.layer
    assert cx.ball_isomorphism(back, mk_b2) is not None


def test_ball_json_schema(mk):
    obj = cx.build_ball(mk, 1).to_json()
    assert set(obj) == {"vertices", "edges", "faces", "center", "radius"}
    assert obj["faces"][0].keys() == {"v", "w", "x", "colour"}
    assert all(len(set(e["colour"])) == 2 for e in obj["edges"])


def test_dot_export(mk):
    dot = cx.build_ball(mk, 1).to_dot()
    assert dot.startswith("graph X {") and dot.count("--") == 16 + 24


# roots


def test_root_rank_lemma_exhaustive(mk):
    seen = {True: 0, False: 0}
    for j in (1, 2, 3):
        link = mk.link(j)
        s0 = mk.sigmas[j - 1][0]
        for path, (b, a, c) in cx.root_paths(link):
            if b != c:
                continue
            assert cx.root_is_rank2(link, path) == (a == s0)
            seen[a == s0] += 1
    assert seen[True] and seen[False]


def test_root_rank_brute_force_count(mk):
    link = mk.link(1)
    for path, _ in itertools.islice(cx.root_paths(link), 40):
        ends = (path[0], path[3])
        count = sum(1 for p, _ in cx.root_paths(link) if (p[0], p[3]) == ends)
        assert cx.root_is_rank2(link, path) == (count == 3)


def test_malformed_roots(mk):
    link = mk.link(1)
    with pytest.raises(MalformedInputError):
        cx.root_is_rank2(link, [0, 15, 0])
    with pytest.raises(MalformedInputError):
        cx.root_is_rank2(link, [0, 2, 4, 6])


# oddness


def test_interior_faces_of_b2_are_odd(mk_b2):
    inner = [f for f, face in enumerate(mk_b2.faces) if all(mk_b2.is_interior(v) for v in face)]
    assert len(inner) == 24
    for f in inner:
        assert cx.triangle_parities(mk_b2, f) == {1}
        assert cx.triangle_is_odd(mk_b2, f)


def test_interior_faces_of_b3_are_odd(mk):
    b = cx.build_ball(mk, 3)
    inner = [f for f, face in enumerate(b.faces) if all(b.is_interior(v) for v in face)]
    assert len(inner) == 312
    assert all(cx.triangle_parities(b, f) == {1} for f in inner)


def test_boundary_face_has_insufficient_neighbourhood(mk_b2):
    outer = next(f for f, face in enumerate(mk_b2.faces) if not all(mk_b2.is_interior(v) for v in face))
    with pytest.raises(InsufficientNeighborhoodError):
        cx.triangle_is_odd(mk_b2, outer)


def test_oddness_detects_even_faces():
    spec = cx.ComplexSpec.make([(0, 1, 3)] * 3, (8, 8, 8))
    b = cx.build_ball(spec, 2)
    assert {cx.triangle_is_odd(b, f) for f in b.vertex_faces[b.center]} == {True, False}


# signs and polarities


def test_sign_flip_example(mk):
    assert cx.sign_variants_isomorphic(mk, "+++", "-++", 2)
    assert cx.sign_variants_isomorphic(mk, "+-+", "+-+", 2)


def test_all_sign_vectors_pairwise(mk):
    signs = list(itertools.product("+-", repeat=3))
    for s, t in itertools.combinations(signs, 2):
        assert cx.sign_variants_isomorphic(mk, s, t, 2)


@pytest.mark.parametrize("j", [1, 2, 3])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_polarity_lifts_to_radius_one(mk, j, p):
    signs = ["+"] * 3
    flipped = list(signs)
    flipped[j - 1] = "-"
    s1, s2 = mk.with_signs(signs), mk.with_signs(flipped)
    b1 = cx.build_ball(s1, 1, center_colour=j)
    b2 = cx.build_ball(s2, 1, center_colour=j)
    seed = cx.polarity_seed(s1, s2, b1, b2, p)
    f = cx.extend_ball_map(b1, b2, seed)
    assert f is not None and all(f[u] == x for u, x in seed.items())
    assert polarity(s1.link(j), p).preserves_edge_labels


# transitivity


def test_modular_spec_is_transitive(heawood):
    assert cx.vertex_transitivity_check(heawood, 2)


def test_mixed_moduli_not_transitive():
    assert not cx.vertex_transitivity_check(cx.modular_spec((0, 1, 3), (7, 7, 8)), 1)


def test_centre_compared_with_itself(mk):
    b = cx.build_ball(mk, 2)
    assert cx.ball_isomorphism(b, b) is not None


# embedding


def test_disks_embed_from_every_seed(heawood_b3, mod7_disks):
    rng = random.Random(4)
    for lab in rng.sample(mod7_disks, 60):
        seeds = cx.star_seeds(heawood_b3, lab)
        assert seeds
        for seed in seeds:
            emb = cx.embed_disk(heawood_b3, lab, seed)
            assert len(set(emb.values())) == len(emb) == 19
            for f, c in lab.labels.items():
                g = heawood_b3.face_index[tuple(sorted(emb[p] for p in face_vertices(f)))]
                assert heawood_b3.face_labels[g] == c
            for p, w in emb.items():
                assert heawood_b3.colours[w] == (p[0] + 2 * p[1]) % 3 + 1


def test_star_alone_returns_seed(heawood_b3, mod7_disks):
    lab = mod7_disks[0].restrict(star((0, 0))[1])
    seed = cx.star_seeds(heawood_b3, lab)[0]
    assert cx.embed_disk(heawood_b3, lab, seed) == seed


def test_large_disk_leaves_small_ball(heawood):
    b = cx.build_ball(heawood, 2)
    lab = FaceLabelling({f: 0 for f in disk_faces((0, 0), 3)})
    with pytest.raises(OutOfBallError):
        cx.embed_disk(b, lab, {(0, 0): b.center})


def test_embedding_restricts_to_smaller_disk(heawood_b3, mod7_disks):
    lab = mod7_disks[500]
    small = lab.restrict(disk_faces((0, 0), 1))
    for seed in cx.star_seeds(heawood_b3, lab):
        big = cx.embed_disk(heawood_b3, lab, seed)
        part = cx.embed_disk(heawood_b3, small, seed)
        assert all(big[p] == w for p, w in part.items())


def test_mismatched_labels_do_not_embed(heawood_b3, mod7_disks):
    lab = mod7_disks[0]
    seed = cx.star_seeds(heawood_b3, lab)[0]
    f = disk_faces((0, 0), 2)[-1]
    broken = FaceLabelling({**lab.labels, f: (lab[f] + 1) % 3})
    with pytest.raises(NoExtensionError):
        cx.embed_disk(heawood_b3, broken, seed)


# extension uniqueness


def test_identity_has_unique_extension(mk):
    assert cx.extension_uniqueness_check(mk, mk, 2)


def test_link_automorphisms_have_unique_extensions(mk):
    auts = [a for a in automorphisms(mk.link(1), respect_colours=True) if not a.is_identity()]
    rng = random.Random(9)
    for a in rng.sample(auts, 4):
        assert cx.extension_uniqueness_check(mk, mk, 2, dict(enumerate(a.mapping)))


def test_extension_count_is_exact(mk):
    b1 = cx.build_ball(mk, 2)
    b2 = cx.build_ball(mk, 2, completion_seed=3)
    seed = {b1.center: b2.center}
    f = cx.ball_isomorphism(b1, b2)
    for x in range(16):
        seed[b1.center_link[x]] = f[b1.center_link[x]]
    assert cx.count_extensions(b1, b2, seed) == 1
    # with only the centre fixed, every automorphism of the centre link extends exactly once
    assert cx.count_extensions(b1, b2, {b1.center: b2.center}) == len(automorphisms(mk.link(1))) == 96


def test_non_isomorphism_rejected(mk):
    with pytest.raises(MalformedInputError):
        cx.extension_uniqueness_check(mk, mk, 2, {x: (x + 1) % 16 for x in range(16)})


def test_heawood_spec_is_not_odd_mk(heawood):
    with pytest.raises(SpecNotOddError):
        cx.extension_uniqueness_check(heawood, heawood, 2)
