import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from sidon_complex.errors import (
    IndexOutOfRangeError,
    MalformedInputError,
    ModulusTooSmallError,
    NoExtensionError,
    SizeLimitError,
)
from sidon_complex.linkgraph import (
    LinkGraph,
    automorphisms,
    build_link,
    canonical_heawood,
    canonical_mk,
    extend_tripod,
    find_isomorphisms,
    girth,
    hexagons,
    is_isomorphic,
    polarity,
    two_arc_transitive,
)

from oracles import gp83, is_sidon, link_multigraph, multigraph_girth, six_cycles, to_nx

small_specs = st.tuples(
    st.lists(st.integers(0, 30), min_size=1, max_size=5, unique=True).map(sorted),
    st.integers(2, 40),
)


def test_s8_shape():
    g = build_link((0, 1, 3), 8)
    assert g.order == 16 and len(g.edges) == 24
    assert all(g.degree(v) == 3 for v in range(16))
    assert g.is_bipartite_by_parity()


def test_single_term_link_is_matching():
    g = build_link((0,), 2)
    assert g.order == 4
    assert {frozenset(e) for e in g.edges} == {frozenset((0, 3)), frozenset((2, 1))}
    assert girth(g) == math.inf
    assert not g.is_connected()


def test_non_sidon_input_has_four_cycle():
    assert girth(build_link((0, 1, 2), 9)) == 4


def test_build_link_rejects_small_modulus():
    with pytest.raises(ModulusTooSmallError):
        build_link((0, 1), 1)


@given(small_specs)
def test_build_link_matches_networkx_construction(spec):
    seq, N = spec
    g = build_link(seq, N)
    ref = link_multigraph(seq, N)
    assert nx.utils.edges_equal(sorted(map(sorted, g.edges)), sorted(map(sorted, ref.edges())))


@settings(max_examples=80)
@given(small_specs)
def test_girth_matches_networkx(spec):
    seq, N = spec
    assert girth(build_link(seq, N)) == multigraph_girth(link_multigraph(seq, N))


@settings(max_examples=150)
@given(small_specs)
def test_sidon_mod_iff_girth_at_least_six(spec):
    seq, N = spec
    assert is_sidon(seq, N) == (girth(build_link(seq, N)) >= 6)


def test_named_graph_girths():
    assert girth(build_link((0, 1, 3), 8)) == 6
    assert girth(build_link((0, 1, 3), 7)) == 6
    mk, hw = canonical_mk(), canonical_heawood()
    assert (mk.order, len(mk.edges), girth(mk)) == (16, 24, 6)
    assert (hw.order, len(hw.edges), girth(hw)) == (14, 21, 6)
    for g in (mk, hw):
        assert nx.is_bipartite(to_nx(g))
        assert all(g.degree(v) == 3 for v in range(g.order))


def test_canonical_mk_is_gp83():
    assert nx.is_isomorphic(nx.Graph(to_nx(canonical_mk())), gp83())


def test_canonical_heawood_matches_networkx():
    assert nx.is_isomorphic(nx.Graph(to_nx(canonical_heawood())), nx.heawood_graph())


def test_link_identifications():
    assert is_isomorphic(build_link((0, 1, 3), 8), canonical_mk()) is not None
    assert is_isomorphic(build_link((0, 1, 3), 7), canonical_heawood()) is not None
    assert is_isomorphic(build_link((0, 1, 3), 8), build_link((0, 1, 3), 7)) is None


def test_isomorphism_witness_is_valid():
    g, h = build_link((0, 1, 3), 8), canonical_mk()
    m = is_isomorphic(g, h)
    assert sorted(m.values()) == list(range(16))
    image = {frozenset((m[u], m[v])) for u, v in g.edges}
    assert image == {frozenset(e) for e in h.edges}


@settings(max_examples=25, deadline=None)
@given(small_specs, small_specs)
def test_isomorphism_agrees_with_networkx(a, b):
    g, h = build_link(*a), build_link(*b)
    ours = is_isomorphic(g, h) is not None
    assert ours == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_automorphism_group_orders():
    # frozen from networkx's isomorphism matcher
    assert len(automorphisms(canonical_mk())) == 96
    assert len(automorphisms(canonical_heawood())) == 336
    assert len(automorphisms(build_link((0, 1, 3), 8), respect_labels=True, respect_colours=False)) == 16


def test_automorphism_counts_match_networkx():
    for g in (canonical_mk(), canonical_heawood()):
        ng = nx.Graph(to_nx(g))
        ref = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(ng, ng).isomorphisms_iter())
        assert len(automorphisms(g)) == ref


def test_polarity_examples():
    g = build_link((0, 1, 3), 8)
    a0 = polarity(g, 0)
    assert a0(0) == 15 and a0(15) == 0
    assert all(a0(k) == (-k - 1) % 16 for k in range(16))
    assert polarity(g, 2)(0) == 5


def test_polarity_errors():
    g = build_link((0, 1, 3), 8)
    with pytest.raises(IndexOutOfRangeError):
        polarity(g, 3)
    with pytest.raises(MalformedInputError):
        polarity(canonical_mk(), 0)


@settings(max_examples=60)
@given(small_specs.filter(lambda s: is_sidon(s[0], s[1])), st.data())
def test_polarity_properties(spec, data):
    seq, N = spec
    g = build_link(seq, N, tau=(2, 3))
    p = data.draw(st.integers(0, len(seq) - 1))
    a = polarity(g, p)
    assert a.compose(a) == tuple(range(g.order))
    assert a.swaps_parity
    assert a.preserves_edge_labels


def _tripod(g, v):
    return [(v, u) for u in sorted(g.neighbour_labels[v])]


def test_extend_tripod_identity():
    g = build_link((0, 1, 3), 8)
    tree = _tripod(g, 0)
    auto = extend_tripod(g, tree, tree, {v: v for e in tree for v in e})
    assert auto.is_identity()


def test_extend_tripod_translation():
    g = build_link((0, 1, 3), 8)
    tree = _tripod(g, 0)
    image = [((u + 2) % 16, (v + 2) % 16) for u, v in tree]
    phi0 = {v: (v + 2) % 16 for e in tree for v in e}
    auto = extend_tripod(g, tree, image, phi0)
    assert auto.mapping == tuple((k + 2) % 16 for k in range(16))


def test_extend_tripod_rejects_leg_swap():
    g = build_link((0, 1, 3), 8)
    tree = _tripod(g, 0)
    legs = [u for _, u in tree]
    phi0 = {0: 0, legs[0]: legs[1], legs[1]: legs[0], legs[2]: legs[2]}
    with pytest.raises(NoExtensionError):
        extend_tripod(g, tree, tree, phi0)


def test_extend_tripod_random_pairs_unique():
    g = build_link((0, 1, 3), 8)
    rng = random.Random(5)
    for _ in range(20):
        v, w = rng.randrange(16), rng.randrange(16)
        tree, image, phi0 = [], [], {v: w}
        for u, cs in g.neighbour_labels[v].items():
            x = next(y for y, ds in g.neighbour_labels[w].items() if ds == cs)
            tree.append((v, u))
            image.append((w, x))
            phi0[u] = x
        auto = extend_tripod(g, tree, image, phi0)
        assert all(auto(k) == x for k, x in phi0.items())
        seeded = list(find_isomorphisms(g, g, respect_labels=True, seed=phi0, respect_colours=False))
        assert len(seeded) == 1


def test_extend_tripod_needs_tree():
    g = build_link((0, 1, 3), 8)
    with pytest.raises(MalformedInputError):
        extend_tripod(g, [(0, 15)], [(0, 15)], {0: 0, 15: 15})


def test_two_arc_transitivity():
    assert two_arc_transitive(canonical_mk())
    assert two_arc_transitive(canonical_heawood())
    assert not two_arc_transitive(build_link((0,), 2))
    with pytest.raises(SizeLimitError):
        two_arc_transitive(build_link((0, 1, 3), 40))


def test_hexagon_counts():
    s7, s8 = build_link((0, 1, 3), 7), build_link((0, 1, 3), 8)
    assert len(hexagons(s7)) == 28 == six_cycles(to_nx(s7))
    assert len(hexagons(s8)) == 24 == six_cycles(to_nx(s8))
    assert hexagons(build_link((0,), 2)) == []


@settings(max_examples=30, deadline=None)
@given(small_specs.filter(lambda s: is_sidon(s[0], s[1]) and s[1] <= 25))
def test_hexagons_match_networkx(spec):
    g = build_link(*spec)
    assert len(hexagons(g)) == six_cycles(to_nx(g))


def test_hexagons_are_closed_walks():
    g = build_link((0, 1, 3), 7)
    for verts, eids in hexagons(g):
        for i, e in enumerate(eids):
            assert set(g.edges[e]) == {verts[i], verts[(i + 1) % 6]}


def test_json_roundtrip():
    g = build_link((0, 1, 3), 8, (2, 0, 1), (3, 2))
    h = LinkGraph.from_json(g.to_json())
    assert h.edges == g.edges and h.edge_colours == g.edge_colours and h.vertex_colours == g.vertex_colours
    mk = canonical_mk()
    assert LinkGraph.from_json(mk.to_json()).edges == mk.edges


def test_json_rejects_inconsistent_edges():
    obj = build_link((0, 1, 3), 8).to_json()
    obj["edges"][0] = [0, 2] if obj["edges"][0][1] != 2 else [0, 0]
    with pytest.raises(MalformedInputError):
        LinkGraph.from_json(obj)


def test_dot_export():
    dot = build_link((0,), 2, tau=(1, 2)).to_dot()
    assert dot.startswith("graph S {")
    assert "0 -- 3 [label=0];" in dot
