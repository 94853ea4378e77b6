"""Brute-force reference implementations used to cross-check the package."""

from __future__ import annotations

import itertools
from collections import defaultdict

import networkx as nx


def is_sidon(seq, N=None):
    sums = []
    for i in range(len(seq)):
        for j in range(i, len(seq)):
            s = seq[i] + seq[j]
            sums.append(s if N is None else s % N)
    return len(sums) == len(set(sums))


def greedy_next(seq):
    x = seq[-1] + 1
    while not is_sidon(list(seq) + [x]):
        x += 1
    return x


def collision_buckets(seq, N):
    buckets = defaultdict(list)
    for a, b, c in itertools.product(seq, repeat=3):
        if a != b and b != c:
            buckets[(a - b + c) % N].append((a, b, c))
    return buckets


def collision_pair_count(seq, N):
    return sum(len(v) * (len(v) - 1) // 2 for v in collision_buckets(seq, N).values())


def link_multigraph(seq, N):
    g = nx.MultiGraph()
    g.add_nodes_from(range(2 * N))
    for v in range(0, 2 * N, 2):
        for r, a in enumerate(seq):
            g.add_edge(v, (v + 2 * a - 1) % (2 * N), label=r)
    return g


def multigraph_girth(g):
    if any(u == v for u, v in g.edges()):
        return 1
    simple = nx.Graph(g)
    if simple.number_of_edges() < g.number_of_edges():
        return 2
    return nx.girth(simple)


def six_cycles(g):
    return sum(1 for c in nx.simple_cycles(nx.Graph(g), length_bound=6) if len(c) == 6)


def gp83():
    return nx.generalized_petersen_graph(8, 3) if hasattr(nx, "generalized_petersen_graph") else _gp(8, 3)


def _gp(n, k):
    g = nx.Graph()
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
        g.add_edge(i, n + i)
        g.add_edge(n + i, n + (i + k) % n)
    return g


def to_nx(link):
    g = nx.MultiGraph()
    g.add_nodes_from(range(link.order))
    g.add_edges_from(link.edges)
    return g
