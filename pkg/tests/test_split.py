import random

from hypothesis import given, settings, strategies as st

from endgraph.families import minus, plus, split_digraph
from endgraph.flow import VERTEX, max_disjoint_dipaths, max_edge_disjoint_dipaths
from oracles import brute_disjoint, random_digraph, random_terminals

SEED = 20240612


def split_counts(g, A, B):
    h = split_digraph(g)
    edge = max_edge_disjoint_dipaths(h, [minus(a) for a in A], [plus(b) for b in B])
    assert edge.is_valid(h)
    return len(edge), len(max_disjoint_dipaths(g, A, B, VERTEX))


def test_split_edge_counts_match_vertex_counts():
    rng = random.Random(SEED)
    for _ in range(100):
        g = random_digraph(rng, n_max=8)
        A, B = random_terminals(rng, g, overlap=rng.random() < 0.2)
        in_split, direct = split_counts(g, A, B)
        assert in_split == direct == brute_disjoint(g, A, B, "vertex"), (g.vertices, A, B)


def test_split_sizes():
    g = random_digraph(random.Random(1), n_max=8)
    h = split_digraph(g)
    assert len(h) == 2 * len(g)
    assert h.edge_count() == g.edge_count() + len(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_split_property(seed):
    rng = random.Random(seed)
    g = random_digraph(rng, n_max=7)
    A, B = random_terminals(rng, g, overlap=False)
    in_split, direct = split_counts(g, A, B)
    assert in_split == direct
