import random

import pytest
from hypothesis import given, settings, strategies as st

from endgraph.core import from_edges
from endgraph.errors import InfeasibleError
from endgraph.flow import (
    EDGE,
    INTERNAL,
    MODES,
    VERTEX,
    PathSystem,
    dual_separator,
    fan,
    max_disjoint_dipaths,
    min_edge_cut,
    min_vertex_separator,
    shortest_path,
)

import oracles


def diamond():
    return from_edges([("a", "x"), ("x", "c"), ("a", "y"), ("y", "c"), ("a", "c")])


def test_modes_on_diamond():
    g = diamond()
    assert len(max_disjoint_dipaths(g, ["a"], ["c"], VERTEX)) == 1
    assert len(max_disjoint_dipaths(g, ["a"], ["c"], INTERNAL)) == 3
    assert len(max_disjoint_dipaths(g, ["a"], ["c"], EDGE)) == 3


def test_shared_terminal_is_trivial_path():
    g = from_edges([("a", "b")])
    ps = max_disjoint_dipaths(g, ["a", "b"], ["b"])
    assert ps.paths == (("b",),)


def test_unknown_mode():
    with pytest.raises(ValueError):
        max_disjoint_dipaths(diamond(), ["a"], ["c"], mode="arc")


def test_limit_caps_augmentations():
    g = diamond()
    assert len(max_disjoint_dipaths(g, ["a"], ["c"], EDGE, limit=2)) == 2


def test_separator_sides():
    g = from_edges([("a", "m"), ("m", "n"), ("n", "b")])
    assert min_vertex_separator(g, ["a"], ["b"]).separator == ("b",)
    assert min_vertex_separator(g, ["a"], ["b"], side="source").separator == ("a",)
    assert dual_separator(g, ["a"], ["b"]).separator in {("m",), ("n",)}


def test_protected_path_is_infeasible():
    g = from_edges([("a", "b")])
    with pytest.raises(InfeasibleError):
        min_vertex_separator(g, ["a"], ["b"], protected={"a", "b"})


def test_edge_cut_needs_disjoint_sides():
    with pytest.raises(InfeasibleError):
        min_edge_cut(diamond(), ["a"], ["a", "c"])


def test_fan_meets_only_at_centre():
    g = from_edges([("v", "p"), ("v", "q"), ("p", "r1"), ("q", "r2"), ("p", "r2"), ("r1", "r2")])
    ps = fan(g, "v", ["r1", "r2"])
    assert len(ps) == 2 and ps.is_valid(g)
    assert all(p[-1] in {"r1", "r2"} and p[0] == "v" for p in ps)


def test_problems_reports_sharing():
    g = diamond()
    ps = PathSystem((("a", "x", "c"), ("a", "c")), VERTEX)
    assert any("shared" in m for m in ps.problems(g))
    assert PathSystem((("x", "y"),), VERTEX).problems(g) == ["missing edge x->y"]


def test_shortest_path_avoids():
    g = diamond()
    assert shortest_path(g, ["a"], ["c"]) == ("a", "c")
    assert shortest_path(g, ["a"], ["c"], avoid={"x", "y"}) == ("a", "c")
    assert shortest_path(g, ["c"], ["a"]) is None


def check_instance(g, A, B):
    """Every flow routine against its exhaustive oracle, plus duality."""
    for mode in MODES:
        ps = max_disjoint_dipaths(g, A, B, mode)
        assert ps.is_valid(g), ps.problems(g)
        assert all(p[0] in A and p[-1] in B for p in ps)
        assert len(ps) == oracles.brute_disjoint(g, A, B, mode), mode
    cert = min_vertex_separator(g, A, B)
    assert cert.is_valid(g)
    assert cert.flow_value == oracles.brute_separator(g, A, B)
    assert cert.flow_value == len(max_disjoint_dipaths(g, A, B, VERTEX))
    terminals = set(A) | set(B)
    expected = oracles.brute_separator(g, A, B, protected=terminals)
    try:
        inner = min_vertex_separator(g, A, B, protected=terminals)
    except InfeasibleError:
        assert expected is None
    else:
        assert inner.separates(g) and not set(inner.separator) & terminals
        assert len(inner) == expected == len(max_disjoint_dipaths(g, A, B, INTERNAL))


def test_menger_oracle_200_instances():
    rng = random.Random(20240611)
    for _ in range(200):
        g = oracles.random_digraph(rng)
        A, B = oracles.random_terminals(rng, g)
        check_instance(g, A, B)


def test_edge_cut_oracle():
    rng = random.Random(7)
    for _ in range(60):
        g = oracles.random_digraph(rng, n_max=7)
        A, B = oracles.random_terminals(rng, g, overlap=False)
        if not B:
            continue
        cut = min_edge_cut(g, A, B)
        assert len(cut) == oracles.brute_edge_cut(g, A, B)
        assert len(cut) == len(max_disjoint_dipaths(g, A, B, EDGE))


def test_fan_oracle():
    rng = random.Random(11)
    for _ in range(80):
        g = oracles.random_digraph(rng, n_max=8)
        v = g.vertices[0]
        target = [w for w in g.vertices[1:] if rng.random() < 0.4]
        assert len(fan(g, v, target)) == oracles.brute_fan(g, v, target)


@st.composite
def small_instances(draw):
    n = draw(st.integers(2, 7))
    names = [f"v{i}" for i in range(n)]
    pairs = [(u, w) for u in names for w in names if u != w]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=14))
    g = from_edges(edges, vertices=names)
    A = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
    B = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
    return g, A, B


@settings(max_examples=80, deadline=None)
@given(small_instances())
def test_menger_property(inst):
    check_instance(*inst)
