import pytest

from endgraph.core import truncate
from endgraph.ends import (
    RayWitness,
    consistent_frontier,
    dominates,
    dominating_set,
    equivalence_degree,
    in_degree_estimate,
    in_degree_flow,
    in_degree_paths,
    out_degree_estimate,
    ray_witnesses,
    star_comb,
)
from endgraph.errors import InsufficientInputError
from endgraph.families import build_family, xid


@pytest.fixture(scope="module")
def ex52():
    return truncate(build_family("example52"), 20)


def test_example52_degrees(ex52):
    assert in_degree_estimate(ex52, "omega") == 1
    assert out_degree_estimate(ex52, "omega") == 1
    assert in_degree_estimate(ex52, "eta") == 1


def test_c0_fan_caps_and_no_dominator(ex52):
    assert not dominates(ex52, "c_0", "omega")
    assert dominating_set(ex52, "omega") == frozenset()


def test_consistency_excludes_other_row(ex52):
    assert consistent_frontier(ex52, "omega") == frozenset({"b_20"})
    assert consistent_frontier(ex52, "eta") == frozenset({"a_20"})


def test_counterexample_degree_ladder():
    p = build_family("counterexample")
    ins = [in_degree_estimate(truncate(p, d), "omega") for d in range(4, 37, 4)]
    outs = [out_degree_estimate(truncate(p, d), "omega") for d in range(4, 37, 4)]
    assert ins == sorted(ins) and outs == sorted(outs)
    assert ins[-1] >= 5 and outs[-1] >= 3


def test_estimate_bounds_raw_flow():
    p = build_family("counterexample")
    for d in (10, 20, 30):
        g = truncate(p, d)
        assert in_degree_flow(g, "omega") <= in_degree_estimate(g, "omega", t=100)


def test_in_degree_paths_are_valid_witnesses():
    g = truncate(build_family("ladder"), 20)
    paths = in_degree_paths(g, "omega")
    assert len(paths) == 3
    assert paths.is_valid(g)
    good = consistent_frontier(g, "omega")
    assert all(p[-1] in good for p in paths)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_krays_degree_and_apexes(k):
    g = truncate(build_family("krays", k=k, m=1), 20)
    assert in_degree_estimate(g, "omega") == k
    assert dominating_set(g, "omega") == frozenset({"d0"})


def test_halfgrid_unbounded():
    g = truncate(build_family("halfgrid"), 24)
    assert in_degree_estimate(g, "omega", t=5) >= 5


def test_equivalence_of_rows():
    g = truncate(build_family("counterexample"), 30)
    r1 = [xid(1, k) for k in range(1, 31)]
    r2 = [xid(2, k) for k in range(2, 31)]
    assert equivalence_degree(g, r1, r2, t=4) == 4


def test_ray_witnesses_are_valid(ex52):
    ws = ray_witnesses(ex52, ["b_0"], limit=20)
    assert ws
    for w in ws:
        assert w.is_valid(ex52), w.problems(ex52)


def test_bad_witness_reports_problem(ex52):
    w = RayWitness(("b_0", "b_2"))
    assert not w.is_valid(ex52)


def test_star_and_comb():
    star = truncate(build_family("star"), 10)
    w = star_comb(star, "o", [f"l_{j}" for j in range(1, 11)], 4)
    assert w.variant == "star" and not w.problems(star, [f"l_{j}" for j in range(1, 11)])
    comb = truncate(build_family("comb"), 10)
    U = [f"t_{j}" for j in range(11)]
    w = star_comb(comb, "s_0", U, 4)
    assert w.variant == "comb" and not w.problems(comb, U)


def test_star_comb_needs_enough_targets():
    g = truncate(build_family("ray"), 10)
    with pytest.raises(InsufficientInputError):
        star_comb(g, "r_0", ["r_3"], 2)
