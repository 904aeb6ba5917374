import pytest

from endgraph.core import truncate
from endgraph.degrees import PartitionPlan, combined_in_degree, delta_minus, separate_from_tail
from endgraph.families import build_family


@pytest.fixture(scope="module")
def report52():
    return combined_in_degree(truncate(build_family("example52"), 12), "omega", 5)


def test_example52_report(report52):
    r = report52
    assert (r.d_minus, r.delta_cap, r.delta_small, r.K_upper) == (1, 2, 2, 2)
    assert r.separator == ("c_0",)
    assert r.dominators == ()
    assert r.plan == PartitionPlan(frozenset({"eta"}), ("omega",), ("c_0",))
    assert r.chain_holds()
    assert not r.capped


def test_report_dict_mirrors_fields(report52):
    d = report52.as_dict()
    assert d["d_minus"] == "1" and d["K_upper"] == "2"
    assert d["plan"] == {"A": ["eta"], "B": ["omega"], "S": ["c_0"]}


def test_separator_from_tail():
    g = truncate(build_family("example52"), 12)
    cert = separate_from_tail(g, "omega", ["eta"])
    assert cert.separator == ("c_0",) and cert.separates(g)


@pytest.mark.parametrize("k,m", [(1, 0), (2, 0), (3, 0), (4, 0), (1, 1), (1, 2), (2, 1), (2, 2)])
def test_krays_equality(k, m):
    r = combined_in_degree(truncate(build_family("krays", k=k, m=m), 20), "omega", 5)
    assert r.delta_small == r.delta_cap == r.K_upper == k + m
    assert r.d_minus == k
    assert len(r.dominators) == m


def test_capped_values_shown_as_lower_bounds():
    r = combined_in_degree(truncate(build_family("counterexample"), 36), "omega", 5)
    assert r.show("d_minus") == ">=5"
    assert r.show("d_plus") == ">=5"
    assert r.chain_holds()


def test_delta_minus_tie_break():
    g = truncate(build_family("example52"), 12)
    cost, plan, capped = delta_minus(g, "omega")
    assert cost == 2 and not capped
    assert plan.B == ("omega",)


def test_plan_problems():
    r = build_family("example52").ends[0]
    bad = PartitionPlan(frozenset({"omega"}), ("omega",), ())
    assert bad.problems(r, ["eta"])
