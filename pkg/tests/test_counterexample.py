import random

import pytest

from endgraph.core import truncate
from endgraph.counterexample_checks import (
    check_diagonal_counts,
    colour_antiray,
    expected_diagonals,
    reverse_walks_with_diagonals_cyclic,
    rotation_system,
    trace_faces,
    verify_counterexample,
    verify_edge_counterexample,
    weaving_ray,
)
from endgraph.families import counterexample, is_diagonal


def brute_diagonals(max_level):
    """Independent count: row i is fed from R_1 at levels i(i+1)/2 + 1 .. i(i+1)/2 + i."""
    rows, base = {}, 1
    for i in range(2, 30):
        base += i - 1  # first level of row i
        top = base + i - 1
        for kp in range(i):
            src = top + 1 + kp
            if src <= max_level:
                rows.setdefault(i, []).append((src, base + kp))
    return rows


@pytest.mark.parametrize("depth", [10, 20, 30])
def test_all_checks_pass(depth):
    r = verify_counterexample(depth)
    assert r.passed, r.lines()
    assert [c.name for c in r.checks] == ["reverse walks", "diagonal counts", "euler", "ray/anti-ray intersection"]


def test_formula_matches_brute_enumeration():
    assert expected_diagonals(60) == brute_diagonals(60)


def test_diagonal_counts_per_row():
    g = truncate(counterexample(), 30)
    into = {}
    for u, v in g.edges():
        if is_diagonal(u, v):
            row = int(v[1:].split("_")[0])
            into[row] = into.get(row, 0) + 1
    # row 7 is only partly fed by depth 30
    assert into == {2: 2, 3: 3, 4: 4, 5: 5, 6: 6, 7: 2}


def test_diagonals_make_reverse_walks_unbounded():
    assert reverse_walks_with_diagonals_cyclic(20)


def test_mutant_is_caught():
    r = verify_counterexample(20, counterexample(flipped=[(1, 2)]))
    assert not r.passed
    bad = [c for c in r.checks if not c.passed]
    assert bad and bad[0].witness is not None


def test_first_row_variant_changes_counts():
    c = check_diagonal_counts(counterexample(first_row_diagonal=True), 20)
    assert not c.passed


def test_scrambled_rotation_breaks_euler():
    g = truncate(counterexample(), 20)
    rot = rotation_system(g)
    V, E = len(rot), sum(map(len, rot.values())) // 2
    assert V - E + len(trace_faces(rot)) == 2
    rng = random.Random(7)
    for v in rng.sample(sorted(rot), 12):
        rng.shuffle(rot[v])
    assert V - E + len(trace_faces(rot)) < 2


def test_witness_shapes():
    a = colour_antiray(3, 20)
    assert a[-1] == "x1_6"
    assert colour_antiray(1, 20)[-1] == "x1_2"
    assert colour_antiray(2, 20)[-1] == "x1_3"
    w = weaving_ray(2, 1, 20)
    assert w[0] == "x1_4" and w[1] == "x2_2"
    with pytest.raises(ValueError):
        weaving_ray(2, 3, 20)


def test_edge_version():
    r = verify_edge_counterexample(20)
    assert r.passed, r.lines()
    assert verify_edge_counterexample(20, counterexample(flipped=[(1, 2)])).passed is False


def test_depth_too_small():
    with pytest.raises(ValueError):
        verify_counterexample(5)
