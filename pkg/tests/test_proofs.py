import pytest

from endgraph.core import from_edges, truncate
from endgraph.counterexample_checks import colour_antiray, row_ray
from endgraph.errors import InfeasibleError, PreconditionError
from endgraph.families import build_family
from endgraph.proofs import RayFamilyState, check_extension, double_rays, extend_ray_family

HALFGRID_DEPTHS = (6, 12, 18, 24, 30)


def halfgrid_fresh(n, lo, d):
    """Rows 0..n of the half-grid between columns lo and d."""
    return [tuple(f"h{r}_{c}" for c in range(max(lo, r), d + 1)) for r in range(n + 1)]


def grow_halfgrid():
    p = build_family("halfgrid")
    state, prev, log = RayFamilyState(), -1, []
    for d in HALFGRID_DEPTHS:
        g = truncate(p, d)
        ref = tuple(f"h0_{c}" for c in range(d + 1))
        new = extend_ray_family(g, state, halfgrid_fresh(state.n, prev + 1, d), ref)
        log.append((g, state, new))
        state, prev = new, d
    return state, log


def test_halfgrid_grows_to_five():
    state, log = grow_halfgrid()
    assert state.n == 5
    for g, before, after in log:
        assert check_extension(g, before, after) == []


def test_old_rays_extend_their_prefixes():
    _, log = grow_halfgrid()
    for _, before, after in log:
        for old, new in zip(before.rays, after.rays):
            assert new[: len(old)] == old


def test_fresh_paths_must_avoid_prefixes():
    p = build_family("halfgrid")
    g = truncate(p, 6)
    ref = tuple(f"h0_{c}" for c in range(7))
    state = extend_ray_family(g, RayFamilyState(), halfgrid_fresh(0, 0, 6), ref)
    g = truncate(p, 12)
    with pytest.raises(PreconditionError):
        extend_ray_family(g, state, halfgrid_fresh(1, 0, 12), ref)
    with pytest.raises(PreconditionError):
        extend_ray_family(g, state, halfgrid_fresh(0, 7, 12), ref)


def test_missing_links_come_with_certificate():
    # the only prefix ends at a sink, so no checkpoint can reach the entries
    g = from_edges([("a", "b"), ("c", "d"), ("e", "f")], level={"a": 0, "b": 1, "c": 0, "d": 1, "e": 0, "f": 1}, span=1)
    state = RayFamilyState((("a", "b"),), (((("a",), ("a",)),),))
    with pytest.raises(InfeasibleError) as info:
        extend_ray_family(g, state, [("c", "d"), ("e", "f")], ("a", "b"))
    assert info.value.certificate.flow_value == 0


def test_ladder_double_rays():
    g = truncate(build_family("ladder", n=3), 40)
    R = [tuple(f"l{r}_{c}" for c in range(41)) for r in range(3)]
    Q = [tuple(f"l{r}_{c}" for c in range(40, -1, -1)) for r in range(3, 6)]
    res = double_rays(g, R, Q)
    assert len(res.paths) == 3
    assert res.paths.is_valid(g)
    heads = {q[0] for q in Q}
    tails = {r[-1] for r in R}
    for p in res.paths:
        assert p[0] in heads and p[-1] in tails


def test_double_rays_need_disjoint_witnesses():
    g = truncate(build_family("counterexample"), 20)
    with pytest.raises(PreconditionError):
        double_rays(g, [row_ray(1, 20)], [colour_antiray(2, 20)])


def test_double_rays_report_cut():
    g = from_edges([("a0", "a1"), ("a1", "a2"), ("b2", "b1"), ("b1", "b0")])
    with pytest.raises(InfeasibleError):
        double_rays(g, [("a0", "a1", "a2")], [("b2", "b1", "b0")])
