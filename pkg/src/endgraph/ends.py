"""Rays, anti-rays, linkage, domination and degrees at finite depth.

Infinite properties are replaced by threshold certificates: "at least t
disjoint paths in the truncation at depth n".  Positive answers certify,
negative ones are advisory and may change at a larger depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .core import EndDescriptor, LevelledDigraph, VertexId, frontier, reverse
from .errors import InsufficientInputError
from .flow import VERTEX, PathSystem, fan, max_disjoint_dipaths, reachable

Path = tuple[VertexId, ...]


@dataclass(frozen=True)
class RayWitness:
    path: Path
    kind: Literal["ray", "anti-ray"] = "ray"

    def problems(self, g: LevelledDigraph) -> list[str]:
        issues = PathSystem((self.path,)).problems(g)
        if issues:
            return issues
        edge = frontier(g)
        tip = self.path[-1] if self.kind == "ray" else self.path[0]
        if tip not in edge:
            issues.append(f"{self.kind} witness does not touch the frontier at {tip!r}")
        return issues

    def is_valid(self, g: LevelledDigraph) -> bool:
        return not self.problems(g)


@dataclass(frozen=True)
class StarCombWitness:
    variant: Literal["star", "comb"]
    centre_or_spine: VertexId | Path
    branches: PathSystem
    leaves_or_teeth: frozenset[VertexId]

    def problems(self, g: LevelledDigraph, U: Iterable[VertexId]) -> list[str]:
        U = set(U)
        issues = self.branches.problems(g)
        ends = [p[-1] for p in self.branches]
        if any(e not in U for e in ends):
            issues.append("a branch ends outside U")
        if set(ends) != set(self.leaves_or_teeth) or len(set(ends)) != len(ends):
            issues.append("leaves/teeth do not match the branch ends")
        if self.variant == "star":
            c = self.centre_or_spine
            if any(p[0] != c for p in self.branches):
                issues.append("a branch does not start at the centre")
            if self.branches.terminals != frozenset({c}):
                issues.append("star branches may only share the centre")
        else:
            spine = tuple(self.centre_or_spine)
            issues += PathSystem((spine,)).problems(g)
            if spine and spine[-1] not in frontier(g):
                issues.append("spine stops short of the frontier")
            starts = [p[0] for p in self.branches]
            if len(set(starts)) != len(starts) or not set(starts) <= set(spine):
                issues.append("teeth must hang off distinct spine vertices")
            if self.branches.terminals:
                issues.append("comb branches must be vertex-disjoint")
            for p in self.branches:
                if set(p[1:]) & set(spine):
                    issues.append(f"branch {p} re-enters the spine")
        return issues

    def is_valid(self, g: LevelledDigraph, U: Iterable[VertexId]) -> bool:
        return not self.problems(g, U)


def _dfs_paths(g: LevelledDigraph, starts: Iterable[VertexId], stop: frozenset, limit: int | None):
    found: list[Path] = []
    for s in starts:
        if s not in g:
            continue
        path = [s]
        on_path = {s}
        iters = [iter(g.out_edges[s])]
        if s in stop:
            found.append((s,))
            if limit is not None and len(found) >= limit:
                return found
            continue
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                iters.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            if nxt in stop:
                found.append(tuple(path) + (nxt,))
                if limit is not None and len(found) >= limit:
                    return found
                continue
            path.append(nxt)
            on_path.add(nxt)
            iters.append(iter(g.out_edges[nxt]))
    return found


def ray_witnesses(
    g: LevelledDigraph, start: Iterable[VertexId], limit: int | None = 1000, kind: str = "ray"
) -> list[RayWitness]:
    """Depth-first enumeration of dipaths from ``start`` to the frontier.

    For ``kind="anti-ray"`` the dipaths run from the frontier into ``start``.
    Each path stops at the first frontier vertex it meets.
    """
    if kind not in ("ray", "anti-ray"):
        raise ValueError(f"unknown witness kind {kind!r}")
    h = g if kind == "ray" else reverse(g)
    starts = [v for v in g.vertices if v in set(start)]
    paths = _dfs_paths(h, starts, frontier(g), limit)
    if kind == "anti-ray":
        paths = [tuple(reversed(p)) for p in paths]
    return [RayWitness(p, kind) for p in paths]


# --- end consistency ------------------------------------------------------------


def _bands(g: LevelledDigraph, e: EndDescriptor) -> tuple[int, int, int] | None:
    """(seed_lo, seed_hi, window_lo) for ``e``, or None without a canonical ray.

    The seed band starts at the canonical ray's first level and reaches up to
    the consistency window, which covers the top two frontier bands and
    never overlaps the seed band.
    """
    ray = g.ray_vertices(e)
    if not ray:
        return None
    step = max(g.span, 1)
    lo = g.level[ray[0]]
    hi = max(lo + step - 1, g.depth - 2 * step)
    return lo, hi, hi + 1


def consistent_frontier(g: LevelledDigraph, end: str | EndDescriptor) -> frozenset[VertexId]:
    """Frontier vertices where a ray witness may plausibly belong to ``end``.

    A frontier vertex v qualifies when, inside the consistency window, v can
    get back to the canonical ray and the ray reaches one of the vertices
    that lead to v within ``span`` steps (the witness's possible final
    segment).
    """
    e = g.end(end)
    bands = _bands(g, e)
    if bands is None:
        return frozenset()
    lo = bands[2]
    top = g.without(v for v in g.vertices if g.level[v] < lo or v in g.hubs)
    ray = [v for v in g.ray_vertices(e) if v in top]
    if not ray:
        return frozenset()
    from_ray = reachable(top, ray)
    to_ray = reachable(reverse(top), ray)
    rev = reverse(top)
    steps = max(g.span, 1)
    good = set()
    for v in frontier(g):
        if v not in top:
            continue
        segment = {v}
        layer = {v}
        for _ in range(steps):
            layer = {u for w in layer for u in rev.out_edges[w]} - segment
            segment |= layer
        if v in to_ray and segment & from_ray:
            good.add(v)
    return frozenset(good)


def is_end_consistent(g: LevelledDigraph, end: str | EndDescriptor, w: RayWitness) -> bool:
    if w.kind == "ray":
        return w.path[-1] in consistent_frontier(g, end)
    return w.path[0] in consistent_frontier(reverse(g), end)


def seed_band(g: LevelledDigraph, end: str | EndDescriptor) -> list[VertexId]:
    """Levels from the canonical ray's first level up to the consistency window."""
    bands = _bands(g, g.end(end))
    if bands is None:
        return []
    lo, hi, _ = bands
    return [v for v in g.vertices if lo <= g.level[v] <= hi]


# --- degrees, linkage, domination --------------------------------------------------


def in_degree_paths(g: LevelledDigraph, end: str | EndDescriptor, t: int | None = None) -> PathSystem:
    return max_disjoint_dipaths(g, seed_band(g, end), consistent_frontier(g, end), VERTEX, t)


def in_degree_flow(g: LevelledDigraph, end: str | EndDescriptor, t: int | None = None) -> int:
    """Disjoint end-consistent ray witnesses from the seed band at this depth."""
    return len(in_degree_paths(g, end, t))


def in_degree_estimate(g: LevelledDigraph, end: str | EndDescriptor, t: int = 5) -> int:
    """Best certificate along the depth ladder, capped at ``t``.

    The band widths follow the widest edge, which grows with depth on some
    families, so the raw flow can dip by one level.  Any value certified at
    a smaller depth stays valid, so the largest one is reported.
    """
    g.end(end)
    best = 0
    for m in range(g.depth, -1, -1):
        h = g if m == g.depth else g.restrict(m)
        best = max(best, in_degree_flow(h, end, t))
        if best >= t:
            break
    return best


def out_degree_estimate(g: LevelledDigraph, end: str | EndDescriptor, t: int = 5) -> int:
    g.end(end)
    return in_degree_estimate(reverse(g), end, t)


def equivalence_degree(g: LevelledDigraph, P: Iterable[VertexId], Q: Iterable[VertexId], t: int = 5) -> int:
    """min of the disjoint P->Q and Q->P linkage, each capped at ``t``."""
    P, Q = list(P), list(Q)
    forward = len(max_disjoint_dipaths(g, P, Q, VERTEX, t))
    if forward == 0:
        return 0
    return min(forward, len(max_disjoint_dipaths(g, Q, P, VERTEX, t)))


def dominates(g: LevelledDigraph, v: VertexId, end: str | EndDescriptor, t: int = 5) -> bool:
    """Fan of size ``t`` to the canonical ray plus a dipath back to ``v``."""
    e = g.end(end)
    if v not in g:
        raise KeyError(v)
    ray = [r for r in g.ray_vertices(e) if r != v]
    if len(fan(g, v, ray, t)) < t:
        return False
    return v in reachable(g, ray)


def dominating_set(g: LevelledDigraph, end: str | EndDescriptor, t: int = 5) -> frozenset[VertexId]:
    """Declared candidates that pass the threshold test."""
    e = g.end(end)
    return frozenset(v for v in e.dominating_candidates if v in g and dominates(g, v, e, t))


# --- star or comb -------------------------------------------------------------


def _arborescence(g: LevelledDigraph, x: VertexId) -> tuple[dict, list]:
    """Depth-first out-arborescence rooted at x; returns children lists and preorder."""
    children: dict[VertexId, list[VertexId]] = {x: []}
    order = [x]
    stack = [(x, iter(g.out_edges[x]))]
    while stack:
        v, it = stack[-1]
        w = next(it, None)
        if w is None:
            stack.pop()
            continue
        if w in children:
            continue
        children[v].append(w)
        children[w] = []
        order.append(w)
        stack.append((w, iter(g.out_edges[w])))
    return children, order


def star_comb(g: LevelledDigraph, x: VertexId, U: Iterable[VertexId], t: int) -> StarCombWitness:
    """Either a star with ``t`` leaves in U or a comb with ``t`` teeth in U.

    Follows the arborescence argument: grow a maximal depth-first
    out-arborescence from x, look for a vertex with t branches into U, and
    otherwise walk a spine towards the frontier collecting teeth.
    """
    U = frozenset(U)
    children, order = _arborescence(g, x)
    targets = [u for u in order if u in U and u != x]
    if len(targets) < t:
        raise InsufficientInputError(f"only {len(targets)} vertices of U are reachable from {x!r}, need {t}")
    edge = frontier(g)

    # nearest U vertex and frontier reachability per subtree, bottom-up
    nearest: dict[VertexId, VertexId | None] = {}
    hits_frontier: dict[VertexId, bool] = {}
    for v in reversed(order):
        if v in U:
            nearest[v] = v
        else:
            nearest[v] = next((nearest[c] for c in children[v] if nearest[c] is not None), None)
        hits_frontier[v] = v in edge or any(hits_frontier[c] for c in children[v])

    def tree_path(a: VertexId, b: VertexId) -> list[VertexId]:
        parent = {c: p for p in children for c in children[p]}
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])
        return path[::-1]

    def branch(c: VertexId) -> Path:
        """Tree path from c down to its nearest U vertex, cut at the first U vertex."""
        path = tree_path(c, nearest[c])
        j = next(i for i, w in enumerate(path) if w in U)
        return tuple(path[: j + 1])

    for v in order:
        good = [c for c in children[v] if nearest[c] is not None]
        if len(good) >= t:
            paths = tuple((v,) + branch(c) for c in good[:t])
            return StarCombWitness("star", v, PathSystem(paths, VERTEX, frozenset({v})), frozenset(p[-1] for p in paths))

    # comb: dynamic programme over spines ending in the frontier
    score: dict[VertexId, int] = {}
    via: dict[VertexId, VertexId | None] = {}
    for v in reversed(order):
        if not hits_frontier[v]:
            continue
        tooth_here = lambda skip: v in U or any(nearest[c] is not None for c in children[v] if c != skip)
        if v in edge:
            score[v], via[v] = int(tooth_here(None)), None
            continue
        best, arg = -1, None
        for c in children[v]:
            if hits_frontier[c]:
                s = score[c] + int(tooth_here(c))
                if s > best:
                    best, arg = s, c
        score[v], via[v] = best, arg
    if score.get(x, 0) < t:
        raise InsufficientInputError(
            f"neither a star nor a comb with {t} branches into U exists below {x!r} at depth {g.depth}"
        )
    spine = [x]
    while via[spine[-1]] is not None:
        spine.append(via[spine[-1]])
    paths = []
    for i, s in enumerate(spine):
        nxt = spine[i + 1] if i + 1 < len(spine) else None
        if s in U:
            paths.append((s,))
        else:
            c = next((c for c in children[s] if c != nxt and nearest[c] is not None), None)
            if c is not None:
                paths.append((s,) + branch(c))
        if len(paths) == t:
            break
    return StarCombWitness("comb", tuple(spine), PathSystem(tuple(paths), VERTEX), frozenset(p[-1] for p in paths))
