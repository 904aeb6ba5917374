"""Structural checks on the ray-weaving counterexample and its edge-split version."""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from .core import LevelledDigraph, Presentation, VertexId, truncate
from .families import (
    _X,
    counterexample,
    diagonal_target,
    edge_split,
    is_diagonal,
    minus,
    plus,
    row_start,
    tri,
    xid,
)
from .flow import PathSystem

Path = tuple[VertexId, ...]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


@dataclass
class Report:
    depth: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            line = f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}"
            if not c.passed and c.witness is not None:
                line += f" (witness: {c.witness})"
            out.append(line)
        return out


def _rc(v: VertexId) -> tuple[int, int]:
    m = _X.fullmatch(v)
    return int(m.group(1)), int(m.group(2))


# --- (a) reverse walks without diagonals -----------------------------------------


def _without_diagonals(g: LevelledDigraph) -> dict[VertexId, list[VertexId]]:
    return {u: [v for v in g.out_edges[u] if not is_diagonal(u, v)] for u in g.vertices}


def _longest_reverse_walks(g: LevelledDigraph) -> dict[VertexId, int] | None:
    """Longest walk length in the reversed diagonal-free digraph, None if cyclic."""
    preds: dict[VertexId, list[VertexId]] = {v: [] for v in g.vertices}
    for u, outs in _without_diagonals(g).items():
        for v in outs:
            preds[v].append(u)
    # reversed edge v -> u for each original u -> v
    try:
        order = list(TopologicalSorter({v: preds[v] for v in g.vertices}).static_order())
    except CycleError:
        return None
    longest = {}
    for v in order:  # predecessors (reverse successors) come first
        longest[v] = max((longest[u] + 1 for u in preds[v]), default=0)
    return longest


def check_reverse_walks(p: Presentation, depth: int, lookahead: int = 5) -> Check:
    g = truncate(p, depth)
    walks = _longest_reverse_walks(g)
    if walks is None:
        return Check("reverse walks", False, "reversed diagonal-free digraph has a cycle")
    deeper = _longest_reverse_walks(truncate(p, depth + lookahead))
    if deeper is None:
        return Check("reverse walks", False, f"cycle appears by depth {depth + lookahead}")
    for v in g.vertices:
        if g.level[v] <= depth // 2 and walks[v] != deeper[v]:
            return Check("reverse walks", False, "longest reverse walk not yet stable", v)
    preds = {v: 0 for v in g.vertices}
    for u, outs in _without_diagonals(g).items():
        for v in outs:
            preds[v] += 1
    sinks = {v for v, c in preds.items() if c == 0}
    origins = {xid(i, row_start(i)) for i in range(1, depth + 1) if row_start(i) <= depth}
    for v in sinks:
        i, k = _rc(v)
        if v not in origins and i != 1:
            return Check("reverse walks", False, "a maximal reverse walk stops off R_1 and off every ray origin", v)
    return Check(
        "reverse walks",
        True,
        f"acyclic, stable to depth {depth + lookahead}, {len(sinks)} walk ends all at ray origins",
    )


def reverse_walks_with_diagonals_cyclic(depth: int) -> bool:
    """With diagonals kept the reversed digraph has cycles, so walks are unbounded."""
    g = truncate(counterexample(), depth)
    try:
        list(TopologicalSorter({v: list(g.out_edges[v]) for v in g.vertices}).static_order())
    except CycleError:
        return True
    return False


# --- (b) diagonal in-flow per row ---------------------------------------------------


def expected_diagonals(max_level: int, first_row: bool = False) -> dict[int, list[tuple[int, int]]]:
    """Formula enumeration: row i receives x1_{T(i)+k'} -> x{i}_{T(i-1)+k'}, k' = 1..i."""
    out: dict[int, list[tuple[int, int]]] = {}
    i = 1 if first_row else 2
    while tri(i) + 1 <= max_level:
        out[i] = [(tri(i) + kp, tri(i - 1) + kp) for kp in range(1, i + 1) if tri(i) + kp <= max_level]
        i += 1
    return out


def check_diagonal_counts(p: Presentation, depth: int) -> Check:
    g = truncate(p, depth)
    seen: dict[int, list[tuple[int, int]]] = {}
    for u, v in g.edges():
        if is_diagonal(u, v):
            i, m = _rc(v)
            seen.setdefault(i, []).append((_rc(u)[1], m))
    want = expected_diagonals(depth)
    for i, edges in want.items():
        complete = tri(i) + i <= depth
        got = sorted(seen.get(i, []))
        if got != sorted(edges):
            return Check("diagonal counts", False, f"row {i} receives {got}, formula gives {edges}", i)
        if complete and len(got) != i:
            return Check("diagonal counts", False, f"row {i} receives {len(got)} diagonals, expected {i}", i)
    extra = set(seen) - set(want)
    if extra:
        return Check("diagonal counts", False, f"unexpected diagonals into rows {sorted(extra)}", sorted(extra))
    full = [i for i in want if tri(i) + i <= depth]
    return Check("diagonal counts", True, f"rows {full[0]}..{full[-1]} each receive exactly i diagonals")


# --- (c) planar rotation system and Euler's formula -------------------------------------


def rotation_system(g: LevelledDigraph) -> dict[VertexId, list[VertexId]]:
    """Counter-clockwise neighbour order at each vertex of the drawing.

    Row i is drawn as a ray from the centre, rows fanning out clockwise as i
    grows.  Around x{i}_k the order is: outward ray edge, the side facing
    row i-1 (or the outgoing diagonal on row 1), inward ray edge, the side
    facing row i+1 (or an incoming diagonal).
    """
    nbrs: dict[VertexId, set[VertexId]] = {v: set() for v in g.vertices}
    for u, v in g.edges():
        nbrs[u].add(v)
        nbrs[v].add(u)
    rot = {}
    for v in g.vertices:
        i, k = _rc(v)
        slots = [xid(i, k + 1)]
        if i >= 2:
            slots.append(xid(i - 1, k))
        else:
            hit = diagonal_target(k)
            slots.append(xid(*hit) if hit else None)
        slots.append(xid(i, k - 1))
        if xid(i + 1, k) in nbrs[v]:
            slots.append(xid(i + 1, k))
        else:
            slots.append(next((w for w in nbrs[v] if _rc(w)[0] == 1 and i > 1 and _rc(w)[1] > k), None))
        order = [w for w in slots if w is not None and w in nbrs[v]]
        if set(order) != nbrs[v] or len(order) != len(nbrs[v]):
            raise ValueError(f"rotation at {v} misses neighbours {nbrs[v] - set(order)}")
        rot[v] = order
    return rot


def trace_faces(rot: dict[VertexId, list[VertexId]]) -> list[list[tuple[VertexId, VertexId]]]:
    """Faces of the embedding: follow each dart, turning to the next neighbour clockwise."""
    pos = {v: {w: j for j, w in enumerate(ns)} for v, ns in rot.items()}
    unused = {(u, v) for u in rot for v in rot[u]}
    faces = []
    while unused:
        start = min(unused)
        face, dart = [], start
        while True:
            unused.discard(dart)
            face.append(dart)
            u, v = dart
            ring = rot[v]
            w = ring[(pos[v][u] - 1) % len(ring)]
            dart = (v, w)
            if dart == start:
                break
        faces.append(face)
    return faces


def check_euler(p: Presentation, depth: int) -> Check:
    g = truncate(p, depth)
    rot = rotation_system(g)
    V = len(g)
    E = sum(len(r) for r in rot.values()) // 2
    F = len(trace_faces(rot))
    ok = V - E + F == 2
    return Check("euler", ok, f"V - E + F = {V} - {E} + {F} = {V - E + F}", None if ok else (V, E, F))


# --- (d) every ray meets every anti-ray ---------------------------------------------------


def colour_antiray(kp: int, depth: int) -> Path:
    """Colour-pattern anti-ray for offset k', cut to levels <= depth.

    It crosses column m_j = T(j-1) + k' from row j down to R_1 and then takes
    the diagonal into row j - 1, for j decreasing to max(k', 2).
    """
    stages = []
    j = max(kp, 2)  # diagonals never enter R_1, so the lowest column ends on it
    while tri(j - 1) + kp <= depth:
        stages.append(j)
        j += 1
    seq: list[VertexId] = []
    for j in reversed(stages):
        m = tri(j - 1) + kp
        seq.extend(xid(i, m) for i in range(j, 0, -1))
    return tuple(seq)


def weaving_ray(i0: int, c: int, depth: int) -> Path:
    """Ray entering row i0 by a diagonal, climbing to the next diagonal's column,
    dropping back to R_1 and diagonally into the next row, forever."""
    if not 1 <= c <= i0:
        raise ValueError("need 1 <= c <= i0")
    seq: list[VertexId] = [xid(1, tri(i0) + c)]
    i = i0
    while True:
        for k in range(tri(i - 1) + c, tri(i + 1) + c + 1):
            seq.append(xid(i, k))
        for r in range(i - 1, 0, -1):
            seq.append(xid(r, tri(i + 1) + c))
        i += 1
        if tri(i) + c > depth:
            break
    out = []
    for v in seq:
        if _rc(v)[1] > depth:
            break
        out.append(v)
    return tuple(out)


def row_ray(i: int, depth: int) -> Path:
    return tuple(xid(i, k) for k in range(row_start(i), depth + 1))


def witness_families(depth: int, antirays: int = 5) -> tuple[dict[str, Path], dict[str, Path]]:
    rays: dict[str, Path] = {}
    i = 1
    while row_start(i) + i <= depth:
        rays[f"R{i}"] = row_ray(i, depth)
        i += 1
    for i0 in range(2, 5):
        for c in range(1, i0 + 1):
            if tri(i0 + 1) + c <= depth:
                rays[f"W{i0}.{c}"] = weaving_ray(i0, c, depth)
    anti = {f"A{kp}": colour_antiray(kp, depth) for kp in range(1, antirays + 1) if tri(kp - 1) + kp <= depth}
    return rays, anti


def check_intersections(p: Presentation, depth: int) -> Check:
    g = truncate(p, depth)
    rays, anti = witness_families(depth)
    for name, path in list(rays.items()) + list(anti.items()):
        issues = PathSystem((path,)).problems(g)
        if issues:
            return Check("ray/anti-ray intersection", False, f"{name} is not a dipath: {issues[0]}", name)
    for rn, r in rays.items():
        for an, a in anti.items():
            if not set(r) & set(a):
                return Check("ray/anti-ray intersection", False, f"{rn} and {an} are disjoint", (rn, an))
    return Check(
        "ray/anti-ray intersection", True, f"{len(rays)} rays x {len(anti)} anti-rays, every pair meets"
    )


def verify_counterexample(depth: int, presentation: Presentation | None = None) -> Report:
    if depth < 10:
        raise ValueError("the structural checks need depth >= 10")
    p = presentation or counterexample()
    report = Report(depth)
    report.checks.append(check_reverse_walks(p, depth))
    report.checks.append(check_diagonal_counts(p, depth))
    try:
        report.checks.append(check_euler(p, depth))
    except ValueError as exc:
        report.checks.append(Check("euler", False, str(exc)))
    report.checks.append(check_intersections(p, depth))
    return report


# --- edge version -----------------------------------------------------------------


def split_path(path: Path) -> Path:
    return tuple(x for v in path for x in (minus(v), plus(v)))


def verify_edge_counterexample(depth: int, presentation: Presentation | None = None) -> Report:
    if depth < 10:
        raise ValueError("the structural checks need depth >= 10")
    p = presentation or counterexample()
    base = truncate(p, depth)
    split = truncate(edge_split(p), depth)
    report = Report(depth)

    indeg = {v: 0 for v in split.vertices}
    for _, v in split.edges():
        indeg[v] += 1
    bad = next((v for v in split.vertices if len(split.out_edges[v]) != 1 and indeg[v] != 1), None)
    report.checks.append(
        Check("unique neighbour", bad is None, "every split vertex has out-degree 1 or in-degree 1", bad)
    )

    counts = (len(split), split.edge_count())
    want = (2 * len(base), base.edge_count() + len(base))
    report.checks.append(Check("split counts", counts == want, f"|V'|, |E'| = {counts}, expected {want}", counts))

    rays, anti = witness_families(depth)
    problem = None
    for rn, r in rays.items():
        R = split_path(r)
        if PathSystem((R,)).problems(split):
            problem = (f"{rn} does not lift to a dipath", rn)
            break
        for an, a in anti.items():
            A = split_path(a)
            if PathSystem((A,)).problems(split):
                problem = (f"{an} does not lift to a dipath", an)
                break
            if not set(zip(R, R[1:])) & set(zip(A, A[1:])):
                problem = (f"{rn} and {an} share no edge", (rn, an))
                break
        if problem:
            break
    report.checks.append(
        Check(
            "edge sharing",
            problem is None,
            problem[0] if problem else f"{len(rays)} x {len(anti)} lifted pairs share an edge",
            problem[1] if problem else None,
        )
    )
    return report
