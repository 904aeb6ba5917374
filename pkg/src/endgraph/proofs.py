"""Constructive steps: growing a disjoint ray family and joining anti-rays to rays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import LevelledDigraph, VertexId, frontier
from .errors import InfeasibleError, PreconditionError
from .flow import VERTEX, PathSystem, max_disjoint_dipaths, min_vertex_separator, shortest_path

Path = tuple[VertexId, ...]


@dataclass(frozen=True)
class RayFamilyState:
    """Disjoint ray prefixes, each ending at its checkpoint, plus connector generations.

    ``connectors[k][i]`` is the pair (into ray i, out of ray i) added when the
    family grew to k + 1 rays; each pair links the reference ray with the
    segment of ray i appended in that step.
    """

    rays: tuple[Path, ...] = ()
    connectors: tuple[tuple[tuple[Path, Path], ...], ...] = ()

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def checkpoints(self) -> tuple[VertexId, ...]:
        return tuple(r[-1] for r in self.rays)

    def vertices(self) -> set[VertexId]:
        return {v for r in self.rays for v in r}

    def problems(self, g: LevelledDigraph) -> list[str]:
        issues = PathSystem(self.rays, VERTEX).problems(g)
        seen: set[VertexId] = set()
        for k, gen in enumerate(self.connectors):
            here = {v for pair in gen for p in pair for v in p}
            if here & seen:
                issues.append(f"connector generation {k + 1} meets an earlier generation")
            seen |= here
            for into, out in gen:
                issues += PathSystem((into, out)).problems(g) if into != out else []
        return issues


def _segment(old: Path, new: Path) -> Path:
    return new[len(old):]


def _connect(g, ref: Path, segment: Path, avoid: set) -> tuple[Path, Path]:
    into = shortest_path(g, ref, segment, avoid=avoid)
    out = shortest_path(g, segment, ref, avoid=avoid)
    if into is None or out is None:
        raise PreconditionError("no connector between the reference ray and a new segment avoids earlier connectors")
    return into, out


def extend_ray_family(
    g: LevelledDigraph, state: RayFamilyState, fresh: Sequence[Sequence[VertexId]], reference_ray: Sequence[VertexId]
) -> RayFamilyState:
    """Grow n disjoint ray prefixes to n + 1.

    ``fresh`` holds n + 1 disjoint dipaths avoiding every current prefix; the
    first vertex of each is its entry point.  Menger flow links the n
    checkpoints to n distinct entry points inside g minus the prefixes (but
    not their checkpoints) and minus the non-entry fresh vertices.  Old ray i
    continues along its linking path and then the fresh path it reached; the
    fresh path nobody reached becomes the new ray.
    """
    fresh = [tuple(p) for p in fresh]
    ref = tuple(reference_ray)
    n = state.n
    if len(fresh) != n + 1:
        raise PreconditionError(f"need {n + 1} fresh paths, got {len(fresh)}")
    if not PathSystem(tuple(fresh), VERTEX).is_valid(g):
        raise PreconditionError("fresh paths must be pairwise disjoint dipaths of g")
    taken = state.vertices()
    for p in fresh:
        if taken & set(p):
            raise PreconditionError(f"fresh path {p[0]}..{p[-1]} meets an existing prefix")
    edge = frontier(g)
    if any(p[-1] not in edge for p in fresh):
        raise PreconditionError("every fresh path must reach the frontier")

    entries = [p[0] for p in fresh]
    if n == 0:
        rays = (fresh[0],)
    else:
        blocked = (taken - set(state.checkpoints)) | {v for p in fresh for v in p[1:]}
        arena = g.without(blocked)
        links = max_disjoint_dipaths(arena, state.checkpoints, entries, VERTEX)
        if len(links) < n:
            cert = min_vertex_separator(arena, state.checkpoints, entries)
            raise InfeasibleError(
                f"only {len(links)} of {n} checkpoints link to the fresh entry points", cert
            )
        by_start = {p[0]: p for p in links}
        by_entry = {p[0]: p for p in fresh}
        rays = []
        for r in state.rays:
            link = by_start[r[-1]]
            rays.append(r + link[1:] + by_entry[link[-1]][1:])
        used = {p[-1] for p in links}
        spare = next(p for p in fresh if p[0] not in used)
        rays.append(spare)
        rays = tuple(rays)

    earlier = {v for gen in state.connectors for pair in gen for p in pair for v in p}
    olds = state.rays + ((),)
    gen = []
    avoid = set(earlier)
    for old, new in zip(olds, rays):
        seg = _segment(old, new)
        pair = _connect(g, ref, seg, avoid)
        gen.append(pair)
    return RayFamilyState(rays, state.connectors + (tuple(gen),))


def check_extension(g: LevelledDigraph, before: RayFamilyState, after: RayFamilyState) -> list[str]:
    """Everything the growth step promises, as a list of violations."""
    issues = after.problems(g)
    if after.n != before.n + 1:
        issues.append(f"expected {before.n + 1} rays, got {after.n}")
    for old, new in zip(before.rays, after.rays):
        if len(new) <= len(old) or new[: len(old)] != old:
            issues.append(f"prefix ending at {old[-1]} is not a proper start of its extension")
    if len(after.connectors) != len(before.connectors) + 1:
        issues.append("no new connector generation")
    else:
        for (into, out), old, new in zip(after.connectors[-1], before.rays + ((),), after.rays):
            seg = set(_segment(old, new))
            if into[-1] not in seg or out[0] not in seg:
                issues.append("a connector misses the new segment")
    return issues


@dataclass(frozen=True)
class DoubleRayResult:
    paths: PathSystem
    heads: tuple[Path, ...]  # anti-ray tails ending at x_i
    links: tuple[Path, ...]  # Menger paths x_i -> y_j inside H
    tails: tuple[Path, ...]  # ray tails starting at y_j


def double_rays(
    g: LevelledDigraph, rays: Sequence[Sequence[VertexId]], antirays: Sequence[Sequence[VertexId]]
) -> DoubleRayResult:
    """Join n disjoint anti-ray witnesses to n disjoint ray witnesses disjointly.

    For every pair (anti-ray i, ray j) n disjoint connectors are chosen, all
    connectors pairwise disjoint.  Cut points keep the far part of each
    anti-ray and ray away from the connectors; Menger inside the finite
    union H then yields n disjoint links.
    """
    R = [tuple(r) for r in rays]
    Q = [tuple(q) for q in antirays]
    n = len(R)
    if n == 0 or len(Q) != n:
        raise PreconditionError("need the same positive number of rays and anti-rays")
    if not PathSystem(tuple(R + Q), VERTEX).is_valid(g):
        raise PreconditionError("ray and anti-ray witnesses must be pairwise disjoint dipaths")

    used: set[VertexId] = set()
    system: list[Path] = []
    for q in Q:
        for r in R:
            arena = g.without(used)
            A = [v for v in q if v not in used]
            B = [v for v in r if v not in used]
            found = max_disjoint_dipaths(arena, A, B, VERTEX, n)
            if len(found) < n:
                cert = min_vertex_separator(arena, A, B)
                raise InfeasibleError(
                    f"only {len(found)} of {n} disjoint connectors from {q[0]}.. to {r[0]}..", cert
                )
            for p in found:
                system.append(p)
                used |= set(p)

    cut_x, cut_y = [], []
    for q in Q:
        cut_x.append(min(i for i, v in enumerate(q) if v in used))
    for r in R:
        cut_y.append(max(i for i, v in enumerate(r) if v in used))
    keep = set(used)
    for q, i in zip(Q, cut_x):
        keep |= set(q[i:])
    for r, j in zip(R, cut_y):
        keep |= set(r[: j + 1])
    H = g.without(v for v in g.vertices if v not in keep)
    X = [q[i] for q, i in zip(Q, cut_x)]
    Y = [r[j] for r, j in zip(R, cut_y)]
    links = max_disjoint_dipaths(H, X, Y, VERTEX)
    if len(links) < n:
        raise InfeasibleError("Menger inside H found too few links", min_vertex_separator(H, X, Y))
    x_of = {q[i]: (q, i) for q, i in zip(Q, cut_x)}
    y_of = {r[j]: (r, j) for r, j in zip(R, cut_y)}
    heads, tails, out = [], [], []
    for link in links:
        q, i = x_of[link[0]]
        r, j = y_of[link[-1]]
        heads.append(q[: i + 1])
        tails.append(r[j:])
        out.append(q[:i] + link + r[j + 1 :])
    return DoubleRayResult(PathSystem(tuple(out), VERTEX), tuple(heads), tuple(links.paths), tuple(tails))
