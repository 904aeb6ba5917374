"""Exhausting sequences: construction, verification and the partition schema."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import EndDescriptor, LevelledDigraph, VertexId, frontier
from .ends import consistent_frontier, seed_band
from .errors import ContradictionError, InfeasibleError, PreconditionError
from .flow import VERTEX, max_disjoint_dipaths, min_vertex_separator, shortest_path

VertexSet = frozenset[VertexId]


@dataclass(frozen=True)
class ExhaustingSequence:
    """U_first, U_first+1, ... given explicitly, optionally extended by ``rule``."""

    sets: tuple[VertexSet, ...]
    first: int = 1
    rule: Callable[[int], Iterable[VertexId]] | None = field(default=None, compare=False)
    label: str = ""

    @classmethod
    def of(cls, sets: Iterable[Iterable[VertexId]], first: int = 1, label: str = "") -> "ExhaustingSequence":
        return cls(tuple(frozenset(s) for s in sets), first, None, label)

    @classmethod
    def from_rule(cls, rule: Callable[[int], Iterable[VertexId]], upto: int, first: int = 1, label: str = ""):
        return cls(tuple(frozenset(rule(i)) for i in range(first, upto + 1)), first, rule, label)

    @property
    def last(self) -> int:
        return self.first + len(self.sets) - 1

    def indices(self) -> range:
        return range(self.first, self.last + 1)

    def at(self, i: int) -> VertexSet:
        if self.first <= i <= self.last:
            return self.sets[i - self.first]
        if self.rule is not None and i >= self.first:
            return frozenset(self.rule(i))
        raise IndexError(f"U_{i} is outside the represented range {self.first}..{self.last}")

    def extended(self, upto: int) -> "ExhaustingSequence":
        if self.rule is None or upto <= self.last:
            return self
        more = tuple(frozenset(self.rule(i)) for i in range(self.last + 1, upto + 1))
        return ExhaustingSequence(self.sets + more, self.first, self.rule, self.label)

    @property
    def liminf_size(self) -> int:
        """Smallest |U_i| over the upper half of the represented range."""
        if not self.sets:
            raise ValueError("empty sequence has no limit inferior")
        tail = self.sets[len(self.sets) // 2 :]
        return min(len(s) for s in tail)

    def to_lists(self) -> list[list[VertexId]]:
        return [sorted(s) for s in self.sets]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    index: int | None = None  # first U_i the witness should have met
    witness: tuple[VertexId, ...] | None = None
    reason: str = ""
    checked: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _observable(g: LevelledDigraph, U: VertexSet) -> bool:
    """U lies entirely inside the truncation, strictly below the frontier band."""
    cut = g.depth - max(g.span, 1) + 1
    return bool(U) and all(v in g and g.level[v] < cut for v in U)


def verify_exhausting(
    g: LevelledDigraph, end: str | EndDescriptor, seq: ExhaustingSequence, limit: int | None = None
) -> Verdict:
    """Search for an end-consistent ray witness that breaks the exhausting property.

    A witness is a dipath ending in the consistent frontier.  Two kinds of
    violation are looked for: a witness from the seed band that misses every
    observable U_i, and a witness through U_i that avoids U_{i+1}.  The
    search is a reachability computation, so it covers every witness in the
    window, not a sample; ``limit`` caps the number of indices examined.
    The reported witness is the one with the smallest violated index.
    """
    e = g.end(end)
    good = consistent_frontier(g, e)
    seq = seq.extended(g.depth + 1)
    idx = [i for i in seq.indices() if _observable(g, seq.at(i))]
    if limit is not None:
        idx = idx[:limit]
    if not idx:
        return Verdict(False, None, None, "no U_i is observable at this depth")
    # a ray meeting a set inside the frontier band still meets it, so the
    # cover check counts every set present in the truncation
    union = frozenset(v for i in seq.indices() for v in seq.at(i) if v in g)
    seeds = [v for v in seed_band(g, e) if v not in union]
    p = shortest_path(g, seeds, good, avoid=union)
    if p is not None:
        return Verdict(False, idx[0], p, "witness from the seed band meets no U_i", tuple(idx))
    present = set(idx)
    for i in idx:
        if i + 1 not in present:
            continue
        U, W = seq.at(i), seq.at(i + 1)
        p = shortest_path(g, [v for v in U if v not in W], good, avoid=W)
        if p is None:
            continue
        # prepend a route from the seed band so the witness reads as a ray from below
        lead = shortest_path(g, seed_band(g, e), [p[0]], avoid=set(W) | set(p[1:]))
        if lead is not None:
            p = lead[:-1] + p
        return Verdict(False, i + 1, p, f"witness meets U_{i} but misses U_{i + 1}", tuple(idx))
    return Verdict(True, checked=tuple(idx))


def witness_breaks(seq: ExhaustingSequence, verdict: Verdict) -> bool:
    """Re-check a FAIL verdict's witness against the sequence on its own."""
    w = set(verdict.witness or ())
    if verdict.index is None or not w:
        return False
    if verdict.reason.startswith("witness from the seed band"):
        return all(not (w & seq.at(i)) for i in verdict.checked)
    return bool(w & seq.at(verdict.index - 1)) and not (w & seq.at(verdict.index))


# --- sequence schemas -----------------------------------------------------------


def diagonal_exhausting_sequence(rays: Sequence[Sequence[VertexId]]) -> ExhaustingSequence:
    """V_i = all x^j_k with j + k <= i (rays numbered from 1, positions from 0)."""
    rays = [tuple(r) for r in rays]
    if not rays:
        raise PreconditionError("need at least one ray")
    seen: set[VertexId] = set()
    for r in rays:
        if seen & set(r):
            raise PreconditionError("rays must be pairwise disjoint")
        seen |= set(r)
    upto = max(len(r) for r in rays) + len(rays) - 1
    sets = []
    for i in range(1, upto + 1):
        sets.append(frozenset(r[k] for j, r in enumerate(rays, 1) for k in range(len(r)) if j + k <= i))
    return ExhaustingSequence(tuple(sets), 1, None, "diagonal")


def level_cuts(g: LevelledDigraph, with_hubs: bool = False) -> ExhaustingSequence:
    """U_i = every non-hub vertex of level i (plus all hubs if asked)."""
    extra = g.hubs if with_hubs else frozenset()
    sets = [frozenset(v for v in g.at_level(i) if v not in g.hubs) | extra for i in range(g.depth + 1)]
    return ExhaustingSequence(tuple(sets), 0, None, "level cuts + hubs" if with_hubs else "level cuts")


def ray_cuts(g: LevelledDigraph, ends: Iterable[str | EndDescriptor]) -> ExhaustingSequence:
    """U_i = the canonical-ray vertices of the given ends at level i."""
    ends = [g.end(e) for e in ends]
    sets = [
        frozenset(v for e in ends for v in e.canonical_ray(i) if v in g) for i in range(g.depth + 1)
    ]
    names = "/".join(e.name for e in ends)
    return ExhaustingSequence(tuple(sets), 0, None, f"ray cuts ({names})")


def _narrow_band(g: LevelledDigraph, e: EndDescriptor) -> list[VertexId]:
    ray = g.ray_vertices(e)
    if not ray:
        return []
    lo = g.level[ray[0]]
    hi = lo + max(g.span, 1) - 1
    return [v for v in g.vertices if lo <= g.level[v] <= hi]


def graded_sequence(
    g: LevelledDigraph, end: str | EndDescriptor, S: Iterable[VertexId] = (), d: int | None = None
) -> ExhaustingSequence:
    """Sets of size d marching to the frontier by iterated minimum separators in g - S.

    U_1 holds the starting vertices of d disjoint end-consistent witnesses.
    U_{i+1} is the minimum separator closest to U_i between U_i and the
    consistent frontier, chosen outside U_i and outside earlier sets.
    A separator larger than d means the end has more than d disjoint rays
    avoiding S, which is reported as a contradiction.
    """
    e = g.end(end)
    S = frozenset(S)
    h = g.without(S)
    good = consistent_frontier(h, e)
    band = [v for v in _narrow_band(g, e) if v in h]
    paths = max_disjoint_dipaths(h, band, good, VERTEX, None if d is None else d + 1)
    if d is None:
        d = len(paths)
    if len(paths) > d:
        raise ContradictionError(f"{len(paths)} disjoint witnesses avoid S, more than d = {d}", len(paths))
    if len(paths) < d or d == 0:
        raise InfeasibleError(f"only {len(paths)} disjoint witnesses avoid S, d = {d} requested")
    edge = frontier(h)
    sets = [frozenset(p[0] for p in paths)]
    used = set(sets[0])
    while not sets[-1] & edge:
        cur = sets[-1]
        arena = h.without(used - cur)
        try:
            cert = min_vertex_separator(arena, cur, good & set(arena.vertices), protected=cur, side="source")
        except InfeasibleError:
            break
        if cert.flow_value > d:
            raise ContradictionError(
                f"separator after U_{len(sets)} has size {cert.flow_value} > d = {d}", cert.flow_value
            )
        if cert.flow_value < d:
            break
        nxt = frozenset(cert.separator)
        sets.append(nxt)
        used |= nxt
    return ExhaustingSequence(tuple(sets), 1, None, f"graded(S={sorted(S)}, d={d})")


def stable_core(seq: ExhaustingSequence, window: int | None = None) -> VertexSet:
    """Vertices lying in every U_i of the top half of the first ``window`` indices."""
    n = len(seq.sets) if window is None else window
    if n > len(seq.sets):
        raise ValueError("window exceeds the represented range")
    if n == 0:
        return frozenset()
    top = seq.sets[n // 2 : n]
    core = set(top[0])
    for s in top[1:]:
        core &= s
    return frozenset(core)


def sequence_from_partition(
    S: Iterable[VertexId], per_end_sequences: Sequence[ExhaustingSequence], label: str = "partition"
) -> ExhaustingSequence:
    """V_i = S + the first sets of every earlier end + U_i of the last end."""
    if not per_end_sequences:
        raise PreconditionError("B must contain at least the end itself")
    S = frozenset(S)
    *early, last = per_end_sequences
    base = S.union(*(seq.sets[0] for seq in early))
    sets = [base | U for U in last.sets]
    return ExhaustingSequence(tuple(sets), last.first, None, label)
