"""Combined in-degree of an end and the partition bound, at finite depth."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .core import EndDescriptor, LevelledDigraph, VertexId
from .ends import dominating_set, in_degree_estimate, out_degree_estimate
from .errors import ContradictionError, InfeasibleError, PreconditionError
from .flow import SeparatorCertificate, min_vertex_separator
from .sequences import (
    ExhaustingSequence,
    _observable,
    graded_sequence,
    level_cuts,
    ray_cuts,
    sequence_from_partition,
    verify_exhausting,
)

MAX_SMALLER_ENDS = 15

CONSISTENCY_NOTE = (
    "ray witnesses count for an end when their frontier vertex links back to the "
    "canonical ray and the ray reaches their final segment, inside the top two bands"
)


@dataclass(frozen=True)
class PartitionPlan:
    A: frozenset[str]
    B: tuple[str, ...]
    S: tuple[VertexId, ...]

    def problems(self, end: EndDescriptor, smaller: Iterable[str]) -> list[str]:
        issues = []
        allowed = set(smaller) | {end.name}
        if self.A & set(self.B):
            issues.append("A and B overlap")
        if self.A | set(self.B) != allowed:
            issues.append("A and B do not cover the smaller ends plus the end itself")
        if not self.B or self.B[-1] != end.name:
            issues.append("the end itself must come last in B")
        return issues


@dataclass
class DegreeReport:
    end: str
    depth: int
    threshold: int
    d_minus: int
    d_plus: int
    delta_cap: int
    delta_small: int
    K_upper: int | None
    capped: frozenset[str] = frozenset()
    plan: PartitionPlan | None = None
    separator: tuple[VertexId, ...] = ()
    dominators: tuple[VertexId, ...] = ()
    smaller_ends: tuple[str, ...] = ()
    K_sequence: str = ""
    notes: list[str] = field(default_factory=list)

    def show(self, key: str) -> str:
        value = getattr(self, key)
        if value is None:
            return "?"
        return f">={value}" if key in self.capped else str(value)

    def chain_holds(self) -> bool:
        """delta_small <= delta_cap <= K_upper whenever all three are exact."""
        if self.capped & {"delta_small", "delta_cap", "K_upper"} or self.K_upper is None:
            return True
        return self.delta_small <= self.delta_cap <= self.K_upper

    def as_dict(self) -> dict:
        return {
            "end": self.end,
            "depth": self.depth,
            "threshold": self.threshold,
            "d_minus": self.show("d_minus"),
            "d_plus": self.show("d_plus"),
            "delta_cap": self.show("delta_cap"),
            "delta_small": self.show("delta_small"),
            "K_upper": self.show("K_upper"),
            "plan": None
            if self.plan is None
            else {"A": sorted(self.plan.A), "B": list(self.plan.B), "S": list(self.plan.S)},
            "separator": list(self.separator),
            "dominators": list(self.dominators),
            "smaller_ends": list(self.smaller_ends),
            "K_sequence": self.K_sequence,
            "notes": list(self.notes),
        }


def tail_band(g: LevelledDigraph, end: str | EndDescriptor) -> list[VertexId]:
    """Canonical-ray vertices in the upper half of the truncation."""
    return [v for v in g.ray_vertices(end) if g.level[v] >= g.depth // 2]


def separate_from_tail(
    g: LevelledDigraph, end: str | EndDescriptor, others: Iterable[str | EndDescriptor], extra: Iterable[VertexId] = ()
) -> SeparatorCertificate | None:
    """Smallest vertex set meeting every dipath from the end's tail band to the
    canonical rays of ``others`` or to ``extra``.

    The tail band itself is never cut.  Among minimum separators one that
    also leaves the other rays untouched is preferred.  None means no finite
    separator exists (a tail vertex already lies on a target).
    """
    e = g.end(end)
    tails = tail_band(g, e)
    targets = list(dict.fromkeys([v for o in others for v in g.ray_vertices(o)] + [v for v in extra if v in g]))
    if not targets:
        return SeparatorCertificate((), frozenset(tails), frozenset(), 0)
    try:
        best = min_vertex_separator(g, tails, targets, protected=tails)
    except InfeasibleError:
        return None
    rays = {v for o in others for v in g.ray_vertices(o)}
    try:
        inner = min_vertex_separator(g, tails, targets, protected=set(tails) | rays)
    except InfeasibleError:
        return best
    return inner if inner.flow_value == best.flow_value else best


def smaller_with_rays(g: LevelledDigraph, end: str | EndDescriptor, t: int = 5) -> tuple[str, ...]:
    """Declared smaller ends that contain at least one ray at this depth."""
    e = g.end(end)
    return tuple(n for n in e.smaller_ends if in_degree_estimate(g, n, t) >= 1)


def _ordered_B(e: EndDescriptor, members: Iterable[str]) -> tuple[str, ...]:
    rest = [n for n in e.smaller_ends if n in set(members)]
    return tuple(rest) + (e.name,)


def delta_minus(
    g: LevelledDigraph, end: str | EndDescriptor, t: int = 5
) -> tuple[int, PartitionPlan, bool]:
    """Minimum of |S| + sum of in-degrees over B across partitions of the smaller ends.

    Returns (value, plan, capped).  Ties go to the plan with fewer ends in B,
    then to the lexicographically least B.
    """
    e = g.end(end)
    smaller = smaller_with_rays(g, e, t)
    if len(smaller) > MAX_SMALLER_ENDS:
        raise PreconditionError(f"{len(smaller)} smaller ends declared, at most {MAX_SMALLER_ENDS} supported")
    dom = sorted(dominating_set(g, e, t))
    degree = {n: in_degree_estimate(g, n, t) for n in smaller + (e.name,)}
    best = None
    for r in range(len(smaller) + 1):
        for A in combinations(smaller, r):
            cert = separate_from_tail(g, e, A, dom)
            if cert is None:
                continue
            B = _ordered_B(e, set(smaller) - set(A))
            cost = cert.flow_value + sum(degree[n] for n in B)
            key = (cost, len(B), B)
            if best is None or key < best[0]:
                best = (key, PartitionPlan(frozenset(A), B, cert.separator))
    if best is None:
        raise InfeasibleError("no partition admits a finite separator")
    (cost, _, B), plan = best
    capped = any(degree[n] >= t for n in B)
    return cost, plan, capped


def partition_sequence(g: LevelledDigraph, end: str | EndDescriptor, plan: PartitionPlan) -> ExhaustingSequence:
    """Graded sequences for the ends of B, chained as in the partition schema."""
    g.end(end)
    S = set(plan.S)
    parts = []
    for name in plan.B:
        seq = graded_sequence(g, name, S)
        parts.append(seq)
        S |= seq.sets[0]
    label = f"partition(A={sorted(plan.A)}, B={list(plan.B)}, S={list(plan.S)})"
    return sequence_from_partition(plan.S, parts, label)


def _enough_observable(g: LevelledDigraph, seq: ExhaustingSequence) -> bool:
    """Reject sequences that reach the frontier in a few jumps."""
    seen = sum(1 for s in seq.sets if _observable(g, s))
    return seen >= max(2, g.depth // 2)


def best_sequence(
    g: LevelledDigraph, end: str | EndDescriptor, candidates: Iterable[ExhaustingSequence]
) -> tuple[int | None, str, list[str]]:
    """Smallest liminf among candidates that pass verification."""
    best, label, log = None, "", []
    for seq in candidates:
        if not _enough_observable(g, seq):
            log.append(f"{seq.label}: too few observable sets")
            continue
        verdict = verify_exhausting(g, end, seq)
        if not verdict:
            log.append(f"{seq.label}: rejected at U_{verdict.index}")
            continue
        size = seq.liminf_size
        log.append(f"{seq.label}: verified, liminf {size}")
        if best is None or size < best:
            best, label = size, seq.label
    return best, label, log


def schema_candidates(
    g: LevelledDigraph, end: str | EndDescriptor, t: int = 5
) -> list[ExhaustingSequence]:
    e = g.end(end)
    out = [level_cuts(g), ray_cuts(g, (e.name,) + smaller_with_rays(g, e, t))]
    if g.hubs:
        out.append(level_cuts(g, with_hubs=True))
    try:
        out.append(graded_sequence(g, e))
    except (InfeasibleError, ContradictionError):
        pass
    smaller = smaller_with_rays(g, e, t)
    dom = sorted(dominating_set(g, e, t))
    for r in range(len(smaller) + 1):
        for A in combinations(smaller, r):
            cert = separate_from_tail(g, e, A, dom)
            if cert is None:
                continue
            plan = PartitionPlan(frozenset(A), _ordered_B(e, set(smaller) - set(A)), cert.separator)
            try:
                out.append(partition_sequence(g, e, plan))
            except (InfeasibleError, ContradictionError):
                continue
    return out


def combined_in_degree(
    g: LevelledDigraph,
    end: str | EndDescriptor,
    t: int = 5,
    extra_sequences: Iterable[ExhaustingSequence] = (),
) -> DegreeReport:
    """d-, d+, the combined in-degree, the partition bound and a verified K upper bound."""
    e = g.end(end)
    capped = set()
    d_minus = in_degree_estimate(g, e, t)
    d_plus = out_degree_estimate(g, e, t)
    if d_minus >= t:
        capped.add("d_minus")
    if d_plus >= t:
        capped.add("d_plus")
    smaller = smaller_with_rays(g, e, t)
    dom = tuple(sorted(dominating_set(g, e, t)))
    cert = separate_from_tail(g, e, smaller, dom)
    notes = [CONSISTENCY_NOTE, f"threshold certificates at depth {g.depth}, t = {t}"]
    if cert is None:
        notes.append("no finite separator of the smaller ends from the tail band")
        sep, delta_cap = (), None
    else:
        sep, delta_cap = cert.separator, d_minus + cert.flow_value
    if "d_minus" in capped:
        capped.add("delta_cap")
    small, plan, small_capped = delta_minus(g, e, t)
    if small_capped:
        capped.add("delta_small")
    candidates = list(schema_candidates(g, e, t)) + list(extra_sequences)
    K, label, log = best_sequence(g, e, candidates)
    notes += log
    if not dom:
        notes.append("no declared dominator certified (negative domination is advisory)")
    return DegreeReport(
        end=e.name,
        depth=g.depth,
        threshold=t,
        d_minus=d_minus,
        d_plus=d_plus,
        delta_cap=delta_cap,
        delta_small=small,
        K_upper=K,
        capped=frozenset(capped),
        plan=plan,
        separator=tuple(sep),
        dominators=dom,
        smaller_ends=smaller,
        K_sequence=label,
        notes=notes,
    )
