"""Unit-capacity flow machinery: disjoint dipaths, fans and vertex separators.

Every computation runs shortest augmenting paths on an auxiliary network in
which a capacitated vertex ``v`` becomes an arc ``(in, v) -> (out, v)``.
Arcs are inserted in vertex order and adjacency order, so the witnesses
returned for equal inputs are identical.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .core import LevelledDigraph, VertexId
from .errors import InfeasibleError

INF = 1 << 40

VERTEX = "vertex"
INTERNAL = "internal"
EDGE = "edge"
MODES = (VERTEX, INTERNAL, EDGE)

Path = tuple[VertexId, ...]


class _Arc:
    __slots__ = ("head", "cap", "rev", "orig")

    def __init__(self, head: int, cap: int, orig: int):
        self.head = head
        self.cap = cap
        self.orig = orig
        self.rev: _Arc | None = None

    @property
    def flow(self) -> int:
        return self.orig - self.cap


class _Network:
    def __init__(self) -> None:
        self.index: dict[Hashable, int] = {}
        self.keys: list[Hashable] = []
        self.arcs: list[list[_Arc]] = []

    def node(self, key: Hashable) -> int:
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.keys)
            self.keys.append(key)
            self.arcs.append([])
        return i

    def add(self, u: Hashable, v: Hashable, cap: int) -> None:
        a, b = self.node(u), self.node(v)
        fwd, bwd = _Arc(b, cap, cap), _Arc(a, 0, 0)
        fwd.rev, bwd.rev = bwd, fwd
        self.arcs[a].append(fwd)
        self.arcs[b].append(bwd)

    def max_flow(self, s: Hashable, t: Hashable, limit: int | None = None) -> int:
        """Augment one unit at a time along BFS-shortest residual paths."""
        src, dst = self.node(s), self.node(t)
        value = 0
        while limit is None or value < limit:
            parent: list[_Arc | None] = [None] * len(self.keys)
            seen = [False] * len(self.keys)
            seen[src] = True
            queue = deque([src])
            while queue and not seen[dst]:
                x = queue.popleft()
                for arc in self.arcs[x]:
                    if arc.cap > 0 and not seen[arc.head]:
                        seen[arc.head] = True
                        parent[arc.head] = arc
                        queue.append(arc.head)
            if not seen[dst]:
                break
            x = dst
            while x != src:
                arc = parent[x]
                arc.cap -= 1
                arc.rev.cap += 1
                x = arc.rev.head
            value += 1
            if value >= INF:
                break
        return value

    def residual_from(self, s: Hashable) -> set[int]:
        start = self.node(s)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for arc in self.arcs[x]:
                if arc.cap > 0 and arc.head not in seen:
                    seen.add(arc.head)
                    stack.append(arc.head)
        return seen

    def residual_to(self, t: Hashable) -> set[int]:
        """Nodes that can still reach ``t`` in the residual network."""
        target = self.node(t)
        seen = {target}
        stack = [target]
        while stack:
            y = stack.pop()
            for back in self.arcs[y]:
                # back.rev is an arc x -> y
                arc = back.rev
                x = back.head
                if arc.cap > 0 and x not in seen:
                    seen.add(x)
                    stack.append(x)
        return seen

    def decompose(self, s: Hashable, t: Hashable) -> list[list[Hashable]]:
        """Split the current flow into s-t paths; flow cycles are cancelled."""
        src, dst = self.node(s), self.node(t)
        paths = []
        while True:
            first = next((a for a in self.arcs[src] if a.orig > 0 and a.flow > 0), None)
            if first is None:
                return paths
            walk = [src]
            used: list[_Arc] = []
            pos = {src: 0}
            x = src
            while x != dst:
                arc = next(a for a in self.arcs[x] if a.orig > 0 and a.flow > 0)
                y = arc.head
                if y in pos:
                    cut = pos[y]
                    for c in used[cut:]:
                        c.cap += 1
                        c.rev.cap -= 1
                    for z in walk[cut + 1 :]:
                        del pos[z]
                    del walk[cut + 1 :]
                    del used[cut:]
                    x = y
                    continue
                used.append(arc)
                pos[y] = len(walk)
                walk.append(y)
                x = y
            for c in used:
                c.cap += 1
                c.rev.cap -= 1
            paths.append([self.keys[i] for i in walk])


@dataclass(frozen=True)
class PathSystem:
    """Dipaths that are pairwise disjoint in the sense of ``mode``.

    ``terminals`` lists the vertices that may be shared in internal mode
    (and the fan centre for fans).
    """

    paths: tuple[Path, ...]
    mode: str = VERTEX
    terminals: frozenset[VertexId] = frozenset()

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def vertices(self) -> set[VertexId]:
        return {v for p in self.paths for v in p}

    def problems(self, g: LevelledDigraph) -> list[str]:
        """Human-readable invariant violations; empty when the system is valid."""
        issues = []
        for p in self.paths:
            if not p:
                issues.append("empty path")
                continue
            if len(set(p)) != len(p):
                issues.append(f"repeated vertex in {p}")
            for v in p:
                if v not in g:
                    issues.append(f"{v!r} not in digraph")
            for u, v in zip(p, p[1:]):
                if u in g and v not in g.out_edges[u]:
                    issues.append(f"missing edge {u}->{v}")
        if len(set(self.paths)) != len(self.paths):
            issues.append("duplicate path")
        if self.mode == EDGE:
            seen_edges: set[tuple[VertexId, VertexId]] = set()
            for p in self.paths:
                for e in zip(p, p[1:]):
                    if e in seen_edges:
                        issues.append(f"edge {e} shared")
                    seen_edges.add(e)
        else:
            shareable = self.terminals
            owner: dict[VertexId, int] = {}
            for k, p in enumerate(self.paths):
                for v in p:
                    if v in owner and owner[v] != k and v not in shareable:
                        issues.append(f"vertex {v!r} shared by paths {owner[v]} and {k}")
                    owner.setdefault(v, k)
        return issues

    def is_valid(self, g: LevelledDigraph) -> bool:
        return not self.problems(g)


@dataclass(frozen=True)
class SeparatorCertificate:
    separator: tuple[VertexId, ...]
    sources: frozenset[VertexId]
    targets: frozenset[VertexId]
    flow_value: int

    def __len__(self) -> int:
        return len(self.separator)

    def separates(self, g: LevelledDigraph) -> bool:
        """No source-target dipath survives the removal of the separator."""
        cut = set(self.separator)
        start = [a for a in g.vertices if a in self.sources and a not in cut]
        seen = set(start)
        stack = list(start)
        while stack:
            x = stack.pop()
            if x in self.targets:
                return False
            for y in g.out_edges[x]:
                if y not in cut and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return True

    def is_valid(self, g: LevelledDigraph) -> bool:
        return self.separates(g) and len(self.separator) == self.flow_value


def _ordered(g: LevelledDigraph, vs: Iterable[VertexId]) -> list[VertexId]:
    wanted = set(vs)
    return [v for v in g.vertices if v in wanted]


def _trim(path: Sequence[VertexId], A: set, B: set) -> Path:
    """Shorten a walk from A to B to an A-B dipath (interior avoids A and B)."""
    j = next(i for i, v in enumerate(path) if v in B)
    i = max(k for k in range(j + 1) if path[k] in A)
    return tuple(path[i : j + 1])


def _build(g: LevelledDigraph, A: list, B: list, mode: str) -> _Network:
    net = _Network()
    net.node("s")
    Aset, Bset = set(A), set(B)
    if mode == VERTEX:
        for v in g.vertices:
            net.add(("in", v), ("out", v), 1)
        for a in A:
            net.add("s", ("in", a), 1)
        for b in B:
            net.add(("out", b), "t", 1)
        for u, v in g.edges():
            net.add(("out", u), ("in", v), 1)
        return net

    split = mode == INTERNAL
    for v in g.vertices:
        if v in Aset:
            net.add("s", ("A", v), INF)
        if v in Aset and v in Bset:
            net.add(("A", v), ("B", v), 1)
        if v in Bset:
            net.add(("B", v), "t", INF)
        if split and v not in Aset and v not in Bset:
            net.add(("in", v), ("out", v), 1)

    def tail(u):
        if u in Bset:
            return None  # paths stop at their first B vertex
        if u in Aset:
            return ("A", u)
        return ("out", u) if split else ("n", u)

    def head(v):
        if v in Aset:
            return None  # paths meet A only in their first vertex
        if v in Bset:
            return ("B", v)
        return ("in", v) if split else ("n", v)

    for u, v in g.edges():
        x, y = tail(u), head(v)
        if x is not None and y is not None:
            net.add(x, y, 1)
    return net


def _vertex_walk(keys: list) -> list[VertexId]:
    walk: list[VertexId] = []
    for k in keys:
        if isinstance(k, tuple):
            v = k[1]
            if not walk or walk[-1] != v:
                walk.append(v)
    return walk


def _simple(walk: list[VertexId]) -> list[VertexId]:
    """Remove closed sub-walks so no vertex repeats."""
    out: list[VertexId] = []
    pos: dict[VertexId, int] = {}
    for v in walk:
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1 :]:
                del pos[w]
            del out[cut + 1 :]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def max_disjoint_dipaths(
    g: LevelledDigraph,
    A: Iterable[VertexId],
    B: Iterable[VertexId],
    mode: str = VERTEX,
    limit: int | None = None,
) -> PathSystem:
    """Maximum system of A-B dipaths, pairwise disjoint according to ``mode``.

    ``vertex``: no shared vertex at all.  ``internal``: paths may share
    vertices of A and B only.  ``edge``: no shared edge.  A vertex lying in
    both A and B contributes the trivial one-vertex path.  ``limit`` stops
    after that many augmentations.
    """
    if mode not in MODES:
        raise ValueError(f"unknown disjointness mode {mode!r}")
    A_ = _ordered(g, A)
    B_ = _ordered(g, B)
    net = _build(g, A_, B_, mode)
    net.node("t")
    net.max_flow("s", "t", limit)
    Aset, Bset = set(A_), set(B_)
    paths = []
    for keys in net.decompose("s", "t"):
        walk = _vertex_walk(keys)
        if mode == EDGE:
            walk = _simple(walk)
        paths.append(_trim(walk, Aset, Bset))
    terminals = frozenset(Aset | Bset) if mode == INTERNAL else frozenset()
    return PathSystem(tuple(paths), mode, terminals)


def max_edge_disjoint_dipaths(
    g: LevelledDigraph, A: Iterable[VertexId], B: Iterable[VertexId], limit: int | None = None
) -> PathSystem:
    return max_disjoint_dipaths(g, A, B, EDGE, limit)


def _protected_path_exists(g: LevelledDigraph, A: set, B: set, protected: set) -> bool:
    stack = [a for a in g.vertices if a in A and a in protected]
    seen = set(stack)
    while stack:
        x = stack.pop()
        if x in B:
            return True
        for y in g.out_edges[x]:
            if y in protected and y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def min_vertex_separator(
    g: LevelledDigraph,
    A: Iterable[VertexId],
    B: Iterable[VertexId],
    protected: Iterable[VertexId] = (),
    side: str = "target",
) -> SeparatorCertificate:
    """Smallest vertex set avoiding ``protected`` that meets every A-B dipath.

    Protected vertices keep unbounded capacity, so the size equals the
    maximum number of A-B dipaths that pairwise share only protected
    vertices.  Among minimum separators the one closest to B is returned
    (``side="source"`` gives the one closest to A).
    """
    A_, B_ = _ordered(g, A), _ordered(g, B)
    Aset, Bset, prot = set(A_), set(B_), set(protected)
    if _protected_path_exists(g, Aset, Bset, prot):
        raise InfeasibleError("an A-B dipath runs through protected vertices only")
    net = _Network()
    net.node("s")
    for v in g.vertices:
        net.add(("in", v), ("out", v), INF if v in prot else 1)
    for a in A_:
        net.add("s", ("in", a), INF)
    for b in B_:
        net.add(("out", b), "t", INF)
    for u, v in g.edges():
        net.add(("out", u), ("in", v), INF)
    net.node("t")
    value = net.max_flow("s", "t")
    if side == "source":
        src_side = net.residual_from("s")
        cut = [
            v for v in g.vertices
            if net.index[("in", v)] in src_side and net.index[("out", v)] not in src_side
        ]
    else:
        sink_side = net.residual_to("t")
        cut = [
            v for v in g.vertices
            if net.index[("in", v)] not in sink_side and net.index[("out", v)] in sink_side
        ]
    return SeparatorCertificate(tuple(cut), frozenset(Aset), frozenset(Bset), value)


def dual_separator(g: LevelledDigraph, A: Iterable[VertexId], B: Iterable[VertexId]) -> SeparatorCertificate:
    """Minimum A-B vertex separator, avoiding A and B whenever that costs nothing."""
    A, B = list(A), list(B)
    best = min_vertex_separator(g, A, B)
    try:
        inner = min_vertex_separator(g, A, B, protected=set(A) | set(B))
    except InfeasibleError:
        return best
    return inner if inner.flow_value == best.flow_value else best


def min_edge_cut(
    g: LevelledDigraph, A: Iterable[VertexId], B: Iterable[VertexId]
) -> tuple[tuple[VertexId, VertexId], ...]:
    """Smallest edge set meeting every A-B dipath (requires disjoint A and B)."""
    A_, B_ = _ordered(g, A), _ordered(g, B)
    if set(A_) & set(B_):
        raise InfeasibleError("no edge set separates a vertex from itself")
    net = _build(g, A_, B_, EDGE)
    net.node("t")
    net.max_flow("s", "t")
    reach = net.residual_from("s")
    cut = []
    for x in sorted(reach):
        for arc in net.arcs[x]:
            if arc.orig == 1 and arc.head not in reach:
                u, v = net.keys[x][1], net.keys[arc.head][1]
                cut.append((u, v))
    order = {e: i for i, e in enumerate(g.edges())}
    return tuple(sorted(cut, key=order.__getitem__))


def fan(g: LevelledDigraph, v: VertexId, target: Iterable[VertexId], t: int | None = None) -> PathSystem:
    """Largest family of v-target dipaths meeting pairwise only in ``v``, capped at ``t``."""
    tgt = set(target)
    if v in tgt:
        raise ValueError("fan centre must not lie in the target set")
    net = _Network()
    net.node("s")
    for w in g.vertices:
        if w != v:
            net.add(("in", w), ("out", w), 1)
    for w in g.vertices:
        if w in tgt:
            net.add(("out", w), "t", INF)
    for x, y in g.edges():
        if y == v:
            continue
        net.add("s" if x == v else ("out", x), ("in", y), 1)
    net.node("t")
    net.max_flow("s", "t", t)
    paths = []
    for keys in net.decompose("s", "t"):
        walk = [v] + _vertex_walk(keys)
        j = next(i for i, w in enumerate(walk) if w in tgt)
        paths.append(tuple(walk[: j + 1]))
    return PathSystem(tuple(paths), VERTEX, frozenset({v}))


def reachable(g: LevelledDigraph, sources: Iterable[VertexId], avoid: Iterable[VertexId] = ()) -> set[VertexId]:
    blocked = set(avoid)
    stack = [s for s in sources if s in g and s not in blocked]
    seen = set(stack)
    while stack:
        x = stack.pop()
        for y in g.out_edges[x]:
            if y not in seen and y not in blocked:
                seen.add(y)
                stack.append(y)
    return seen


def shortest_path(
    g: LevelledDigraph, sources: Iterable[VertexId], targets: Iterable[VertexId], avoid: Iterable[VertexId] = ()
) -> Path | None:
    """BFS-shortest dipath from a source to a target (adjacency order breaks ties)."""
    blocked = set(avoid)
    tgt = set(targets)
    parent: dict[VertexId, VertexId | None] = {}
    queue: deque[VertexId] = deque()
    for s in _ordered(g, sources):
        if s not in blocked:
            parent[s] = None
            queue.append(s)
    while queue:
        x = queue.popleft()
        if x in tgt:
            path = [x]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
        for y in g.out_edges[x]:
            if y not in parent and y not in blocked:
                parent[y] = x
                queue.append(y)
    return None
