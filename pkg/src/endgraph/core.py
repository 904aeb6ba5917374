"""Level-indexed presentations of infinite digraphs and their finite truncations.

A :class:`Presentation` generates the vertices of an infinite, locally finite
digraph level by level.  :func:`truncate` turns it into a
:class:`LevelledDigraph`, an immutable finite induced subdigraph containing
every vertex up to a given level.  Vertices are identified by strings;
optional integer coordinates are kept alongside for layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ParseError, PresentationError, UnknownEndError, ValidationError

VertexId = str
Edge = tuple[VertexId, VertexId]


@dataclass(frozen=True)
class EndDescriptor:
    """An end declared by a presentation.

    ``canonical_ray(level)`` returns the vertices of the end's canonical ray
    (or anti-ray) at that level, in ray order; an empty tuple where the ray
    has no vertex.
    """

    name: str
    canonical_ray: Callable[[int], Sequence[VertexId]]
    dominating_candidates: frozenset[VertexId] = frozenset()
    smaller_ends: tuple[str, ...] = ()


@dataclass(frozen=True)
class Presentation:
    """Generator for an infinite digraph, one finite level at a time.

    ``span`` bounds ``|level(u) - level(v)|`` over edges not incident to a
    hub; ``None`` marks a built-in family whose span grows with depth, in
    which case each truncation reports the span it actually contains.
    Hubs are finitely many apex vertices exempt from the span bound.
    """

    name: str
    vertices_at: Callable[[int], Iterable[VertexId]]
    edges_from: Callable[[VertexId], Iterable[VertexId]]
    level_of: Callable[[VertexId], int]
    span: int | None = 1
    ends: tuple[EndDescriptor, ...] = ()
    coord_of: Callable[[VertexId], tuple[int, ...] | None] | None = None
    hubs: frozenset[VertexId] = frozenset()

    def end(self, name: str) -> EndDescriptor:
        return _find_end(self.ends, name)


def _find_end(ends: Iterable[EndDescriptor], name: str) -> EndDescriptor:
    for end in ends:
        if end.name == name:
            return end
    raise UnknownEndError(name)


@dataclass(frozen=True)
class LevelledDigraph:
    name: str
    depth: int
    span: int
    vertices: tuple[VertexId, ...]
    out_edges: Mapping[VertexId, tuple[VertexId, ...]]
    level: Mapping[VertexId, int]
    coords: Mapping[VertexId, tuple[int, ...]] = field(default_factory=dict)
    hubs: frozenset[VertexId] = frozenset()
    ends: tuple[EndDescriptor, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValidationError("duplicate vertex id")
        if set(self.out_edges) != vset or set(self.level) != vset:
            raise ValidationError("adjacency/level maps must cover exactly the vertex set")
        for u, targets in self.out_edges.items():
            if len(set(targets)) != len(targets):
                raise ValidationError(f"parallel edges out of {u!r}")
            for v in targets:
                if v not in vset:
                    raise ValidationError(f"dangling edge endpoint {v!r} (edge {u!r}->{v!r})")
                if v == u:
                    raise ValidationError(f"self-loop at {u!r}")
                if (
                    u not in self.hubs
                    and v not in self.hubs
                    and abs(self.level[u] - self.level[v]) > self.span
                ):
                    raise ValidationError(f"edge {u!r}->{v!r} exceeds span {self.span}")
        for v, lvl in self.level.items():
            if not 0 <= lvl <= self.depth:
                raise ValidationError(f"vertex {v!r} has level {lvl} outside 0..{self.depth}")

    def __contains__(self, v: object) -> bool:
        return v in self.level

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterator[Edge]:
        for u in self.vertices:
            for v in self.out_edges[u]:
                yield (u, v)

    def edge_count(self) -> int:
        return sum(len(t) for t in self.out_edges.values())

    def successors(self, v: VertexId) -> tuple[VertexId, ...]:
        return self.out_edges[v]

    def in_edges(self) -> dict[VertexId, list[VertexId]]:
        preds: dict[VertexId, list[VertexId]] = {v: [] for v in self.vertices}
        for u, v in self.edges():
            preds[v].append(u)
        return preds

    def at_level(self, lo: int, hi: int | None = None) -> list[VertexId]:
        hi = lo if hi is None else hi
        return [v for v in self.vertices if lo <= self.level[v] <= hi]

    def end(self, name: str | EndDescriptor) -> EndDescriptor:
        if isinstance(name, EndDescriptor):
            return name
        return _find_end(self.ends, name)

    def ray_vertices(self, end: str | EndDescriptor) -> list[VertexId]:
        """Vertices of the end's canonical ray that survive truncation, in ray order."""
        end = self.end(end)
        out = []
        for lvl in range(self.depth + 1):
            out.extend(v for v in end.canonical_ray(lvl) if v in self)
        return out

    def restrict(self, max_level: int) -> "LevelledDigraph":
        """Induced subdigraph on the vertices of level at most ``max_level``."""
        keep = [v for v in self.vertices if self.level[v] <= max_level]
        kept = set(keep)
        widest = max(
            (
                abs(self.level[u] - self.level[w])
                for u in keep
                for w in self.out_edges[u]
                if w in kept and u not in self.hubs and w not in self.hubs
            ),
            default=0,
        )
        return LevelledDigraph(
            name=self.name,
            depth=max_level,
            span=min(self.span, max(widest, 1)),
            vertices=tuple(keep),
            out_edges={v: tuple(w for w in self.out_edges[v] if w in kept) for v in keep},
            level={v: self.level[v] for v in keep},
            coords={v: c for v, c in self.coords.items() if v in kept},
            hubs=frozenset(self.hubs & kept),
            ends=self.ends,
        )

    def without(self, removed: Iterable[VertexId]) -> "LevelledDigraph":
        """Induced subdigraph with ``removed`` deleted (depth and span kept)."""
        gone = set(removed)
        keep = [v for v in self.vertices if v not in gone]
        return LevelledDigraph(
            name=self.name,
            depth=self.depth,
            span=self.span,
            vertices=tuple(keep),
            out_edges={v: tuple(w for w in self.out_edges[v] if w not in gone) for v in keep},
            level={v: self.level[v] for v in keep},
            coords={v: c for v, c in self.coords.items() if v not in gone},
            hubs=frozenset(self.hubs - gone),
            ends=self.ends,
        )


def from_edges(
    edges: Iterable[Edge],
    vertices: Iterable[VertexId] = (),
    level: Mapping[VertexId, int] | None = None,
    name: str = "adhoc",
    span: int | None = None,
) -> LevelledDigraph:
    """Convenience constructor for small hand-made digraphs.

    Without ``level`` every vertex sits at level 0 and the span is taken
    from the edges.
    """
    order: list[VertexId] = list(dict.fromkeys(vertices))
    adj: dict[VertexId, list[VertexId]] = {v: [] for v in order}
    for u, v in edges:
        for x in (u, v):
            if x not in adj:
                adj[x] = []
                order.append(x)
        adj[u].append(v)
    lv = dict(level) if level is not None else {v: 0 for v in order}
    if span is None:
        span = max((abs(lv[u] - lv[v]) for u in order for v in adj[u]), default=0)
    return LevelledDigraph(
        name=name,
        depth=max(lv.values(), default=0),
        span=span,
        vertices=tuple(order),
        out_edges={v: tuple(adj[v]) for v in order},
        level=lv,
    )


def truncate(p: Presentation, depth: int) -> LevelledDigraph:
    """Finite induced subdigraph of ``p`` on levels ``0..depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    order: list[VertexId] = []
    level: dict[VertexId, int] = {}
    try:
        for lvl in range(depth + 1):
            for v in p.vertices_at(lvl):
                if v in level:
                    raise PresentationError(f"{p.name}: vertex {v!r} emitted twice")
                if p.level_of(v) != lvl:
                    raise PresentationError(
                        f"{p.name}: vertex {v!r} emitted at level {lvl} but level_of says {p.level_of(v)}"
                    )
                level[v] = lvl
                order.append(v)
        out: dict[VertexId, tuple[VertexId, ...]] = {}
        widest = 0
        for u in order:
            targets = []
            for v in p.edges_from(u):
                lv = p.level_of(v)
                if lv > depth:
                    if u in p.hubs:
                        break  # hub generators are infinite, sorted by level
                    continue
                if v not in level:
                    raise PresentationError(f"{p.name}: edge {u!r}->{v!r} targets an unlisted vertex")
                if u not in p.hubs and v not in p.hubs:
                    gap = abs(level[u] - lv)
                    if p.span is not None and gap > p.span:
                        raise PresentationError(
                            f"{p.name}: edge {u!r}->{v!r} spans {gap} levels, declared span {p.span}"
                        )
                    widest = max(widest, gap)
                targets.append(v)
            out[u] = tuple(targets)
    except PresentationError:
        raise
    except Exception as exc:  # generator bugs surface as presentation errors
        raise PresentationError(f"{p.name}: generator failed: {exc}") from exc
    coords = {}
    if p.coord_of is not None:
        for v in order:
            c = p.coord_of(v)
            if c is not None:
                coords[v] = tuple(c)
    try:
        return LevelledDigraph(
            name=p.name,
            depth=depth,
            span=p.span if p.span is not None else widest,
            vertices=tuple(order),
            out_edges=out,
            level=level,
            coords=coords,
            hubs=frozenset(h for h in p.hubs if h in level),
            ends=p.ends,
        )
    except ValidationError as exc:
        raise PresentationError(f"{p.name}: {exc}") from exc


def frontier(g: LevelledDigraph) -> frozenset[VertexId]:
    """Top band of ``g`` through which every deeper continuation must pass."""
    lo = g.depth - max(g.span, 1) + 1
    return frozenset(v for v in g.vertices if g.level[v] >= lo and v not in g.hubs)


def reverse(g: LevelledDigraph) -> LevelledDigraph:
    preds = g.in_edges()
    return LevelledDigraph(
        name=g.name,
        depth=g.depth,
        span=g.span,
        vertices=g.vertices,
        out_edges={v: tuple(preds[v]) for v in g.vertices},
        level=dict(g.level),
        coords=dict(g.coords),
        hubs=g.hubs,
        ends=g.ends,
    )


def to_json(g: LevelledDigraph) -> str:
    doc = {
        "name": g.name,
        "depth": g.depth,
        "span": g.span,
        "vertices": [
            {"id": v, "level": g.level[v], **({"coord": list(g.coords[v])} if v in g.coords else {})}
            for v in g.vertices
        ],
        "edges": [[u, v] for u, v in g.edges()],
    }
    if g.hubs:
        doc["hubs"] = sorted(g.hubs)
    return json.dumps(doc, indent=1)


def to_dot(g: LevelledDigraph) -> str:
    """Graphviz rendering; coordinates become pinned ``pos`` hints."""
    lines = [f'digraph "{g.name}" {{', "  node [shape=circle, fontsize=9];"]
    for v in g.vertices:
        attrs = [f'label="{v}"']
        if v in g.coords:
            c = g.coords[v]
            x, y = (c[1], c[0]) if len(c) >= 2 else (c[0], 0)
            attrs.append(f'pos="{x},{y}!"')
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for u, v in g.edges():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(g: LevelledDigraph, format: str = "json") -> str:
    if format == "json":
        return to_json(g)
    if format == "dot":
        return to_dot(g)
    raise ValueError(f"unsupported export format {format!r}")


def import_digraph(text: str, format: str = "json") -> LevelledDigraph:
    if format != "json":
        raise ValueError(f"unsupported import format {format!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    try:
        name = doc.get("name", "imported")
        depth = int(doc["depth"])
        span = int(doc["span"])
        raw_vertices = doc["vertices"]
        raw_edges = doc["edges"]
        order = [str(item["id"]) for item in raw_vertices]
        level = {str(item["id"]): int(item["level"]) for item in raw_vertices}
        coords = {
            str(item["id"]): tuple(int(c) for c in item["coord"])
            for item in raw_vertices
            if item.get("coord") is not None
        }
        edges = [(str(u), str(v)) for u, v in raw_edges]
        hubs = frozenset(str(h) for h in doc.get("hubs", ()))
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed digraph document: {exc!r}") from exc
    adj: dict[VertexId, list[VertexId]] = {v: [] for v in order}
    for u, v in edges:
        if u not in adj or v not in adj:
            raise ValidationError(f"edge {u!r}->{v!r} has an undeclared endpoint")
        adj[u].append(v)
    return LevelledDigraph(
        name=name,
        depth=depth,
        span=span,
        vertices=tuple(order),
        out_edges={v: tuple(t) for v, t in adj.items()},
        level=level,
        coords=coords,
        hubs=hubs,
    )


def same_structure(g: LevelledDigraph, h: LevelledDigraph) -> bool:
    """Vertex sets, levels and edge sets agree (order and metadata ignored)."""
    return (
        set(g.vertices) == set(h.vertices)
        and dict(g.level) == dict(h.level)
        and set(g.edges()) == set(h.edges())
    )
