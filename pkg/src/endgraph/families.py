"""Built-in presentations: the explicit constructions plus small test families.

Vertex ids are plain strings: ``x{i}_{k}`` for the ray-weaving counterexample,
``a_j``/``b_j``/``c_j`` for the three-row example, ``r{i}_{j}`` for parallel
rays and so on.  Coordinates follow the drawings (row, column).
"""

from __future__ import annotations

import re
from functools import partial
from typing import Callable, Iterable, Iterator

from .core import EndDescriptor, LevelledDigraph, Presentation, VertexId


def tri(n: int) -> int:
    """n-th triangular number, ``1 + 2 + ... + n``."""
    return n * (n + 1) // 2


def row_start(i: int) -> int:
    """Index of the first vertex of row ``i`` in the counterexample."""
    return tri(i - 1) + 1


def _parse(pattern: re.Pattern, v: VertexId) -> tuple[int, ...]:
    m = pattern.fullmatch(v)
    if m is None:
        raise ValueError(f"not a vertex of this family: {v!r}")
    return tuple(int(x) for x in m.groups())


# --- the counterexample: every ray meets every anti-ray ---------------------

_X = re.compile(r"x(\d+)_(\d+)")


def xid(i: int, k: int) -> VertexId:
    return f"x{i}_{k}"


def diagonal_target(k: int, first_row: bool = False) -> tuple[int, int] | None:
    """Row and index hit by the diagonal edge leaving ``x1_k``, if any."""
    i = 1 if first_row else 2
    while tri(i) + 1 <= k:
        offset = k - tri(i)
        if offset <= i:
            return i, tri(i - 1) + offset
        i += 1
    return None


def counterexample(
    first_row_diagonal: bool = False, flipped: Iterable[tuple[int, int]] = ()
) -> Presentation:
    """Rows R_1, R_2, ... joined by down edges and diagonal edges out of R_1.

    ``flipped`` reverses the down edges ``x{i+1}_k -> x{i}_k`` named by
    ``(i, k)``; it exists only to build mutants for the structural checks.
    """
    flips = frozenset(flipped)

    def vertices_at(level: int) -> Iterator[VertexId]:
        i = 1
        while row_start(i) <= level:
            yield xid(i, level)
            i += 1

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        i, k = _parse(_X, v)
        yield xid(i, k + 1)
        if i >= 2 and (i - 1, k) not in flips:
            yield xid(i - 1, k)
        if (i, k) in flips and k >= row_start(i + 1):
            yield xid(i + 1, k)
        if i == 1:
            hit = diagonal_target(k, first_row_diagonal)
            if hit is not None:
                yield xid(*hit)

    def level_of(v: VertexId) -> int:
        i, k = _parse(_X, v)
        if k < row_start(i):
            raise ValueError(f"{v} precedes the start of row {i}")
        return k

    omega = EndDescriptor("omega", lambda lvl: (xid(1, lvl),) if lvl >= 1 else ())
    name = "counterexample" + ("-diag1" if first_row_diagonal else "") + ("-mutant" if flips else "")
    return Presentation(
        name=name,
        vertices_at=vertices_at,
        edges_from=edges_from,
        level_of=level_of,
        span=None,
        ends=(omega,),
        coord_of=lambda v: _parse(_X, v),
    )


def is_diagonal(u: VertexId, v: VertexId) -> bool:
    """Edges leaving R_1 towards another row at a lower index."""
    i, k = _parse(_X, u)
    j, m = _parse(_X, v)
    return i == 1 and m < k


# --- the three-row example: combined in-degree 2 ----------------------------

_ABC = re.compile(r"([abc])_(\d+)")
_ROW_Y = {"a": 2, "b": 1, "c": 0}


def example52() -> Presentation:
    """Rows a (R^-), b (R) and c (R^<-) with a->b rungs and alternating b/c rungs."""

    def vertices_at(j: int) -> Iterator[VertexId]:
        yield f"a_{j}"
        yield f"b_{j}"
        yield f"c_{j}"

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        row, j = _split_abc(v)
        if row == "a":
            yield f"a_{j + 1}"
            yield f"b_{j}"
        elif row == "b":
            yield f"b_{j + 1}"
            if j % 2 == 1:
                yield f"c_{j}"
        else:
            if j >= 1:
                yield f"c_{j - 1}"
            if j % 2 == 0:
                yield f"b_{j}"
            if j == 0:
                yield "a_0"

    omega = EndDescriptor("omega", lambda j: (f"b_{j}",), smaller_ends=("eta",))
    eta = EndDescriptor("eta", lambda j: (f"a_{j}",))
    return Presentation(
        name="example52",
        vertices_at=vertices_at,
        edges_from=edges_from,
        level_of=lambda v: _split_abc(v)[1],
        span=1,
        ends=(omega, eta),
        coord_of=lambda v: (_ROW_Y[_split_abc(v)[0]], _split_abc(v)[1]),
    )


def _split_abc(v: VertexId) -> tuple[str, int]:
    m = _ABC.fullmatch(v)
    if m is None:
        raise ValueError(f"not a vertex of example52: {v!r}")
    return m.group(1), int(m.group(2))


# --- small test families -----------------------------------------------------

_RC = re.compile(r"[a-z]+(\d+)_(\d+)")


def _grid_vertex(prefix: str, r: int, c: int) -> VertexId:
    return f"{prefix}{r}_{c}"


def ray(antiray: bool = False) -> Presentation:
    """A single ray r_0 r_1 ... (or the anti-ray with every edge reversed)."""
    rid = re.compile(r"r_(\d+)")

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        j = int(rid.fullmatch(v).group(1))
        if antiray:
            if j >= 1:
                yield f"r_{j - 1}"
        else:
            yield f"r_{j + 1}"

    return Presentation(
        name="antiray" if antiray else "ray",
        vertices_at=lambda j: (f"r_{j}",),
        edges_from=edges_from,
        level_of=lambda v: int(rid.fullmatch(v).group(1)),
        span=1,
        ends=(EndDescriptor("omega", lambda j: (f"r_{j}",)),),
        coord_of=lambda v: (0, int(rid.fullmatch(v).group(1))),
    )


def krays(k: int = 2, m: int = 0) -> Presentation:
    """``k`` parallel rays tied into one end, plus ``m`` apexes dominating it.

    Neighbouring rows are joined by rungs in both directions at every
    column.  Apex ``d{t}`` sends an edge to every vertex of row 0 and receives
    one from every vertex of row 0.
    """
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    apexes = tuple(f"d{t}" for t in range(m))
    apex_re = re.compile(r"d(\d+)")

    def vertices_at(j: int) -> Iterator[VertexId]:
        if j == 0:
            yield from apexes
        for i in range(k):
            yield _grid_vertex("r", i, j)

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        if apex_re.fullmatch(v):
            j = 0
            while True:  # hub: targets in non-decreasing level
                yield _grid_vertex("r", 0, j)
                j += 1
        i, j = _parse(_RC, v)
        yield _grid_vertex("r", i, j + 1)
        if i + 1 < k:
            yield _grid_vertex("r", i + 1, j)
        if i >= 1:
            yield _grid_vertex("r", i - 1, j)
        if i == 0:
            yield from apexes

    def level_of(v: VertexId) -> int:
        if apex_re.fullmatch(v):
            return 0
        return _parse(_RC, v)[1]

    def coord_of(v: VertexId):
        if apex_re.fullmatch(v):
            return (-1 - int(apex_re.fullmatch(v).group(1)), 0)
        return _parse(_RC, v)

    omega = EndDescriptor(
        "omega", lambda j: (_grid_vertex("r", 0, j),), dominating_candidates=frozenset(apexes)
    )
    return Presentation(
        name=f"krays(k={k},m={m})",
        vertices_at=vertices_at,
        edges_from=edges_from,
        level_of=level_of,
        span=1,
        ends=(omega,),
        coord_of=coord_of,
        hubs=frozenset(apexes),
    )


def halfgrid() -> Presentation:
    """Rows h{r} starting at column r, rungs up at even and down at odd columns.

    Its single end has unbounded in-degree: level c carries c + 1 rows.
    """

    def vertices_at(c: int) -> Iterator[VertexId]:
        for r in range(c + 1):
            yield _grid_vertex("h", r, c)

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        r, c = _parse(_RC, v)
        yield _grid_vertex("h", r, c + 1)
        if c % 2 == 0 and r + 1 <= c:
            yield _grid_vertex("h", r + 1, c)
        if c % 2 == 1 and r >= 1:
            yield _grid_vertex("h", r - 1, c)

    return Presentation(
        name="halfgrid",
        vertices_at=vertices_at,
        edges_from=edges_from,
        level_of=lambda v: _parse(_RC, v)[1],
        span=1,
        ends=(EndDescriptor("omega", lambda c: (_grid_vertex("h", 0, c),)),),
        coord_of=lambda v: _parse(_RC, v),
    )


def ladder(n: int = 3) -> Presentation:
    """``n`` rays (rows 0..n-1) above ``n`` anti-rays, all rungs in both directions."""
    rows = 2 * n

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        r, c = _parse(_RC, v)
        if r < n:
            yield _grid_vertex("l", r, c + 1)
        elif c >= 1:
            yield _grid_vertex("l", r, c - 1)
        if r + 1 < rows:
            yield _grid_vertex("l", r + 1, c)
        if r >= 1:
            yield _grid_vertex("l", r - 1, c)

    return Presentation(
        name=f"ladder(n={n})",
        vertices_at=lambda c: [_grid_vertex("l", r, c) for r in range(rows)],
        edges_from=edges_from,
        level_of=lambda v: _parse(_RC, v)[1],
        span=1,
        ends=(EndDescriptor("omega", lambda c: (_grid_vertex("l", 0, c),)),),
        coord_of=lambda v: _parse(_RC, v),
    )


def comb() -> Presentation:
    """Out-comb: spine s_0 s_1 ... with a tooth edge s_j -> t_j."""
    sid = re.compile(r"([st])_(\d+)")

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        kind, j = sid.fullmatch(v).groups()
        if kind == "s":
            yield f"s_{int(j) + 1}"
            yield f"t_{j}"

    return Presentation(
        name="comb",
        vertices_at=lambda j: (f"s_{j}", f"t_{j}"),
        edges_from=edges_from,
        level_of=lambda v: int(sid.fullmatch(v).group(2)),
        span=1,
        ends=(EndDescriptor("omega", lambda j: (f"s_{j}",)),),
        coord_of=lambda v: (0 if v[0] == "s" else 1, int(sid.fullmatch(v).group(2))),
    )


def star() -> Presentation:
    """Infinite out-star: centre o with one leaf l_j on every level j >= 1."""
    lid = re.compile(r"l_(\d+)")

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        if v == "o":
            j = 1
            while True:
                yield f"l_{j}"
                j += 1

    return Presentation(
        name="star",
        vertices_at=lambda j: ("o",) if j == 0 else (f"l_{j}",),
        edges_from=edges_from,
        level_of=lambda v: 0 if v == "o" else int(lid.fullmatch(v).group(1)),
        span=1,
        hubs=frozenset({"o"}),
    )


# --- vertex splitting (edge-disjointness reduction) --------------------------


def minus(v: VertexId) -> VertexId:
    return f"{v}-"


def plus(v: VertexId) -> VertexId:
    return f"{v}+"


def edge_split(p: Presentation) -> Presentation:
    """Replace u by u- -> u+ and every edge u -> v by u+ -> v-."""

    def vertices_at(level: int) -> Iterator[VertexId]:
        for u in p.vertices_at(level):
            yield minus(u)
            yield plus(u)

    def edges_from(v: VertexId) -> Iterator[VertexId]:
        base, sign = v[:-1], v[-1]
        if sign == "-":
            yield plus(base)
        else:
            for w in p.edges_from(base):
                yield minus(w)

    def image(end: EndDescriptor) -> EndDescriptor:
        def ray_at(level: int, _ray=end.canonical_ray):
            return tuple(x for u in _ray(level) for x in (minus(u), plus(u)))

        return EndDescriptor(
            end.name,
            ray_at,
            frozenset(x for u in end.dominating_candidates for x in (minus(u), plus(u))),
            end.smaller_ends,
        )

    return Presentation(
        name=f"split({p.name})",
        vertices_at=vertices_at,
        edges_from=edges_from,
        level_of=lambda v: p.level_of(v[:-1]),
        span=p.span,
        ends=tuple(image(e) for e in p.ends),
        coord_of=None,
        hubs=frozenset(x for h in p.hubs for x in (minus(h), plus(h))),
    )


def split_digraph(g: LevelledDigraph) -> LevelledDigraph:
    """The same vertex splitting applied to a finite digraph."""
    order = [x for u in g.vertices for x in (minus(u), plus(u))]
    out = {}
    for u in g.vertices:
        out[minus(u)] = (plus(u),)
        out[plus(u)] = tuple(minus(w) for w in g.out_edges[u])
    return LevelledDigraph(
        name=f"split({g.name})",
        depth=g.depth,
        span=g.span,
        vertices=tuple(order),
        out_edges=out,
        level={x: g.level[x[:-1]] for x in order},
        hubs=frozenset(x for h in g.hubs for x in (minus(h), plus(h))),
    )


FAMILIES: dict[str, Callable[..., Presentation]] = {
    "counterexample": counterexample,
    "example52": example52,
    "halfgrid": halfgrid,
    "ladder": ladder,
    "krays": krays,
    "krays+mdom": partial(krays, m=1),
    "ray": ray,
    "antiray": partial(ray, antiray=True),
    "comb": comb,
    "star": star,
}


def build_family(name: str, **params) -> Presentation:
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None
    return factory(**params)
