"""Exhaustive reference implementations used to cross-check the flow code.

Everything here enumerates; keep inputs below ten vertices.
"""

from itertools import combinations
import random

from endgraph.core import from_edges


def ab_paths(g, A, B, avoid=()):
    """Every simple A-B dipath whose interior avoids A and B."""
    A, B, avoid = set(A), set(B), set(avoid)
    found = []

    def grow(path):
        x = path[-1]
        if x in B:
            found.append(tuple(path))
            return
        for y in g.out_edges[x]:
            if y in avoid or y in A or y in path:
                continue
            path.append(y)
            grow(path)
            path.pop()

    for a in g.vertices:
        if a in A and a not in avoid:
            grow([a])
    return found


def _clash(p, q, mode, terminals):
    if mode == "edge":
        return bool(set(zip(p, p[1:])) & set(zip(q, q[1:])))
    shared = set(p) & set(q)
    if mode == "internal":
        shared -= terminals
    return bool(shared)


def max_compatible(paths, mode, terminals=frozenset()):
    """Size of the largest pairwise compatible subfamily (branch and bound)."""
    n = len(paths)
    conflict = [
        {j for j in range(n) if j != i and _clash(paths[i], paths[j], mode, terminals)}
        for i in range(n)
    ]
    best = 0

    def search(i, chosen, banned):
        nonlocal best
        if len(chosen) + (n - i) <= best:
            return
        if i == n:
            best = len(chosen)
            return
        if i not in banned:
            chosen.append(i)
            search(i + 1, chosen, banned | conflict[i])
            chosen.pop()
        search(i + 1, chosen, banned)

    search(0, [], frozenset())
    return best


def brute_disjoint(g, A, B, mode):
    terminals = frozenset(A) | frozenset(B) if mode == "internal" else frozenset()
    return max_compatible(ab_paths(g, A, B), mode, terminals)


def separates(g, A, B, removed):
    return not ab_paths(g, A, B, avoid=removed)


def brute_separator(g, A, B, protected=()):
    """Size of a smallest separator avoiding ``protected``; None if none exists."""
    pool = [v for v in g.vertices if v not in set(protected)]
    for k in range(len(pool) + 1):
        for S in combinations(pool, k):
            if separates(g, A, B, S):
                return k
    return None


def brute_edge_cut(g, A, B):
    edges = list(g.edges())
    for k in range(len(edges) + 1):
        for cut in combinations(edges, k):
            cut = set(cut)
            pruned = from_edges(
                [e for e in edges if e not in cut], vertices=g.vertices
            )
            if not ab_paths(pruned, A, B):
                return k
    raise AssertionError("removing every edge always separates disjoint A and B")


def brute_fan(g, v, target):
    """Most v-target dipaths meeting only in v (each stops at its first target)."""
    target = set(target)
    paths = []

    def grow(path):
        x = path[-1]
        if x in target:
            paths.append(tuple(path))
            return
        for y in g.out_edges[x]:
            if y not in path:
                path.append(y)
                grow(path)
                path.pop()

    grow([v])
    return max_compatible(paths, "internal", frozenset({v}))


def random_digraph(rng: random.Random, n_max=9, p=None):
    n = rng.randint(2, n_max)
    p = rng.uniform(0.12, 0.35) if p is None else p
    names = [f"v{i}" for i in range(n)]
    edges = [(u, w) for u in names for w in names if u != w and rng.random() < p]
    return from_edges(edges, vertices=names)


def random_terminals(rng: random.Random, g, overlap=True):
    vs = list(g.vertices)
    A = rng.sample(vs, rng.randint(1, max(1, len(vs) // 2)))
    rest = vs if overlap else [v for v in vs if v not in A]
    if not rest:
        return A, []
    B = rng.sample(rest, rng.randint(1, max(1, len(rest) // 2)))
    return A, B
