"""Exhaustive search for subdivided K4 subgraphs.

The search runs on the branch multigraph of the 2-core: nodes are the vertices
of core-degree at least three, edges are the maximal paths through degree-2
vertices. A subdivided K4 of Γ is the same thing as one of this multigraph, and
its branch vertices are always nodes.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import SearchBudgetExceeded
from .graph import DefiningGraph, Pair, Vertex, pair

DEFAULT_BUDGET = 10**7

PAIR_ORDER = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass(frozen=True)
class SubdividedK4:
    branch_vertices: tuple[Vertex, Vertex, Vertex, Vertex]
    arcs: tuple[tuple[Vertex, ...], ...]
    induced: bool

    @property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(v for arc in self.arcs for v in arc)

    def arc_between(self, u: Vertex, v: Vertex) -> tuple[Vertex, ...]:
        for arc in self.arcs:
            if {arc[0], arc[-1]} == {u, v}:
                return arc
        raise KeyError((u, v))


@dataclass(frozen=True)
class _MEdge:
    ends: Pair
    path: tuple[Vertex, ...]  # Γ-path from ends[0] to ends[1]

    def oriented(self, start: Vertex) -> tuple[Vertex, ...]:
        return self.path if self.path[0] == start else self.path[::-1]


class BranchMultigraph:
    """Branch multigraph of the 2-core of Γ; loops are dropped."""

    def __init__(self, g: DefiningGraph) -> None:
        self.graph = g
        core = set(g.vertices)
        deg = {v: g.degree(v) for v in g.vertices}
        stack = [v for v in core if deg[v] <= 1]
        while stack:
            v = stack.pop()
            if v not in core:
                continue
            core.discard(v)
            for y in g.adjacency[v]:
                if y in core:
                    deg[y] -= 1
                    if deg[y] <= 1:
                        stack.append(y)
        self.nodes = sorted(v for v in core if deg[v] >= 3)
        node_set = set(self.nodes)
        edges: dict[tuple, _MEdge] = {}
        for u in self.nodes:
            for first in g.adjacency[u]:
                if first not in core:
                    continue
                path = [u]
                prev, cur = u, first
                while cur not in node_set:
                    path.append(cur)
                    nxt = [y for y in g.adjacency[cur] if y in core and y != prev]
                    prev, cur = cur, nxt[0]
                path.append(cur)
                if path[0] == path[-1]:
                    continue
                if path[0] > path[-1]:
                    path.reverse()
                e = _MEdge((path[0], path[-1]), tuple(path))
                edges[e.path] = e
        self.edges = sorted(edges.values(), key=lambda e: (e.ends, len(e.path), e.path))
        self.adj: dict[Vertex, list[tuple[Vertex, int]]] = {v: [] for v in self.nodes}
        for i, e in enumerate(self.edges):
            self.adj[e.ends[0]].append((e.ends[1], i))
            self.adj[e.ends[1]].append((e.ends[0], i))
        for v in self.nodes:
            self.adj[v].sort(key=lambda t: (t[0], len(self.edges[t[1]].path), t[1]))
        self.direct = {e.ends: i for i, e in enumerate(self.edges) if len(e.path) == 2}

    def has_k4_minor(self) -> bool:
        """Series-parallel reduction; False certifies that no K4 subdivision exists."""
        adj: dict[Vertex, dict[Vertex, int]] = {v: {} for v in self.nodes}
        for e in self.edges:
            u, v = e.ends
            adj[u][v] = 1
            adj[v][u] = 1
        queue = list(adj)
        while queue:
            v = queue.pop()
            if v not in adj:
                continue
            nbrs = list(adj[v])
            if len(nbrs) <= 1:
                for y in nbrs:
                    del adj[y][v]
                    queue.append(y)
                del adj[v]
            elif len(nbrs) == 2:
                x, y = nbrs
                del adj[x][v]
                del adj[y][v]
                del adj[v]
                adj[x][y] = 1
                adj[y][x] = 1
                queue.extend((x, y))
        return bool(adj)


class _Search:
    def __init__(self, m: BranchMultigraph, budget: int, induced: bool) -> None:
        self.m = m
        self.budget = budget
        self.induced = induced
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise SearchBudgetExceeded(self.budget, "subdivided-K4 search")

    def paths(self, s: Vertex, t: Vertex, blocked: set[Vertex], used_edges: set[int]) -> Iterator[list[int]]:
        """Node-disjoint M-paths from s to t avoiding ``blocked`` (s, t excepted)."""
        stack_nodes = {s}
        route: list[int] = []

        def rec(cur: Vertex) -> Iterator[list[int]]:
            for y, eid in self.m.adj[cur]:
                if eid in used_edges:
                    continue
                self.tick()
                if y == t:
                    route.append(eid)
                    yield list(route)
                    route.pop()
                    continue
                if y in blocked or y in stack_nodes:
                    continue
                stack_nodes.add(y)
                route.append(eid)
                yield from rec(y)
                route.pop()
                stack_nodes.discard(y)

        yield from rec(s)

    def connected_avoiding(self, s: Vertex, t: Vertex, blocked: set[Vertex], used_edges: set[int]) -> bool:
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y, eid in self.m.adj[x]:
                if eid in used_edges:
                    continue
                if y == t:
                    return True
                if y in blocked or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return False

    def chord_free(self, used_nodes: set[Vertex], used_edges: set[int], pending: set[Pair]) -> bool:
        for (u, v), eid in self.m.direct.items():
            if eid in used_edges or u not in used_nodes or v not in used_nodes:
                continue
            if (u, v) not in pending:
                return False
        return True

    def k4s(self, quad: tuple[Vertex, ...]) -> Iterator[list[list[int]]]:
        """All arc systems with the given branch vertices."""
        arcs: list[list[int]] = []
        used_nodes = set(quad)
        used_edges: set[int] = set()

        def rec(idx: int) -> Iterator[list[list[int]]]:
            if idx == 6:
                if not self.induced or self.chord_free(used_nodes, used_edges, set()):
                    yield [list(a) for a in arcs]
                return
            for j in range(idx, 6):
                i1, i2 = PAIR_ORDER[j]
                if not self.connected_avoiding(quad[i1], quad[i2], used_nodes, used_edges):
                    return
            i1, i2 = PAIR_ORDER[idx]
            s, t = quad[i1], quad[i2]
            for route in self.paths(s, t, used_nodes, used_edges):
                interior = self._route_nodes(s, route)[1:-1]
                used_nodes.update(interior)
                used_edges.update(route)
                arcs.append(route)
                pending = {pair(quad[a], quad[b]) for a, b in PAIR_ORDER[idx + 1:]}
                if not self.induced or self.chord_free(used_nodes, used_edges, pending):
                    yield from rec(idx + 1)
                arcs.pop()
                used_edges.difference_update(route)
                used_nodes.difference_update(interior)

        yield from rec(0)

    def _route_nodes(self, s: Vertex, route: list[int]) -> list[Vertex]:
        nodes = [s]
        for eid in route:
            u, v = self.m.edges[eid].ends
            nodes.append(v if nodes[-1] == u else u)
        return nodes

    def to_witness(self, quad: tuple[Vertex, ...], arcs: list[list[int]]) -> tuple[tuple[Vertex, ...], ...]:
        out = []
        for (i1, _), route in zip(PAIR_ORDER, arcs):
            cur = quad[i1]
            path: list[Vertex] = [cur]
            for eid in route:
                seg = self.m.edges[eid].oriented(cur)
                path.extend(seg[1:])
                cur = seg[-1]
            out.append(tuple(path))
        return tuple(out)


def _branch_multigraph(g: DefiningGraph) -> BranchMultigraph:
    return g._memo("branch_multigraph", lambda: BranchMultigraph(g))


def _is_induced(g: DefiningGraph, arcs: Iterable[tuple[Vertex, ...]]) -> bool:
    arcs = list(arcs)
    verts = {v for a in arcs for v in a}
    used = {pair(a[i], a[i + 1]) for a in arcs for i in range(len(a) - 1)}
    for u, v in g.edges:
        if u in verts and v in verts and (u, v) not in used:
            return False
    return True


def find_subdivided_k4(g: DefiningGraph, induced_only: bool = False, budget: int = DEFAULT_BUDGET) -> SubdividedK4 | None:
    """Canonically least subdivided K4 of Γ (induced if requested), or None.

    Absence is certified: either by series-parallel reduction or by an
    exhaustive search within ``budget`` nodes.
    """
    key = ("k4", induced_only, budget)
    return g._memo(key, lambda: _find(g, induced_only, budget))


def _find(g: DefiningGraph, induced_only: bool, budget: int) -> SubdividedK4 | None:
    m = _branch_multigraph(g)
    if not m.has_k4_minor():
        return None
    search = _Search(m, budget, induced_only)
    candidates = [v for v in m.nodes if len(m.adj[v]) >= 3]
    for quad in itertools.combinations(candidates, 4):
        for arcs in search.k4s(quad):
            paths = search.to_witness(quad, arcs)
            return SubdividedK4(quad, paths, _is_induced(g, paths))
    return None


def all_subdivided_k4(g: DefiningGraph, budget: int = DEFAULT_BUDGET) -> list[SubdividedK4]:
    """Every subdivided K4 subgraph of Γ, in canonical order."""
    return g._memo(("all_k4", budget), lambda: list(_iter_all(g, budget)))


def _iter_all(g: DefiningGraph, budget: int) -> Iterator[SubdividedK4]:
    m = _branch_multigraph(g)
    if not m.has_k4_minor():
        return
    search = _Search(m, budget, induced=False)
    candidates = [v for v in m.nodes if len(m.adj[v]) >= 3]
    for quad in itertools.combinations(candidates, 4):
        for arcs in search.k4s(quad):
            paths = search.to_witness(quad, arcs)
            yield SubdividedK4(quad, paths, _is_induced(g, paths))


@dataclass(frozen=True)
class _K4Masks:
    total: int
    arcs: tuple[int, ...]


def _k4_masks(g: DefiningGraph, budget: int) -> list[_K4Masks]:
    def compute():
        index = {v: i for i, v in enumerate(g.vertices)}
        out = []
        for k4 in all_subdivided_k4(g, budget):
            arcs = tuple(sum(1 << index[v] for v in arc) for arc in k4.arcs)
            total = 0
            for a in arcs:
                total |= a
            out.append(_K4Masks(total, arcs))
        return out
    return g._memo(("k4_masks", budget), compute)


def a2_violation(
    g: DefiningGraph, a_set: Iterable[Vertex], budget: int = DEFAULT_BUDGET
) -> tuple[SubdividedK4, tuple[Vertex, Vertex, Vertex]] | None:
    """A subdivided K4 meeting ``a_set`` in ≥ 3 vertices with ``a_set`` off every single arc.

    Returns the K4 and three vertices of ``a_set`` on it, or None.
    """
    a = frozenset(a_set)
    if len(a) < 3:
        return None
    idx = a2_violation_index(g, a, budget)
    if idx is None:
        return None
    k4 = all_subdivided_k4(g, budget)[idx]
    hits = sorted(v for v in a if v in k4.vertex_set)
    return k4, (hits[0], hits[1], hits[2])


def a2_violation_index(g: DefiningGraph, a: frozenset[Vertex], budget: int = DEFAULT_BUDGET) -> int | None:
    if len(a) < 3:
        return None
    index = {v: i for i, v in enumerate(g.vertices)}
    amask = sum(1 << index[v] for v in a)
    for i, k in enumerate(_k4_masks(g, budget)):
        if (amask & k.total).bit_count() < 3:
            continue
        if not any(amask & ~arc == 0 for arc in k.arcs):
            return i
    return None
