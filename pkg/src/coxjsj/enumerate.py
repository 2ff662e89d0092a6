"""Orbit enumeration for the three kinds of JSJ vertices."""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal

from .errors import PreconditionError
from .graph import (
    CutPairInfo,
    DefiningGraph,
    Pair,
    Vertex,
    cut_pair_info,
    cyclic_order,
    essential_vertices,
    pair,
    separates_realisation,
)
from .k4 import DEFAULT_BUDGET, a2_violation_index

Classification = Literal["finite", "two_ended", "infinite_many_or_one_ended"]


@dataclass(frozen=True)
class SpecialSubgroup:
    generators: tuple[Vertex, ...]
    classification: Classification

    @property
    def gens(self) -> frozenset[Vertex]:
        return frozenset(self.generators)


def special_subgroup(g: DefiningGraph, gens: Iterable[Vertex]) -> SpecialSubgroup:
    s = tuple(sorted(set(gens)))
    return SpecialSubgroup(s, classify_special(g, s))


def classify_special(g: DefiningGraph, gens: Iterable[Vertex]) -> Classification:
    s = sorted(set(gens))
    if all(g.has_edge(u, v) for u, v in itertools.combinations(s, 2)):
        return "finite"
    if len(s) == 2:
        return "two_ended"
    if len(s) == 3:
        for c in s:
            a, b = (x for x in s if x != c)
            if not g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
                return "two_ended"
    return "infinite_many_or_one_ended"


def has_infinite_span(g: DefiningGraph, a_set: Iterable[Vertex]) -> bool:
    return any(not g.has_edge(u, v) for u, v in itertools.combinations(sorted(set(a_set)), 2))


def common_neighbour(g: DefiningGraph, a: Vertex, b: Vertex) -> Vertex | None:
    """Unique common neighbour of a and b, if any; square-freeness forces uniqueness."""
    common = sorted(set(g.adjacency[a]) & set(g.adjacency[b]))
    if len(common) > 1:
        raise PreconditionError(f"{a}, {b} have several common neighbours {common}: graph has a square")
    return common[0] if common else None


def essential_cut_pair(g: DefiningGraph, a: Vertex, b: Vertex) -> CutPairInfo | None:
    ess = essential_vertices(g)
    if a not in ess or b not in ess:
        return None
    return cut_pair_info(g, a, b)


def pair_valence(info: CutPairInfo) -> int:
    """k, or 2(k − 1) when a single-vertex component exists."""
    return 2 * (info.k - 1) if info.singleton is not None else info.k


# ---------------------------------------------------------------------------
# Orbit records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxPairOrbit:
    pair: Pair
    info: CutPairInfo
    valence: int
    stabiliser: SpecialSubgroup

    @property
    def k(self) -> int:
        return self.info.k

    @property
    def singleton(self) -> Vertex | None:
        return self.info.singleton

    @property
    def sides(self) -> tuple[frozenset[Vertex], ...]:
        return tuple(c for c in self.info.components if len(c) > 1)

    def record(self) -> dict:
        return {"type": "approx", "set": list(self.pair), "valence": self.valence,
                "stabiliser": list(self.stabiliser.generators), "kind": "approx"}


@dataclass(frozen=True)
class SimClassOrbit:
    a_set: tuple[Vertex, ...]
    kind: Literal["sim_pair", "infinite_class"]
    order: tuple[Vertex, ...]
    frontier_pairs: tuple[Pair, ...]
    stabiliser: SpecialSubgroup

    @property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.a_set)

    def record(self) -> dict:
        return {"type": "sim", "set": list(self.a_set), "valence": 2 if self.kind == "sim_pair" else "inf",
                "stabiliser": list(self.stabiliser.generators), "kind": self.kind}


@dataclass(frozen=True)
class StarOrbit:
    b_set: tuple[Vertex, ...]
    internal_cut_pairs: tuple[CutPairInfo, ...]
    stabiliser: SpecialSubgroup

    @property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.b_set)

    def record(self) -> dict:
        return {"type": "star", "set": list(self.b_set), "valence": "inf",
                "stabiliser": list(self.stabiliser.generators), "kind": "star"}


# ---------------------------------------------------------------------------
# Maximal cliques
# ---------------------------------------------------------------------------

def maximal_cliques(nodes: Iterable[Vertex], adj: dict[Vertex, set[Vertex]]) -> list[frozenset[Vertex]]:
    """Bron–Kerbosch with pivoting, canonically sorted output."""
    out: list[frozenset[Vertex]] = []

    def expand(r: set[Vertex], p: set[Vertex], x: set[Vertex]) -> None:
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(sorted(p | x), key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(nodes), set())
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# ∼-class sets
# ---------------------------------------------------------------------------

def satisfies_a1(g: DefiningGraph, a_set: Iterable[Vertex]) -> bool:
    a = sorted(set(a_set))
    if len(a) < 2:
        raise PreconditionError("(A1) needs at least two vertices")
    return all(separates_realisation(g, u, v) for u, v in itertools.combinations(a, 2))


def satisfies_a2(g: DefiningGraph, a_set: Iterable[Vertex], budget: int = DEFAULT_BUDGET) -> bool:
    return a2_violation_index(g, frozenset(a_set), budget) is None


def _a1_adjacency(g: DefiningGraph) -> dict[Vertex, set[Vertex]]:
    def compute():
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in g.vertices}
        for u, v in itertools.combinations(g.vertices, 2):
            if separates_realisation(g, u, v):
                adj[u].add(v)
                adj[v].add(u)
        return adj
    return g._memo("a1_adj", compute)


def enumerate_a_sets(g: DefiningGraph, budget: int = DEFAULT_BUDGET) -> list[tuple[Vertex, ...]]:
    """Maximal (A1)∧(A2) sets with infinite span, canonically ordered."""
    return g._memo(("a_sets", budget), lambda: _enumerate_a_sets(g, budget))


def _enumerate_a_sets(g: DefiningGraph, budget: int) -> list[tuple[Vertex, ...]]:
    adj = _a1_adjacency(g)
    feasible: set[frozenset[Vertex]] = set()
    visited: set[frozenset[Vertex]] = set()

    def ok(s: frozenset[Vertex]) -> bool:
        return a2_violation_index(g, s, budget) is None

    def descend(q: frozenset[Vertex]) -> None:
        # (A1)∧(A2) is closed under subsets, so every feasible subset of q
        # misses some element of a minimal infeasible core.
        if q in visited:
            return
        visited.add(q)
        if ok(q):
            feasible.add(q)
            return
        core = set(q)
        for v in sorted(q):
            trial = frozenset(core - {v})
            if len(trial) >= 3 and not ok(trial):
                core.discard(v)
        for v in sorted(core):
            descend(q - {v})

    for clique in maximal_cliques(g.vertices, adj):
        if len(clique) >= 2:
            descend(clique)
    maximal = [s for s in feasible if not any(s < t for t in feasible)]
    keep = [tuple(sorted(s)) for s in maximal if has_infinite_span(g, s)]
    return sorted(keep, key=lambda t: (len(t), t))


def is_approx_coincident(g: DefiningGraph, a_set: Iterable[Vertex]) -> bool:
    a = sorted(set(a_set))
    if len(a) == 2:
        info = essential_cut_pair(g, *a)
        return info is not None and info.k >= 3
    if len(a) == 3:
        for c in a:
            u, v = (x for x in a if x != c)
            if g.has_edge(u, c) and g.has_edge(v, c) and not g.has_edge(u, v):
                info = essential_cut_pair(g, u, v)
                if info is not None and info.k >= 3:
                    return True
    return False


def frontier_pairs(g: DefiningGraph, order: tuple[Vertex, ...]) -> tuple[Pair, ...]:
    """Essential cut pairs consecutive in a cyclic order."""
    n = len(order)
    if n < 2:
        return ()
    steps = [(order[0], order[1])] if n == 2 else [(order[i], order[(i + 1) % n]) for i in range(n)]
    out = []
    for u, v in steps:
        if essential_cut_pair(g, u, v) is not None:
            out.append(pair(u, v))
    return tuple(sorted(set(out)))


def enumerate_sim_orbits(g: DefiningGraph, budget: int = DEFAULT_BUDGET) -> list[SimClassOrbit]:
    return g._memo(("sim", budget), lambda: _enumerate_sim(g, budget))


def _enumerate_sim(g: DefiningGraph, budget: int) -> list[SimClassOrbit]:
    out = []
    for a in enumerate_a_sets(g, budget):
        if is_approx_coincident(g, a):
            continue
        cls = classify_special(g, a)
        kind = "sim_pair" if cls == "two_ended" else "infinite_class"
        order = cyclic_order(g, a)
        stab_gens: tuple[Vertex, ...] = a
        if kind == "sim_pair" and len(a) == 2:
            c = common_neighbour(g, *a)
            if c is not None:
                stab_gens = (*a, c)
        out.append(SimClassOrbit(a, kind, order, frontier_pairs(g, order), special_subgroup(g, stab_gens)))
    return out


def enumerate_approx_orbits(g: DefiningGraph) -> list[ApproxPairOrbit]:
    return g._memo("approx", lambda: _enumerate_approx(g))


def _enumerate_approx(g: DefiningGraph) -> list[ApproxPairOrbit]:
    out = []
    for a, b in itertools.combinations(sorted(essential_vertices(g)), 2):
        info = essential_cut_pair(g, a, b)
        if info is None or info.k < 3:
            continue
        c = common_neighbour(g, a, b)
        gens = (a, b) if c is None else (a, b, c)
        out.append(ApproxPairOrbit((a, b), info, pair_valence(info), special_subgroup(g, gens)))
    return out


# ---------------------------------------------------------------------------
# Stars
# ---------------------------------------------------------------------------

def _b1_adjacency(g: DefiningGraph) -> dict[Vertex, set[Vertex]]:
    """b ~ b' iff no essential pair avoiding both separates them."""
    def compute():
        ess = sorted(essential_vertices(g))
        separated: set[Pair] = set()
        for c1, c2 in itertools.combinations(ess, 2):
            info = cut_pair_info(g, c1, c2)
            if info is None:
                continue
            where = {v: i for i, comp in enumerate(info.components) for v in comp}
            for u, v in itertools.combinations(ess, 2):
                if u in (c1, c2) or v in (c1, c2):
                    continue
                if where[u] != where[v]:
                    separated.add((u, v))
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in ess}
        for u, v in itertools.combinations(ess, 2):
            if (u, v) not in separated:
                adj[u].add(v)
                adj[v].add(u)
        return adj
    return g._memo("b1_adj", compute)


def satisfies_b1(g: DefiningGraph, b_set: Iterable[Vertex]) -> bool:
    b = sorted(set(b_set))
    ess = essential_vertices(g)
    if not set(b) <= ess:
        raise PreconditionError("(B1) is defined for essential vertices only")
    adj = _b1_adjacency(g)
    return all(v in adj[u] for u, v in itertools.combinations(b, 2))


def enumerate_star_orbits(g: DefiningGraph) -> list[StarOrbit]:
    return g._memo("stars", lambda: _enumerate_stars(g))


def _enumerate_stars(g: DefiningGraph) -> list[StarOrbit]:
    adj = _b1_adjacency(g)
    out = []
    for clique in maximal_cliques(sorted(adj), adj):
        if len(clique) < 4:
            continue
        b = tuple(sorted(clique))
        internal = []
        for u, v in itertools.combinations(b, 2):
            info = cut_pair_info(g, u, v)
            if info is not None:
                internal.append(info)
        out.append(StarOrbit(b, tuple(internal), special_subgroup(g, b)))
    return sorted(out, key=lambda s: s.b_set)
