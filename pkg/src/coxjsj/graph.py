"""Defining graphs: parsing, standing assumptions, cut structure, branches, cycles."""

from __future__ import annotations

import itertools
import json
import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Literal

from .errors import GraphError, ParseError, PreconditionError

Vertex = str
Pair = tuple[Vertex, Vertex]
GraphFormat = Literal["json", "edgelist", "dot-subset"]


def pair(u: Vertex, v: Vertex) -> Pair:
    """Canonical unordered pair."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class DefiningGraph:
    """A finite simplicial graph with canonically sorted vertex labels.

    Instances are immutable; derived data is memoised in a private cache.
    """

    vertices: tuple[Vertex, ...]
    edges: frozenset[Pair]
    adjacency: dict[Vertex, tuple[Vertex, ...]] = field(compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[Vertex, Vertex]], vertices: Iterable[Vertex] = ()) -> DefiningGraph:
        """Validate and build. Loops and repeated edges are rejected."""
        verts = set(vertices)
        seen: set[Pair] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u!r}: edge ({u}, {v})")
            p = pair(u, v)
            if p in seen:
                raise GraphError(f"duplicate edge ({p[0]}, {p[1]})")
            seen.add(p)
            verts.update(p)
        order = tuple(sorted(verts))
        adj: dict[Vertex, list[Vertex]] = {x: [] for x in order}
        for u, v in seen:
            adj[u].append(v)
            adj[v].append(u)
        return cls(order, frozenset(seen), {x: tuple(sorted(ns)) for x, ns in adj.items()})

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return pair(u, v) in self.edges

    def degree(self, v: Vertex) -> int:
        return len(self.adjacency[v])

    def relabel(self, mapping: dict[Vertex, Vertex]) -> DefiningGraph:
        """Graph with every label passed through ``mapping``."""
        return DefiningGraph.from_edges(
            ((mapping[u], mapping[v]) for u, v in self.edges), (mapping[v] for v in self.vertices)
        )

    def to_json(self) -> str:
        """Canonical JSON emission."""
        edges = sorted(self.edges)
        return json.dumps({"vertices": list(self.vertices), "edges": [list(e) for e in edges]})

    def _memo(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_graph(text: str, fmt: GraphFormat = "json") -> DefiningGraph:
    """Parse ``text`` in one of the supported formats."""
    if fmt == "json":
        return _parse_json(text)
    if fmt == "edgelist":
        return _parse_edgelist(text)
    if fmt in ("dot-subset", "dot"):
        return _parse_dot(text)
    raise ParseError(f"unknown graph format {fmt!r}")


def _parse_json(text: str) -> DefiningGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise ParseError('JSON graph needs "vertices" and "edges" keys')
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise ParseError('"vertices" must be a list of strings')
    if len(set(verts)) != len(verts):
        raise ParseError("repeated vertex label")
    edges = []
    for i, e in enumerate(data["edges"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise ParseError(f"edge #{i} must be a pair of strings")
        for x in e:
            if x not in verts:
                raise ParseError(f"edge #{i} uses unlisted vertex {x!r}")
        edges.append((e[0], e[1]))
    return DefiningGraph.from_edges(edges, verts)


def _parse_edgelist(text: str) -> DefiningGraph:
    edges, verts = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            verts.append(toks[0])
        elif len(toks) == 2:
            edges.append((toks[0], toks[1]))
        else:
            col = raw.find(toks[2]) + 1
            raise ParseError("expected 'u v' or a single vertex", lineno, col)
    return DefiningGraph.from_edges(edges, verts)


_DOT_TOKEN = re.compile(r'\s*(?:(--|->)|([{};\[\]=,])|"((?:[^"\\]|\\.)*)"|([A-Za-z0-9_.]+))')


def _parse_dot(text: str) -> DefiningGraph:
    """Node and edge statements only; attribute lists are skipped."""
    text = re.sub(r"//[^\n]*|#[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", lambda m: re.sub(r"[^\n]", " ", m.group(0)), text, flags=re.S)
    toks: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _DOT_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            raise ParseError(f"unexpected character {text[pos:pos + 1].strip()!r}", line, col)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("edgeop", m.group(1), start))
        elif m.group(2):
            toks.append(("punct", m.group(2), start))
        elif m.group(3) is not None:
            toks.append(("id", m.group(3), start))
        else:
            toks.append(("id", m.group(4), start))
        pos = m.end()

    def where(i: int) -> tuple[int, int]:
        p = toks[i][2] if i < len(toks) else len(text)
        return text.count("\n", 0, p) + 1, p - (text.rfind("\n", 0, p) + 1) + 1

    i = 0
    if i < len(toks) and toks[i][1] == "strict":
        i += 1
    if i >= len(toks) or toks[i][1] not in ("graph", "digraph"):
        raise ParseError("expected 'graph'", *where(i))
    i += 1
    if i < len(toks) and toks[i][0] == "id":
        i += 1
    if i >= len(toks) or toks[i][1] != "{":
        raise ParseError("expected '{'", *where(i))
    i += 1
    edges, verts = [], []
    while i < len(toks) and toks[i][1] != "}":
        if toks[i][1] == ";":
            i += 1
            continue
        if toks[i][0] != "id":
            raise ParseError(f"unexpected token {toks[i][1]!r}", *where(i))
        if toks[i][1] in ("node", "edge", "graph") and i + 1 < len(toks) and toks[i + 1][1] == "[":
            i += 1
        else:
            chain = [toks[i][1]]
            i += 1
            while i < len(toks) and toks[i][0] == "edgeop":
                i += 1
                if i >= len(toks) or toks[i][0] != "id":
                    raise ParseError("edge operator needs a target", *where(i))
                chain.append(toks[i][1])
                i += 1
            if i < len(toks) and toks[i][1] == "=":
                i += 2  # graph-level attribute such as rankdir=LR
                continue
            verts.extend(chain)
            edges.extend(zip(chain, chain[1:]))
        if i < len(toks) and toks[i][1] == "[":
            while i < len(toks) and toks[i][1] != "]":
                i += 1
            if i >= len(toks):
                raise ParseError("unterminated attribute list", *where(i))
            i += 1
    if i >= len(toks):
        raise ParseError("expected '}'", *where(i))
    return DefiningGraph.from_edges(edges, verts)


# ---------------------------------------------------------------------------
# Components and cut structure
# ---------------------------------------------------------------------------

def components_after_removal(g: DefiningGraph, s: Iterable[Vertex] = ()) -> list[frozenset[Vertex]]:
    """Connected components of Γ minus ``s``, ordered by smallest label."""
    removed = frozenset(s)
    unknown = removed.difference(g.adjacency)
    if unknown:
        raise PreconditionError(f"unknown vertices {sorted(unknown)}")
    return g._memo(("comp", removed), lambda: _components(g, removed))


def _components(g: DefiningGraph, removed: frozenset[Vertex]) -> list[frozenset[Vertex]]:
    seen = set(removed)
    out = []
    for v in g.vertices:
        if v in seen:
            continue
        seen.add(v)
        stack, comp = [v], [v]
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
                    comp.append(y)
        out.append(frozenset(comp))
    return out


def is_connected(g: DefiningGraph) -> bool:
    return len(components_after_removal(g)) <= 1


@dataclass(frozen=True)
class CutPairInfo:
    pair: Pair
    components: tuple[frozenset[Vertex], ...]
    singleton: Vertex | None

    @property
    def k(self) -> int:
        return len(self.components)

    def component_of(self, v: Vertex) -> frozenset[Vertex] | None:
        for c in self.components:
            if v in c:
                return c
        return None


def cut_pair_info(g: DefiningGraph, a: Vertex, b: Vertex) -> CutPairInfo | None:
    """Component data when {a, b} separates Γ, else None."""
    if a == b:
        raise PreconditionError("cut pair needs two distinct vertices")
    p = pair(a, b)
    comps = components_after_removal(g, p)
    if len(comps) < 2:
        return None
    singles = [next(iter(c)) for c in comps if len(c) == 1]
    return CutPairInfo(p, tuple(comps), singles[0] if singles else None)


def cut_pairs(g: DefiningGraph) -> list[CutPairInfo]:
    """Every cut pair of Γ in canonical order."""
    def compute():
        out = []
        for a, b in itertools.combinations(g.vertices, 2):
            info = cut_pair_info(g, a, b)
            if info is not None:
                out.append(info)
        return out
    return g._memo("cut_pairs", compute)


def separates_realisation(g: DefiningGraph, a: Vertex, b: Vertex) -> bool:
    """True iff {a, b} separates the geometric realisation of Γ."""
    if a == b:
        raise PreconditionError("need two distinct vertices")
    return g.has_edge(a, b) or cut_pair_info(g, a, b) is not None


def splits_over_two_ended(g: DefiningGraph) -> bool:
    """True iff Γ has a cut pair."""
    return bool(cut_pairs(g))


# ---------------------------------------------------------------------------
# Standing assumptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssumptionReport:
    triangle_free: bool
    square_free: bool
    one_ended: bool
    not_cycle: bool
    has_cut_pair: bool
    witnesses: dict[str, str]

    @property
    def passes_all(self) -> bool:
        return all((self.triangle_free, self.square_free, self.one_ended, self.not_cycle, self.has_cut_pair))

    def flags(self) -> dict[str, bool]:
        return {
            "triangle_free": self.triangle_free,
            "square_free": self.square_free,
            "one_ended": self.one_ended,
            "not_cycle": self.not_cycle,
            "has_cut_pair": self.has_cut_pair,
            "passes_all": self.passes_all,
        }


def find_triangle(g: DefiningGraph) -> tuple[Vertex, Vertex, Vertex] | None:
    for u, v in sorted(g.edges):
        common = set(g.adjacency[u]) & set(g.adjacency[v])
        if common:
            return (u, v, min(common))
    return None


def find_square(g: DefiningGraph) -> tuple[Vertex, Vertex, Vertex, Vertex] | None:
    """Any 4-cycle. Under triangle-freeness every 4-cycle is induced."""
    for u, w in itertools.combinations(g.vertices, 2):
        common = sorted(set(g.adjacency[u]) & set(g.adjacency[w]))
        if len(common) >= 2:
            return (u, common[0], w, common[1])
    return None


def is_cycle_graph(g: DefiningGraph) -> bool:
    return len(g) >= 3 and is_connected(g) and all(g.degree(v) == 2 for v in g.vertices)


def _one_ended_witness(g: DefiningGraph) -> str | None:
    if len(g) == 0:
        return "empty graph"
    if not is_connected(g):
        comps = components_after_removal(g)
        return f"disconnected: {len(comps)} components"
    for v in g.vertices:
        if len(components_after_removal(g, [v])) >= 2:
            return f"separating vertex {v}"
    for u, v in sorted(g.edges):
        if len(components_after_removal(g, [u, v])) >= 2:
            return f"separating edge ({u}, {v})"
    return None


def check_standing_assumptions(g: DefiningGraph) -> AssumptionReport:
    wit: dict[str, str] = {}
    tri = find_triangle(g)
    if tri:
        wit["triangle_free"] = "triangle " + "-".join(tri)
    sq = find_square(g)
    if sq:
        wit["square_free"] = "square " + "-".join(sq)
    oe = _one_ended_witness(g)
    if oe:
        wit["one_ended"] = oe
    cyc = is_cycle_graph(g) and len(g) >= 5
    if cyc:
        wit["not_cycle"] = f"cycle of length {len(g)}"
    has_cp = splits_over_two_ended(g)
    if not has_cp:
        wit["has_cut_pair"] = "no pair of vertices separates the graph"
    return AssumptionReport(tri is None, sq is None, oe is None, not cyc, has_cp, wit)


def is_cocompact_fuchsian(g: DefiningGraph) -> bool:
    """True iff Γ is a cycle of length at least five."""
    return len(g) >= 5 and is_cycle_graph(g)


def require_assumptions(g: DefiningGraph) -> None:
    report = check_standing_assumptions(g)
    if not report.passes_all:
        failed = ", ".join(f"{k}: {v}" for k, v in sorted(report.witnesses.items()))
        raise PreconditionError(f"graph fails the standing assumptions ({failed})")


# ---------------------------------------------------------------------------
# Branches
# ---------------------------------------------------------------------------

def essential_vertices(g: DefiningGraph) -> frozenset[Vertex]:
    return frozenset(v for v in g.vertices if g.degree(v) >= 3)


@dataclass(frozen=True)
class Branch:
    endpoints: Pair
    interior: tuple[Vertex, ...]

    @property
    def length(self) -> int:
        return len(self.interior) + 1

    @property
    def path(self) -> tuple[Vertex, ...]:
        return (self.endpoints[0], *self.interior, self.endpoints[1])

    @property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.path)


def branches(g: DefiningGraph) -> list[Branch]:
    """Maximal paths between essential vertices with valence-2 interiors."""
    return g._memo("branches", lambda: _branches(g))


def _branches(g: DefiningGraph) -> list[Branch]:
    ess = essential_vertices(g)
    if not ess:
        raise PreconditionError("graph has no essential vertices")
    found: dict[tuple, Branch] = {}
    for u in sorted(ess):
        for first in g.adjacency[u]:
            path = [u]
            prev, cur = u, first
            while cur not in ess:
                if g.degree(cur) != 2:
                    break  # pendant vertex; only reachable outside the assumptions
                path.append(cur)
                nxt = [y for y in g.adjacency[cur] if y != prev]
                prev, cur = cur, nxt[0]
            else:
                path.append(cur)
                if path[0] > path[-1] or (path[0] == path[-1] and path[1:-1] > path[-2:0:-1]):
                    path.reverse()
                br = Branch((path[0], path[-1]), tuple(path[1:-1]))
                found[(br.endpoints, br.interior)] = br
    return sorted(found.values(), key=lambda b: (b.endpoints, b.interior))


def branch_of(g: DefiningGraph, v: Vertex) -> Branch | None:
    """The branch containing ``v`` in its interior, if any."""
    for br in branches(g):
        if v in br.interior:
            return br
    return None


# ---------------------------------------------------------------------------
# Induced cycles and cyclic orders
# ---------------------------------------------------------------------------

def canonical_cycle(seq: list[Vertex]) -> tuple[Vertex, ...]:
    """Rotate to the smallest label, oriented so the second entry is smaller."""
    n = len(seq)
    if n <= 2:
        return tuple(sorted(seq))
    i = seq.index(min(seq))
    fwd = [seq[(i + j) % n] for j in range(n)]
    bwd = [seq[(i - j) % n] for j in range(n)]
    return tuple(fwd if fwd[1] < bwd[1] else bwd)


def find_induced_cycle_through(g: DefiningGraph, targets: Iterable[Vertex], budget: int = 10**6) -> list[Vertex] | None:
    """An induced cycle of Γ containing every target vertex, or None."""
    want = frozenset(targets)
    if not want:
        return None
    start = min(want)
    path = [start]
    on_path = {start}
    steps = 0

    def dfs() -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            return False
        last = path[-1]
        if len(path) >= 3 and start in g.adjacency[last]:
            return want <= on_path  # any chord to the start forces closing here
        for x in g.adjacency[last]:
            if x in on_path:
                continue
            if any(y in on_path and y != last and y != start for y in g.adjacency[x]):
                continue
            path.append(x)
            on_path.add(x)
            if dfs():
                return True
            path.pop()
            on_path.discard(x)
        return False

    if dfs():
        return list(path)
    return None


def cyclic_order(g: DefiningGraph, a_set: Iterable[Vertex]) -> tuple[Vertex, ...]:
    """Cyclic order of ``a_set`` read off any induced cycle that contains it."""
    a = frozenset(a_set)
    if len(a) <= 2:
        return tuple(sorted(a))

    def compute():
        cyc = find_induced_cycle_through(g, a)
        if cyc is None:
            raise PreconditionError(f"no induced cycle contains {sorted(a)}")
        return canonical_cycle([v for v in cyc if v in a])
    return g._memo(("cyclic", a), compute)
