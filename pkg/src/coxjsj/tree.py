"""Quotient of the JSJ tree: assembly, validation, comparison, export."""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Literal, Union

from .enumerate import (
    classify_special,
    enumerate_approx_orbits,
    enumerate_sim_orbits,
    enumerate_star_orbits,
    pair_valence,
)
from .errors import AmbiguousNeighbour, ParseError, TreeValidationError
from .graph import DefiningGraph, Vertex, cut_pair_info, require_assumptions
from .k4 import DEFAULT_BUDGET, find_subdivided_k4


@total_ordering
class _Infinity:
    """Symbolic infinite valence; compares above every integer, never used in arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("inf")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self


INF = _Infinity()
Count = Union[int, _Infinity]
VType = Literal["approx", "sim_pair", "infinite_sim", "star", "subdivision"]
VTYPES: tuple[VType, ...] = ("approx", "sim_pair", "infinite_sim", "star", "subdivision")
BOWDITCH_TYPE = {"approx": 1, "sim_pair": 1, "subdivision": 1, "infinite_sim": 2, "star": 3}


def add_counts(x: Count, y: Count) -> Count:
    return INF if x is INF or y is INF else x + y


def _enc(x: Count):
    return "inf" if x is INF else x


def _dec(x) -> Count:
    if x == "inf":
        return INF
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ParseError(f"bad count {x!r}")


@dataclass(frozen=True)
class VertexOrbit:
    id: str
    vtype: VType
    defining_set: tuple[Vertex, ...]
    valence: Count
    stabiliser: tuple[Vertex, ...]


@dataclass(frozen=True)
class EdgeOrbit:
    id: str
    ends: tuple[str, str]
    mult: tuple[Count, Count]  # multiplicity at ends[0], ends[1]

    def mult_at(self, vid: str) -> Count:
        return self.mult[self.ends.index(vid)]

    def other(self, vid: str) -> str:
        return self.ends[1] if self.ends[0] == vid else self.ends[0]


@dataclass(frozen=True)
class QuotientTree:
    vertex_orbits: tuple[VertexOrbit, ...]
    edge_orbits: tuple[EdgeOrbit, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def vertex(self, vid: str) -> VertexOrbit:
        if not self._index:
            self._index.update({v.id: v for v in self.vertex_orbits})
        return self._index[vid]

    def incident(self, vid: str) -> list[EdgeOrbit]:
        return [e for e in self.edge_orbits if vid in e.ends]

    def of_type(self, vtype: VType) -> list[VertexOrbit]:
        return [v for v in self.vertex_orbits if v.vtype == vtype]

    def summary(self) -> str:
        """One-line orbit census, e.g. ``approx:1(val 6) infinite_sim:3 sim_pair:0 star:0 subdivision:0``."""
        parts = []
        for t in VTYPES:
            vs = self.of_type(t)
            if t == "approx" and vs:
                parts.append(f"approx:{len(vs)}(val {','.join(str(v.valence) for v in vs)})")
            else:
                parts.append(f"{t}:{len(vs)}")
        order = ["approx", "infinite_sim", "sim_pair", "star", "subdivision"]
        return " ".join(sorted(parts, key=lambda p: order.index(p.split(":")[0])))


def _vid(vtype: str, members: tuple[Vertex, ...], extra: tuple[Vertex, ...] = ()) -> str:
    tail = ",".join(members) + ("|" + ",".join(extra) if extra else "")
    return f"{vtype}[{tail}]"


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def build_quotient_tree(g: DefiningGraph, budget: int = DEFAULT_BUDGET, check: bool = True) -> QuotientTree:
    """Assemble and validate the quotient tree of Γ."""
    if check:
        require_assumptions(g)
    approx = enumerate_approx_orbits(g)
    sims = enumerate_sim_orbits(g, budget)
    stars = enumerate_star_orbits(g)

    verts: dict[str, VertexOrbit] = {}
    type1: list[tuple[str, tuple[Vertex, Vertex]]] = []
    for o in approx:
        vid = _vid("approx", o.pair)
        verts[vid] = VertexOrbit(vid, "approx", o.pair, o.valence, o.stabiliser.generators)
        type1.append((vid, o.pair))
    infinite = []
    for s in sims:
        if s.kind == "sim_pair":
            a, b = _two_ended_pair(g, s.a_set)
            info = cut_pair_info(g, a, b)
            if info is None:
                raise TreeValidationError(f"sim_pair {s.a_set} does not come from a cut pair")
            vid = _vid("sim_pair", s.a_set)
            verts[vid] = VertexOrbit(vid, "sim_pair", s.a_set, pair_valence(info), s.stabiliser.generators)
            type1.append((vid, (a, b)))
        else:
            vid = _vid("infinite_sim", s.a_set)
            verts[vid] = VertexOrbit(vid, "infinite_sim", s.a_set, INF, s.stabiliser.generators)
            infinite.append((vid, s))
    for st in stars:
        vid = _vid("star", st.b_set)
        verts[vid] = VertexOrbit(vid, "star", st.b_set, INF, st.stabiliser.generators)

    edges: list[tuple[str, str, Count, Count]] = []

    # E2: one edge orbit per side of each Type-1 cut pair.
    for vid, (a, b) in type1:
        info = cut_pair_info(g, a, b)
        m = 2 if info.singleton is not None else 1
        for comp in info.components:
            if len(comp) == 1:
                continue
            cands = []
            for sid, s in infinite:
                rest = s.vertex_set - {a, b}
                if {a, b} <= s.vertex_set and rest and rest <= comp:
                    cands.append(sid)
            for st in stars:
                rest = st.vertex_set - {a, b}
                if {a, b} <= st.vertex_set and rest <= comp:
                    cands.append(_vid("star", st.b_set))
            if len(cands) != 1:
                raise AmbiguousNeighbour(
                    f"ambiguous neighbour: side {sorted(comp)} of {vid} has {len(cands)} candidates {cands}"
                )
            edges.append((vid, cands[0], m, INF))

    linked = {(u, w) for u, w, _, _ in edges}

    # E1 cross-check: approx–class adjacency is containment of the pair.
    for o in approx:
        xid = _vid("approx", o.pair)
        for sid, s in infinite:
            contains = set(o.pair) <= s.vertex_set
            if contains != ((xid, sid) in linked):
                raise TreeValidationError(f"containment rule and side rule disagree on {xid} – {sid}")

    # E3: stars meet their internal cut pairs.
    for st in stars:
        bid = _vid("star", st.b_set)
        for info in st.internal_cut_pairs:
            p = info.pair
            if info.k >= 3:
                xid = _vid("approx", p)
                if (xid, bid) not in linked:
                    raise TreeValidationError(f"star {bid} misses approx orbit {xid}")
                continue
            hits = [s for s in sims if p in s.frontier_pairs]
            if len(hits) != 1:
                raise AmbiguousNeighbour(
                    f"ambiguous neighbour: star {bid} cut pair {p} is a frontier pair of {len(hits)} classes"
                )
            s = hits[0]
            if s.kind == "sim_pair":
                if (_vid("sim_pair", s.a_set), bid) not in linked:
                    raise TreeValidationError(f"star {bid} misses sim_pair orbit {s.a_set}")
                continue
            meet = tuple(sorted(s.vertex_set & st.vertex_set))
            if meet != p:
                raise TreeValidationError(f"class {s.a_set} meets star {st.b_set} in {meet}, not {p}")
            sub = _vid("subdivision", st.b_set, p)
            verts[sub] = VertexOrbit(sub, "subdivision", p, 2, p)
            edges.append((sub, bid, 1, INF))
            edges.append((sub, _vid("infinite_sim", s.a_set), 1, INF))

    ordered = sorted(edges, key=lambda e: (e[0], e[1]))
    width = len(str(max(len(ordered) - 1, 0)))
    edge_orbits = tuple(
        EdgeOrbit(f"e{i:0{width}d}", (u, w), (mu, mw)) for i, (u, w, mu, mw) in enumerate(ordered)
    )
    tree = QuotientTree(tuple(sorted(verts.values(), key=lambda v: v.id)), edge_orbits)
    validate_tree(tree, g)
    return tree


def _two_ended_pair(g: DefiningGraph, a_set: tuple[Vertex, ...]) -> tuple[Vertex, Vertex]:
    """The non-adjacent pair of a two-ended generating set."""
    for u, v in itertools.combinations(a_set, 2):
        if not g.has_edge(u, v):
            return (u, v)
    raise TreeValidationError(f"{a_set} is not two-ended")


def validate_tree(t: QuotientTree, g: DefiningGraph | None = None) -> None:
    """Raise TreeValidationError on the first broken structural invariant."""
    ids = {v.id for v in t.vertex_orbits}
    for e in t.edge_orbits:
        for end in e.ends:
            if end not in ids:
                raise TreeValidationError(f"edge {e.id} uses unknown vertex {end}")
        u, w = (t.vertex(x) for x in e.ends)
        tu, tw = BOWDITCH_TYPE[u.vtype], BOWDITCH_TYPE[w.vtype]
        if tu == tw or 1 not in (tu, tw):
            raise TreeValidationError(f"edge {e.id} joins {u.vtype} to {w.vtype}")
        for x, y in ((u, w), (w, u)):
            if x.vtype == "sim_pair" and y.vtype != "star":
                raise TreeValidationError(f"sim_pair {x.id} adjacent to {y.vtype}")
        meet = set(u.stabiliser) & set(w.stabiliser)
        if g is not None and classify_special(g, meet) != "two_ended":
            raise TreeValidationError(f"edge {e.id} stabiliser {sorted(meet)} is not two-ended")
    for v in t.vertex_orbits:
        inc = t.incident(v.id)
        if v.vtype == "subdivision":
            if v.valence != 2:
                raise TreeValidationError(f"subdivision {v.id} has valence {v.valence}")
            kinds = sorted(t.vertex(e.other(v.id)).vtype for e in inc)
            if kinds != ["infinite_sim", "star"]:
                raise TreeValidationError(f"subdivision {v.id} joins {kinds}")
        if v.valence is not INF:
            total: Count = 0
            for e in inc:
                total = add_counts(total, e.mult_at(v.id))
            if total != v.valence:
                raise TreeValidationError(f"{v.id}: incident multiplicities sum to {total}, valence {v.valence}")
    for s in t.vertex_orbits:
        if s.vtype not in ("sim_pair", "infinite_sim"):
            continue
        for b in t.of_type("star"):
            if len(set(s.defining_set) & set(b.defining_set)) > 2:
                raise TreeValidationError(f"{s.id} meets {b.id} in more than two vertices")
    if t.vertex_orbits:
        seen = {t.vertex_orbits[0].id}
        stack = [t.vertex_orbits[0].id]
        while stack:
            x = stack.pop()
            for e in t.incident(x):
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(t.vertex_orbits):
            raise TreeValidationError("quotient graph is disconnected")


def is_class_g(g: DefiningGraph, budget: int = DEFAULT_BUDGET) -> bool:
    """No induced subdivided K4."""
    return find_subdivided_k4(g, induced_only=True, budget=budget) is None


def stars_iff_k4_check(g: DefiningGraph, budget: int = DEFAULT_BUDGET) -> bool:
    has_star = bool(enumerate_star_orbits(g))
    has_k4 = find_subdivided_k4(g, induced_only=False, budget=budget) is not None
    return has_star == has_k4


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonResult:
    verdict: Literal["equivalent", "distinct", "invariant_only"]
    matched_colouring: dict[int, tuple[tuple[str, ...], tuple[str, ...]]] | None
    reason: str

    @property
    def label(self) -> str:
        return "equivalent (QI)" if self.verdict == "equivalent" else self.verdict


def _refine(trees: list[QuotientTree]) -> tuple[dict[tuple[int, str], int], int]:
    nodes = [(i, v.id) for i, t in enumerate(trees) for v in t.vertex_orbits]
    nbrs: dict[tuple[int, str], list[tuple[tuple[int, str], Count]]] = defaultdict(list)
    for i, t in enumerate(trees):
        for e in t.edge_orbits:
            a, b = e.ends
            nbrs[(i, a)].append(((i, b), e.mult_at(a)))
            nbrs[(i, b)].append(((i, a), e.mult_at(b)))

    def relabel(sig: dict) -> dict:
        keys = sorted(set(sig.values()), key=repr)
        index = {k: n for n, k in enumerate(keys)}
        return {x: index[sig[x]] for x in sig}

    colour = relabel({
        (i, vid): (trees[i].vertex(vid).vtype, repr(trees[i].vertex(vid).valence)) for i, vid in nodes
    })
    rounds = 0
    while True:
        rounds += 1
        sig = {}
        for x in nodes:
            acc: dict[int, Count] = {}
            for y, m in nbrs[x]:
                acc[colour[y]] = add_counts(acc.get(colour[y], 0), m)
            sig[x] = (colour[x], tuple(sorted((c, repr(m)) for c, m in acc.items())))
        new = relabel(sig)
        if len(set(new.values())) == len(set(colour.values())):
            return new, rounds
        colour = new


def _unfold_forms(trees: list[QuotientTree], depth: int) -> dict[tuple[int, str], int]:
    """Interned canonical forms of the depth-limited universal-cover balls."""
    intern: dict = {}
    memo: dict = {}

    def form(i: int, vid: str, arrival: str | None, d: int) -> int:
        key = (i, vid, arrival, d)
        if key in memo:
            return memo[key]
        v = trees[i].vertex(vid)
        children: dict[int, Count] = {}
        if d > 0:
            for e in trees[i].incident(vid):
                m = e.mult_at(vid)
                if e.id == arrival:
                    m = INF if m is INF else m - 1
                if m == 0:
                    continue
                f = form(i, e.other(vid), e.id, d - 1)
                children[f] = add_counts(children.get(f, 0), m)
        sig = (v.vtype, repr(v.valence), tuple(sorted((f, repr(m)) for f, m in children.items())))
        memo[key] = intern.setdefault(sig, len(intern))
        return memo[key]

    return {(i, v.id): form(i, v.id, None, depth) for i, t in enumerate(trees) for v in t.vertex_orbits}


def _distinction_reason(t1: QuotientTree, t2: QuotientTree) -> str:
    for vt in VTYPES:
        a = sorted({v.valence for v in t1.of_type(vt)}, key=repr)
        b = sorted({v.valence for v in t2.of_type(vt)}, key=repr)
        if a != b:
            if a and b:
                fa = ",".join(map(repr, a))
                fb = ",".join(map(repr, b))
                return f"{vt} valence {fa} vs {fb}"
            return f"{vt} present in {'first' if a else 'second'} tree only"
    return "neighbourhood multiplicities differ after refinement"


def compare_trees(
    t1: QuotientTree, t2: QuotientTree, in_class_g: tuple[bool, bool] = (True, True), depth: int = 8
) -> ComparisonResult:
    """Decide type-preserving isomorphism of the two universal-cover trees."""
    colour, _ = _refine([t1, t2])
    c1 = {colour[(0, v.id)] for v in t1.vertex_orbits}
    c2 = {colour[(1, v.id)] for v in t2.vertex_orbits}
    if c1 != c2:
        return ComparisonResult("distinct", None, _distinction_reason(t1, t2))
    matched = {
        c: (
            tuple(sorted(v.id for v in t1.vertex_orbits if colour[(0, v.id)] == c)),
            tuple(sorted(v.id for v in t2.vertex_orbits if colour[(1, v.id)] == c)),
        )
        for c in sorted(c1)
    }
    forms = _unfold_forms([t1, t2], depth)
    for c, (ids1, ids2) in matched.items():
        if not ids1 or not ids2:
            raise TreeValidationError(f"colour {c} unmatched")
        if {forms[(0, x)] for x in ids1} != {forms[(1, x)] for x in ids2}:
            raise TreeValidationError(f"refinement and depth-{depth} unfolding disagree on colour {c}")
    reason = f"{len(c1)} matched colour classes; depth-{depth} unfoldings agree"
    verdict = "equivalent" if all(in_class_g) else "invariant_only"
    return ComparisonResult(verdict, matched, reason)


# ---------------------------------------------------------------------------
# Export and import
# ---------------------------------------------------------------------------

def tree_to_dict(t: QuotientTree) -> dict:
    return {
        "vertices": [
            {"id": v.id, "vtype": v.vtype, "set": list(v.defining_set), "valence": _enc(v.valence),
             "stabiliser": list(v.stabiliser)}
            for v in sorted(t.vertex_orbits, key=lambda v: v.id)
        ],
        "edges": [
            {"id": e.id, "ends": list(e.ends), "mult": {e.ends[0]: _enc(e.mult[0]), e.ends[1]: _enc(e.mult[1])}}
            for e in sorted(t.edge_orbits, key=lambda e: e.id)
        ],
    }


_DOT_STYLE = {
    "approx": ("box", "lightblue"),
    "sim_pair": ("diamond", "palegreen"),
    "infinite_sim": ("ellipse", "khaki"),
    "star": ("star", "salmon"),
    "subdivision": ("point", "gray"),
}


def export_tree(t: QuotientTree, fmt: Literal["json", "dot"] = "json") -> str:
    if fmt == "json":
        return json.dumps(tree_to_dict(t), indent=2, ensure_ascii=False) + "\n"
    if fmt != "dot":
        raise ValueError(f"unknown tree format {fmt!r}")
    lines = ["graph quotient {"]
    for v in sorted(t.vertex_orbits, key=lambda v: v.id):
        shape, colour = _DOT_STYLE[v.vtype]
        label = f"{v.vtype}\\n{{{','.join(v.defining_set)}}}\\nval {_enc(v.valence)}\\nstab {{{','.join(v.stabiliser)}}}"
        lines.append(f'  "{v.id}" [shape={shape}, style=filled, fillcolor={colour}, label="{label}"];')
    for e in sorted(t.edge_orbits, key=lambda e: e.id):
        marks = [f"×{m}@{t.vertex(x).vtype}" for x, m in zip(e.ends, e.mult) if m is not INF]
        lines.append(f'  "{e.ends[0]}" -- "{e.ends[1]}" [label="{" ".join(marks)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_tree(text: str) -> QuotientTree:
    """Inverse of the JSON export."""
    try:
        data = json.loads(text)
        verts = tuple(
            VertexOrbit(v["id"], v["vtype"], tuple(v["set"]), _dec(v["valence"]), tuple(v["stabiliser"]))
            for v in data["vertices"]
        )
        edges = tuple(
            EdgeOrbit(e["id"], (e["ends"][0], e["ends"][1]), (_dec(e["mult"][e["ends"][0]]), _dec(e["mult"][e["ends"][1]])))
            for e in data["edges"]
        )
    except (KeyError, TypeError, IndexError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed tree JSON: {exc}") from None
    for v in verts:
        if v.vtype not in BOWDITCH_TYPE:
            raise ParseError(f"unknown vtype {v.vtype!r}")
    return QuotientTree(verts, edges)
