"""Brute-force right-angled Coxeter group oracle.

Elements are shortlex normal forms: the lexicographically least reduced word,
with generators ordered by label. Right multiplication by a generator either
deletes its last occurrence (when everything after it commutes with it) or
inserts it at the first admissible slot where it beats the next letter; both
preserve normal form, so no rewriting search is needed.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import CapExceeded, OnSeparatingSet, PreconditionError
from .graph import CutPairInfo, DefiningGraph, Vertex, cut_pair_info
from .enumerate import pair_valence

DEFAULT_CAP = 200_000
DEFAULT_RADIUS = 6
DEFAULT_TARGET = 50_000  # preferred per-pair ball size when generators are restricted

Word = tuple[Vertex, ...]


def tokenize(g: DefiningGraph, word: str | Sequence[Vertex]) -> Word:
    """Split a word into generator labels.

    Whitespace separates letters when present; otherwise the longest label
    matching at each position is taken.
    """
    if not isinstance(word, str):
        letters = tuple(word)
    elif any(ch.isspace() for ch in word):
        letters = tuple(word.split())
    else:
        labels = sorted(g.vertices, key=len, reverse=True)
        out, i = [], 0
        while i < len(word):
            for lab in labels:
                if word.startswith(lab, i):
                    out.append(lab)
                    i += len(lab)
                    break
            else:
                raise PreconditionError(f"unknown generator at {word[i:]!r}")
        letters = tuple(out)
    for x in letters:
        if x not in g.adjacency:
            raise PreconditionError(f"unknown generator {x!r}")
    return letters


def _commute_table(g: DefiningGraph) -> dict[Vertex, frozenset[Vertex]]:
    return g._memo("commute", lambda: {v: frozenset(g.adjacency[v]) for v in g.vertices})


def right_multiply(comm: dict[Vertex, frozenset[Vertex]], w: Word, s: Vertex) -> Word:
    """Normal form of w·s given the normal form w."""
    cs = comm[s]
    i = len(w) - 1
    while i >= 0:
        x = w[i]
        if x == s:
            return w[:i] + w[i + 1:]
        if x not in cs:
            break
        i -= 1
    p = i + 1
    while p < len(w) and w[p] < s:
        p += 1
    return w[:p] + (s,) + w[p:]


def normal_form(g: DefiningGraph, word: str | Sequence[Vertex]) -> Word:
    """Shortlex-least reduced word for the element spelled by ``word``."""
    comm = _commute_table(g)
    w: Word = ()
    for s in tokenize(g, word):
        w = right_multiply(comm, w, s)
    return w


def word_str(w: Word) -> str:
    return " ".join(w)


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------

@dataclass
class CayleyBall:
    radius: int
    generators: tuple[Vertex, ...]
    elements: list[Word]
    index: dict[Word, int]
    neighbours: list[list[int]]  # per element, per generator; -1 when outside the ball
    lengths: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)


def growth_ball_size(g: DefiningGraph, generators: Iterable[Vertex], r: int) -> int:
    """Exact |ball(r)| of the special subgroup, from its growth series 1/f(−t/(1+t))."""
    gens = sorted(set(generators))
    comm = _commute_table(g)
    cliques = [0] * (len(gens) + 1)
    cliques[0] = 1

    def extend(clique: list[Vertex], cand: list[Vertex]) -> None:
        for i, v in enumerate(cand):
            cliques[len(clique) + 1] += 1
            extend(clique + [v], [u for u in cand[i + 1:] if u in comm[v]])

    extend([], gens)
    n = r + 1
    x = [0] + [(-1) ** k for k in range(1, n)]  # −t/(1+t)

    def mul(p: list[int], q: list[int]) -> list[int]:
        out = [0] * n
        for i, a in enumerate(p):
            if a:
                for j in range(n - i):
                    out[i + j] += a * q[j]
        return out

    f = [0] * n
    power = [1] + [0] * (n - 1)
    for c in cliques:
        if c:
            f = [fi + c * pi for fi, pi in zip(f, power)]
        power = mul(power, x)
    inv = [0] * n
    inv[0] = 1
    for i in range(1, n):
        inv[i] = -sum(f[j] * inv[i - j] for j in range(1, i + 1))
    return sum(inv)


def build_ball(
    g: DefiningGraph, r: int, cap: int = DEFAULT_CAP, generators: Iterable[Vertex] | None = None
) -> CayleyBall:
    """Breadth-first ball of radius r (in the special subgroup on ``generators``, default all)."""
    return _build(g, r, cap, generators, None)[0]


def _build(
    g: DefiningGraph,
    r: int,
    cap: int,
    generators: Iterable[Vertex] | None,
    visit,
) -> tuple[CayleyBall, list]:
    """BFS that records every ball edge while expanding.

    ``visit(parent_state, s)`` computes per-element data for parent·s when that
    element is first reached; edges only join lengths differing by one, so all
    of them are met while expanding lengths below r.
    """
    if r < 0:
        raise PreconditionError("radius must be non-negative")
    gens = tuple(sorted(set(generators))) if generators is not None else g.vertices
    comm = _commute_table(g)
    elements: list[Word] = [()]
    index: dict[Word, int] = {(): 0}
    lengths = [0]
    neighbours: list[list[int]] = [[-1] * len(gens)]
    states = [visit(None, None)] if visit else []
    lo = 0
    for radius in range(1, r + 1):
        hi = len(elements)
        for i in range(lo, hi):
            w = elements[i]
            row = neighbours[i]
            for k, s in enumerate(gens):
                if row[k] >= 0:
                    continue
                v = right_multiply(comm, w, s)
                j = index.get(v)
                if j is None:
                    j = len(elements)
                    if j >= cap:
                        raise CapExceeded(cap, radius - 1)
                    index[v] = j
                    elements.append(v)
                    lengths.append(radius)
                    neighbours.append([-1] * len(gens))
                    if visit:
                        states.append(visit(states[i], s))
                row[k] = j
                neighbours[j][k] = i
        lo = hi
    return CayleyBall(r, gens, elements, index, neighbours, lengths), states


# ---------------------------------------------------------------------------
# Side classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SideLabel:
    component: int  # index into CutPairInfo.components
    primed: bool


def _strip(comm: dict[Vertex, frozenset[Vertex]], w: Word, strip: frozenset[Vertex]) -> tuple[list[int], list[int]]:
    """Positions of the maximal left prefix in ``strip`` and of the remainder."""
    prefix: list[int] = []
    rest: list[int] = []
    in_prefix = [False] * len(w)
    for i, x in enumerate(w):
        if x in strip:
            blocked = any(not in_prefix[j] and (w[j] == x or w[j] not in comm[x]) for j in range(i))
            if not blocked:
                in_prefix[i] = True
                prefix.append(i)
                continue
        rest.append(i)
    return prefix, rest


def _first_letters(comm: dict[Vertex, frozenset[Vertex]], w: Word, rest: list[int]) -> list[Vertex]:
    firsts = []
    for n, i in enumerate(rest):
        if all(w[j] in comm[w[i]] and w[j] != w[i] for j in rest[:n]):
            firsts.append(w[i])
    return firsts


def _separating_strip(info: CutPairInfo) -> frozenset[Vertex]:
    a, b = info.pair
    return frozenset({a, b} | ({info.singleton} if info.singleton is not None else set()))


def side_of(g: DefiningGraph, info: CutPairInfo, w: Word) -> tuple[SideLabel | None, int]:
    """(side, distance to the separating set); side is None on the set itself."""
    comm = _commute_table(g)
    strip = _separating_strip(info)
    prefix, rest = _strip(comm, w, strip)
    if not rest:
        return None, 0
    firsts = _first_letters(comm, w, rest)
    comps = {info.components.index(info.component_of(x)) for x in firsts}
    if len(comps) != 1:
        raise PreconditionError(f"first letters {firsts} of {word_str(w)} span several components")
    primed = info.singleton is not None and any(w[i] == info.singleton for i in prefix)
    return SideLabel(comps.pop(), primed), len(rest)


def classify_side(g: DefiningGraph, pair: tuple[Vertex, Vertex], w: str | Sequence[Vertex]) -> tuple[frozenset[Vertex], bool]:
    """Component of Γ∖{a,b} labelling the side of w, and the primed flag."""
    info = cut_pair_info(g, *pair)
    if info is None:
        raise PreconditionError(f"{pair} is not a cut pair")
    nf = normal_form(g, w)
    label, _ = side_of(g, info, nf)
    if label is None:
        raise OnSeparatingSet(word_str(nf))
    return info.components[label.component], label.primed


# ---------------------------------------------------------------------------
# Generator selection under the cap
# ---------------------------------------------------------------------------

def _grow_generators(
    g: DefiningGraph, core: Iterable[Vertex], r: int, cap: int, target: int = DEFAULT_TARGET
) -> tuple[Vertex, ...]:
    """Add vertices to ``core`` in breadth-first order while the radius-r ball
    stays within ``min(cap, target)``. The core is kept whenever it fits the cap."""
    chosen = set(core)
    limit = min(cap, target)
    if growth_ball_size(g, g.vertices, r) <= limit:
        return g.vertices
    if growth_ball_size(g, chosen, r) > cap:
        return tuple(sorted(chosen))
    dist = {v: 0 for v in chosen}
    queue = deque(sorted(chosen))
    order = []
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
                order.append(y)
    for v in sorted(order, key=lambda v: (dist[v], v)):
        if growth_ball_size(g, chosen | {v}, r) <= limit:
            chosen.add(v)
    return tuple(sorted(chosen))


def pair_generators(
    g: DefiningGraph, info: CutPairInfo, r: int, cap: int, target: int = DEFAULT_TARGET
) -> tuple[Vertex, ...]:
    """Generators for the separation check: the pair, the singleton, and per side
    one attaching vertex (plus a neighbour of it when it touches both of a, b),
    grown breadth-first while the ball fits the cap."""
    a, b = info.pair
    core = {a, b}
    if info.singleton is not None:
        core.add(info.singleton)
    for comp in info.components:
        if len(comp) == 1:
            continue
        lam = min(v for v in comp if g.has_edge(v, a) or g.has_edge(v, b))
        core.add(lam)
        if g.has_edge(lam, a) and g.has_edge(lam, b):
            core.add(min(y for y in g.adjacency[lam] if y in comp))
    return _grow_generators(g, core, r, cap, target)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationReport:
    pair: tuple[Vertex, Vertex]
    radius: int
    generators: tuple[Vertex, ...]
    ball_size: int
    classes: int
    expected: int
    violations: int
    sufficient_radius: bool

    @property
    def consistent(self) -> bool:
        counts_ok = self.classes == self.expected or not self.sufficient_radius
        return counts_ok and self.violations == 0


def verify_separation(
    g: DefiningGraph,
    pair: tuple[Vertex, Vertex],
    r: int = DEFAULT_RADIUS,
    cap: int = DEFAULT_CAP,
    generators: Iterable[Vertex] | None = None,
    target: int = DEFAULT_TARGET,
) -> SeparationReport:
    """Count sides far from the separating set and check every ball edge respects them."""
    info = cut_pair_info(g, *pair)
    if info is None:
        raise PreconditionError(f"{pair} is not a cut pair")
    gens = tuple(sorted(set(generators))) if generators is not None else pair_generators(g, info, r, cap, target)
    ball, states = _build(g, r, cap, gens, _side_tracker(g, info, gens))
    far = {lab for _, lab, dist, _ in states if dist >= 2}
    violations = 0
    for i, row in enumerate(ball.neighbours):
        li = states[i][1]
        if li is None:
            continue
        for j in row:
            if j > i and states[j][1] is not None and states[j][1] != li:
                violations += 1
    need = 3 if info.singleton is not None else 2
    return SeparationReport(info.pair, r, gens, len(ball), len(far), pair_valence(info), violations, r >= need)


def _side_tracker(g: DefiningGraph, info: CutPairInfo, gens: tuple[Vertex, ...]):
    """Incremental ``side_of`` along the BFS tree.

    State = (letters of the remainder as a bitmask, side, distance, singleton
    stripped). Appending s to w adds a maximal heap element: it joins the
    stripped prefix iff it is in the strip set and commutes with every
    remainder letter; otherwise it joins the remainder, and it fixes the side
    only when the remainder was empty.
    """
    bit = {s: 1 << k for k, s in enumerate(gens)}
    comm = _commute_table(g)
    commute_mask = {s: sum(bit[t] for t in comm[s] if t in bit) for s in gens}
    strip = _separating_strip(info)
    comp_index = {v: n for n, comp in enumerate(info.components) for v in comp}
    labels: dict[tuple[int, bool], SideLabel] = {}

    def visit(state, s):
        if state is None:
            return (0, None, 0, False)
        rest, lab, dist, c_done = state
        free = rest & ~commute_mask[s] == 0
        if s in strip and free:
            return (rest, lab, dist, c_done or s == info.singleton)
        if rest == 0:
            key = (comp_index[s], c_done)
            lab = labels.setdefault(key, SideLabel(*key))
        return (rest | bit[s], lab, dist + 1, c_done)

    return visit


@dataclass(frozen=True)
class ASetSeparationReport:
    a_set: tuple[Vertex, ...]
    word: Word
    radius: int
    generators: tuple[Vertex, ...]
    ball_size: int
    components: int

    @property
    def separates(self) -> bool:
        return self.components >= 2


def geodesic_vertices(g: DefiningGraph, word: Word, r: int) -> list[Word]:
    """Normal forms of the bi-infinite periodic geodesic through ε, within radius r."""
    comm = _commute_table(g)
    pts: list[Word] = [()]
    for seq in (itertools.cycle(word), itertools.cycle(word[::-1])):
        w: Word = ()
        for _ in range(r):
            w = right_multiply(comm, w, next(seq))
            pts.append(w)
    return pts


def verify_a_set_separation(
    g: DefiningGraph,
    a_set: Iterable[Vertex],
    word: str | Sequence[Vertex],
    r: int = DEFAULT_RADIUS,
    cap: int = DEFAULT_CAP,
    generators: Iterable[Vertex] | None = None,
    target: int = DEFAULT_TARGET,
) -> ASetSeparationReport:
    """Remove the geodesic labelled by ``word`` from the ball and count the components touching it."""
    a = tuple(sorted(set(a_set)))
    letters = tokenize(g, word)
    if not letters:
        raise PreconditionError("empty geodesic word")
    if not set(letters) <= set(a):
        raise PreconditionError("geodesic word uses letters outside the set")
    n = len(letters)
    for i in range(n):
        if n > 1 and g.has_edge(letters[i], letters[(i + 1) % n]) or (n > 1 and letters[i] == letters[(i + 1) % n]):
            raise PreconditionError(f"non-geodesic word: {letters[i]} then {letters[(i + 1) % n]}")
    if n == 1:
        raise PreconditionError("non-geodesic word: a single letter is an involution")
    back = list(itertools.islice(itertools.cycle(letters[::-1]), r))
    fwd = list(itertools.islice(itertools.cycle(letters), r))
    segment = back[::-1] + fwd
    if len(normal_form(g, segment)) != len(segment):
        raise PreconditionError("non-geodesic word: the periodic path is not reduced")
    gens = tuple(sorted(set(generators))) if generators is not None else _grow_generators(g, a, r, cap, target)
    ball = build_ball(g, r, cap, gens)
    removed = {ball.index[w] for w in geodesic_vertices(g, letters, r) if w in ball.index}
    seen = set(removed)
    touching = 0
    for start in sorted(removed):
        for j in ball.neighbours[start]:
            if j < 0 or j in seen:
                continue
            touching += 1
            seen.add(j)
            stack = [j]
            while stack:
                x = stack.pop()
                for y in ball.neighbours[x]:
                    if y >= 0 and y not in seen:
                        seen.add(y)
                        stack.append(y)
    return ASetSeparationReport(a, letters, r, gens, len(ball), touching)
