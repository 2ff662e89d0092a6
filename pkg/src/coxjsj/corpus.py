"""Named example graphs and a seeded generator of assumption-passing graphs."""

from __future__ import annotations

import random

from .graph import DefiningGraph, check_standing_assumptions


def cycle(n: int, prefix: str = "v") -> DefiningGraph:
    labels = [f"{prefix}{i}" for i in range(n)]
    return DefiningGraph.from_edges([(labels[i], labels[(i + 1) % n]) for i in range(n)], labels)


def complete(n: int) -> DefiningGraph:
    labels = [f"v{i}" for i in range(n)]
    return DefiningGraph.from_edges([(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)])


def _path_edges(path: list[str]) -> list[tuple[str, str]]:
    return list(zip(path, path[1:]))


def theta(*interiors: int) -> DefiningGraph:
    """Generalised Θ-graph: a and b joined by branches with the given interior counts.

    A lone one-vertex branch is named c; the remaining branches take letters
    from the end of "tuvwxyz" with 1-based indices running from a to b.
    """
    singles = [i for i, n in enumerate(interiors) if n == 1]
    named_c = singles[0] if len(singles) == 1 else None
    rest = [i for i in range(len(interiors)) if i != named_c]
    letters = "tuvwxyz"[-len(rest):] if rest else ""
    edges: list[tuple[str, str]] = []
    for i, n in enumerate(interiors):
        if i == named_c:
            inner = ["c"]
        else:
            letter = letters[rest.index(i)]
            inner = [f"{letter}{j}" for j in range(1, n + 1)]
        edges += _path_edges(["a", *inner, "b"])
    return DefiningGraph.from_edges(edges)


def subdivided_k4(times: int = 2) -> DefiningGraph:
    """K4 with ``times`` new vertices on every edge."""
    edges: list[tuple[str, str]] = []
    for i in range(1, 5):
        for j in range(i + 1, 5):
            inner = [f"e{i}{j}_{t}" for t in range(1, times + 1)]
            edges += _path_edges([f"b{i}", *inner, f"b{j}"])
    return DefiningGraph.from_edges(edges)


def mixed_branches() -> DefiningGraph:
    """Three essential vertices a, d, e; three a–d, two a–e and one d–e branch, all of length 3."""
    edges = _path_edges(["a", "b", "c", "d"])
    edges += _path_edges(["a", "h1", "h2", "d"]) + _path_edges(["a", "i1", "i2", "d"])
    edges += _path_edges(["a", "j1", "j2", "e"]) + _path_edges(["a", "k1", "k2", "e"])
    edges += _path_edges(["d", "f", "g", "e"])
    return DefiningGraph.from_edges(edges)


def pentagon_ring() -> DefiningGraph:
    """Five pairwise non-adjacent vertices a1..a5 arranged in a cycle.

    Consecutive a_i, a_{i+1} are joined by a length-2 branch through c_i and a
    length-3 branch through d_i1, d_i2.
    """
    edges: list[tuple[str, str]] = []
    for i in range(1, 6):
        j = i % 5 + 1
        edges += _path_edges([f"a{i}", f"c{i}", f"a{j}"])
        edges += _path_edges([f"a{i}", f"d{i}1", f"d{i}2", f"a{j}"])
    return DefiningGraph.from_edges(edges)


def twin_stars() -> DefiningGraph:
    """Two subdivided K4-like blocks {u,v,p,q} and {p,q,r,s} glued along p, q.

    u–v and r–s are length-2 branches through x and y; every other branch
    (u or v or r or s to p or q) has length 3.
    """
    edges = _path_edges(["u", "x", "v"]) + _path_edges(["r", "y", "s"])
    for outer in "uvrs":
        for inner in "pq":
            edges += _path_edges([outer, f"{outer}{inner}1", f"{outer}{inner}2", inner])
    return DefiningGraph.from_edges(edges)


def named_corpus() -> dict[str, DefiningGraph]:
    return {
        "theta_1223": theta(1, 2, 2, 3),
        "theta_2223": theta(2, 2, 2, 3),
        "k4_twice": subdivided_k4(2),
        "mixed_branches": mixed_branches(),
        "pentagon_ring": pentagon_ring(),
        "twin_stars": twin_stars(),
    }


INTERIOR_CHOICES = (0, 1, 1, 2, 2, 2, 3)


def random_graph(
    rng: random.Random,
    max_vertices: int = 24,
    attempts: int = 10_000,
    interior_choices: tuple[int, ...] = INTERIOR_CHOICES,
) -> DefiningGraph:
    """Random graph passing the standing assumptions.

    A random multigraph with minimum degree three is subdivided with branch
    lengths 1 to 4 and kept only if it passes every assumption.
    """
    for _ in range(attempts):
        nodes = rng.randint(2, 7)
        extra = rng.randint(0, nodes + 2)
        ends: list[tuple[int, int]] = []
        for i in range(1, nodes):  # random spanning tree
            ends.append((rng.randrange(i), i))
        for _ in range(extra + nodes):
            u, v = rng.randrange(nodes), rng.randrange(nodes)
            if u != v:
                ends.append((u, v))
        deg = [0] * nodes
        for u, v in ends:
            deg[u] += 1
            deg[v] += 1
        for x in range(nodes):
            while deg[x] < 3:
                y = rng.choice([t for t in range(nodes) if t != x])
                ends.append((x, y))
                deg[x] += 1
                deg[y] += 1
        edges: list[tuple[str, str]] = []
        fresh = 0
        for u, v in ends:
            n_in = rng.choice(interior_choices)
            inner = [f"i{fresh + t}" for t in range(n_in)]
            fresh += n_in
            edges += _path_edges([f"n{u}", *inner, f"n{v}"])
        if nodes + fresh > max_vertices:
            continue
        try:
            g = DefiningGraph.from_edges(edges)
        except Exception:
            continue  # repeated direct edge
        if check_standing_assumptions(g).passes_all:
            return g
    raise RuntimeError("no assumption-passing graph found")


def fuzz_corpus(
    count: int, seed: int = 0, max_vertices: int = 24, interior_choices: tuple[int, ...] = INTERIOR_CHOICES
) -> list[DefiningGraph]:
    rng = random.Random(seed)
    return [random_graph(rng, max_vertices, interior_choices=interior_choices) for _ in range(count)]
