import itertools
import random

import pytest

from coxjsj.corpus import pentagon_ring, mixed_branches, twin_stars, subdivided_k4, theta
from coxjsj.enumerate import (
    classify_special,
    enumerate_a_sets,
    enumerate_approx_orbits,
    enumerate_sim_orbits,
    enumerate_star_orbits,
    frontier_pairs,
    is_approx_coincident,
    maximal_cliques,
    satisfies_a1,
    satisfies_a2,
    satisfies_b1,
    special_subgroup,
)
from coxjsj.graph import branch_of, branches, cut_pair_info, essential_vertices
from coxjsj.k4 import find_subdivided_k4
from oracles import b1_holds, maximal_a_sets, maximal_b_sets, to_nx

T1223 = theta(1, 2, 2, 3)
T2223 = theta(2, 2, 2, 3)


def _sets(xs):
    return sorted(tuple(sorted(x)) for x in xs)


# ---------------------------------------------------------------------------
# Special subgroups
# ---------------------------------------------------------------------------

def test_special_subgroup_shapes():
    assert classify_special(T1223, ["a", "c"]) == "finite"
    assert classify_special(T1223, ["a"]) == "finite"
    assert classify_special(T1223, []) == "finite"
    assert classify_special(T1223, ["a", "b"]) == "two_ended"
    assert classify_special(T1223, ["a", "b", "c"]) == "two_ended"
    assert classify_special(T1223, ["a", "b", "x1"]) == "infinite_many_or_one_ended"
    assert classify_special(T1223, ["a", "x1", "x2", "b"]) == "infinite_many_or_one_ended"
    assert special_subgroup(T1223, ["b", "a"]).generators == ("a", "b")


# ---------------------------------------------------------------------------
# (A1), (A2)
# ---------------------------------------------------------------------------

def test_a1_examples():
    assert satisfies_a1(T1223, {"a", "x1", "x2", "b"})
    assert satisfies_a1(T1223, {"x1", "x2"})  # adjacent pair
    assert not satisfies_a1(T2223, {"x1", "y1"})


def test_a2_examples():
    assert satisfies_a2(T1223, {"a", "b"})
    assert satisfies_a2(twin_stars(), {"p", "q"})
    assert not satisfies_a2(twin_stars(), {"p", "q", "r", "s"})
    assert satisfies_a1(twin_stars(), {"p", "q", "r", "s"})


# ---------------------------------------------------------------------------
# Maximal sets
# ---------------------------------------------------------------------------

def test_a_sets_theta_1223():
    assert _sets(enumerate_a_sets(T1223)) == _sets(
        [{"a", "c", "b"}, {"a", "x1", "x2", "b"}, {"a", "y1", "y2", "b"}, {"a", "z1", "z2", "z3", "b"}]
    )


def test_a_sets_twin_stars():
    sets = _sets(enumerate_a_sets(twin_stars()))
    assert ("p", "q") in sets
    assert ("q", "u", "uq1", "uq2") in sets
    assert ("q", "u") not in sets
    assert ("u", "v", "x") in sets and ("r", "s", "y") in sets


def test_a_sets_k4_twice():
    expected = _sets(b.vertex_set for b in branches(subdivided_k4(2)))
    assert _sets(enumerate_a_sets(subdivided_k4(2))) == expected


def test_a_sets_mixed_branches_and_centre_frozen():
    # derived: brute-force maximal-subset search over all vertex subsets
    assert _sets(enumerate_a_sets(mixed_branches())) == _sets([
        ("a", "b", "c", "d"), ("a", "d", "h1", "h2"), ("a", "d", "i1", "i2"), ("a", "e", "j1", "j2"),
        ("a", "e", "k1", "k2"), ("a", "d", "e", "f", "g"),
    ])
    centre = _sets(enumerate_a_sets(pentagon_ring()))
    assert len(centre) == 11
    assert ("a1", "a2", "a3", "a4", "a5") in centre


def test_a_sets_match_oracle(small_fuzz, corpus):
    graphs = list(small_fuzz) + [corpus["theta_1223"], corpus["theta_2223"], corpus["k4_twice"]]
    for g in graphs:
        assert _sets(enumerate_a_sets(g)) == maximal_a_sets(to_nx(g))


def test_a_sets_properties(small_fuzz, corpus):
    rng = random.Random(2)
    for g in list(small_fuzz) + list(corpus.values()):
        ess = essential_vertices(g)
        for a in enumerate_a_sets(g):
            a = set(a)
            # downward closure, sampled
            for _ in range(5):
                sub = rng.sample(sorted(a), rng.randint(2, len(a)))
                assert satisfies_a1(g, sub) and satisfies_a2(g, sub)
            # maximality
            for v in g.vertices:
                if v not in a:
                    bigger = a | {v}
                    assert not (satisfies_a1(g, bigger) and satisfies_a2(g, bigger))
            # branch closure
            for v in a - ess:
                b = branch_of(g, v)
                assert b.vertex_set <= a


def test_maximal_cliques_bron_kerbosch():
    adj = {1: {2, 3}, 2: {1, 3}, 3: {1, 2, 4}, 4: {3}, 5: set()}
    assert _sets(maximal_cliques(adj, adj)) == [(1, 2, 3), (3, 4), (5,)]


# ---------------------------------------------------------------------------
# Approximate pairs
# ---------------------------------------------------------------------------

def test_approx_coincidence():
    assert is_approx_coincident(T1223, {"a", "b", "c"})
    assert is_approx_coincident(T1223, {"a", "b"})
    assert not is_approx_coincident(twin_stars(), {"p", "q"})
    assert not is_approx_coincident(T1223, {"a", "x1", "x2", "b"})


def test_approx_orbits_examples():
    (o,) = enumerate_approx_orbits(T1223)
    assert o.pair == ("a", "b") and o.valence == 6 and o.k == 4 and o.singleton == "c"
    assert o.stabiliser.generators == ("a", "b", "c")
    assert len(o.sides) == 3
    (o,) = enumerate_approx_orbits(T2223)
    assert o.valence == 4 and o.stabiliser.generators == ("a", "b")
    assert enumerate_approx_orbits(subdivided_k4(2)) == []


def test_approx_mixed_branches_frozen():
    # derived: component counts by BFS
    got = [(o.pair, o.valence, o.stabiliser.generators) for o in enumerate_approx_orbits(mixed_branches())]
    assert got == [(("a", "d"), 4, ("a", "d")), (("a", "e"), 3, ("a", "e"))]


def test_approx_invariants(small_fuzz, corpus):
    for g in list(small_fuzz) + list(corpus.values()):
        for o in enumerate_approx_orbits(g):
            assert o.valence >= 3 and o.k >= 3
            assert set(o.pair) <= essential_vertices(g)
            if o.singleton is not None:
                assert o.valence == 2 * (o.k - 1) >= 4
                assert o.stabiliser.generators == tuple(sorted((*o.pair, o.singleton)))
            else:
                assert o.valence == o.k
            assert o.stabiliser.classification == "two_ended"
            rec = o.record()
            assert rec["type"] == "approx" and rec["valence"] == o.valence


# ---------------------------------------------------------------------------
# Sim classes
# ---------------------------------------------------------------------------

def test_sim_orbits_theta():
    orbits = enumerate_sim_orbits(T1223)
    assert len(orbits) == 3 and all(o.kind == "infinite_class" for o in orbits)
    assert {len(o.a_set) - 2 for o in orbits} == {2, 3}
    assert len(enumerate_sim_orbits(T2223)) == 4


def test_sim_orbits_twin_stars():
    orbits = enumerate_sim_orbits(twin_stars())
    pairs = _sets(o.a_set for o in orbits if o.kind == "sim_pair")
    assert pairs == [("p", "q"), ("r", "s", "y"), ("u", "v", "x")]
    infinite = [o for o in orbits if o.kind == "infinite_class"]
    assert len(infinite) == 8 and all(len(o.a_set) == 4 for o in infinite)
    stab = {o.a_set: o.stabiliser.generators for o in orbits if o.kind == "sim_pair"}
    assert stab[("p", "q")] == ("p", "q")
    assert stab[("r", "s", "y")] == ("r", "s", "y")


def test_sim_orbit_invariants(small_fuzz, corpus):
    for g in list(small_fuzz) + list(corpus.values()):
        approx_pairs = {o.pair for o in enumerate_approx_orbits(g)}
        for o in enumerate_sim_orbits(g):
            assert (o.kind == "sim_pair") == (classify_special(g, o.a_set) == "two_ended")
            assert o.frontier_pairs
            assert not is_approx_coincident(g, o.a_set)
            assert sorted(o.order) == sorted(o.a_set)
            if o.kind == "sim_pair":
                assert tuple(sorted(o.a_set)) not in approx_pairs
                assert o.stabiliser.classification == "two_ended"
            else:
                assert o.stabiliser.generators == o.a_set


def test_frontier_pairs_examples():
    (branch,) = [o for o in enumerate_sim_orbits(T1223) if "x1" in o.a_set]
    assert branch.frontier_pairs == (("a", "b"),)
    pent = [o for o in enumerate_sim_orbits(pentagon_ring()) if len(o.a_set) == 5][0]
    assert set(pent.frontier_pairs) == {("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a4", "a5"), ("a1", "a5")}
    assert frontier_pairs(twin_stars(), ("p", "q")) == (("p", "q"),)


def test_frontier_pairs_are_consecutive_essential_cut_pairs(small_fuzz, corpus):
    for g in list(small_fuzz) + list(corpus.values()):
        ess = essential_vertices(g)
        for o in enumerate_sim_orbits(g):
            n = len(o.order)
            consecutive = {tuple(sorted((o.order[i], o.order[(i + 1) % n]))) for i in range(n)}
            for p in o.frontier_pairs:
                assert p in consecutive and set(p) <= ess and cut_pair_info(g, *p) is not None


# ---------------------------------------------------------------------------
# Stars
# ---------------------------------------------------------------------------

def test_b1_examples():
    assert satisfies_b1(subdivided_k4(2), {"b1", "b2", "b3", "b4"})
    assert not satisfies_b1(pentagon_ring(), {"a1", "a2", "a3", "a4"})
    assert satisfies_b1(T1223, {"a"})


def test_b1_matches_oracle(small_fuzz):
    for g in small_fuzz:
        h = to_nx(g)
        ess = sorted(essential_vertices(g))
        for n in range(1, min(5, len(ess)) + 1):
            for s in itertools.combinations(ess, n):
                assert satisfies_b1(g, s) == b1_holds(h, s)


def test_stars_examples():
    assert enumerate_star_orbits(T1223) == [] and enumerate_star_orbits(T2223) == []
    stars = enumerate_star_orbits(twin_stars())
    assert [s.b_set for s in stars] == [("p", "q", "r", "s"), ("p", "q", "u", "v")]
    (star,) = enumerate_star_orbits(subdivided_k4(2))
    assert star.b_set == ("b1", "b2", "b3", "b4")
    assert star.stabiliser.generators == star.b_set
    assert len(star.internal_cut_pairs) == 6


def test_stars_match_oracle(small_fuzz, corpus):
    for g in list(small_fuzz) + [corpus["k4_twice"], corpus["theta_1223"]]:
        assert _sets(s.b_set for s in enumerate_star_orbits(g)) == maximal_b_sets(to_nx(g))


def test_star_invariants(small_fuzz, corpus):
    for g in list(small_fuzz) + list(corpus.values()):
        sims = enumerate_sim_orbits(g)
        ess = essential_vertices(g)
        for star in enumerate_star_orbits(g):
            assert len(star.b_set) >= 4 and star.internal_cut_pairs
            for info in star.internal_cut_pairs:
                assert set(info.pair) <= set(star.b_set)
            for v in ess - set(star.b_set):
                assert not satisfies_b1(g, set(star.b_set) | {v})
            for s in sims:
                assert len(set(s.a_set) & set(star.b_set)) <= 2


def test_stars_iff_k4(small_fuzz, corpus):
    for g in list(small_fuzz) + list(corpus.values()):
        assert bool(enumerate_star_orbits(g)) == (find_subdivided_k4(g) is not None)


@pytest.mark.parametrize("name", ["theta_1223", "twin_stars", "k4_twice"])
def test_records_serialise(name, corpus):
    import json

    g = corpus[name]
    recs = [o.record() for o in enumerate_approx_orbits(g)]
    recs += [o.record() for o in enumerate_sim_orbits(g)]
    recs += [o.record() for o in enumerate_star_orbits(g)]
    for r in recs:
        assert set(r) == {"type", "set", "valence", "stabiliser", "kind"}
    json.dumps(recs)
