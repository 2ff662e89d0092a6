import itertools
import random

import pytest

from coxjsj.corpus import cycle, theta
from coxjsj.coxeter import (
    _commute_table,
    _side_tracker,
    _build,
    build_ball,
    classify_side,
    growth_ball_size,
    normal_form,
    side_of,
    verify_a_set_separation,
    verify_separation,
)
from coxjsj.errors import CapExceeded, OnSeparatingSet, PreconditionError
from coxjsj.graph import DefiningGraph, cut_pair_info, cut_pairs
from oracles import ball_by_words, brute_normal_form, commutation_class, to_nx

T1223 = theta(1, 2, 2, 3)
T2223 = theta(2, 2, 2, 3)
T222 = theta(2, 2, 2)


def _random_words(g, rng, count, max_len):
    return [tuple(rng.choice(g.vertices) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def test_normal_form_examples():
    g = DefiningGraph.from_edges([("s", "t")], ["a", "b"])
    assert normal_form(g, "a a") == ()
    assert normal_form(g, "t s") == ("s", "t")
    assert normal_form(g, "a b a") == ("a", "b", "a")
    assert normal_form(g, "s a s") == ("s", "a", "s")
    assert normal_form(g, "s t s") == ("t",)


def test_normal_form_unknown_letter():
    with pytest.raises(PreconditionError):
        normal_form(T222, "a q")


@pytest.mark.parametrize("g", [T222, T1223, cycle(5)], ids=["theta222", "theta1223", "c5"])
def test_normal_form_matches_brute_force(g):
    h = to_nx(g)
    rng = random.Random(3)
    for w in _random_words(g, rng, 150, 12):
        nf = normal_form(g, w)
        assert nf == brute_normal_form(h, w)
        assert normal_form(g, nf) == nf


def test_normal_form_invariant_under_moves():
    g = T1223
    h = to_nx(g)
    rng = random.Random(11)
    for w in _random_words(g, rng, 60, 9):
        nf = normal_form(g, w)
        v = list(w)
        for _ in range(20):
            i = rng.randrange(len(v) + 1)
            if rng.random() < 0.5:
                s = rng.choice(g.vertices)
                v[i:i] = [s, s]
            elif len(v) >= 2 and i < len(v) - 1 and h.has_edge(v[i], v[i + 1]):
                v[i], v[i + 1] = v[i + 1], v[i]
        assert normal_form(g, v) == nf


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------

def test_ball_small_sizes():
    assert len(build_ball(T222, 0)) == 1
    two = DefiningGraph.from_edges([], ["a", "b"])
    assert len(build_ball(two, 3)) == 7
    edge = DefiningGraph.from_edges([("a", "b")])
    assert len(build_ball(edge, 2)) == 4


@pytest.mark.parametrize("g,r", [(T222, 4), (cycle(5), 5), (T1223, 3)], ids=["theta222", "c5", "theta1223"])
def test_ball_matches_word_oracle_and_growth_series(g, r):
    ball = build_ball(g, r)
    words = ball_by_words(to_nx(g), r)
    assert set(ball.elements) == words
    assert len(ball) == growth_ball_size(g, g.vertices, r)
    sizes = [growth_ball_size(g, g.vertices, k) for k in range(r + 1)]
    assert all(x < y for x, y in zip(sizes, sizes[1:]))
    for i, w in enumerate(ball.elements):
        assert ball.lengths[i] == len(w)
        for k, j in enumerate(ball.neighbours[i]):
            if j >= 0:
                assert ball.elements[j] == normal_form(g, w + (ball.generators[k],))


def test_ball_over_generator_subset():
    gens = ("a", "b", "x1")
    ball = build_ball(T222, 4, generators=gens)
    assert set(ball.elements) == ball_by_words(to_nx(T222), 4, gens)
    assert len(ball) == growth_ball_size(T222, gens, 4)


def test_cap_reports_attained_radius():
    with pytest.raises(CapExceeded) as info:
        build_ball(T222, 6, cap=100)
    sizes = [growth_ball_size(T222, T222.vertices, k) for k in range(7)]
    expect = max(k for k, n in enumerate(sizes) if n <= 100)
    assert info.value.attained_radius == expect


def test_negative_radius_rejected():
    with pytest.raises(PreconditionError):
        build_ball(T222, -1)


# ---------------------------------------------------------------------------
# Side classification
# ---------------------------------------------------------------------------

def test_classify_side_examples():
    comp, primed = classify_side(T2223, ("a", "b"), "a x1")
    assert comp == frozenset({"x1", "x2"}) and not primed
    comp, primed = classify_side(T1223, ("a", "b"), "a c x1")
    assert comp == frozenset({"x1", "x2"}) and primed
    with pytest.raises(OnSeparatingSet):
        classify_side(T1223, ("a", "b"), "c a b")
    with pytest.raises(OnSeparatingSet, match="on separating set"):
        classify_side(T2223, ("a", "b"), "ab")
    with pytest.raises(PreconditionError):
        classify_side(T2223, ("a", "x1"), "x2")


def test_side_independent_of_spelling():
    # every reduced spelling of an element lands on the same side
    g = T1223
    h = to_nx(g)
    info = cut_pair_info(g, "a", "b")
    rng = random.Random(5)
    for w in _random_words(g, rng, 40, 7):
        nf = normal_form(g, w)
        if not nf:
            continue
        sides = set()
        for spelling in commutation_class(h, nf):
            try:
                sides.add(classify_side(g, ("a", "b"), spelling))
            except OnSeparatingSet:
                sides.add(None)
        assert len(sides) == 1


@pytest.mark.parametrize("g", [T1223, T2223], ids=["theta1223", "theta2223"])
def test_incremental_tracker_matches_direct_classification(g):
    info = cut_pair_info(g, "a", "b")
    ball, states = _build(g, 4, 10**6, None, _side_tracker(g, info, g.vertices))
    for w, (_, label, dist, _) in zip(ball.elements, states):
        assert (label, dist) == side_of(g, info, w)


# ---------------------------------------------------------------------------
# Separation checks
# ---------------------------------------------------------------------------

def test_verify_separation_theta_2223():
    rep = verify_separation(T2223, ("a", "b"), 6)
    assert rep.expected == 4 and rep.classes == 4 and rep.violations == 0 and rep.consistent


def test_verify_separation_theta_1223():
    rep = verify_separation(T1223, ("a", "b"), 6)
    assert rep.expected == 6 and rep.classes == 6 and rep.violations == 0 and rep.consistent


def test_verify_separation_toy_theta():
    rep = verify_separation(T222, ("a", "b"), 5)
    assert rep.classes == 3 and rep.consistent
    assert len(rep.generators) == len(T222)


def test_verify_separation_all_cut_pairs_of_a_pentagon_pair():
    g = DefiningGraph.from_edges(
        [("p0", "p1"), ("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p0"),
         ("p0", "q2"), ("q2", "q3"), ("q3", "q4"), ("q4", "p1")]
    )
    for info in cut_pairs(g):
        rep = verify_separation(g, info.pair, 5)
        assert rep.violations == 0


def test_verify_separation_insufficient_radius():
    rep = verify_separation(T1223, ("a", "b"), 2)
    assert not rep.sufficient_radius and rep.violations == 0 and rep.consistent


@pytest.mark.parametrize("g", [T1223, T2223], ids=["theta1223", "theta2223"])
def test_a_set_geodesic_separates(g):
    rep = verify_a_set_separation(g, {"a", "x1", "x2", "b"}, "x1 b a x2 a b", 6)
    assert rep.separates and rep.components >= 2


def test_pentagon_class_geodesic_separates(corpus):
    g = corpus["pentagon_ring"]
    rep = verify_a_set_separation(g, [f"a{i}" for i in range(1, 6)], "a1 a2 a3 a4 a5", 5)
    assert rep.separates


def test_pentagram_word_in_a_pentagon():
    pent = cycle(5, prefix="a")
    rep = verify_a_set_separation(pent, pent.vertices, "a0 a2 a4 a1 a3", 5)
    assert rep.separates


@pytest.mark.parametrize("word", ["a x1 b x2", "a x1", "a", "a a", "x1 x2 b a"])
def test_non_geodesic_words_rejected(word):
    with pytest.raises(PreconditionError, match="geodesic"):
        verify_a_set_separation(T2223, {"a", "x1", "x2", "b"}, word, 4)


def test_a_set_word_must_stay_inside_set():
    with pytest.raises(PreconditionError, match="outside"):
        verify_a_set_separation(T2223, {"a", "b"}, "a y1", 4)


def test_exhaustive_small_word_lengths_agree():
    # all words up to length 6 over three generators: ball membership and normal forms
    g = T222
    h = to_nx(g)
    gens = ("a", "x1", "y1")
    for n in range(7):
        for w in itertools.product(gens, repeat=n):
            assert normal_form(g, w) == brute_normal_form(h, w)
    assert _commute_table(g)["a"] == frozenset({"x1", "y1", "z1"})
