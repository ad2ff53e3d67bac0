import itertools
import random
from fractions import Fraction

import pytest
from fixture_graphs import banana, circle, dhar_graph, k4, metric_tree, random_metric_graph, theta

from tropdiv import Divisor, GraphError, MetricGraph, canonical_divisor, divisor, is_equivalent, rank_metric
from tropdiv.breakdiv import (
    break_representative,
    enumerate_integral_break_divisors,
    is_universally_reduced,
    simple_break_rank_law,
)
from tropdiv.jacobian import spanning_tree_count
from tropdiv.rank import _picard_classes


def test_break_tree_zero():
    g = metric_tree().model
    assert enumerate_integral_break_divisors(g) == {Divisor(g, {})}


def test_break_circle_two():
    g = circle().model
    bd = enumerate_integral_break_divisors(g)
    assert bd == {divisor(g, {"u": 1}), divisor(g, {"v": 1})}


def test_break_count_matches_trees():
    for mg in (k4(), theta(), banana(3), dhar_graph()):
        g = mg.model
        assert len(enumerate_integral_break_divisors(g)) == spanning_tree_count(g)


def test_break_count_matches_trees_random():
    rng = random.Random(307)
    for _ in range(12):
        g = random_metric_graph(rng, 5, 8).model
        assert len(enumerate_integral_break_divisors(g)) == spanning_tree_count(g)


def test_break_representative_identity_and_uniqueness():
    g = k4().model
    bd = enumerate_integral_break_divisors(g)
    for b in bd:
        rep, trees = break_representative(g, b)
        assert rep == b
        assert trees  # the representative lies in at least one closed cell


def test_break_representative_circle():
    g = circle().model
    d = divisor(g, {"u": 2, "v": -1})
    rep, _ = break_representative(g, d)
    assert rep.degree() == 1 and rep.is_effective()
    assert is_equivalent(rep, d)


def test_break_bijection_with_picard_exhaustive():
    # every degree-g class has exactly one break representative
    for mg in (circle(), theta(), dhar_graph(), k4(), banana(2)):
        g = mg.model
        gen = g.genus()
        classes = _picard_classes(g, gen, g)
        reps = set()
        for c in classes:
            rep, _ = break_representative(g, c)
            reps.add(rep)
        bd = enumerate_integral_break_divisors(g)
        assert len(reps) == len(classes) == len(bd) == spanning_tree_count(g)


def test_break_degree_check():
    g = k4().model
    with pytest.raises(GraphError):
        break_representative(g, divisor(g, {"v1": 1}))


# -- universal reducedness ---------------------------------------------------


def test_universally_reduced_circle_cases():
    c = circle()
    interior = Divisor(c, {c.point_on("a", Fraction(1, 8)): 1})
    assert is_universally_reduced(c, interior)
    at_vertex = divisor(c, {"u": 1})
    assert is_universally_reduced(c, at_vertex)


def test_theta_vertex_pile_is_universally_reduced():
    h = theta()  # genus 2; the complement of one vertex is a star, no cycle
    assert is_universally_reduced(h, divisor(h, {"P": 2}))


def test_not_universally_reduced_untouched_cycle():
    g = dhar_graph()  # two triangles sharing v3
    d = divisor(g, {"v4": 1, "v5": 1})  # left triangle survives untouched
    assert not is_universally_reduced(g, d)


def test_universally_reduced_banana_interior():
    b = banana(2)
    d = Divisor(b, {b.point_on("e0", Fraction(1, 3)): 1, b.point_on("e1", Fraction(1, 2)): 1})
    assert is_universally_reduced(b, d)
    assert simple_break_rank_law(b, d)


def test_simple_break_rank_law_circle():
    c = circle()
    d = Divisor(c, {c.point_on("a", Fraction(1, 8)): 1})
    assert simple_break_rank_law(c, d)


def test_simple_break_rank_law_random():
    rng = random.Random(311)
    done = 0
    while done < 8:
        mg = random_metric_graph(rng, 4, 7)
        gen = mg.genus()
        if gen < 1:
            continue
        # sample one interior chip per non-tree edge of a spanning tree
        from tropdiv.jacobian import spanning_trees

        tree = set(spanning_trees(mg.model)[0])
        chips = {}
        for k, (eid, _, _) in enumerate(mg.model.edges):
            if k not in tree:
                chips[mg.point_on(eid, mg.lengths[eid] * Fraction(rng.randint(1, 3), 4))] = 1
        d = Divisor(mg, chips)
        if d.degree() != gen:
            continue
        if is_universally_reduced(mg, d):
            assert simple_break_rank_law(mg, d)
            done += 1
