import random
from fractions import Fraction

import pytest
from fixture_graphs import (
    banana,
    circle,
    dhar_graph,
    hyperelliptic3,
    k4,
    metric_tree,
    random_divisor,
    random_metric_graph,
)

from tropdiv import (
    Divisor,
    GraphError,
    MetricGraph,
    canonical_divisor,
    clifford_check,
    clifford_index,
    divisor,
    gonality,
    is_equivalent,
    is_weierstrass_point,
    midpoint_grid,
    orientation_rank_law,
    rank_finite,
    rank_metric,
    reduce_divisor,
    riemann_roch_check,
    weighted_rank,
    weighted_rank_via_loops,
    weighted_riemann_roch_check,
)
from tropdiv.reduction import finite_divisor_of_function


def test_rank_negative_degree():
    g = k4().model
    assert rank_finite(g, divisor(g, {"v1": -2})).rank == -1


def test_rank_k4_pair_is_zero():
    g = k4().model
    res = rank_finite(g, divisor(g, {"v1": 1, "v2": 1}), witnesses=True)
    assert res.rank == 0
    assert res.failing is not None and res.failing.degree() == 1
    # the witness for E = 0 is an effective divisor equivalent to D
    (e0, eff), = res.witnesses
    assert e0.is_zero() and eff.is_effective()
    assert is_equivalent(eff, divisor(g, {"v1": 1, "v2": 1}))
    # the failing E of degree 1 really fails
    d = divisor(g, {"v1": 1, "v2": 1}) - res.failing
    q = g.vertices[0]
    red, _ = reduce_divisor(g, d, q)
    assert red.coeff(q) < 0


def test_rank_dhar_graph():
    g = dhar_graph().model
    res = rank_finite(g, divisor(g, {"v1": 1, "v2": 1}))
    assert res.rank >= 0
    # certificate example: v4 + v5 is the equivalent effective divisor
    assert is_equivalent(divisor(g, {"v1": 1, "v2": 1}), divisor(g, {"v4": 1, "v5": 1}))


def test_rank_metric_circle_degrees():
    c = circle()
    for k in range(1, 5):
        d = divisor(c, {"u": k})
        assert rank_metric(c, d).rank == k - 1
    # a generic point too
    p = c.point_on("a", Fraction(1, 3))
    assert rank_metric(c, Divisor(c, {p: 2})).rank == 1


def test_rank_metric_hyperelliptic_pair():
    h = hyperelliptic3()
    d = divisor(h, {"a": 1, "b": 1})
    assert rank_metric(h, d).rank == 1


def test_rank_banana_noneffective():
    for gg in (2, 3, 4):
        b = banana(gg)
        d = divisor(b, {"Q": gg - 1, "P": -1})
        assert rank_metric(b, d).rank == -1


def test_riemann_roch_fixed_cases():
    c = circle()
    assert riemann_roch_check(c, divisor(c, {"u": 1}))
    b = banana(3)
    assert riemann_roch_check(b, divisor(b, {"P": 3}))
    g = k4().model
    assert riemann_roch_check(g, divisor(g, {"v1": 2, "v3": -1}))


def test_riemann_roch_random_finite():
    rng = random.Random(101)
    for _ in range(60):
        from fixture_graphs import random_graph

        g = random_graph(rng, 7, 12)
        gen = g.genus()
        deg = rng.randint(-3, 2 * gen + 2)
        d = random_divisor(rng, g, deg)
        assert riemann_roch_check(g, d)


def test_riemann_roch_random_metric():
    rng = random.Random(103)
    for _ in range(15):
        mg = random_metric_graph(rng, 5, 8)
        gen = mg.genus()
        d = random_divisor(rng, mg, rng.randint(-2, 2 * gen + 1))
        if rng.random() < 0.5:
            eid = mg.model.edges[0][0]
            d = d + Divisor(mg, {mg.point_on(eid, mg.lengths[eid] / 3): 1})
        assert riemann_roch_check(mg, d)


def test_rank_monotone_and_class_invariant():
    rng = random.Random(107)
    for _ in range(20):
        from fixture_graphs import random_graph

        g = random_graph(rng, 6, 10)
        d = random_divisor(rng, g, rng.randint(0, g.genus() + 2))
        r0 = rank_finite(g, d).rank
        v = rng.choice(g.vertices)
        r1 = rank_finite(g, d + divisor(g, {v: 1})).rank
        assert r0 <= r1 <= r0 + 1
        h = {w: rng.randint(-1, 1) for w in g.vertices}
        assert rank_finite(g, d + finite_divisor_of_function(g, h)).rank == r0


def test_rank_superadditive():
    rng = random.Random(109)
    for _ in range(10):
        from fixture_graphs import random_graph

        g = random_graph(rng, 6, 9)
        d1 = random_divisor(rng, g, rng.randint(0, 3))
        d2 = random_divisor(rng, g, rng.randint(0, 3))
        r1, r2 = rank_finite(g, d1).rank, rank_finite(g, d2).rank
        if r1 >= 0 and r2 >= 0:
            assert rank_finite(g, d1 + d2).rank >= r1 + r2


def test_finite_equals_metric_on_unit_lengths():
    rng = random.Random(113)
    for _ in range(10):
        from fixture_graphs import random_graph

        g = random_graph(rng, 5, 8)
        mg = MetricGraph(g, {e: 1 for e, _, _ in g.edges})
        d_f = random_divisor(rng, g, rng.randint(0, g.genus() + 1))
        d_m = Divisor(mg, {p.where: n for p, n in d_f.items()})
        assert rank_finite(g, d_f).rank == rank_metric(mg, d_m).rank


def test_reduced_coeff_bounds_rank():
    # Lemma: for a v-reduced divisor of nonnegative rank, D(v) >= r(D)
    rng = random.Random(127)
    for _ in range(15):
        from fixture_graphs import random_graph

        g = random_graph(rng, 6, 9)
        d = random_divisor(rng, g, rng.randint(0, g.genus() + 2))
        q = rng.choice(g.vertices)
        red, _ = reduce_divisor(g, d, q)
        r = rank_finite(g, red).rank
        if r >= 0:
            assert red.coeff(q) >= r


def test_clifford_cases():
    h = hyperelliptic3()
    d = divisor(h, {"a": 1, "b": 1})
    assert clifford_check(h, d)
    assert rank_metric(h, d).rank * 2 == d.degree()  # equality case
    c = circle()
    assert clifford_check(c, divisor(c, {}))


def test_gonality_tree_circle_k4():
    t = metric_tree()
    deg, wit = gonality(t, 2)
    assert deg == 1
    c = circle()
    deg, wit = gonality(c, 3)
    assert deg == 2
    kk = k4()
    deg, wit = gonality(kk, 3)
    assert deg == 3
    assert rank_metric(kk, wit).rank >= 1
    assert gonality(kk, 2) is None


def test_clifford_index_values():
    h = hyperelliptic3()
    val, wit = clifford_index(h)
    assert val == 0
    kk = k4()
    val, wit = clifford_index(kk)
    assert val == 1


def test_weighted_rank_point_graph():
    from tropdiv import FiniteGraph

    pt = MetricGraph(FiniteGraph(["v"], []), weights={"v": 1})
    d = divisor(pt, {"v": 2})
    assert weighted_rank(pt, d) == 1
    assert weighted_rank_via_loops(pt, d, 1) == 1
    assert weighted_rank_via_loops(pt, d, Fraction(3, 2)) == 1


def test_weighted_rank_zero_weights_matches_plain():
    rng = random.Random(131)
    for _ in range(5):
        mg = random_metric_graph(rng, 4, 6)
        d = random_divisor(rng, mg, rng.randint(0, 3))
        assert weighted_rank(mg, d) == rank_metric(mg, d).rank


def test_weighted_riemann_roch_small():
    rng = random.Random(137)
    for _ in range(5):
        mg = random_metric_graph(rng, 4, 5)
        w = {mg.model.vertices[0]: 1}
        wg = MetricGraph(mg.model, mg.lengths, w)
        d = random_divisor(rng, wg, rng.randint(0, 3))
        assert weighted_riemann_roch_check(wg, d)


def test_weierstrass_banana():
    for gg in (2, 3, 4):
        b = banana(gg)
        assert not is_weierstrass_point(b, "P")
        assert not is_weierstrass_point(b, "Q")
    for gg in (3, 4):
        b = banana(gg)
        mid = b.point_on("e0", Fraction(1, 2))
        assert is_weierstrass_point(b, mid)
    with pytest.raises(GraphError):
        is_weierstrass_point(circle(), "u")


def test_orientation_rank_law_fixtures():
    assert orientation_rank_law(metric_tree().model)
    assert orientation_rank_law(circle().model)
    assert orientation_rank_law(k4().model)
