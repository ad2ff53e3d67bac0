import random
from fractions import Fraction

import pytest
from fixture_graphs import (
    banana,
    circle,
    dhar_graph,
    k4,
    metric_tree,
    random_divisor,
    random_metric_graph,
    single_vertex,
)

from tropdiv import (
    Divisor,
    PreconditionError,
    canonical_divisor,
    dhar_unburnt,
    divisor,
    is_equivalent,
    principal_divisor,
    reduce_divisor,
    reduce_via_unit_subdivision,
)
from tropdiv.reduction import finite_divisor_of_function


def test_dhar_unburnt_worked_example():
    g = dhar_graph()
    m = g.model
    d = divisor(m, {"v1": 1, "v2": 1})
    assert dhar_unburnt(m, d, "v5") == {"v1", "v2"}
    d2 = divisor(m, {"v3": 2})
    assert dhar_unburnt(m, d2, "v5") == {"v1", "v2", "v3"}
    d3 = divisor(m, {"v4": 1, "v5": 1})
    assert dhar_unburnt(m, d3, "v5") == frozenset()


def test_dhar_precondition_error_names_point():
    g = dhar_graph().model
    d = divisor(g, {"v2": -1})
    with pytest.raises(PreconditionError, match="v2"):
        dhar_unburnt(g, d, "v5")


def test_reduce_worked_example():
    g = dhar_graph().model
    d = divisor(g, {"v1": 1, "v2": 1})
    red, h = reduce_divisor(g, d, "v5")
    assert red == divisor(g, {"v4": 1, "v5": 1})
    # witness: red = d + div(h)
    assert red == d + finite_divisor_of_function(g, h)
    assert h["v5"] == 0


def test_reduce_idempotent_and_zero():
    g = dhar_graph().model
    red, _ = reduce_divisor(g, divisor(g, {}), "v5")
    assert red.is_zero()
    d = divisor(g, {"v4": 1, "v5": 1})
    red, _ = reduce_divisor(g, d, "v5")
    assert red == d


def test_reduce_negative_chips():
    g = k4().model
    d = divisor(g, {"v1": -3, "v2": 5})
    red, h = reduce_divisor(g, d, "v1")
    assert red == d + finite_divisor_of_function(g, h)
    assert all(red.coeff(v) >= 0 for v in g.vertices if v != "v1")
    assert dhar_unburnt(g, red, "v1") == frozenset()


def test_reduced_uniqueness_under_perturbation():
    rng = random.Random(31)
    for _ in range(30):
        mg = random_metric_graph(rng, 6, 9)
        g = mg.model
        d = random_divisor(rng, g, rng.randint(-2, 5))
        q = rng.choice(g.vertices)
        red, _ = reduce_divisor(g, d, q)
        # perturb by firing a random vertex function
        h = {v: rng.randint(-2, 2) for v in g.vertices}
        d2 = d + finite_divisor_of_function(g, h)
        red2, _ = reduce_divisor(g, d2, q)
        assert red == red2


def test_is_equivalent_basics():
    g = dhar_graph().model
    d1 = divisor(g, {"v1": 1, "v2": 1})
    d2 = divisor(g, {"v4": 1, "v5": 1})
    assert is_equivalent(d1, d1)
    assert is_equivalent(d1, d2)
    assert not is_equivalent(d1, divisor(g, {"v1": 2}))
    assert not is_equivalent(d1, divisor(g, {"v1": 1}))  # degree mismatch


# -- metric -----------------------------------------------------------------


def test_circle_reduce_single_chip():
    c = circle()
    for t in (Fraction(1, 8), Fraction(1, 3), Fraction(1, 2)):
        p = c.point_on("a", t)
        d = Divisor(c, {p: 1})
        for q in ("u", "v"):
            red, w = reduce_divisor(c, d, q)
            assert red == d  # degree-1 classes on a circle are rigid
            assert (d + principal_divisor(w)) == red


def test_circle_not_equivalent_distinct_points():
    c = circle()
    P = c.point_on("a", Fraction(1, 8))
    Q = c.point_on("a", Fraction(1, 4))
    assert not is_equivalent(Divisor(c, {P: 1}), Divisor(c, {Q: 1}))
    assert is_equivalent(Divisor(c, {P: 1}), Divisor(c, {P: 1}))


def test_circle_reduce_moves_chips_to_base():
    c = circle()
    d = divisor(c, {"u": 2})
    red, w = reduce_divisor(c, d, "v")
    # degree-2 class: v-reduced form has at least one chip at v
    assert red.degree() == 2
    assert red == d + principal_divisor(w)
    assert dhar_unburnt(c, red, "v") == frozenset()
    assert red.coeff("v") >= 1


def test_metric_tree_everything_reduces_to_base():
    t = metric_tree()
    p = t.point_on("e5", Fraction(1, 3))
    d = Divisor(t, {p: 3})
    red, w = reduce_divisor(t, d, "P")
    assert red == divisor(t, {"P": 3})
    assert red == d + principal_divisor(w)


def test_banana_reduced_noneffective():
    b = banana(4)  # genus 4
    gg = 4
    d = divisor(b, {"Q": gg - 1, "P": -1})
    red, w = reduce_divisor(b, d, "P")
    assert red == d  # (g-1)Q - P is already P-reduced
    assert dhar_unburnt(b, d + divisor(b, {"P": 1}), "P") == frozenset()


def test_metric_witness_and_dhar_certificate_random():
    rng = random.Random(47)
    for _ in range(25):
        mg = random_metric_graph(rng, 5, 8)
        d = random_divisor(rng, mg, rng.randint(-2, 4))
        # add an interior chip sometimes
        eid = mg.model.edges[0][0]
        if rng.random() < 0.5:
            d = d + Divisor(mg, {mg.point_on(eid, mg.lengths[eid] / 3): 1})
        q = rng.choice(mg.model.vertices)
        red, w = reduce_divisor(mg, d, q)
        assert red == d + principal_divisor(w), "witness must certify equivalence"
        assert all(n >= 0 for p, n in red.items() if p != mg.point(q))
        assert dhar_unburnt(mg, red, q) == frozenset()


def test_metric_vs_unit_subdivision_oracle():
    rng = random.Random(53)
    for _ in range(20):
        mg = random_metric_graph(rng, 5, 8)
        d = random_divisor(rng, mg, rng.randint(-1, 4))
        q = rng.choice(mg.model.vertices)
        red, _ = reduce_divisor(mg, d, q)
        oracle = reduce_via_unit_subdivision(mg, d, q)
        assert red == oracle


def test_finite_vs_metric_on_unit_lengths():
    rng = random.Random(59)
    for _ in range(20):
        mg = random_metric_graph(rng, 6, 9)
        unit = type(mg)(mg.model, {e: 1 for e, _, _ in mg.model.edges})
        d_f = random_divisor(rng, mg.model, rng.randint(-1, 4))
        d_m = Divisor(unit, {p.where: n for p, n in d_f.items()})
        q = rng.choice(mg.model.vertices)
        red_f, _ = reduce_divisor(mg.model, d_f, q)
        red_m, _ = reduce_divisor(unit, d_m, q)
        assert {p.where: n for p, n in red_m.items()} == {p.where: n for p, n in red_f.items()}


def test_reduce_at_interior_base_point():
    c = circle()
    q = c.point_on("a", Fraction(1, 8))
    d = divisor(c, {"u": 1, "v": 1})
    red, w = reduce_divisor(c, d, q)
    assert red == d + principal_divisor(w)
    assert dhar_unburnt(c, red, q) == frozenset()


def test_single_vertex_reduce():
    g = single_vertex()
    d = divisor(g, {"v": -3})
    red, w = reduce_divisor(g, d, "v")
    assert red == d
