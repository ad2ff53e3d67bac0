import random
from fractions import Fraction

import pytest
from fixture_graphs import (
    circle,
    dhar_graph,
    k4,
    metric_tree,
    random_metric_graph,
    single_vertex,
)

from tropdiv import (
    Divisor,
    GraphError,
    PLFunction,
    all_orientations,
    chip_fire,
    constant,
    divisor,
    genus,
    is_in_linear_system,
    min_combination,
    orientation_divisor,
    principal_divisor,
    verify_tropical_dependence,
)


def test_divisor_arithmetic():
    g = k4()
    d1 = divisor(g, {"v1": 2, "v2": -1})
    d2 = divisor(g, ["v2", "v3"])
    assert (d1 + d2).degree() == 3
    assert (d1 + d2).coeff("v2") == 0
    assert (d1 - d1).is_zero()
    assert (2 * d1).coeff("v1") == 4
    assert not d1.is_effective() and d2.is_effective()


def test_fire_all_vertices_is_identity():
    g = dhar_graph()
    d = divisor(g, {"v1": 1, "v2": 1})
    assert chip_fire(g, d, g.model.vertices) == d


def test_dhar_example_fires():
    g = dhar_graph()
    d = divisor(g, {"v1": 1, "v2": 1})
    step1 = chip_fire(g, d, ["v1", "v2"])
    assert step1 == divisor(g, {"v3": 2})
    step2 = chip_fire(g, step1, ["v1", "v2", "v3"])
    assert step2 == divisor(g, {"v4": 1, "v5": 1})


def test_orientation_divisor_degree():
    g = metric_tree()
    for o in all_orientations(g.model):
        assert orientation_divisor(o).degree() == genus(g) - 1 == -1

    c = circle()
    degs = [orientation_divisor(o).degree() for o in all_orientations(c.model)]
    assert degs == [0, 0, 0, 0]
    acyclic = [o.is_acyclic() for o in all_orientations(c.model)]
    assert sum(1 for a in acyclic if not a) == 2  # two cyclic orientations


# -- PL functions ----------------------------------------------------------


def tree_path_function():
    g = metric_tree()
    # slope 1 along P -> m -> s -> Q, constant elsewhere (values = distance along path)
    vals = {"P": 0, "m": 1, "s": 2, "Q": 3, "r": 1, "t": 0, "z": 2}
    return g, PLFunction(g, vals)


def test_tree_path_divisor():
    g, f = tree_path_function()
    d = principal_divisor(f)
    assert d == divisor(g, {"Q": 1, "P": -1})
    assert f.ord_at("P") == -1 and f.ord_at("Q") == 1
    assert f.ord_at(g.point_on("e3", Fraction(1, 2))) == 0


def test_circle_four_point_function():
    # circle O -> P -> R -> Q with arcs of length 1; f rises O->P, falls R->Q
    from tropdiv import FiniteGraph, MetricGraph

    g = MetricGraph(
        FiniteGraph(["O", "P", "R", "Q"],
                    [("s1", "O", "P"), ("s2", "P", "R"), ("s3", "R", "Q"), ("s4", "Q", "O")]),
    )
    f = PLFunction(g, {"O": 0, "P": -1, "R": -1, "Q": 0})
    d = principal_divisor(f)
    assert d == divisor(g, {"O": 1, "Q": 1, "P": -1, "R": -1})


def test_constant_function_divisor_zero():
    g = k4()
    assert principal_divisor(constant(g, 5)).is_zero()


def test_integer_slope_enforced():
    g = circle()
    with pytest.raises(GraphError):
        PLFunction(g, {"u": 0, "v": Fraction(1, 3)})  # slope 2/3 on half-length edges


def test_pl_degree_zero_random():
    rng = random.Random(23)
    for _ in range(40):
        mg = random_metric_graph(rng)
        f = random_pl(rng, mg)
        assert principal_divisor(f).degree() == 0


def random_pl(rng: random.Random, mg):
    # values at vertices that are multiples of lcm of length numerators give
    # integer slopes automatically; sprinkle in some midpoint kinks
    from math import lcm

    nums = [l.numerator for l in mg.lengths.values()]
    dens = [l.denominator for l in mg.lengths.values()]
    unit = Fraction(lcm(*nums), 1) if nums else Fraction(1)
    vals = {mg.point(v): unit * rng.randint(-3, 3) for v in mg.model.vertices}
    for eid, _, _ in mg.model.edges:
        if rng.random() < 0.4:
            ell = mg.lengths[eid]
            u, v = mg.model.edge_ends(eid)
            base = vals[mg.point(u)]
            s = rng.randint(-2, 2)
            vals[mg.point_on(eid, ell / 2)] = base + s * ell / 2
    try:
        return PLFunction(mg, vals)
    except GraphError:
        # midpoint draw broke integrality across the second half; retry plain
        return PLFunction(mg, {mg.point(v): unit * rng.randint(-3, 3) for v in mg.model.vertices})


def test_single_vertex_graph_trivia():
    g = single_vertex()
    f = constant(g, 2)
    assert principal_divisor(f).is_zero()
    assert divisor(g, {"v": 2}).degree() == 2


# -- tropical dependence ----------------------------------------------------


def test_tropdep_identical_functions():
    g, f = tree_path_function()
    assert verify_tropical_dependence([f, f], [0, 0])


def test_tropdep_single_function_false():
    g, f = tree_path_function()
    assert not verify_tropical_dependence([f], [0])


def test_tropdep_constant_shift():
    g, f = tree_path_function()
    g2 = f + Fraction(5)
    assert verify_tropical_dependence([f, g2], [0, -5])
    assert not verify_tropical_dependence([f, g2], [0, 0])


def test_min_combination_single():
    g, f = tree_path_function()
    D = divisor(g, {"P": 1})
    theta, supp = min_combination([f], [0], D)
    assert theta == f
    assert set(supp) == {g.point("Q")}


def test_min_combination_constants():
    g = k4()
    D = divisor(g, {})
    f0, f1 = constant(g, 0), constant(g, 1)
    theta, supp = min_combination([f0, f1], [0, 0], D)
    assert theta == f0
    assert supp == ()


def test_min_combination_crossing():
    from tropdiv import FiniteGraph, MetricGraph

    g = MetricGraph(FiniteGraph(["a", "b"], [("e", "a", "b")]))
    f1 = constant(g, 0)
    f2 = PLFunction(g, {"a": Fraction(-1, 2), "b": Fraction(1, 2)})
    D = divisor(g, {"a": 1, "b": 1})
    assert is_in_linear_system(f1, D) and is_in_linear_system(f2, D)
    theta, supp = min_combination([f1, f2], [0, 0], D)
    x = g.point_on("e", Fraction(1, 2))
    assert set(supp) == {x, g.point("b")}
    # the crossing point carries div(theta) = +1
    assert theta.ord_at(x) == 1


def test_min_combination_requires_rd_membership():
    g, f = tree_path_function()
    D = divisor(g, {})  # div(f) + 0 is not effective
    with pytest.raises(GraphError):
        min_combination([f], [0], D)
