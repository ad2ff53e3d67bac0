import random
from fractions import Fraction

import pytest
from fixture_graphs import banana, circle, k4, metric_tree, petersen, random_metric_graph

from tropdiv import (
    Divisor,
    FiniteGraph,
    GraphError,
    MetricGraph,
    canonical_divisor,
    genus,
    refine,
    weighted_canonical,
)


def test_genus_values():
    assert genus(k4()) == 3
    assert genus(metric_tree()) == 0
    assert genus(petersen()) == 6  # 15 - 10 + 1


def test_loop_edges_rejected():
    with pytest.raises(GraphError):
        FiniteGraph(["a", "b"], [("e", "a", "a"), ("f", "a", "b")])


def test_disconnected_rejected():
    with pytest.raises(GraphError):
        FiniteGraph(["a", "b", "c"], [("e", "a", "b")])


def test_nonpositive_length_rejected():
    g = FiniteGraph(["a", "b"], [("e", "a", "b")])
    with pytest.raises(GraphError):
        MetricGraph(g, {"e": 0})
    with pytest.raises(GraphError):
        MetricGraph(g, {"e": Fraction(-1, 2)})


def test_float_length_rejected():
    g = FiniteGraph(["a", "b"], [("e", "a", "b")])
    with pytest.raises(GraphError):
        MetricGraph(g, {"e": 0.5})


def test_laplacian_basics():
    seg = FiniteGraph(["a", "b"], [("e", "a", "b")])
    assert seg.laplacian() == [[1, -1], [-1, 1]]
    L = k4().model.laplacian()
    assert all(L[i][i] == 3 for i in range(4))
    assert all(L[i][j] == -1 for i in range(4) for j in range(4) if i != j)
    b3 = banana(2)
    assert b3.model.laplacian() == [[3, -3], [-3, 3]]


def test_laplacian_row_sums_zero_random():
    rng = random.Random(7)
    for _ in range(25):
        g = random_metric_graph(rng).model
        L = g.laplacian()
        assert all(sum(row) == 0 for row in L)
        assert all(L[i][j] == L[j][i] for i in range(len(L)) for j in range(len(L)))


def test_canonical_divisor_on_circle_is_zero():
    assert canonical_divisor(circle()).is_zero()


def test_canonical_divisor_k4():
    K = canonical_divisor(k4())
    assert K.degree() == 4
    assert all(K.coeff(v) == 1 for v in "v1 v2 v3 v4".split())


def test_canonical_divisor_banana():
    for g in (2, 3, 5):
        K = canonical_divisor(banana(g))
        assert K.coeff("P") == g - 1 and K.coeff("Q") == g - 1
        assert K.degree() == 2 * g - 2


def test_canonical_degree_random():
    rng = random.Random(11)
    for _ in range(30):
        mg = random_metric_graph(rng)
        assert canonical_divisor(mg).degree() == 2 * genus(mg) - 2


def test_weighted_canonical():
    mg = banana(3)
    assert weighted_canonical(mg) == canonical_divisor(mg)
    w = MetricGraph(mg.model, mg.lengths, {"P": 1})
    Kw = weighted_canonical(w)
    assert Kw.coeff("P") == 4 and Kw.coeff("Q") == 2
    assert Kw.degree() == 2 * w.weighted_genus() - 2 == 6

    pt = MetricGraph(FiniteGraph(["v"], []), weights={"v": 2})
    Kp = weighted_canonical(pt)
    assert Kp.coeff("v") == 2 and Kp.degree() == 2
    assert pt.weighted_genus() == 2


def test_refine_identity_and_split():
    mg = circle(Fraction(1, 2), Fraction(1, 2))
    same, _ = refine(mg, [mg.point("u")])
    assert same.model == mg.model

    seg = MetricGraph(FiniteGraph(["a", "b"], [("e", "a", "b")]))
    r, ref = refine(seg, [seg.point_on("e", Fraction(1, 3))])
    assert sorted(r.lengths.values()) == [Fraction(1, 3), Fraction(2, 3)]
    assert r.total_length() == seg.total_length()

    r2, _ = refine(mg, [mg.point_on("a", Fraction(1, 4))])
    assert sorted(r2.lengths.values()) == [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]
    assert r2.total_length() == 1


def test_refinement_point_maps_roundtrip():
    rng = random.Random(3)
    mg = random_metric_graph(rng)
    pts = []
    for eid, _, _ in mg.model.edges[:3]:
        pts.append(mg.point_on(eid, mg.lengths[eid] / 3))
    refd, ref = refine(mg, pts)
    for p in pts:
        q = ref.map_point(p)
        assert q.is_vertex()
        assert ref.unmap_point(q) == p
    # a point that was not requested still maps across exactly
    eid = mg.model.edges[0][0]
    p = mg.point_on(eid, mg.lengths[eid] * Fraction(2, 3))
    assert ref.unmap_point(ref.map_point(p)) == p


def test_refinement_invariance_of_genus_canonical_length():
    rng = random.Random(5)
    for _ in range(10):
        mg = random_metric_graph(rng)
        pts = [mg.point_on(eid, mg.lengths[eid] / 2) for eid, _, _ in mg.model.edges[:2]]
        refd, ref = refine(mg, pts)
        assert genus(refd) == genus(mg)
        assert refd.total_length() == mg.total_length()
        K1 = canonical_divisor(mg)
        K2 = canonical_divisor(refd)
        mapped = Divisor(refd, {ref.map_point(p): n for p, n in K1.items()})
        assert mapped == K2


def test_rescale():
    mg = circle()
    big = mg.rescaled(3)
    assert big.total_length() == 3
    with pytest.raises(GraphError):
        mg.rescaled(0)


def test_point_canonicalization():
    mg = circle()
    assert mg.point_on("a", 0) == mg.point("u")
    assert mg.point_on("a", Fraction(1, 2)) == mg.point("v")
    p = mg.point_on("a", Fraction(1, 4))
    assert p == mg.point_on("a", Fraction(1, 4))
    assert p != mg.point_on("b", Fraction(1, 4))
    with pytest.raises(GraphError):
        mg.point_on("a", Fraction(3, 4))
