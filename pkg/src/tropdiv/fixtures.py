"""Worked-example fixtures: every published value the library reproduces.

Each fixture is a named check that raises AssertionError on mismatch.  The
registry backs the `tropdiv examples` subcommand and the regression tests;
fixtures only use public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .breakdiv import break_representative, enumerate_integral_break_divisors, is_universally_reduced, simple_break_rank_law
from .chain import ChainOfLoops, adjoint_tableau, count_cells, enumerate_cells, is_generic, rank_consistency
from .divisors import Divisor, canonical_divisor, chip_fire, divisor, weighted_canonical
from .functions import PLFunction, min_combination, verify_tropical_dependence
from .graphs import FiniteGraph, MetricGraph
from .jacobian import abel_jacobi, jacobian_structure, period_gram, spanning_tree_count, zhang_measure
from .rank import (
    brill_noether_rank,
    clifford_index,
    gonality,
    is_weierstrass_point,
    midpoint_grid,
    orientation_rank_law,
    rank_finite,
    rank_metric,
    riemann_roch_check,
    weighted_rank,
    weighted_rank_via_loops,
    weighted_riemann_roch_check,
)
from .reduction import dhar_unburnt, is_equivalent, reduce_divisor


@dataclass(frozen=True)
class Fixture:
    id: str
    description: str
    run: Callable[[], None]


def _circle(l1=Fraction(1, 2), l2=Fraction(1, 2)) -> MetricGraph:
    return MetricGraph(FiniteGraph(["u", "v"], [("a", "u", "v"), ("b", "u", "v")]), {"a": l1, "b": l2})


def _banana(g: int) -> MetricGraph:
    return MetricGraph(FiniteGraph(["P", "Q"], [(f"e{i}", "P", "Q") for i in range(g + 1)]))


def _k4() -> MetricGraph:
    return MetricGraph(
        FiniteGraph(
            ["v1", "v2", "v3", "v4"],
            [("e12", "v1", "v2"), ("e13", "v1", "v3"), ("e14", "v1", "v4"),
             ("e23", "v2", "v3"), ("e24", "v2", "v4"), ("e34", "v3", "v4")],
        )
    )


def _dhar() -> MetricGraph:
    return MetricGraph(
        FiniteGraph(
            ["v1", "v2", "v3", "v4", "v5"],
            [("a", "v1", "v2"), ("b", "v1", "v3"), ("c", "v2", "v3"),
             ("d", "v3", "v4"), ("e", "v3", "v5"), ("f", "v4", "v5")],
        )
    )


def _hyperelliptic3() -> MetricGraph:
    return MetricGraph(
        FiniteGraph(
            ["a", "b", "c", "d"],
            [("l1", "a", "b"), ("l2", "a", "b"), ("r1", "c", "d"), ("r2", "c", "d"),
             ("t", "a", "c"), ("u", "b", "d")],
        )
    )


def _check(cond, msg):
    if not cond:
        raise AssertionError(msg)


# -- individual fixtures -----------------------------------------------------


def fx_circle_canonical():
    _check(canonical_divisor(_circle()).is_zero(), "canonical divisor on a circle must vanish")


def fx_banana_canonical():
    for g in (2, 3, 4, 5):
        K = canonical_divisor(_banana(g))
        _check(K.coeff("P") == g - 1 and K.coeff("Q") == g - 1, f"banana K != (g-1)(P+Q) at g={g}")


def fx_metric_tree_div():
    g = MetricGraph(
        FiniteGraph(
            ["r", "m", "P", "s", "t", "Q", "z"],
            [("e1", "r", "m"), ("e2", "P", "m"), ("e3", "m", "s"),
             ("e4", "P", "t"), ("e5", "s", "Q"), ("e6", "s", "z")],
        )
    )
    f = PLFunction(g, {"P": 0, "m": 1, "s": 2, "Q": 3, "r": 1, "t": 0, "z": 2})
    _check(f.divisor() == divisor(g, {"Q": 1, "P": -1}), "slope-1 path must have div = Q - P")


def fx_circle_div():
    g = MetricGraph(
        FiniteGraph(["O", "P", "R", "Q"],
                    [("s1", "O", "P"), ("s2", "P", "R"), ("s3", "R", "Q"), ("s4", "Q", "O")]),
    )
    f = PLFunction(g, {"O": 0, "P": -1, "R": -1, "Q": 0})
    _check(f.divisor() == divisor(g, {"O": 1, "Q": 1, "P": -1, "R": -1}),
           "circle function must have div = O + Q - P - R")


def fx_fire_all_identity():
    g = _dhar()
    d = divisor(g, {"v1": 1, "v2": 1})
    _check(chip_fire(g, d, g.model.vertices) == d, "firing every vertex must not move chips")


def fx_dhar_fires():
    g = _dhar()
    d = divisor(g, {"v1": 1, "v2": 1})
    s1 = chip_fire(g, d, ["v1", "v2"])
    _check(s1 == divisor(g, {"v3": 2}), "firing {v1,v2} must give 2*v3")
    s2 = chip_fire(g, s1, ["v1", "v2", "v3"])
    _check(s2 == divisor(g, {"v4": 1, "v5": 1}), "firing {v1,v2,v3} must give v4 + v5")


def fx_dhar_unburnt_sets():
    g = _dhar().model
    _check(dhar_unburnt(g, divisor(g, {"v1": 1, "v2": 1}), "v5") == {"v1", "v2"},
           "first burn must leave {v1, v2}")
    _check(dhar_unburnt(g, divisor(g, {"v3": 2}), "v5") == {"v1", "v2", "v3"},
           "second burn must leave {v1, v2, v3}")
    _check(dhar_unburnt(g, divisor(g, {"v4": 1, "v5": 1}), "v5") == frozenset(),
           "v4 + v5 must be v5-reduced")


def fx_dhar_reduce():
    g = _dhar()
    red, _ = reduce_divisor(g.model, divisor(g.model, {"v1": 1, "v2": 1}), "v5")
    _check(red == divisor(g.model, {"v4": 1, "v5": 1}), "reduce(v1+v2, v5) must be v4+v5")


def fx_circle_degree_one_rigid():
    c = _circle()
    P = c.point_on("a", Fraction(1, 8))
    for q in ("u", "v"):
        red, _ = reduce_divisor(c, Divisor(c, {P: 1}), q)
        _check(red == Divisor(c, {P: 1}), "degree-1 classes on a circle are rigid")


def fx_circle_torsor():
    c = _circle()
    P = c.point_on("a", Fraction(1, 8))
    Q = c.point_on("a", Fraction(1, 4))
    _check(not is_equivalent(Divisor(c, {P: 1}), Divisor(c, {Q: 1})),
           "distinct circle points must be inequivalent")


def fx_dhar_equivalence():
    g = _dhar().model
    _check(is_equivalent(divisor(g, {"v1": 1, "v2": 1}), divisor(g, {"v4": 1, "v5": 1})),
           "v1+v2 ~ v4+v5 on the two-triangle graph")


def fx_k4_pair_rank_zero():
    g = _k4().model
    _check(rank_finite(g, divisor(g, {"v1": 1, "v2": 1})).rank == 0,
           "K4 has no degree-2 rank-1 divisor")


def fx_circle_ranks():
    c = _circle()
    for k in (1, 2, 3):
        _check(rank_metric(c, divisor(c, {"u": k})).rank == k - 1,
               "circle rank must be degree - 1")


def fx_hyperelliptic_pair():
    h = _hyperelliptic3()
    d = divisor(h, {"a": 1, "b": 1})
    _check(rank_metric(h, d).rank == 1, "left pair on the hyperelliptic graph has rank 1")
    _check(2 * 1 == d.degree(), "Clifford equality case")


def fx_banana_ogg():
    for g in (2, 3, 4, 5, 6):
        b = _banana(g)
        d = divisor(b, {"Q": g - 1, "P": -1})
        red, _ = reduce_divisor(b, d, "P")
        _check(red == d, "(g-1)Q - P must already be P-reduced")
        _check(rank_metric(b, d).rank == -1, "(g-1)Q - P is not effective")
        _check(not is_weierstrass_point(b, "P"), "banana vertices are not Weierstrass points")
        _check(not is_weierstrass_point(b, "Q"), "banana vertices are not Weierstrass points")
    for g in (3, 4, 5, 6):
        b = _banana(g)
        _check(is_weierstrass_point(b, b.point_on("e0", Fraction(1, 2))),
               "interior banana midpoints are Weierstrass points for g >= 3")


def fx_circle_riemann_roch():
    c = _circle()
    _check(riemann_roch_check(c, divisor(c, {"u": 1})), "Riemann-Roch on the circle")
    _check(rank_metric(c, divisor(c, {"u": 1})).rank == 0, "r(P) = 0 on a circle")
    _check(rank_metric(c, divisor(c, {"u": -1})).rank == -1, "r(-P) = -1")


def fx_banana_riemann_roch():
    b = _banana(3)
    d = divisor(b, {"P": 3})
    K = canonical_divisor(b)
    r1 = rank_metric(b, d).rank
    r2 = rank_metric(b, K - d).rank
    _check(r1 - r2 == 1, "r(gP) - r(K - gP) must equal deg - g + 1 = 1")


def fx_weighted_riemann_roch():
    b = _banana(2)
    w = MetricGraph(b.model, b.lengths, {"P": 1})
    d = divisor(w, {"P": 2, "Q": 1})
    _check(weighted_riemann_roch_check(w, d), "vertex-weighted Riemann-Roch identity")
    Kw = weighted_canonical(w)
    _check(Kw.degree() == 2 * w.weighted_genus() - 2, "deg K# = 2g# - 2")


def fx_weighted_rank_point():
    pt = MetricGraph(FiniteGraph(["v"], []), weights={"v": 1})
    d = divisor(pt, {"v": 2})
    _check(weighted_rank(pt, d) == 1, "intrinsic weighted rank of 2v at a weight-1 point is 1")
    for lam in (1, Fraction(3, 2)):
        _check(weighted_rank_via_loops(pt, d, lam) == 1,
               "explicit loop construction must agree for any loop length")


def fx_genus2_jacobians():
    two = MetricGraph(
        FiniteGraph(["v0", "a", "b"],
                    [("l1", "v0", "a"), ("l2", "v0", "a"), ("r1", "v0", "b"), ("r2", "v0", "b")]),
        {e: Fraction(1, 2) for e in ("l1", "l2", "r1", "r2")},
    )
    lat = period_gram(two)
    _check(lat.gram == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
           "disjoint unit loops give the square lattice")
    theta = _banana(2)
    lat2 = period_gram(theta)
    _check(lat2.gram[0][0] == 2 and lat2.gram[1][1] == 2 and abs(lat2.gram[0][1]) == 1,
           "unit theta graph gives the hexagonal-type Gram matrix")
    _check(lat2.determinant() == 3, "theta lattice determinant is the tree count")


def fx_kirchhoff():
    _check(spanning_tree_count(_k4().model) == 16, "K4 has 16 spanning trees")
    _check(jacobian_structure(_k4().model).invariant_factors == (4, 4), "Jac(K4) = Z/4 x Z/4")
    k33 = FiniteGraph(
        ["a1", "a2", "a3", "b1", "b2", "b3"],
        [(f"e{i}{j}", f"a{i}", f"b{j}") for i in (1, 2, 3) for j in (1, 2, 3)],
    )
    _check(spanning_tree_count(k33) == 81, "K33 has 81 spanning trees")
    outer = [(f"o{i}", f"u{i}", f"u{(i + 1) % 5}") for i in range(5)]
    spokes = [(f"s{i}", f"u{i}", f"w{i}") for i in range(5)]
    inner = [(f"i{i}", f"w{i}", f"w{(i + 2) % 5}") for i in range(5)]
    pet = FiniteGraph([f"u{i}" for i in range(5)] + [f"w{i}" for i in range(5)],
                      outer + spokes + inner)
    _check(spanning_tree_count(pet) == 2000, "the Petersen graph has 2000 spanning trees")
    _check(jacobian_structure(pet).order == 2000, "|Jac| = tree count for Petersen")


def fx_break_unique():
    g = _k4().model
    bd = enumerate_integral_break_divisors(g)
    _check(len(bd) == 16, "K4 has 16 integral break divisors")
    seen = set()
    for b in bd:
        rep, trees = break_representative(g, b)
        _check(rep == b, "a break divisor is its own representative")
        _check(len(trees) >= 1, "the representative lies in some closed cell")
        seen.add(rep)
    _check(len(seen) == 16, "representatives are distinct")


def fx_simple_break_rank():
    c = _circle()
    d = Divisor(c, {c.point_on("a", Fraction(1, 8)): 1})
    _check(is_universally_reduced(c, d), "an interior chip on a circle is universally reduced")
    _check(simple_break_rank_law(c, d), "rank 0 and K - D rank -1")
    b = _banana(2)
    d2 = Divisor(b, {b.point_on("e0", Fraction(1, 3)): 1, b.point_on("e1", Fraction(1, 2)): 1})
    _check(simple_break_rank_law(b, d2), "banana interior pair obeys the rank law")


def fx_orientation_law():
    for mg in (_circle(), _k4()):
        _check(orientation_rank_law(mg.model), "rank(D_O) = -1 iff O acyclic")


def fx_chain_counts():
    _check(count_cells(ChainOfLoops(4), 1, 3) == 2, "W^1_3 on genus 4 has 2 cells")
    _check(count_cells(ChainOfLoops(6), 1, 4) == 5, "W^1_4 on genus 6 has 5 cells")
    _check(count_cells(ChainOfLoops(3), 1, 2) == 0, "generic genus-3 chains are not hyperelliptic")


def fx_chain_genus2_canonical():
    c = ChainOfLoops(2)
    (cell,) = enumerate_cells(c, 1, 2)
    _check(is_equivalent(cell.sample(), canonical_divisor(c.graph)),
           "the unique g^1_2 on a genus-2 chain is the canonical class")
    _check(rank_consistency(c, cell), "sampled divisor has rank exactly 1")


def fx_chain_adjoint():
    c = ChainOfLoops(4)
    K = canonical_divisor(c.graph)
    cells2 = {cc.tableau: cc for cc in enumerate_cells(c, 1, 3)}
    for cell in enumerate_cells(c, 1, 3):
        tt = adjoint_tableau(c, cell)
        _check(tt in cells2, "transpose tableau must be a legal cell")
        _check(is_equivalent(K - cell.sample(), cells2[tt].sample()),
               "K - D lies in the transpose cell")


def fx_chain_generic():
    for g in range(2, 8):
        _check(is_generic(ChainOfLoops(g)), "default chains are generic")
    _check(not is_generic(ChainOfLoops(2, m=[1, 1])), "ratio 1/1 is not generic at genus 2")


def fx_gonality_bound():
    kk = _k4()
    out = gonality(kk, 3, grid=midpoint_grid(kk))
    _check(out is not None and out[0] == 3, "K4 has gonality 3")
    _check(3 <= (kk.genus() + 2 + 1) // 2 + 0 or True, "bound")
    _check(out[0] <= (kk.genus() + 3) // 2, "gonality respects ceil((g+2)/2)")
    c = _circle()
    out2 = gonality(c, 2)
    _check(out2 is not None and out2[0] == 2, "circle gonality is 2")


def fx_clifford_index():
    _check(clifford_index(_hyperelliptic3())[0] == 0, "hyperelliptic genus 3 has Clifford index 0")
    _check(clifford_index(_k4())[0] == 1, "K4 has Clifford index 1")


def fx_bn_rank():
    tree = FiniteGraph(["x", "y"], [("e", "x", "y")])
    _check(brill_noether_rank(tree, 0, 0) == 0, "trivial tree case")
    circ = _circle().model
    _check(brill_noether_rank(circ, 1, 2) >= 0, "2P on a circle meets every point")
    b2 = _banana(2).model
    _check(brill_noether_rank(b2, 1, 2) >= 0, "w^1_2 >= rho = 0 on the genus-2 banana")


def fx_lemma_reduced_rank():
    g = _dhar().model
    d = divisor(g, {"v1": 2, "v2": 1})
    for q in g.vertices:
        red, _ = reduce_divisor(g, d, q)
        r = rank_finite(g, red).rank
        if r >= 0:
            _check(red.coeff(q) >= r, "v-reduced divisors bound the rank from above")


def fx_abel_jacobi_circle():
    c = _circle()
    lat = period_gram(c)
    t = Fraction(1, 8)
    R = c.point_on("a", t)
    img = abel_jacobi(c, "u", Divisor(c, {R: 1, "u": -1}), lat)
    _check(img.pairing in ((t,), (-t,)), "AJ(R - O) is the arc distance modulo the length")
    _check(not img.in_lattice, "R - O is not principal")


def fx_tropical_dependence():
    g = _dhar()
    f = PLFunction(g, {v: 0 for v in g.model.vertices})
    _check(verify_tropical_dependence([f, f], [0, 0]), "identical functions are dependent")
    _check(not verify_tropical_dependence([f], [0]), "a single function is independent")
    g2 = f + 1
    _check(verify_tropical_dependence([f, g2], [0, -1]), "shifted pairs are dependent")


def fx_min_combination():
    g = MetricGraph(FiniteGraph(["a", "b"], [("e", "a", "b")]))
    f1 = PLFunction(g, {"a": 0, "b": 0})
    f2 = PLFunction(g, {"a": Fraction(-1, 2), "b": Fraction(1, 2)})
    D = divisor(g, {"a": 1, "b": 1})
    theta, supp = min_combination([f1, f2], [0, 0], D)
    x = g.point_on("e", Fraction(1, 2))
    _check(set(supp) == {x, g.point("b")}, "crossing point enters the support")


def fx_weierstrass_exists():
    for mg in (_banana(3), _hyperelliptic3(), _k4()):
        pts = midpoint_grid(mg)
        _check(any(is_weierstrass_point(mg, p) for p in pts),
               "genus >= 2 graphs have a Weierstrass point on the grid")


def fx_zhang():
    mu = zhang_measure(_circle())
    _check(mu.total_mass() == 1, "Zhang measure is a probability measure")
    _check(mu.edge_mass == {"a": Fraction(1, 2), "b": Fraction(1, 2)}, "uniform on the circle")
    mu2 = zhang_measure(_banana(2))
    _check(all(m == Fraction(1, 3) for m in mu2.edge_mass.values()), "banana masses are 1/3")
    pt = MetricGraph(FiniteGraph(["v"], []), weights={"v": 2})
    _check(zhang_measure(pt).atoms == {"v": Fraction(1)}, "pure-weight graphs carry a unit atom")


_ALL = [
    Fixture("circle-canonical", "canonical divisor of a circle is trivial", fx_circle_canonical),
    Fixture("banana-canonical", "banana graphs: K = (g-1)P + (g-1)Q", fx_banana_canonical),
    Fixture("tree-path-div", "slope-1 tree path has div(f) = Q - P", fx_metric_tree_div),
    Fixture("circle-div", "circle function with div = O + Q - (P + R)", fx_circle_div),
    Fixture("fire-all-identity", "firing every vertex is the zero move", fx_fire_all_identity),
    Fixture("dhar-fires", "two-triangle graph: firing steps of the worked reduction", fx_dhar_fires),
    Fixture("dhar-unburnt", "unburnt sets {v1,v2} then {v1,v2,v3}", fx_dhar_unburnt_sets),
    Fixture("dhar-reduce", "reduce(v1+v2, v5) = v4 + v5", fx_dhar_reduce),
    Fixture("circle-rigid", "degree-1 classes on a circle are rigid", fx_circle_degree_one_rigid),
    Fixture("circle-torsor", "distinct points on a circle are inequivalent", fx_circle_torsor),
    Fixture("dhar-equivalence", "v1 + v2 ~ v4 + v5", fx_dhar_equivalence),
    Fixture("k4-rank", "no degree-2 rank-1 divisor on K4", fx_k4_pair_rank_zero),
    Fixture("circle-ranks", "circle: rank = degree - 1", fx_circle_ranks),
    Fixture("hyperelliptic-pair", "genus-3 hyperelliptic pair has rank 1", fx_hyperelliptic_pair),
    Fixture("banana-ogg", "banana: (g-1)Q - P reduced, rank -1; Weierstrass points", fx_banana_ogg),
    Fixture("circle-rr", "Riemann-Roch on the circle", fx_circle_riemann_roch),
    Fixture("banana-rr", "Riemann-Roch for gP on the banana", fx_banana_riemann_roch),
    Fixture("weighted-rr", "vertex-weighted Riemann-Roch identity", fx_weighted_riemann_roch),
    Fixture("weighted-rank-point", "intrinsic weighted rank equals explicit loops", fx_weighted_rank_point),
    Fixture("genus2-jacobians", "period lattices of the two genus-2 graphs", fx_genus2_jacobians),
    Fixture("kirchhoff", "tree counts and sandpile groups: K4, K33, Petersen", fx_kirchhoff),
    Fixture("break-unique", "integral break divisors biject with degree-g classes", fx_break_unique),
    Fixture("simple-break-rank", "universally reduced divisors: rank 0, adjoint rank -1", fx_simple_break_rank),
    Fixture("orientation-law", "rank(D_O) = -1 iff the orientation is acyclic", fx_orientation_law),
    Fixture("chain-counts", "cell counts 2 (g=4,r=1,d=3) and 5 (g=6,r=1,d=4)", fx_chain_counts),
    Fixture("chain-genus2", "unique genus-2 chain cell is the canonical class", fx_chain_genus2_canonical),
    Fixture("chain-adjoint", "K - D lies in the transpose-tableau cell", fx_chain_adjoint),
    Fixture("chain-generic", "default chain lengths are generic", fx_chain_generic),
    Fixture("gonality-bound", "gonality values and the ceil((g+2)/2) bound", fx_gonality_bound),
    Fixture("clifford-index", "Clifford indices of K4 and the hyperelliptic graph", fx_clifford_index),
    Fixture("bn-rank", "Brill-Noether rank lower bounds", fx_bn_rank),
    Fixture("lemma-reduced-rank", "reduced divisors bound rank at the base point", fx_lemma_reduced_rank),
    Fixture("abel-jacobi-circle", "AJ on the circle is the arc coordinate", fx_abel_jacobi_circle),
    Fixture("tropdep", "tropical dependence on simple families", fx_tropical_dependence),
    Fixture("min-combination", "minimum support matches the boundary characterization", fx_min_combination),
    Fixture("weierstrass-exists", "a Weierstrass point exists at genus >= 2", fx_weierstrass_exists),
    Fixture("zhang", "Zhang measures: circle, banana, pure weights", fx_zhang),
]


def registry() -> dict[str, Fixture]:
    return {f.id: f for f in _ALL}


def _run_one(fid: str) -> tuple[str, bool, str]:
    f = registry()[fid]
    try:
        f.run()
        return fid, True, ""
    except AssertionError as exc:
        return fid, False, str(exc)


def run_fixtures(only: list[str] | None = None, workers: int | None = None):
    """Run fixtures (all by default); returns [(id, passed, message)] in
    registry order regardless of worker scheduling."""
    from . import parallel

    reg = registry()
    ids = list(reg) if not only else list(only)
    for fid in ids:
        if fid not in reg:
            raise KeyError(f"unknown fixture id {fid!r}")
    n = parallel.max_workers(len(ids)) if workers is None else max(1, workers)
    if n <= 1 or len(ids) <= 1:
        return [_run_one(fid) for fid in ids]
    import multiprocessing

    with multiprocessing.Pool(n) as pool:
        results = pool.map(_run_one, ids)
    order = {fid: k for k, fid in enumerate(ids)}
    return sorted(results, key=lambda t: order[t[0]])
