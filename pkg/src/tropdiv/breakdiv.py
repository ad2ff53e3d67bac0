"""Break divisors: enumeration, unique degree-g representatives, universal
reducedness, and the rank law for simple break divisors."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .divisors import Divisor, canonical_divisor
from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph
from .rank import rank_metric
from .reduction import is_everywhere_reduced, reduce_finite


def enumerate_integral_break_divisors(g: FiniteGraph, host=None) -> set[Divisor]:
    """All degree-g divisors obtained by dropping one chip per non-tree edge
    at one of its endpoints, over all spanning trees."""
    from .jacobian import spanning_trees

    host = host if host is not None else g
    out: set[Divisor] = set()
    for tree in spanning_trees(g):
        inside = set(tree)
        ends = [g.edges[k][1:] for k in range(len(g.edges)) if k not in inside]
        for choice in itertools.product(*ends):
            chips: dict[str, int] = {}
            for v in choice:
                chips[v] = chips.get(v, 0) + 1
            out.add(Divisor(host, chips))
    return out


def break_representative(g: FiniteGraph, d: Divisor, host=None):
    """The unique integral break divisor equivalent to a degree-g divisor.

    Found by matching q-reduced forms against the enumeration.  Also
    returns the set of spanning trees whose closed cell contains the
    representative (boundary classes lie in several cells).
    """
    from .jacobian import spanning_trees

    host = host if host is not None else g
    gen = g.genus()
    if d.degree() != gen:
        raise GraphError(f"break representatives live in degree g = {gen}, got {d.degree()}")
    q = g.vertices[0]
    target, _ = reduce_finite(g, d, q)
    rep = None
    for b in enumerate_integral_break_divisors(g, host):
        red, _ = reduce_finite(g, b, q)
        if red == target:
            rep = b
            break
    assert rep is not None, "every degree-g class has a break representative"
    trees = [t for t in spanning_trees(g) if _cell_contains(g, t, rep)]
    return rep, tuple(trees)


def _cell_contains(g: FiniteGraph, tree: tuple[int, ...], d: Divisor) -> bool:
    """Whether d arises from tree by some endpoint assignment (backtracking
    on the multiset of chips)."""
    need = {v: d.coeff(v) for v in g.vertices if d.coeff(v)}
    non_tree = [k for k in range(len(g.edges)) if k not in set(tree)]

    def place(i: int, left: dict) -> bool:
        if i == len(non_tree):
            return all(x == 0 for x in left.values())
        _, u, v = g.edges[non_tree[i]]
        for w in (u, v):
            if left.get(w, 0) > 0:
                left[w] -= 1
                if place(i + 1, left):
                    left[w] += 1
                    return True
                left[w] += 1
        return False

    return place(0, dict(need))


def is_universally_reduced(g: MetricGraph, d: Divisor) -> bool:
    """q-reduced for every base point q.

    Decided two ways, which must agree: (a) the complement of the support
    is connected and simply connected; (b) Dhar's test from every vertex
    and every edge midpoint of the model refined at supp(d) (see
    `is_everywhere_reduced`).
    """
    if not d.is_effective():
        raise GraphError("universal reducedness is about effective divisors")
    if d.degree() != g.genus():
        raise GraphError("universally reduced divisors have degree g")

    topo = _complement_connected_and_acyclic(g, d)
    dhar = is_everywhere_reduced(g, d)
    if topo != dhar:
        raise AssertionError(
            f"universal-reducedness routes disagree: topology {topo}, Dhar {dhar}"
        )
    return topo


def _complement_connected_and_acyclic(g: MetricGraph, d: Divisor) -> bool:
    """Is the open complement of supp(d) connected and simply connected?

    Components: clusters of non-support vertices joined by edges with no
    interior chip, with half-open stubs hanging off; plus isolated open
    intervals between consecutive interior chips.  Cycles can only close
    up inside clusters.
    """
    supp = set(d.support())
    model = g.model
    verts = [v for v in model.vertices if g.point(v) not in supp]
    vindex = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pieces = 0  # connected components among clusters and isolated intervals
    cycles = 0
    extra_cluster_pieces = 0
    touched = set()
    for eid, u, v in model.edges:
        interior = sorted(p.offset for p in supp if p.kind == "e" and p.where == eid)
        u_free = u in vindex
        v_free = v in vindex
        if interior:
            # the edge decomposes into len(interior)+1 pieces; a piece is
            # part of an endpoint cluster when that endpoint survives, and
            # an isolated open interval otherwise
            extra_cluster_pieces += len(interior) - 1
            if u_free:
                touched.add(u)
            else:
                extra_cluster_pieces += 1
            if v_free:
                touched.add(v)
            else:
                extra_cluster_pieces += 1
            continue
        if u_free and v_free:
            touched.add(u)
            touched.add(v)
            ru, rv = find(vindex[u]), find(vindex[v])
            if ru == rv:
                cycles += 1
            else:
                parent[ru] = rv
        elif u_free or v_free:
            # a dangling half-open stub: connects nothing, adds no cycle
            touched.add(u if u_free else v)
        else:
            # open edge between two support points: isolated interval
            extra_cluster_pieces += 1
    roots = {find(i) for i in range(len(verts))}
    pieces = len(roots) + extra_cluster_pieces
    # vertices of valence 0 relative to the free graph still count as their
    # own component; they are included in roots already
    return pieces == 1 and cycles == 0


def simple_break_rank_law(g: MetricGraph, d: Divisor) -> bool:
    """For a universally reduced divisor: rank 0, and K - D has rank -1."""
    if not is_universally_reduced(g, d):
        raise GraphError("expected a universally reduced divisor")
    K = canonical_divisor(g)
    return rank_metric(g, d).rank == 0 and rank_metric(g, K - d).rank == -1
