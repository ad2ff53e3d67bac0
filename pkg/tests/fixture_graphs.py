"""Shared graph fixtures and the seeded random-instance generator."""

from __future__ import annotations

import random
from fractions import Fraction

from tropdiv import Divisor, FiniteGraph, MetricGraph


def k4(lengths=None) -> MetricGraph:
    g = FiniteGraph(
        ["v1", "v2", "v3", "v4"],
        [("e12", "v1", "v2"), ("e13", "v1", "v3"), ("e14", "v1", "v4"),
         ("e23", "v2", "v3"), ("e24", "v2", "v4"), ("e34", "v3", "v4")],
    )
    return MetricGraph(g, lengths)


def circle(l1=Fraction(1, 2), l2=Fraction(1, 2)) -> MetricGraph:
    g = FiniteGraph(["u", "v"], [("a", "u", "v"), ("b", "u", "v")])
    return MetricGraph(g, {"a": l1, "b": l2})


def banana(genus: int, lengths=None) -> MetricGraph:
    edges = [(f"e{i}", "P", "Q") for i in range(genus + 1)]
    g = FiniteGraph(["P", "Q"], edges)
    return MetricGraph(g, lengths)


def theta() -> MetricGraph:
    return banana(2)


def dhar_graph() -> MetricGraph:
    """Two triangles meeting at v3 (the worked reduction example)."""
    g = FiniteGraph(
        ["v1", "v2", "v3", "v4", "v5"],
        [("a", "v1", "v2"), ("b", "v1", "v3"), ("c", "v2", "v3"),
         ("d", "v3", "v4"), ("e", "v3", "v5"), ("f", "v4", "v5")],
    )
    return MetricGraph(g)


def petersen() -> FiniteGraph:
    outer = [(f"o{i}", f"u{i}", f"u{(i + 1) % 5}") for i in range(5)]
    spokes = [(f"s{i}", f"u{i}", f"w{i}") for i in range(5)]
    inner = [(f"i{i}", f"w{i}", f"w{(i + 2) % 5}") for i in range(5)]
    verts = [f"u{i}" for i in range(5)] + [f"w{i}" for i in range(5)]
    return FiniteGraph(verts, outer + spokes + inner)


def k33() -> FiniteGraph:
    verts = ["a1", "a2", "a3", "b1", "b2", "b3"]
    edges = [(f"e{i}{j}", f"a{i}", f"b{j}") for i in (1, 2, 3) for j in (1, 2, 3)]
    return FiniteGraph(verts, edges)


def path_graph(n: int) -> MetricGraph:
    verts = [f"p{i}" for i in range(n)]
    edges = [(f"e{i}", f"p{i}", f"p{i+1}") for i in range(n - 1)]
    return MetricGraph(FiniteGraph(verts, edges))


def metric_tree() -> MetricGraph:
    """The tree from the slope-one path example: div(f) = Q - P."""
    g = FiniteGraph(
        ["r", "m", "P", "s", "t", "Q", "z"],
        [("e1", "r", "m"), ("e2", "P", "m"), ("e3", "m", "s"),
         ("e4", "P", "t"), ("e5", "s", "Q"), ("e6", "s", "z")],
    )
    return MetricGraph(g)


def hyperelliptic3() -> MetricGraph:
    """Two circles joined by two unit segments; genus 3, hyperelliptic."""
    g = FiniteGraph(
        ["a", "b", "c", "d"],
        [("l1", "a", "b"), ("l2", "a", "b"),
         ("r1", "c", "d"), ("r2", "c", "d"),
         ("t", "a", "c"), ("u", "b", "d")],
    )
    return MetricGraph(g)


def two_loops() -> MetricGraph:
    """Two loops of total length 1 sharing the vertex v0 (loopless model)."""
    g = FiniteGraph(
        ["v0", "a", "b"],
        [("l1", "v0", "a"), ("l2", "v0", "a"), ("r1", "v0", "b"), ("r2", "v0", "b")],
    )
    return MetricGraph(g, {e: Fraction(1, 2) for e in ("l1", "l2", "r1", "r2")})


def single_vertex() -> MetricGraph:
    return MetricGraph(FiniteGraph(["v"], []))


def random_graph(rng: random.Random, max_vertices=8, max_edges=14) -> FiniteGraph:
    """Connected loopless multigraph: a random tree plus extra edges."""
    n = rng.randint(2, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((f"t{i}", f"v{rng.randrange(i)}", f"v{i}"))
    extra = rng.randint(0, max(0, max_edges - (n - 1)))
    k = 0
    while k < extra:
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        edges.append((f"x{k}", f"v{i}", f"v{j}"))
        k += 1
    return FiniteGraph(verts, edges)


def random_lengths(rng: random.Random, g: FiniteGraph, max_den=4) -> dict[str, Fraction]:
    return {
        eid: Fraction(rng.randint(1, 4), rng.randint(1, max_den))
        for eid, _, _ in g.edges
    }


def random_metric_graph(rng: random.Random, max_vertices=6, max_edges=10) -> MetricGraph:
    g = random_graph(rng, max_vertices, max_edges)
    return MetricGraph(g, random_lengths(rng, g))


def random_divisor(rng: random.Random, host, degree: int) -> Divisor:
    """Vertex-supported divisor with the given total degree."""
    model = host.model if isinstance(host, MetricGraph) else host
    chips = {v: 0 for v in model.vertices}
    names = list(model.vertices)
    moves = degree if degree >= 0 else -degree
    for _ in range(moves):
        chips[rng.choice(names)] += 1 if degree >= 0 else -1
    for _ in range(rng.randint(0, 4)):  # shuffle mass around without changing degree
        chips[rng.choice(names)] += 1
        chips[rng.choice(names)] -= 1
    return Divisor(host, chips)
