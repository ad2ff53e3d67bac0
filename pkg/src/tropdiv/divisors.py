"""Divisors (chip configurations), chip-firing moves and orientations."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph


class Divisor:
    """Finitely supported integer chip configuration on a graph.

    The host is either a FiniteGraph (chips on vertices only) or a
    MetricGraph (chips at arbitrary rational points).  Divisors are
    immutable; arithmetic is coefficient-wise.
    """

    __slots__ = ("host", "_chips")

    def __init__(self, host, chips: Mapping[GraphPoint | str, int] | None = None):
        self.host = host
        data: dict[GraphPoint, int] = {}
        for at, n in (chips or {}).items():
            p = self._coerce(at)
            n = int(n)
            if n:
                data[p] = data.get(p, 0) + n
                if not data[p]:
                    del data[p]
        self._chips = data

    def _coerce(self, at) -> GraphPoint:
        if isinstance(at, GraphPoint):
            if at.kind == "e" and isinstance(self.host, FiniteGraph):
                raise GraphError("finite-graph divisors live on vertices")
            return at
        if isinstance(self.host, MetricGraph):
            return self.host.point(str(at))
        self.host.vertex_index(str(at))
        return GraphPoint("v", str(at))

    # -- queries ----------------------------------------------------------

    def coeff(self, at) -> int:
        return self._chips.get(self._coerce(at), 0)

    def degree(self) -> int:
        return sum(self._chips.values())

    def support(self) -> tuple[GraphPoint, ...]:
        return tuple(self._chips)

    def items(self):
        return self._chips.items()

    def is_effective(self) -> bool:
        return all(n >= 0 for n in self._chips.values())

    def is_zero(self) -> bool:
        return not self._chips

    def is_vertex_supported(self) -> bool:
        return all(p.kind == "v" for p in self._chips)

    def key(self):
        """Canonical hashable form (sorted by point)."""
        if isinstance(self.host, MetricGraph):
            order = self.host.point_sort_key
        else:
            order = lambda p: self.host.vertex_index(p.where)
        return tuple((p.key(), n) for p, n in sorted(self._chips.items(), key=lambda kv: order(kv[0])))

    # -- arithmetic ---------------------------------------------------------

    def _check_host(self, other: "Divisor"):
        if self.host is not other.host and self.host != other.host:
            raise GraphError("divisor arithmetic requires a common host graph")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check_host(other)
        out = dict(self._chips)
        for p, n in other._chips.items():
            out[p] = out.get(p, 0) + n
        return Divisor(self.host, out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor(self.host, {p: -n for p, n in self._chips.items()})

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor(self.host, {p: int(k) * n for p, n in self._chips.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.host is other.host and self._chips == other._chips

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        if not self._chips:
            return "Divisor(0)"
        bits = []
        for p, n in sorted(self._chips.items(), key=lambda kv: repr(kv[0])):
            at = p.where if p.kind == "v" else f"{p.where}@{p.offset}"
            bits.append(f"{n}·{at}" if n != 1 else at)
        return "Divisor(" + " + ".join(bits).replace("+ -", "- ") + ")"


def divisor(host, chips=None) -> Divisor:
    """Convenience constructor; accepts vertex ids, points, or pairs."""
    if chips is None:
        return Divisor(host)
    if isinstance(chips, Mapping):
        return Divisor(host, chips)
    acc: dict = {}
    for at in chips:  # iterable of points/ids, each one chip
        acc[at] = acc.get(at, 0) + 1
    return Divisor(host, acc)


def canonical_divisor(g: MetricGraph | FiniteGraph) -> Divisor:
    """Sum of (val(v) - 2)·v over model vertices; degree 2g - 2.

    Refinement-invariant: inserted degree-2 points get coefficient 0.
    """
    model = g.model if isinstance(g, MetricGraph) else g
    return Divisor(g, {GraphPoint("v", v): model.valence(v) - 2 for v in model.vertices})


def weighted_canonical(g: MetricGraph) -> Divisor:
    """Canonical divisor plus 2·weight at each vertex; degree 2·g# - 2."""
    k = canonical_divisor(g)
    return k + Divisor(g, {GraphPoint("v", v): 2 * w for v, w in g.weights.items()})


def chip_fire(g: FiniteGraph | MetricGraph, d: Divisor, fire_set: Iterable[str]) -> Divisor:
    """Fire every vertex of `fire_set` once.

    Each fired vertex sends one chip along each edge leaving the set; the
    result is linearly equivalent to `d`.
    """
    if not d.is_vertex_supported():
        raise GraphError("chip_fire needs a vertex-supported divisor")
    model = g.model if isinstance(g, MetricGraph) else g
    if isinstance(g, MetricGraph) and len(set(g.lengths.values())) > 1:
        # firing a whole vertex set moves chips across full edges, which is a
        # legal linear equivalence only when all edges have one common length
        raise GraphError("set-firing on a metric graph needs equal edge lengths; use reduce/witness moves instead")
    fire = {str(v) for v in fire_set}
    for v in fire:
        model.vertex_index(v)
    delta: dict[GraphPoint, int] = {}
    for eid, u, v in model.edges:
        inu, inv = u in fire, v in fire
        if inu and not inv:
            delta[GraphPoint("v", u)] = delta.get(GraphPoint("v", u), 0) - 1
            delta[GraphPoint("v", v)] = delta.get(GraphPoint("v", v), 0) + 1
        elif inv and not inu:
            delta[GraphPoint("v", v)] = delta.get(GraphPoint("v", v), 0) - 1
            delta[GraphPoint("v", u)] = delta.get(GraphPoint("v", u), 0) + 1
    return d + Divisor(d.host, delta)


class Orientation:
    """A choice of head and tail for every edge of a finite graph."""

    __slots__ = ("graph", "heads")

    def __init__(self, graph: FiniteGraph, heads: Mapping[str, str]):
        self.graph = graph
        h = {}
        for eid, u, v in graph.edges:
            head = heads.get(eid)
            if head not in (u, v):
                raise GraphError(f"edge {eid!r} needs a head among its ends {u!r}, {v!r}")
            h[eid] = head
        self.heads = h

    def head(self, eid: str) -> str:
        return self.heads[eid]

    def tail(self, eid: str) -> str:
        u, v = self.graph.edge_ends(eid)
        return v if self.heads[eid] == u else u

    def indegree(self, v: str) -> int:
        return sum(1 for h in self.heads.values() if h == v)

    def is_acyclic(self) -> bool:
        """Standard DFS cycle detection on the directed multigraph."""
        out: dict[str, list[str]] = {v: [] for v in self.graph.vertices}
        for eid in self.heads:
            out[self.tail(eid)].append(self.heads[eid])
        color = {v: 0 for v in self.graph.vertices}  # 0 new, 1 active, 2 done
        for start in self.graph.vertices:
            if color[start]:
                continue
            stack = [(start, iter(out[start]))]
            color[start] = 1
            while stack:
                v, it = stack[-1]
                advanced = False
                for w in it:
                    if color[w] == 1:
                        return False
                    if color[w] == 0:
                        color[w] = 1
                        stack.append((w, iter(out[w])))
                        advanced = True
                        break
                if not advanced:
                    color[v] = 2
                    stack.pop()
        return True


def all_orientations(g: FiniteGraph):
    """Iterate over all 2^|E| orientations, in a fixed order."""
    m = len(g.edges)
    for mask in range(1 << m):
        heads = {}
        for k, (eid, u, v) in enumerate(g.edges):
            heads[eid] = v if (mask >> k) & 1 else u
        yield Orientation(g, heads)


def orientation_divisor(o: Orientation) -> Divisor:
    """D_O = sum of (indeg(v) - 1)·v; always of degree g - 1."""
    g = o.graph
    indeg = {v: 0 for v in g.vertices}
    for eid in o.heads:
        indeg[o.heads[eid]] += 1
    return Divisor(g, {GraphPoint("v", v): indeg[v] - 1 for v in g.vertices})
