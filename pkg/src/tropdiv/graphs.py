"""Finite and metric graph models.

A graph here is a finite connected multigraph without loop edges.  A metric
graph is such a model together with positive rational edge lengths (and an
optional nonnegative integer weight per vertex).  All lengths, offsets and
derived quantities are exact `fractions.Fraction` values; there is no
floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Invalid graph data (disconnected, loop edge, bad length, ...)."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise GraphError(f"floating point value {x!r} rejected; use Fraction or 'p/q' strings")
    return Fraction(x)


class FiniteGraph:
    """Connected multigraph without loop edges.

    Vertices are ordered string identifiers; edges are (edge id, end, end)
    triples.  Each edge is stored with a canonical orientation: the tail is
    the endpoint that comes first in the vertex order, parallel edges are
    ordered by edge id.
    """

    __slots__ = ("vertices", "edges", "_vindex", "_eindex", "_adj")

    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}

        canon = []
        for eid, u, v in edges:
            eid, u, v = str(eid), str(u), str(v)
            if u not in self._vindex or v not in self._vindex:
                raise GraphError(f"edge {eid!r} references unknown vertex")
            if u == v:
                raise GraphError(f"edge {eid!r} is a loop edge; loop edges are not allowed")
            if self._vindex[u] > self._vindex[v]:
                u, v = v, u
            canon.append((eid, u, v))
        canon.sort(key=lambda t: (self._vindex[t[1]], self._vindex[t[2]], t[0]))
        self.edges = tuple(canon)
        self._eindex = {e[0]: i for i, e in enumerate(self.edges)}
        if len(self._eindex) != len(self.edges):
            raise GraphError("duplicate edge ids")

        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for k, (eid, u, v) in enumerate(self.edges):
            adj[self._vindex[u]].append((k, self._vindex[v]))
            adj[self._vindex[v]].append((k, self._vindex[u]))
        self._adj = tuple(tuple(a) for a in adj)

        if not self._connected():
            raise GraphError("graph is not connected")

    def _connected(self) -> bool:
        if not self.vertices:
            raise GraphError("graph needs at least one vertex")
        seen = [False] * len(self.vertices)
        stack = [0]
        seen[0] = True
        while stack:
            x = stack.pop()
            for _, y in self._adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        return all(seen)

    # -- basic queries ---------------------------------------------------

    def vertex_index(self, v: str) -> int:
        try:
            return self._vindex[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def edge_index(self, eid: str) -> int:
        try:
            return self._eindex[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def edge_ends(self, eid: str) -> tuple[str, str]:
        _, u, v = self.edges[self.edge_index(eid)]
        return u, v

    def adjacency(self, v: str) -> tuple[tuple[int, int], ...]:
        """(edge index, other-vertex index) pairs at v, parallel edges repeated."""
        return self._adj[self.vertex_index(v)]

    def valence(self, v: str) -> int:
        return len(self._adj[self.vertex_index(v)])

    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def laplacian(self) -> list[list[int]]:
        """L = D - A with multiplicities; symmetric, zero row sums."""
        n = len(self.vertices)
        L = [[0] * n for _ in range(n)]
        for _, u, v in self.edges:
            i, j = self._vindex[u], self._vindex[v]
            L[i][i] += 1
            L[j][j] += 1
            L[i][j] -= 1
            L[j][i] -= 1
        return L

    def multiplicity(self, u: str, v: str) -> int:
        i, j = self.vertex_index(u), self.vertex_index(v)
        return sum(1 for _, y in self._adj[i] if y == j)

    def is_bridge(self, eid: str) -> bool:
        k = self.edge_index(eid)
        _, u, v = self.edges[k]
        seen = {self._vindex[u]}
        stack = [self._vindex[u]]
        target = self._vindex[v]
        while stack:
            x = stack.pop()
            for ek, y in self._adj[x]:
                if ek == k or y in seen:
                    continue
                if y == target:
                    return False
                seen.add(y)
                stack.append(y)
        return True

    def __repr__(self) -> str:
        return f"FiniteGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))


class GraphPoint:
    """A point of a metric graph: a vertex, or a position inside an edge.

    Edge positions are measured from the canonical tail of the edge.  Points
    are canonicalized at construction (offset 0 or full length becomes the
    vertex form), so equality and hashing are plain tuple comparisons.
    Construct via `MetricGraph.point` / `MetricGraph.point_on`.
    """

    __slots__ = ("kind", "where", "offset")

    def __init__(self, kind: str, where: str, offset: Fraction | None = None):
        self.kind = kind  # "v" or "e"
        self.where = where
        self.offset = offset

    def key(self):
        if self.kind == "v":
            return ("v", self.where)
        return ("e", self.where, self.offset)

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphPoint) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        if self.kind == "v":
            return f"Point({self.where})"
        return f"Point({self.where}@{self.offset})"

    def is_vertex(self) -> bool:
        return self.kind == "v"


class MetricGraph:
    """A model graph with positive rational edge lengths and vertex weights."""

    __slots__ = ("model", "lengths", "weights")

    def __init__(
        self,
        model: FiniteGraph,
        lengths: Mapping[str, Fraction | int | str] | None = None,
        weights: Mapping[str, int] | None = None,
    ):
        self.model = model
        lens = {}
        for eid, _, _ in model.edges:
            raw = 1 if lengths is None else lengths.get(eid, None)
            if raw is None:
                raise GraphError(f"missing length for edge {eid!r}")
            val = _as_fraction(raw)
            if val <= 0:
                raise GraphError(f"edge {eid!r} has non-positive length {val}")
            lens[eid] = val
        self.lengths = lens
        w = {}
        for vid, wt in (weights or {}).items():
            if vid not in model._vindex:
                raise GraphError(f"weight on unknown vertex {vid!r}")
            wt = int(wt)
            if wt < 0:
                raise GraphError(f"negative vertex weight at {vid!r}")
            if wt:
                w[vid] = wt
        self.weights = w

    # -- points ----------------------------------------------------------

    def point(self, v: str) -> GraphPoint:
        self.model.vertex_index(v)
        return GraphPoint("v", v)

    def point_on(self, eid: str, offset) -> GraphPoint:
        off = _as_fraction(offset)
        ell = self.length(eid)
        if off < 0 or off > ell:
            raise GraphError(f"offset {off} outside edge {eid!r} of length {ell}")
        u, v = self.model.edge_ends(eid)
        if off == 0:
            return GraphPoint("v", u)
        if off == ell:
            return GraphPoint("v", v)
        return GraphPoint("e", eid, off)

    def length(self, eid: str) -> Fraction:
        self.model.edge_index(eid)
        return self.lengths[eid]

    def total_length(self) -> Fraction:
        return sum(self.lengths.values(), Fraction(0))

    def genus(self) -> int:
        return self.model.genus()

    def weighted_genus(self) -> int:
        return self.genus() + sum(self.weights.values())

    def weight(self, v: str) -> int:
        self.model.vertex_index(v)
        return self.weights.get(v, 0)

    def point_sort_key(self, p: GraphPoint):
        if p.kind == "v":
            return (0, self.model.vertex_index(p.where), Fraction(0))
        return (1, self.model.edge_index(p.where), p.offset)

    def rescaled(self, factor) -> "MetricGraph":
        """Same model with every length multiplied by a positive rational."""
        f = _as_fraction(factor)
        if f <= 0:
            raise GraphError("rescale factor must be positive")
        return MetricGraph(self.model, {e: l * f for e, l in self.lengths.items()}, self.weights)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MetricGraph)
            and self.model == other.model
            and self.lengths == other.lengths
            and self.weights == other.weights
        )

    def __hash__(self) -> int:
        return hash((self.model, tuple(sorted(self.lengths.items()))))

    def __repr__(self) -> str:
        return f"MetricGraph({len(self.model.vertices)} vertices, {len(self.model.edges)} edges, genus {self.genus()})"


def genus(g: FiniteGraph | MetricGraph) -> int:
    """First Betti number |E| - |V| + 1 of (any model of) the graph."""
    return g.genus()


class Refinement:
    """Length-preserving identification between a graph and a refinement of it.

    `map_point` carries points of the original graph to the refined one and
    `unmap_point` goes back; both are exact inverse bijections on points.
    """

    def __init__(self, original: MetricGraph, refined: MetricGraph,
                 segments: dict[str, list[tuple[Fraction, Fraction, str, str]]]):
        self.original = original
        self.refined = refined
        # segments[old edge] = [(start, end, new edge id, vertex at start)], sorted
        self._segments = segments
        self._back: dict[str, tuple[str, Fraction, Fraction, str]] = {}
        self._vertex_back: dict[str, GraphPoint] = {}
        for old_eid, segs in segments.items():
            for a, b, new_eid, start_vid in segs:
                self._back[new_eid] = (old_eid, a, b, start_vid)
        for v in refined.model.vertices:
            if v in original.model._vindex:
                self._vertex_back[v] = GraphPoint("v", v)
        for old_eid, segs in segments.items():
            for a, _b, _new, start_vid in segs:
                if start_vid not in self._vertex_back:
                    self._vertex_back[start_vid] = original.point_on(old_eid, a)

    def _segment_offset(self, new_eid: str, off_from_start: Fraction) -> GraphPoint:
        # translate "distance from the segment's start vertex" into an offset
        # along the refined edge's canonical orientation
        old_eid, a, b, start_vid = self._back[new_eid]
        tail, _head = self.refined.model.edge_ends(new_eid)
        if tail == start_vid:
            return self.refined.point_on(new_eid, off_from_start)
        return self.refined.point_on(new_eid, (b - a) - off_from_start)

    def map_point(self, p: GraphPoint) -> GraphPoint:
        if p.kind == "v":
            return self.refined.point(p.where)
        segs = self._segments.get(p.where)
        if segs is None:
            return self.refined.point_on(p.where, p.offset)
        for a, b, new_eid, _start in segs:
            if a <= p.offset <= b:
                return self._segment_offset(new_eid, p.offset - a)
        raise GraphError(f"point {p!r} outside its edge")

    def unmap_point(self, p: GraphPoint) -> GraphPoint:
        if p.kind == "v":
            try:
                return self._vertex_back[p.where]
            except KeyError:
                raise GraphError(f"vertex {p.where!r} not part of this refinement") from None
        if p.where in self._back:
            old_eid, a, b, start_vid = self._back[p.where]
            tail, _head = self.refined.model.edge_ends(p.where)
            from_start = p.offset if tail == start_vid else (b - a) - p.offset
            return self.original.point_on(old_eid, a + from_start)
        return self.original.point_on(p.where, p.offset)


def refine(
    g: MetricGraph, pts: Iterable[GraphPoint]
) -> tuple[MetricGraph, Refinement]:
    """Insert the given points as degree-2 vertices.

    Lengths split exactly and the represented metric space is unchanged.
    New vertices are named ``"{edge id}@{offset}"``; split edges are named
    ``"{edge id}#{k}"``.  Points already at vertices are left alone.
    """
    by_edge: dict[str, set[Fraction]] = {}
    for p in pts:
        if p.kind == "e":
            by_edge.setdefault(p.where, set()).add(p.offset)

    vertices = list(g.model.vertices)
    edges: list[tuple[str, str, str]] = []
    lengths: dict[str, Fraction] = {}
    segments: dict[str, list[tuple[Fraction, Fraction, str, str]]] = {}
    for eid, u, v in g.model.edges:
        cuts = sorted(by_edge.get(eid, ()))
        if not cuts:
            edges.append((eid, u, v))
            lengths[eid] = g.lengths[eid]
            segments[eid] = [(Fraction(0), g.lengths[eid], eid, u)]
            continue
        stops: list[tuple[Fraction, str]] = [(Fraction(0), u)]
        for off in cuts:
            name = f"{eid}@{off}"
            vertices.append(name)
            stops.append((off, name))
        stops.append((g.lengths[eid], v))
        segs = []
        for k in range(len(stops) - 1):
            (a, pa), (b, pb) = stops[k], stops[k + 1]
            new_eid = f"{eid}#{k}"
            edges.append((new_eid, pa, pb))
            lengths[new_eid] = b - a
            segs.append((a, b, new_eid, pa))
        segments[eid] = segs

    refined = MetricGraph(FiniteGraph(vertices, edges), lengths, g.weights)
    return refined, Refinement(g, refined, segments)
