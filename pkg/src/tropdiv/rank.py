"""Divisor rank and everything built on it.

Rank is computed straight from the definition: r(D) >= k iff |D - E| is
nonempty for every effective E of degree k supported on a rank-determining
set (all vertices for a finite graph; the vertices of the model refined at
supp(D) for a metric graph).  Effectivity of a class is read off its
q-reduced representative.  The search memoizes on reduced representatives,
so equivalent branches collapse; every k up to the answer is still verified
over all of E.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .divisors import Divisor, all_orientations, canonical_divisor, orientation_divisor, weighted_canonical
from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph
from .reduction import PreconditionError, _reduce_vector, _slide_reduce, _vector_of


@dataclass(frozen=True)
class RankResult:
    """Rank plus a re-verifiable certificate.

    `failing` is an effective divisor E of degree rank+1 with |D-E| empty
    (for rank -1 it is the zero divisor and D itself is not effective).
    `witnesses`, when requested, lists for every effective E of degree
    rank over the rank-determining set an effective divisor equivalent to
    D - E.
    """

    rank: int
    failing: Divisor | None = None
    witnesses: tuple[tuple[Divisor, Divisor], ...] | None = None

    def __int__(self) -> int:
        return self.rank


class _FiniteArena:
    def __init__(self, g: FiniteGraph, host):
        self.g = g
        self.host = host
        self.q = 0
        self.rds = list(range(len(g.vertices)))
        self._cache: dict[tuple, tuple] = {}

    def initial(self, d: Divisor):
        return self.reduced(tuple(_vector_of(self.g, d)))

    def reduced(self, chips: tuple) -> tuple:
        out = self._cache.get(chips)
        if out is None:
            out = tuple(_reduce_vector(self.g, list(chips), self.q)[0])
            self._cache[chips] = out
        return out

    def key(self, state: tuple) -> tuple:
        return state

    def qcoeff(self, state: tuple) -> int:
        return state[self.q]

    def minus(self, state: tuple, p: int) -> tuple:
        lst = list(state)
        lst[p] -= 1
        return self.reduced(tuple(lst))

    def point_divisor(self, p: int) -> Divisor:
        return Divisor(self.host, {self.g.vertices[p]: 1})

    def as_divisor(self, state: tuple) -> Divisor:
        return Divisor(self.host, {v: state[i] for i, v in enumerate(self.g.vertices)})


class _NotEffective:
    """Marker state: the class has no effective representative."""

    __slots__ = ("tag",)

    def __init__(self, tag):
        self.tag = tag


class _MetricArena:
    """Search arena whose states are fully effective q-reduced divisors.

    Subtracting a chip at p from an effective state needs at most a base
    change to p; a class that loses effectivity is represented by a marker
    and never expanded further, so the slide engine only ever sees
    effective configurations.
    """

    def __init__(self, g: MetricGraph, d: Divisor):
        self.g = g
        seen = {g.point(v) for v in g.model.vertices}
        self.rds = sorted(seen | set(d.support()), key=g.point_sort_key)
        self.qp = g.point(g.model.vertices[0])
        self._cache: dict[tuple, Divisor] = {}

    def _slide(self, d: Divisor, base: GraphPoint) -> Divisor:
        k = (d.key(), base.key())
        out = self._cache.get(k)
        if out is None:
            out, _ = _slide_reduce(self.g, d, base, False)
            self._cache[k] = out
        return out

    def initial(self, d: Divisor):
        pos = Divisor(self.g, {p: n for p, n in d.items() if n > 0})
        state = self._slide(pos, self.qp)
        for p, n in sorted(d.items(), key=lambda kv: self.g.point_sort_key(kv[0])):
            for _ in range(-n if n < 0 else 0):
                state = self.minus(state, p)
                if isinstance(state, _NotEffective):
                    return state
        return state

    def key(self, state):
        if isinstance(state, _NotEffective):
            return ("no", state.tag)
        return state.key()

    def qcoeff(self, state) -> int:
        if isinstance(state, _NotEffective):
            return -1
        return state.coeff(self.qp)

    def minus(self, state, p: GraphPoint):
        if isinstance(state, _NotEffective):
            return state
        one = Divisor(self.g, {p: 1})
        if state.coeff(p) >= 1:
            return self._slide(state - one, self.qp)
        F = self._slide(state, p)
        if F.coeff(p) >= 1:
            return self._slide(F - one, self.qp)
        return _NotEffective((F.key(), p.key()))

    def point_divisor(self, p: GraphPoint) -> Divisor:
        return Divisor(self.g, {p: 1})

    def as_divisor(self, state) -> Divisor:
        assert not isinstance(state, _NotEffective)
        return state


class _RankSearch:
    def __init__(self, arena):
        self.arena = arena
        self.memo: dict = {}  # key -> [max k proven ok, min k proven failing, witness points]
        self.children: dict = {}

    def _entry(self, key):
        e = self.memo.get(key)
        if e is None:
            e = [-1, None, None]
            self.memo[key] = e
        return e

    def _kids(self, key, state):
        kids = self.children.get(key)
        if kids is None:
            kids = [(p, self.arena.minus(state, p)) for p in self.arena.rds]
            # try likely-failing branches first: smallest base coefficient
            kids.sort(key=lambda pc: self.arena.qcoeff(pc[1]))
            self.children[key] = kids
        return kids

    def test(self, state, k: int):
        """None if |D - E| != 0 for every effective E of degree k on the
        rank-determining set; otherwise a list of points summing to a
        failing E."""
        a = self.arena
        if a.qcoeff(state) < 0:
            return []
        if k == 0:
            return None
        key = a.key(state)
        entry = self._entry(key)
        if entry[0] >= k:
            return None
        if entry[1] is not None and k >= entry[1]:
            pad = [a.rds[0]] * (k - entry[1])
            return entry[2] + pad
        for p, child in self._kids(key, state):
            sub = self.test(child, k - 1)
            if sub is not None:
                wit = [p] + sub
                if entry[1] is None or k < entry[1]:
                    entry[1], entry[2] = k, wit
                return wit
        entry[0] = max(entry[0], k)
        return None


def _rank_with(arena, d: Divisor, witnesses: bool) -> RankResult:
    deg = d.degree()
    host = d.host
    if deg < 0:
        return RankResult(-1, Divisor(host, {}))
    s0 = arena.initial(d)
    search = _RankSearch(arena)
    if arena.qcoeff(s0) < 0:
        return RankResult(-1, Divisor(host, {}))
    k = 1
    while True:
        fail = search.test(s0, k)
        if fail is not None:
            rank = k - 1
            failing = Divisor(host, {})
            for p in fail:
                failing = failing + arena.point_divisor(p)
            break
        k += 1
        assert k <= deg + 1, "rank search exceeded the degree bound"
    wit = None
    if witnesses:
        out = []
        for combo in itertools.combinations_with_replacement(arena.rds, rank):
            e = Divisor(host, {})
            state = s0
            for p in combo:
                e = e + arena.point_divisor(p)
                state = arena.minus(state, p)
            red = arena.as_divisor(state)
            assert red.is_effective()
            out.append((e, red))
        wit = tuple(out)
    return RankResult(rank, failing, wit)


def rank_finite(g: FiniteGraph | MetricGraph, d: Divisor, *, witnesses: bool = False) -> RankResult:
    """Baker-Norine rank: E runs over vertex-supported effective divisors."""
    model = g.model if isinstance(g, MetricGraph) else g
    if not d.is_vertex_supported():
        raise PreconditionError("rank_finite needs a vertex-supported divisor")
    return _rank_with(_FiniteArena(model, d.host), d, witnesses)


def rank_metric(g: MetricGraph, d: Divisor, *, witnesses: bool = False) -> RankResult:
    """Rank on a metric graph, with E over a rank-determining set.

    The set used is the vertices of the (loopless) model refined at
    supp(d); by the rank-determining-set theory this decides the rank
    exactly.
    """
    return _rank_with(_MetricArena(g, d), d, witnesses)


def rank(g, d: Divisor, **kw) -> RankResult:
    if isinstance(g, MetricGraph):
        return rank_metric(g, d, **kw)
    return rank_finite(g, d, **kw)


# ---------------------------------------------------------------------------
# identities and invariants
# ---------------------------------------------------------------------------


def riemann_roch_check(g, d: Divisor) -> bool:
    """r(D) - r(K - D) == deg(D) - g + 1, evaluated exactly."""
    K = canonical_divisor(g)
    gen = g.genus()
    r1 = rank(g, d).rank
    r2 = rank(g, K - d).rank
    return r1 - r2 == d.degree() - gen + 1


def clifford_check(g, d: Divisor) -> bool:
    """For special divisors, r(D) <= deg(D)/2; vacuously true otherwise."""
    K = canonical_divisor(g)
    r1 = rank(g, d).rank
    if r1 < 0:
        return True
    r2 = rank(g, K - d).rank
    if r2 < 0:
        return True
    return 2 * r1 <= d.degree()


def midpoint_grid(g: MetricGraph) -> list[GraphPoint]:
    pts = [g.point(v) for v in g.model.vertices]
    pts += [g.point_on(eid, g.lengths[eid] / 2) for eid, _, _ in g.model.edges]
    return pts


def gonality(g: MetricGraph, max_degree: int, grid: list[GraphPoint] | None = None):
    """Least degree <= max_degree of a rank >= 1 divisor supported on the grid.

    The search is restricted to the given grid (default: model vertices);
    exactness beyond the grid is not claimed.  Returns (degree, witness)
    or None if nothing on the grid works within the bound.
    """
    pts = grid if grid is not None else [g.point(v) for v in g.model.vertices]
    for deg in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(pts, deg):
            d = Divisor(g, {})
            for p in combo:
                d = d + Divisor(g, {p: 1})
            if rank_metric(g, d).rank >= 1:
                return deg, d
    return None


def clifford_index(g: MetricGraph, grid: list[GraphPoint] | None = None):
    """Clifford index over the grid: min(deg - 2r) over divisors that move
    in both directions (r(D) >= 1 and r(K - D) >= 1), capped by the
    gonality contribution gon - 2 (a degree-gon rank-1 divisor).  The cap
    is what makes the index well defined at small genus, where no divisor
    satisfies both conditions.  Grid-restricted like `gonality`; returns
    (value, witness divisor) or None when no grid divisor qualifies.
    """
    pts = grid if grid is not None else [g.point(v) for v in g.model.vertices]
    gen = g.genus()
    K = canonical_divisor(g)
    best = None
    for deg in range(2, 2 * gen - 3):
        for combo in itertools.combinations_with_replacement(pts, deg):
            d = Divisor(g, {})
            for p in combo:
                d = d + Divisor(g, {p: 1})
            r = rank_metric(g, d).rank
            if r >= 1 and rank_metric(g, K - d).rank >= 1:
                val = deg - 2 * r
                if best is None or val < best[0]:
                    best = (val, d)
    gon = gonality(g, (gen + 2 + 1) // 2, grid=pts)
    if gon is not None:
        deg, wit = gon
        if best is None or deg - 2 < best[0]:
            best = (deg - 2, wit)
    return best


def _picard_classes(g: FiniteGraph, degree: int, host) -> list[Divisor]:
    """All q-reduced divisors of the given degree (q = first vertex)."""
    from .reduction import dhar_unburnt_finite

    q = g.vertices[0]
    others = [v for v in g.vertices if v != q]
    ranges = [range(0, g.valence(v)) for v in others]
    out = []
    for combo in itertools.product(*ranges):
        chips = dict(zip(others, combo))
        chips[q] = degree - sum(combo)
        d = Divisor(host, chips)
        if dhar_unburnt_finite(g, d, q) == frozenset():
            out.append(d)
    return out


def brill_noether_rank(g: FiniteGraph, r: int, d: int) -> int:
    """Finite-graph Brill-Noether rank w^r_d (vertex-supported analogue).

    Largest k such that every effective vertex divisor E of degree r + k
    admits some class D in W^r_d with |D - E| nonempty; -1 if W^r_d is
    empty.  Both the W^r_d search and E are vertex-supported.
    """
    if r < 0 or d < 0:
        raise GraphError("need r >= 0 and d >= 0")
    arena = _FiniteArena(g, g)
    classes = _picard_classes(g, d, g)
    W = [dd for dd in classes if rank_finite(g, dd).rank >= r]
    if not W:
        return -1
    Wstates = [arena.initial(dd) for dd in W]
    k = 0
    while True:
        need = r + k + 1
        if need > d:  # each D in W has degree d; |D - E| empty once deg E > d
            return k
        ok = True
        for combo in itertools.combinations_with_replacement(range(len(g.vertices)), need):
            hit = False
            for s in Wstates:
                st = s
                for p in combo:
                    st = arena.minus(st, p)
                if arena.qcoeff(st) >= 0:
                    hit = True
                    break
            if not hit:
                ok = False
                break
        if not ok:
            return k
        k += 1


def weighted_rank(g: MetricGraph, d: Divisor) -> int:
    """Vertex-weighted rank via the intrinsic formula
    min over 0 <= E <= W of (deg E + r(D - 2E)), W = sum of weights."""
    wpts = [(v, w) for v, w in sorted(g.weights.items())]
    best = None
    for combo in itertools.product(*[range(w + 1) for _, w in wpts]):
        e = Divisor(g, {v: c for (v, _), c in zip(wpts, combo)})
        val = e.degree() + rank_metric(g, d - 2 * e).rank
        if best is None or val < best:
            best = val
    return best if best is not None else rank_metric(g, d).rank


def attach_weight_loops(g: MetricGraph, loop_length: Fraction | int = 1) -> tuple[MetricGraph, dict]:
    """Explicit realization of the weight loops: at each vertex of weight
    w attach w loops of the given total length (subdivided by a midpoint
    to keep the model loopless).  Returns the new graph and a vertex-name
    passthrough for divisor transport."""
    lam = Fraction(loop_length)
    if lam <= 0:
        raise GraphError("loop length must be positive")
    verts = list(g.model.vertices)
    edges = [(e, u, v) for e, u, v in g.model.edges]
    lengths = dict(g.lengths)
    for v, w in sorted(g.weights.items()):
        for i in range(w):
            mid = f"{v}~loop{i}"
            verts.append(mid)
            for half in ("a", "b"):
                eid = f"{v}~loop{i}{half}"
                edges.append((eid, v, mid))
                lengths[eid] = lam / 2
    bigger = MetricGraph(FiniteGraph(verts, edges), lengths)
    return bigger, {v: v for v in g.model.vertices}


def weighted_rank_via_loops(g: MetricGraph, d: Divisor, loop_length=1) -> int:
    """Cross-check route: rank of d on the explicit loop-augmented graph."""
    bigger, _ = attach_weight_loops(g, loop_length)
    moved = Divisor(bigger, {_transport(p, bigger): n for p, n in d.items()})
    return rank_metric(bigger, moved).rank


def _transport(p: GraphPoint, target: MetricGraph) -> GraphPoint:
    if p.kind == "v":
        return target.point(p.where)
    return target.point_on(p.where, p.offset)


def weighted_riemann_roch_check(g: MetricGraph, d: Divisor) -> bool:
    """r#(D) - r#(K# - D) == deg(D) + 1 - g#, evaluated exactly."""
    Kw = weighted_canonical(g)
    gw = g.weighted_genus()
    return weighted_rank(g, d) - weighted_rank(g, Kw - d) == d.degree() + 1 - gw


def is_weierstrass_point(g: MetricGraph, p: GraphPoint | str) -> bool:
    """Whether r(K - g*p) >= 0; needs genus >= 2."""
    gen = g.genus()
    if gen < 2:
        raise GraphError("Weierstrass points need genus >= 2")
    if isinstance(p, str):
        p = g.point(p)
    K = canonical_divisor(g)
    return rank_metric(g, K - gen * Divisor(g, {p: 1})).rank >= 0


def orientation_rank_law(g: FiniteGraph) -> bool:
    """Exhaustively: rank(D_O) = -1 iff O is acyclic, over all 2^|E|."""
    if len(g.edges) > 16:
        raise GraphError("orientation sweep limited to |E| <= 16")
    for o in all_orientations(g):
        d = orientation_divisor(o)
        if (rank_finite(g, d).rank == -1) != o.is_acyclic():
            return False
    return True
