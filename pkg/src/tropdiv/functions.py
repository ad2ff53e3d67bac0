"""Continuous piecewise linear functions with integer slopes.

A PLFunction is stored as exact rational values at a finite breakpoint set
that contains every model vertex; it is affine between consecutive
breakpoints along each edge.  The slope of every affine piece must be an
integer (checked at construction).  ord/div follow the incoming-slope sign
convention: a local maximum has positive order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .divisors import Divisor
from .graphs import GraphError, GraphPoint, MetricGraph, _as_fraction


class PLFunction:
    __slots__ = ("host", "values", "_edge_breaks")

    def __init__(self, host: MetricGraph, values: Mapping[GraphPoint | str, object]):
        self.host = host
        vals: dict[GraphPoint, Fraction] = {}
        for at, x in values.items():
            p = host.point(at) if isinstance(at, str) else at
            vals[p] = _as_fraction(x)
        for v in host.model.vertices:
            if GraphPoint("v", v) not in vals:
                raise GraphError(f"PLFunction needs a value at every model vertex; missing {v!r}")
        self.values = vals

        breaks: dict[str, list[tuple[Fraction, Fraction]]] = {}
        per_edge: dict[str, list[tuple[Fraction, Fraction]]] = {e: [] for e, _, _ in host.model.edges}
        for p, x in vals.items():
            if p.kind == "e":
                per_edge[p.where].append((p.offset, x))
        for eid, u, v in host.model.edges:
            ell = host.length(eid)
            pts = sorted(per_edge[eid])
            pts = [(Fraction(0), vals[GraphPoint("v", u)])] + pts + [(ell, vals[GraphPoint("v", v)])]
            for (a, xa), (b, xb) in zip(pts, pts[1:]):
                if b == a:
                    raise GraphError("duplicate breakpoint")
                s = (xb - xa) / (b - a)
                if s.denominator != 1:
                    raise GraphError(f"non-integer slope {s} on edge {eid!r}")
            breaks[eid] = pts
        self._edge_breaks = breaks

    # -- evaluation -------------------------------------------------------

    def __call__(self, p: GraphPoint | str) -> Fraction:
        if isinstance(p, str):
            p = self.host.point(p)
        if p.kind == "v":
            return self.values[p]
        pts = self._edge_breaks[p.where]
        t = p.offset
        for (a, xa), (b, xb) in zip(pts, pts[1:]):
            if a <= t <= b:
                return xa + (xb - xa) * (t - a) / (b - a)
        raise GraphError(f"point {p!r} outside edge")

    def breakpoints(self) -> tuple[GraphPoint, ...]:
        out = [GraphPoint("v", v) for v in self.host.model.vertices]
        for eid, pts in self._edge_breaks.items():
            ell = self.host.length(eid)
            out.extend(GraphPoint("e", eid, a) for a, _ in pts if 0 < a < ell)
        return tuple(out)

    def incoming_slopes(self, p: GraphPoint) -> list[Fraction]:
        """Slope of f toward p along each tangent direction at p."""
        if isinstance(p, str):
            p = self.host.point(p)
        slopes = []
        if p.kind == "v":
            fv = self.values[p]
            for eid, u, v in self.host.model.edges:
                pts = self._edge_breaks[eid]
                if u == p.where:
                    (a, xa), (b, xb) = pts[0], pts[1]
                    slopes.append((fv - xb) / (b - a))
                if v == p.where:
                    (a, xa), (b, xb) = pts[-2], pts[-1]
                    slopes.append((fv - xa) / (b - a))
        else:
            pts = self._edge_breaks[p.where]
            t = p.offset
            fv = self(p)
            lo = max((a, xa) for a, xa in pts if a < t)
            hi = min((b, xb) for b, xb in pts if b > t)
            slopes.append((fv - lo[1]) / (t - lo[0]))
            slopes.append((fv - hi[1]) / (hi[0] - t))
        return slopes

    # -- calculus ---------------------------------------------------------

    def ord_at(self, p: GraphPoint | str) -> int:
        """Sum of incoming slopes at p; zero away from kinks."""
        if isinstance(p, str):
            p = self.host.point(p)
        total = sum(self.incoming_slopes(p), Fraction(0))
        assert total.denominator == 1
        return int(total)

    def divisor(self) -> Divisor:
        """div(f) = sum of ord_p(f)·p; a principal divisor of degree 0."""
        return Divisor(self.host, {p: self.ord_at(p) for p in self.breakpoints()})

    # -- algebra ----------------------------------------------------------

    def _common_points(self, other: "PLFunction") -> list[GraphPoint]:
        pts = set(self.breakpoints()) | set(other.breakpoints())
        return list(pts)

    def __add__(self, other):
        if isinstance(other, PLFunction):
            pts = self._common_points(other)
            return PLFunction(self.host, {p: self(p) + other(p) for p in pts})
        c = _as_fraction(other)
        return PLFunction(self.host, {p: x + c for p, x in self.values.items()})

    __radd__ = __add__

    def __neg__(self):
        return PLFunction(self.host, {p: -x for p, x in self.values.items()})

    def __sub__(self, other):
        if isinstance(other, PLFunction):
            return self + (-other)
        return self + (-_as_fraction(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLFunction) or self.host != other.host:
            return False
        pts = self._common_points(other)
        return all(self(p) == other(p) for p in pts)

    def __hash__(self):
        raise TypeError("PLFunction is not hashable")

    def __repr__(self) -> str:
        return f"PLFunction({len(self.values)} breakpoints on {self.host!r})"


def constant(host: MetricGraph, c=0) -> PLFunction:
    return PLFunction(host, {v: _as_fraction(c) for v in host.model.vertices})


def ord_at(f: PLFunction, p: GraphPoint | str) -> int:
    return f.ord_at(p)


def principal_divisor(f: PLFunction) -> Divisor:
    return f.divisor()


def is_in_linear_system(f: PLFunction, d: Divisor) -> bool:
    """Membership in R(D): div(f) + D >= 0."""
    return (f.divisor() + d).is_effective()


# -- tropical minima ------------------------------------------------------


def _shifted_min(fs: Sequence[PLFunction], bs: Sequence) -> PLFunction:
    """theta = min_i (f_i + b_i), with all crossing points inserted."""
    host = fs[0].host
    shifts = [_as_fraction(b) for b in bs]
    pts: set[GraphPoint] = set()
    for f in fs:
        pts.update(f.breakpoints())
    # insert pairwise crossings inside each edge interval
    for eid, _, _ in host.model.edges:
        ell = host.length(eid)
        offs = sorted({p.offset for p in pts if p.kind == "e" and p.where == eid} | {Fraction(0), ell})
        for a, b in zip(offs, offs[1:]):
            mids = set()
            vals_a = [f(host.point_on(eid, a)) + s for f, s in zip(fs, shifts)]
            vals_b = [f(host.point_on(eid, b)) + s for f, s in zip(fs, shifts)]
            for i in range(len(fs)):
                for j in range(i + 1, len(fs)):
                    da, db = vals_a[i] - vals_a[j], vals_b[i] - vals_b[j]
                    if (da < 0 < db) or (db < 0 < da):
                        t = a + (b - a) * (-da) / (db - da)
                        mids.add(t)
            for t in mids:
                pts.add(host.point_on(eid, t))
    out = {}
    for p in pts | {host.point(v) for v in host.model.vertices}:
        out[p] = min(f(p) + s for f, s in zip(fs, shifts))
    return PLFunction(host, out)


def verify_tropical_dependence(fs: Sequence[PLFunction], bs: Sequence) -> bool:
    """True iff min_i(f_i + b_i) is attained at least twice everywhere.

    Decided exactly: on a common refinement containing all breakpoints and
    crossing points, the set of minimizers is constant on every open
    segment, so checking breakpoints and segment midpoints covers Gamma.
    """
    if len(fs) != len(bs) or not fs:
        raise GraphError("need equally many functions and shifts, at least one")
    host = fs[0].host
    shifts = [_as_fraction(b) for b in bs]
    theta = _shifted_min(fs, bs)

    def active_count(p: GraphPoint) -> int:
        m = theta(p)
        return sum(1 for f, s in zip(fs, shifts) if f(p) + s == m)

    for p in theta.breakpoints():
        if active_count(p) < 2:
            return False
    for eid, _, _ in host.model.edges:
        pts = theta._edge_breaks[eid]
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if active_count(host.point_on(eid, (a + b) / 2)) < 2:
                return False
    return True


def min_combination(
    fs: Sequence[PLFunction], bs: Sequence, d: Divisor
) -> tuple[PLFunction, tuple[GraphPoint, ...]]:
    """theta = min_i(f_i + b_i) for f_i in R(D), plus supp(div(theta) + D).

    The support is computed twice: directly, and through the boundary/
    support characterization of the minimum (for each point take some f_j
    active there; the point is in the support iff it lies in
    supp(div(f_j) + D) or on the boundary of the locus where f_j is
    minimal).  The two computations must agree.
    """
    if len(fs) != len(bs) or not fs:
        raise GraphError("need equally many functions and shifts, at least one")
    host = fs[0].host
    for k, f in enumerate(fs):
        if not is_in_linear_system(f, d):
            raise GraphError(f"function #{k} is not in R(D)")
    shifts = [_as_fraction(b) for b in bs]
    theta = _shifted_min(fs, bs)

    chips = theta.divisor() + d
    direct = {p for p, n in chips.items() if n}

    # characterization route
    def actives(p: GraphPoint) -> list[int]:
        m = theta(p)
        return [i for i, (f, s) in enumerate(zip(fs, shifts)) if f(p) + s == m]

    segment_actives: dict[tuple[str, Fraction, Fraction], set[int]] = {}
    for eid, _, _ in host.model.edges:
        pts = theta._edge_breaks[eid]
        for (a, _), (b, _) in zip(pts, pts[1:]):
            mid = host.point_on(eid, (a + b) / 2)
            segment_actives[(eid, a, b)] = set(actives(mid))

    def on_boundary(p: GraphPoint, j: int) -> bool:
        # j stops being active in some direction leaving p
        if p.kind == "v":
            for eid, u, v in host.model.edges:
                pts = theta._edge_breaks[eid]
                if u == p.where and j not in segment_actives[(eid, pts[0][0], pts[1][0])]:
                    return True
                if v == p.where and j not in segment_actives[(eid, pts[-2][0], pts[-1][0])]:
                    return True
            return False
        pts = theta._edge_breaks[p.where]
        t = p.offset
        if all(a != t for a, _ in pts):
            return False  # interior of a segment: the active set is locally constant
        lo = max(a for a, _ in pts if a < t)
        hi = min(b for b, _ in pts if b > t)
        return (
            j not in segment_actives[(p.where, lo, t)]
            or j not in segment_actives[(p.where, t, hi)]
        )

    support_divisors = [f.divisor() + d for f in fs]
    candidates = set(theta.breakpoints()) | set(d.support())
    for sd in support_divisors:
        candidates.update(sd.support())
    predicted = set()
    for p in candidates:
        j = actives(p)[0]
        if support_divisors[j].coeff(p) != 0 or on_boundary(p, j):
            predicted.add(p)

    if direct != predicted:
        raise AssertionError(
            f"support mismatch between direct and characterization routes: {direct} vs {predicted}"
        )
    order = host.point_sort_key
    return theta, tuple(sorted(direct, key=order))
