"""Jacobians: sandpile group, spanning trees, period lattice, Abel-Jacobi,
Zhang measure.  Everything exact: integer Smith normal form, fraction-free
determinants, rational Gram matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .divisors import Divisor
from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph


# ---------------------------------------------------------------------------
# integer linear algebra
# ---------------------------------------------------------------------------


def smith_invariant_factors(mat: list[list[int]]) -> list[int]:
    """Invariant factors (diagonal of the Smith normal form), 1s dropped.

    Standard elimination over the integers: move a minimal nonzero pivot
    into place, clear its row and column with division steps, and restore
    divisibility by folding offending entries back into the pivot position.
    """
    a = [row[:] for row in mat]
    n = len(a)
    m = len(a[0]) if a else 0
    factors = []
    t = 0
    while t < min(n, m):
        # find minimal nonzero entry in the remaining block
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        dirty = False
        for i in range(t + 1, n):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                for j in range(t, m):
                    a[i][j] -= q * a[t][j]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, m):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                for i in range(t, n):
                    a[i][j] -= q * a[i][t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility: pivot must divide every remaining entry
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(t, m):
                a[t][j] += a[bad][j]
            continue
        factors.append(abs(a[t][t]))
        t += 1
    return [f for f in factors if f != 1]


def integer_determinant(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant (exact for Python ints)."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def fraction_determinant(mat: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in mat]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


# ---------------------------------------------------------------------------
# sandpile group and spanning trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JacobianStructure:
    """Invariant factors d_1 | d_2 | ... (each > 1) and the group order."""

    invariant_factors: tuple[int, ...]
    order: int

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "trivial group (order 1)"
        prod = " x ".join(f"Z/{d}" for d in self.invariant_factors)
        return f"{prod} (order {self.order})"


def _reduced_laplacian(g: FiniteGraph) -> list[list[int]]:
    L = g.laplacian()
    return [row[1:] for row in L[1:]]


def jacobian_structure(g: FiniteGraph) -> JacobianStructure:
    """Invariant factors of the reduced Laplacian (first vertex deleted)."""
    red = _reduced_laplacian(g)
    factors = smith_invariant_factors(red)
    order = 1
    for f in factors:
        order *= f
    return JacobianStructure(tuple(factors), order)


def spanning_trees(g: FiniteGraph):
    """Explicit enumeration of spanning trees as sorted edge-index tuples."""
    n = len(g.vertices)
    m = len(g.edges)
    out = []
    ends = [(g.vertex_index(u), g.vertex_index(v)) for _, u, v in g.edges]

    def grow(start: int, chosen: list[int], parent: list[int]):
        if len(chosen) == n - 1:
            out.append(tuple(chosen))
            return
        if start >= m:
            return
        # prune: remaining edges must suffice
        if m - start < n - 1 - len(chosen):
            return
        grow(start + 1, chosen, parent)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        u, v = ends[start]
        ru, rv = find(u), find(v)
        if ru != rv:
            p2 = parent[:]
            p2[ru] = rv
            grow(start + 1, chosen + [start], p2)

    grow(0, [], list(range(n)))
    return out


def spanning_tree_count(g: FiniteGraph) -> int:
    """Number of spanning trees, by determinant AND enumeration.

    The two computations must agree (matrix-tree theorem); disagreement
    raises, since it can only mean an internal bug.
    """
    det = abs(integer_determinant(_reduced_laplacian(g)))
    listed = len(spanning_trees(g))
    if det != listed:
        raise AssertionError(f"matrix-tree mismatch: det {det} vs enumeration {listed}")
    return det


def tree_polynomial(g: MetricGraph) -> Fraction:
    """Sum over spanning trees of the product of lengths NOT in the tree."""
    total = Fraction(0)
    eids = [e for e, _, _ in g.model.edges]
    for tree in spanning_trees(g.model):
        inside = set(tree)
        w = Fraction(1)
        for k, eid in enumerate(eids):
            if k not in inside:
                w *= g.lengths[eid]
        total += w
    return total


# ---------------------------------------------------------------------------
# period lattice and Abel-Jacobi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodLattice:
    """Fundamental cycles of a spanning tree and their length Gram matrix."""

    graph: MetricGraph
    tree: tuple[int, ...]
    cycles: tuple[dict, ...]  # edge id -> +-1 along the cycle
    gram: tuple[tuple[Fraction, ...], ...]

    def determinant(self) -> Fraction:
        return fraction_determinant([list(r) for r in self.gram])


def _tree_path(g: FiniteGraph, tree: tuple[int, ...], a: int, b: int) -> list[tuple[int, int]]:
    """Edges (edge index, direction) along the tree path a -> b."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for k in tree:
        _, u, v = g.edges[k]
        ui, vi = g.vertex_index(u), g.vertex_index(v)
        adj.setdefault(ui, []).append((k, vi))
        adj.setdefault(vi, []).append((k, ui))
    prev: dict[int, tuple[int, int]] = {a: (-1, a)}
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for k, y in adj.get(x, ()):
            if y not in prev:
                prev[y] = (k, x)
                stack.append(y)
    path = []
    x = b
    while x != a:
        k, px = prev[x]
        _, u, v = g.edges[k]
        direction = 1 if g.vertex_index(u) == px else -1  # traversed px -> x
        path.append((k, direction))
        x = px
    path.reverse()
    return path


def period_gram(g: MetricGraph, tree: tuple[int, ...] | None = None) -> PeriodLattice:
    """Gram matrix of the fundamental cycles with the length inner product.

    Cycle for a non-tree edge: the edge forward, then the tree path back.
    det(gram) is independent of the chosen tree.
    """
    model = g.model
    if g.genus() == 0:
        return PeriodLattice(g, tuple(tree or spanning_trees(model)[0]), (), ())
    if tree is None:
        tree = spanning_trees(model)[0]
    tree = tuple(sorted(tree))
    inside = set(tree)
    cycles = []
    for k, (eid, u, v) in enumerate(model.edges):
        if k in inside:
            continue
        chain: dict[str, int] = {eid: 1}
        for j, direction in _tree_path(model, tree, model.vertex_index(v), model.vertex_index(u)):
            jid = model.edges[j][0]
            chain[jid] = chain.get(jid, 0) + direction
        cycles.append({e: c for e, c in chain.items() if c})
    gram = []
    for ci in cycles:
        row = []
        for cj in cycles:
            s = Fraction(0)
            for e, a in ci.items():
                b = cj.get(e)
                if b:
                    s += g.lengths[e] * a * b
            row.append(s)
        gram.append(tuple(row))
    return PeriodLattice(g, tree, tuple(cycles), tuple(gram))


def _point_chain(g: MetricGraph, lattice: PeriodLattice, p: GraphPoint) -> dict[str, Fraction]:
    """A 1-chain from the base vertex (index 0) to p, as edge id -> weight.

    Tree path to the nearest model vertex, plus the partial edge; weights
    are fractions of each edge traversed in its canonical direction.
    """
    model = g.model
    chain: dict[str, Fraction] = {}
    if p.kind == "v":
        target = model.vertex_index(p.where)
        for k, direction in _tree_path(model, lattice.tree, 0, target):
            eid = model.edges[k][0]
            chain[eid] = chain.get(eid, Fraction(0)) + direction
        return chain
    eid = p.where
    _, u, v = model.edges[model.edge_index(eid)]
    chain = _point_chain(g, lattice, g.point(u))
    chain[eid] = chain.get(eid, Fraction(0)) + Fraction(p.offset, g.lengths[eid])
    return chain


@dataclass(frozen=True)
class AbelJacobiImage:
    """Exact coordinates of AJ(D) against the fundamental-cycle basis.

    `pairing` holds the length inner products <chain, cycle_i>; the lattice
    is gram * Z^g.  `in_lattice` decides membership (= D principal for a
    degree-0 divisor); `torus` is the coset representative with basis
    coordinates in [0, 1)^g.
    """

    pairing: tuple[Fraction, ...]
    basis_coords: tuple[Fraction, ...]
    lattice: PeriodLattice

    @property
    def in_lattice(self) -> bool:
        return all(c.denominator == 1 for c in self.basis_coords)

    @property
    def torus(self) -> tuple[Fraction, ...]:
        return tuple(c - (c.numerator // c.denominator) for c in self.basis_coords)


def abel_jacobi(g: MetricGraph, base: GraphPoint | str, d: Divisor,
                lattice: PeriodLattice | None = None) -> AbelJacobiImage:
    """Tropical Abel-Jacobi image of a degree-0 divisor.

    Pairs a 1-chain with boundary D against the fundamental cycles under
    the length inner product; the kernel is exactly the principal
    divisors.  The base point only fixes the chains; for degree 0 the
    image is base-independent.
    """
    if d.degree() != 0:
        raise GraphError("abel_jacobi needs a degree-0 divisor")
    if g.genus() == 0:
        lat = lattice or period_gram(g)
        return AbelJacobiImage((), (), lat)
    lat = lattice or period_gram(g)
    if isinstance(base, str):
        base = g.point(base)
    chain: dict[str, Fraction] = {}
    for p, n in d.items():
        for eid, w in _point_chain(g, lat, p).items():
            chain[eid] = chain.get(eid, Fraction(0)) + n * w
    # base point cancels out for degree 0, but include it for clarity
    pairing = []
    for cyc in lat.cycles:
        s = Fraction(0)
        for eid, a in cyc.items():
            w = chain.get(eid)
            if w:
                s += g.lengths[eid] * a * w
        pairing.append(s)
    # solve gram * y = pairing exactly
    n = len(lat.cycles)
    A = [list(row) + [pairing[i]] for i, row in enumerate(lat.gram)]
    for k in range(n):
        piv = next(i for i in range(k, n) if A[i][k] != 0)
        A[k], A[piv] = A[piv], A[k]
        inv = 1 / A[k][k]
        A[k] = [x * inv for x in A[k]]
        for i in range(n):
            if i != k and A[i][k]:
                f = A[i][k]
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    coords = tuple(A[i][n] for i in range(n))
    return AbelJacobiImage(tuple(pairing), coords, lat)


# ---------------------------------------------------------------------------
# Zhang measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZhangMeasure:
    """Probability measure: constant density per edge plus vertex atoms.

    edge_mass[e] is the total mass of edge e (density edge_mass/length);
    atoms[v] = weight(v)/g#.  Total mass is exactly 1.
    """

    graph: MetricGraph
    edge_mass: dict[str, Fraction]
    atoms: dict[str, Fraction]

    def total_mass(self) -> Fraction:
        return sum(self.edge_mass.values(), Fraction(0)) + sum(self.atoms.values(), Fraction(0))

    def density(self, eid: str) -> Fraction:
        return self.edge_mass[eid] / self.graph.lengths[eid]


def zhang_measure(g: MetricGraph) -> ZhangMeasure:
    """The canonical measure: spanning-tree average of uniform non-tree-edge
    measures, weighted by complementary length products, plus weight atoms,
    normalized by the weighted genus."""
    gw = g.weighted_genus()
    if gw < 1:
        raise GraphError("Zhang measure needs weighted genus >= 1")
    eids = [e for e, _, _ in g.model.edges]
    mass = {e: Fraction(0) for e in eids}
    wG = Fraction(0)
    for tree in spanning_trees(g.model):
        inside = set(tree)
        w = Fraction(1)
        for k, eid in enumerate(eids):
            if k not in inside:
                w *= g.lengths[eid]
        wG += w
        for k, eid in enumerate(eids):
            if k not in inside:
                mass[eid] += w
    if wG:
        for e in eids:
            mass[e] = mass[e] / wG / gw
    atoms = {v: Fraction(wt, gw) for v, wt in sorted(g.weights.items())}
    return ZhangMeasure(g, mass, atoms)
