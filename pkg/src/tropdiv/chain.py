"""Generic chains of loops and their Brill-Noether classification.

A chain of g loops: loop k has a top edge of length ell_k and a bottom
edge of length m_k between vertices v_k and w_k; bridges join w_k to
v_{k+1}.  When every ratio ell_k/m_k avoids small rational values the
chain is generic, and the classes of given degree d and rank r decompose
into cells indexed by rectangular standard Young tableaux (equivalently
lingering lattice paths).  Chip positions are counterclockwise distances
from v_k, bottom edge first, modulo ell_k + m_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .divisors import Divisor, canonical_divisor
from .functions import PLFunction
from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph, _as_fraction
from .rank import rank_metric
from .reduction import is_everywhere_reduced, reduce_metric


_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class ChainOfLoops:
    """Chain of g loops with explicit rational lengths.

    Default lengths are generic by construction: ell_k = 1 and
    m_k = p_k / (2g * p_{k+1}) over consecutive primes, bridges 1.
    """

    def __init__(self, g: int, ell=None, m=None, bridges=None):
        if g < 1:
            raise GraphError("need at least one loop")
        self.g = g
        if ell is None:
            ell = [Fraction(1)] * g
        if m is None:
            m = [Fraction(_PRIMES[k], 2 * g * _PRIMES[k + 1]) for k in range(g)]
        if bridges is None:
            bridges = [Fraction(1)] * (g - 1)
        self.ell = [_as_fraction(x) for x in ell]
        self.m = [_as_fraction(x) for x in m]
        self.bridges = [_as_fraction(x) for x in bridges]
        if len(self.ell) != g or len(self.m) != g or len(self.bridges) != g - 1:
            raise GraphError("need g top lengths, g bottom lengths, g-1 bridges")

        verts = []
        edges = []
        lengths = {}
        for k in range(1, g + 1):
            verts += [f"v{k}", f"w{k}"]
        for k in range(1, g + 1):
            top, bot = f"top{k}", f"bot{k}"
            edges.append((top, f"v{k}", f"w{k}"))
            edges.append((bot, f"v{k}", f"w{k}"))
            lengths[top] = self.ell[k - 1]
            lengths[bot] = self.m[k - 1]
            if k < g:
                br = f"br{k}"
                edges.append((br, f"w{k}", f"v{k + 1}"))
                lengths[br] = self.bridges[k - 1]
        self.graph = MetricGraph(FiniteGraph(verts, edges), lengths)

    def loop_length(self, k: int) -> Fraction:
        return self.ell[k - 1] + self.m[k - 1]

    def point_at(self, k: int, ccw: Fraction) -> GraphPoint:
        """Point on loop k at counterclockwise distance from v_k (bottom
        edge first); the distance is taken modulo the loop length."""
        L = self.loop_length(k)
        t = _as_fraction(ccw) % L
        mk = self.m[k - 1]
        if t <= mk:
            return self.graph.point_on(f"bot{k}", t)
        return self.graph.point_on(f"top{k}", L - t)

    def __repr__(self) -> str:
        return f"ChainOfLoops(genus {self.g})"


def is_generic(c: ChainOfLoops) -> bool:
    """No loop ratio ell/m equals p/q with p, q >= 1 and p + q <= 2g - 2.

    In lowest terms a ratio a/b fails exactly when a + b <= 2g - 2.
    """
    bound = 2 * c.g - 2
    for ell, m in zip(c.ell, c.m):
        ratio = ell / m
        if ratio.numerator + ratio.denominator <= bound:
            return False
    return True


# ---------------------------------------------------------------------------
# lingering lattice paths and tableaux
# ---------------------------------------------------------------------------

DOWN = "down"
LINGER = "linger"


def _start_vector(r: int) -> tuple[int, ...]:
    return tuple(range(r, 0, -1))


def _in_chamber(p: tuple[int, ...]) -> bool:
    return all(p[i] > p[i + 1] for i in range(len(p) - 1)) and (not p or p[-1] > 0)


def _apply(p: tuple[int, ...], step) -> tuple[int, ...]:
    if step == DOWN:
        return tuple(x - 1 for x in p)
    if step == LINGER:
        return p
    j = step[1]
    return tuple(x + 1 if i == j else x for i, x in enumerate(p))


@dataclass(frozen=True)
class LingeringLatticePath:
    """Steps over loops 1..g; vectors start at (r, r-1, ..., 1) and stay in
    the open chamber y_0 > y_1 > ... > y_{r-1} > 0."""

    r: int
    steps: tuple

    def vectors(self) -> list[tuple[int, ...]]:
        out = [_start_vector(self.r)]
        for s in self.steps:
            out.append(_apply(out[-1], s))
        return out

    def validate(self):
        p = _start_vector(self.r)
        if not _in_chamber(p) and self.r > 0:
            raise GraphError("start vector outside the chamber")
        for s in self.steps:
            if s not in (DOWN, LINGER) and not (
                isinstance(s, tuple) and s[0] == "e" and 0 <= s[1] < self.r
            ):
                raise GraphError(f"illegal step {s!r}")
            p = _apply(p, s)
            if not _in_chamber(p):
                raise GraphError("path leaves the open chamber")


def path_to_tableau(path: LingeringLatticePath) -> tuple[tuple[int, ...], ...]:
    """Rows of the rectangular tableau: e_j steps fill column j, down steps
    the last column, lingering steps are the absent integers."""
    path.validate()
    r = path.r
    cols: list[list[int]] = [[] for _ in range(r + 1)]
    for k, s in enumerate(path.steps, start=1):
        if s == DOWN:
            cols[r].append(k)
        elif s != LINGER:
            cols[s[1]].append(k)
    n = len(cols[r])
    if any(len(c) != n for c in cols):
        raise GraphError("steps do not fill a rectangle")
    return tuple(tuple(col[i] for col in cols) for i in range(n))


def tableau_to_path(g: int, r: int, rows: tuple[tuple[int, ...], ...]) -> LingeringLatticePath:
    """Inverse of `path_to_tableau`; validates the tableau."""
    n = len(rows)
    seen = set()
    for row in rows:
        if len(row) != r + 1:
            raise GraphError("tableau rows must have r+1 entries")
        for x in row:
            if not (1 <= x <= g) or x in seen:
                raise GraphError("tableau entries must be distinct integers in 1..g")
            seen.add(x)
    for i in range(n):
        for j in range(r + 1):
            if i > 0 and rows[i][j] <= rows[i - 1][j]:
                raise GraphError("tableau columns must increase")
            if j > 0 and rows[i][j] <= rows[i][j - 1]:
                raise GraphError("tableau rows must increase")
    where = {}
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            where[x] = j
    steps = []
    for k in range(1, g + 1):
        if k not in where:
            steps.append(LINGER)
        elif where[k] == r:
            steps.append(DOWN)
        else:
            steps.append(("e", where[k]))
    path = LingeringLatticePath(r, tuple(steps))
    path.validate()
    return path


@dataclass(frozen=True)
class BrillNoetherCell:
    """One cell of W^r_d on a generic chain: fixed chip positions for loops
    whose step moves, a free coordinate for each lingering loop, no chip on
    down-step loops, plus r chips at v_1."""

    chain: ChainOfLoops
    r: int
    d: int
    tableau: tuple[tuple[int, ...], ...]
    steps: tuple
    positions: tuple  # per loop: ("fixed", Fraction ccw) | ("free",) | ("none",)

    @property
    def dimension(self) -> int:
        return sum(1 for s in self.positions if s[0] == "free")

    def free_loops(self) -> list[int]:
        return [k + 1 for k, s in enumerate(self.positions) if s[0] == "free"]

    def special_positions(self, k: int) -> set[Fraction]:
        """ccw positions on loop k that a generic free chip must avoid."""
        c = self.chain
        L = c.loop_length(k)
        vecs = LingeringLatticePath(self.r, self.steps).vectors()
        p = vecs[k - 1]
        out = {Fraction(0), c.m[k - 1] % L}
        for j in range(self.r):
            out.add((p[j] + 1) * c.m[k - 1] % L)
        return out

    def sample(self, index: int = 0) -> Divisor:
        """A concrete divisor in the cell; free chips at generic rational
        positions (distinct choices for distinct `index`)."""
        c = self.chain
        chips: dict[GraphPoint, int] = {}
        if self.r:
            chips[c.graph.point("v1")] = self.r
        shift = 0
        for k, state in enumerate(self.positions, start=1):
            if state[0] == "none":
                continue
            if state[0] == "fixed":
                t = state[1]
            else:
                t = self._generic_position(k, index + shift)
                shift += 1
            p = c.point_at(k, t)
            chips[p] = chips.get(p, 0) + 1
        return Divisor(c.graph, chips)

    def _generic_position(self, k: int, index: int) -> Fraction:
        c = self.chain
        L = c.loop_length(k)
        avoid = self.special_positions(k)
        found = 0
        for denom in itertools.count(7, 2):
            t = L * Fraction(denom - 2, denom)
            if t not in avoid:
                if found == index:
                    return t
                found += 1
        raise AssertionError("unreachable")


def _expected_counts(g: int, r: int, d: int) -> tuple[int, int]:
    n = g - d + r
    if n < 0:
        raise GraphError(
            "degree exceeds g + r: every class has rank >= r there and the cell "
            "decomposition degenerates"
        )
    rho = g - (r + 1) * n
    return n, rho


def enumerate_cells(c: ChainOfLoops, r: int, d: int) -> list[BrillNoetherCell]:
    """All cells of W^r_d on a generic chain; empty when rho < 0.

    Cells are found by enumerating lingering lattice paths; the count is
    cross-checked against the closed-form tableau count by `count_cells`.
    """
    if r < 0 or d < 0:
        raise GraphError("need r >= 0 and d >= 0")
    g = c.g
    if not is_generic(c):
        raise GraphError("chain is not generic; the classification needs generic lengths")
    n, rho = _expected_counts(g, r, d)
    if rho < 0:
        return []
    out = []

    def walk(k: int, p: tuple[int, ...], steps: list, used_e: list[int], used_down: int, lingers: int):
        if k > g:
            if used_down == n and all(u == n for u in used_e):
                path = LingeringLatticePath(r, tuple(steps))
                rows = path_to_tableau(path)
                positions = []
                vecs = path.vectors()
                for i, s in enumerate(steps):
                    if s == DOWN:
                        positions.append(("none",))
                    elif s == LINGER:
                        positions.append(("free",))
                    else:
                        j = s[1]
                        L = c.loop_length(i + 1)
                        t = (vecs[i][j] + 1) * c.m[i] % L
                        positions.append(("fixed", t))
                out.append(
                    BrillNoetherCell(c, r, d, rows, tuple(steps), tuple(positions))
                )
            return
        left = g - k + 1
        need = (n - used_down) + sum(n - u for u in used_e)
        if need > left:
            return
        # down step
        if used_down < n:
            p2 = _apply(p, DOWN)
            if _in_chamber(p2):
                steps.append(DOWN)
                walk(k + 1, p2, steps, used_e, used_down + 1, lingers)
                steps.pop()
        # e_j steps
        for j in range(r):
            if used_e[j] < n:
                p2 = _apply(p, ("e", j))
                if _in_chamber(p2):
                    steps.append(("e", j))
                    used_e[j] += 1
                    walk(k + 1, p2, steps, used_e, used_down, lingers)
                    used_e[j] -= 1
                    steps.pop()
        # lingering
        if lingers < rho:
            steps.append(LINGER)
            walk(k + 1, p, steps, used_e, used_down, lingers + 1)
            steps.pop()

    walk(1, _start_vector(r), [], [0] * r, 0, 0)
    return out


def count_cells(c: ChainOfLoops, r: int, d: int) -> int:
    """Number of cells, by the closed formula AND enumeration (must agree)."""
    g = c.g
    n, rho = _expected_counts(g, r, d)
    if rho < 0:
        formula = 0
    else:
        val = Fraction(comb(g, rho) * factorial(g - rho))
        for i in range(r + 1):
            val *= Fraction(factorial(i), factorial(n + i))
        assert val.denominator == 1
        formula = int(val)
    listed = len(enumerate_cells(c, r, d))
    if formula != listed:
        raise AssertionError(f"cell count mismatch: formula {formula} vs enumeration {listed}")
    return formula


def rank_consistency(c: ChainOfLoops, cell: BrillNoetherCell, sample: Divisor | None = None) -> bool:
    """Cross-module validation: a sampled cell divisor has rank exactly r."""
    d = sample if sample is not None else cell.sample()
    return rank_metric(c.graph, d).rank == cell.r


def classify_divisor(c: ChainOfLoops, d: Divisor) -> tuple[tuple[int, ...], ...]:
    """The tableau of the cell containing [d], via the step case analysis.

    Walks the loops with the v_1-reduced representative: chips at v_1 give
    the start vector, each loop contributes a down step (no chip), an e_j
    step (chip at the matching special position) or a lingering step.
    """
    g = c.g
    red, _ = reduce_metric(c.graph, d, "v1", witness=False)
    d1 = red.coeff("v1")
    chips: dict[int, Fraction] = {}
    for p, nn in red.items():
        if p.kind == "v":
            if p.where == "v1":
                continue
            k = int(p.where[1:])
            if p.where.startswith("v"):
                if nn != 1:
                    raise GraphError("reduced divisor is not in general position")
                chips[k] = Fraction(0)
            else:
                raise GraphError("reduced divisor touches a w vertex; not vertex-avoiding")
        else:
            eid = p.where
            k = int(eid[3:])
            if nn != 1:
                raise GraphError("reduced divisor is not in general position")
            if eid.startswith("bot"):
                chips[k] = p.offset
            elif eid.startswith("top"):
                chips[k] = c.loop_length(k) - p.offset
            else:
                raise GraphError("reduced divisor has a chip on a bridge")
    r = d1
    p = _start_vector(r)
    steps = []
    for k in range(1, g + 1):
        if k not in chips:
            step = DOWN
        else:
            t = chips[k]
            step = LINGER
            for j in range(r):
                if (p[j] + 1) * c.m[k - 1] % c.loop_length(k) == t:
                    cand = _apply(p, ("e", j))
                    if _in_chamber(cand):
                        step = ("e", j)
                    break
        p2 = _apply(p, step)
        if not _in_chamber(p2):
            raise GraphError("divisor does not classify: path leaves the chamber")
        steps.append(step)
        p = p2
    return path_to_tableau(LingeringLatticePath(r, tuple(steps)))


def vertex_avoiding_reps(c: ChainOfLoops, d: Divisor, r: int):
    """The representatives D_i ~ d with D_i - i*w_g - (r-i)*v_1 >= 0.

    Computed by reduction; uniqueness of each D_i is certified by checking
    that the residual effective part is reduced everywhere (the unique
    effective divisor in its class).  Returns (reps, witnesses) with
    div(witnesses[i]) = D_i - D_0.
    """
    g = c.graph
    v1 = Divisor(g, {"v1": 1})
    wg = Divisor(g, {f"w{c.g}": 1})
    reps = []
    funcs = []
    for i in range(r + 1):
        res = d - i * wg - (r - i) * v1
        F, h = reduce_metric(g, res, "v1")
        if not F.is_effective():
            raise GraphError(f"no effective representative for D - {i}w_g - {r - i}v_1")
        if not is_everywhere_reduced(g, F):
            raise GraphError(
                "residual class has several effective representatives; "
                "the sampled divisor is not vertex-avoiding"
            )
        reps.append(F + i * wg + (r - i) * v1)
        funcs.append(h)
    witnesses = [funcs[i] - funcs[0] for i in range(r + 1)]
    return reps, witnesses


def adjoint_tableau(c: ChainOfLoops, cell: BrillNoetherCell) -> tuple[tuple[int, ...], ...]:
    """Transpose of the cell's tableau (the expected tableau of K - D)."""
    rows = cell.tableau
    if not rows:
        return ()
    n, w = len(rows), len(rows[0])
    return tuple(tuple(rows[i][j] for i in range(n)) for j in range(w))
