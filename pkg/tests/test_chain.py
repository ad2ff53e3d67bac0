import itertools
import random
from fractions import Fraction

import pytest

from tropdiv import GraphError, canonical_divisor, divisor, is_equivalent, principal_divisor, rank_metric
from tropdiv.chain import (
    DOWN,
    LINGER,
    BrillNoetherCell,
    ChainOfLoops,
    LingeringLatticePath,
    adjoint_tableau,
    classify_divisor,
    count_cells,
    enumerate_cells,
    is_generic,
    path_to_tableau,
    rank_consistency,
    tableau_to_path,
    vertex_avoiding_reps,
)


def _fillings(values, rows, cols):
    total = 0

    def go(idx, heights):
        nonlocal total
        if idx == len(values):
            total += 1
            return
        for j in range(cols):
            h = heights[j]
            if h < rows and (j == 0 or heights[j - 1] > h):
                heights[j] += 1
                go(idx + 1, heights)
                heights[j] -= 1

    go(0, [0] * cols)
    return total


def syt_count(g, cols, rows):
    """Column-height DFS oracle (values placed in increasing order)."""
    if rows == 0 or cols == 0:
        return 1
    total = 0
    for values in itertools.combinations(range(1, g + 1), rows * cols):
        total += _fillings(values, rows, cols)
    return total


def test_default_chains_are_generic():
    for g in range(1, 8):
        assert is_generic(ChainOfLoops(g))


def test_genericity_examples():
    c = ChainOfLoops(2, m=[1, 1])  # ratio 1/1, sum 2 <= 2g-2 = 2
    assert not is_generic(c)
    c3 = ChainOfLoops(3, m=[Fraction(3, 2)] * 3)  # ratio 2/3, 5 > 4
    assert is_generic(c3)
    cbig = ChainOfLoops(3, m=[Fraction(7, 100)] * 3)  # 100/7, sum 107 > 4
    assert is_generic(cbig)


def test_chain_graph_genus():
    for g in (1, 3, 5):
        assert ChainOfLoops(g).graph.genus() == g


def test_count_spot_values():
    assert count_cells(ChainOfLoops(4), 1, 3) == 2
    assert count_cells(ChainOfLoops(6), 1, 4) == 5
    assert count_cells(ChainOfLoops(3), 1, 2) == 0  # rho = -1
    assert count_cells(ChainOfLoops(2), 1, 2) == 1  # the canonical class


def test_counts_match_syt_oracle():
    for g in range(1, 7):
        c = ChainOfLoops(g)
        for r in range(0, 4):
            for d in range(0, g + r + 1):
                n = g - d + r
                rho = g - (r + 1) * n
                expected = 0 if rho < 0 else syt_count(g, r + 1, n)
                assert count_cells(c, r, d) == expected, (g, r, d)


def test_path_tableau_roundtrip_exhaustive():
    c = ChainOfLoops(4)
    for (r, d) in [(1, 3), (0, 2), (2, 4), (1, 4)]:
        for cell in enumerate_cells(c, r, d):
            path = tableau_to_path(c.g, r, cell.tableau)
            assert path.steps == cell.steps
            assert path_to_tableau(path) == cell.tableau


def test_tableau_validation_errors():
    with pytest.raises(GraphError):
        tableau_to_path(4, 1, ((1, 1),))  # repeated entry
    with pytest.raises(GraphError):
        tableau_to_path(4, 1, ((2, 1),))  # row not increasing
    with pytest.raises(GraphError):
        tableau_to_path(4, 1, ((1, 9),))  # out of range
    with pytest.raises(GraphError):
        LingeringLatticePath(1, (DOWN,)).validate()  # leaves the chamber


def test_genus2_unique_cell_is_canonical():
    # the single W^1_2 cell of a genus-2 chain must be the canonical class
    c = ChainOfLoops(2)
    (cell,) = enumerate_cells(c, 1, 2)
    assert cell.dimension == 0
    sample = cell.sample()
    K = canonical_divisor(c.graph)
    assert is_equivalent(sample, K)
    assert rank_consistency(c, cell)


def test_rank_consistency_small():
    c2 = ChainOfLoops(2)
    for cell in enumerate_cells(c2, 0, 1):
        assert rank_consistency(c2, cell)
    c4 = ChainOfLoops(4)
    cells = enumerate_cells(c4, 1, 3)
    assert len(cells) == 2
    for cell in cells:
        assert rank_consistency(c4, cell)
    c3 = ChainOfLoops(3)
    for cell in enumerate_cells(c3, 1, 3):  # rho = 1, free coordinates
        assert rank_consistency(c3, cell)
        assert rank_consistency(c3, cell, cell.sample(index=1))


def test_classify_roundtrip():
    c = ChainOfLoops(4)
    for (r, d) in [(1, 3), (1, 4)]:
        for cell in enumerate_cells(c, r, d):
            assert classify_divisor(c, cell.sample()) == cell.tableau


def test_adjoint_transpose_rho_zero():
    # K - D lands in the transpose-tableau cell (rho = 0, so cells are points)
    for g, r, d in [(2, 1, 2), (4, 1, 3), (4, 0, 0), (4, 3, 6)]:
        c = ChainOfLoops(g)
        K = canonical_divisor(c.graph)
        r2 = r - d + g - 1
        d2 = 2 * g - 2 - d
        cells2 = {cell2.tableau: cell2 for cell2 in enumerate_cells(c, r2, d2)}
        for cell in enumerate_cells(c, r, d):
            tt = adjoint_tableau(c, cell)
            assert tt in cells2, "transpose must be a legal cell"
            assert is_equivalent(K - cell.sample(), cells2[tt].sample())


def test_vertex_avoiding_reps():
    c = ChainOfLoops(4)
    cells = enumerate_cells(c, 1, 3)
    for cell in cells:
        D = cell.sample()
        reps, funcs = vertex_avoiding_reps(c, D, 1)
        assert len(reps) == 2
        D0, D1 = reps
        assert D0 != D1
        assert D0.is_effective() and D1.is_effective()
        assert D0.coeff("v1") >= 1
        assert D1.coeff("w4") >= 1
        assert is_equivalent(D0, D) and is_equivalent(D1, D)
        assert principal_divisor(funcs[1]) == D1 - D0


def test_vertex_avoiding_r0():
    c = ChainOfLoops(3)
    cells = enumerate_cells(c, 0, 1)
    cell = cells[0]
    D = cell.sample()
    reps, funcs = vertex_avoiding_reps(c, D, 0)
    assert len(reps) == 1
    from tropdiv import reduce_divisor

    red, _ = reduce_divisor(c.graph, D, "v1")
    assert reps[0] == red
