"""Pure-Python reduction kernel.

Reference implementation of Dhar's burning algorithm and iterated
q-reduction on a finite multigraph given as CSR adjacency arrays.  The
compiled kernel in `_fastreduce.pyx` implements exactly the same schedule;
outputs of the two must be bit-identical.

`reduce_chips` mutates `chips` into the q-reduced representative and
accumulates the firing function h into `h` (result = input + div(h); the
caller normalizes h(q) = 0).  Phase 1 clears debt off q by greedy batched
borrowing (unfiring an in-debt vertex), which by the least-action
principle is pointwise minimal among nonnegative borrowing scripts and
therefore terminates; phase 2 iterates Dhar's algorithm, firing the whole
unburnt set once per round.
"""

from __future__ import annotations


def dhar_mask(indptr, nbrs, chips, q, burnt) -> int:
    """Burn from q; fills `burnt` (1 = burnt) and returns #unburnt.

    Precondition: chips[w] >= 0 for all w != q.  A vertex w burns as soon
    as the number of burnt edge-ends at w exceeds chips[w].
    """
    n = len(indptr) - 1
    cnt = [0] * n
    for i in range(n):
        burnt[i] = 0
    burnt[q] = 1
    stack = [q]
    unburnt = n - 1
    while stack:
        x = stack.pop()
        for k in range(indptr[x], indptr[x + 1]):
            y = nbrs[k]
            if not burnt[y]:
                cnt[y] += 1
                if cnt[y] > chips[y]:
                    burnt[y] = 1
                    unburnt -= 1
                    stack.append(y)
    return unburnt


def _fire_set(indptr, nbrs, inside, chips):
    """Fire every vertex with inside[v] != 0 once."""
    n = len(indptr) - 1
    for v in range(n):
        if inside[v]:
            for k in range(indptr[v], indptr[v + 1]):
                y = nbrs[k]
                if not inside[y]:
                    chips[v] -= 1
                    chips[y] += 1


def make_effective(indptr, nbrs, chips, h, q):
    """Greedy batched borrowing until chips[w] >= 0 for all w != q.

    Order does not matter: by the least-action principle the final state
    and script are the unique pointwise-minimal ones.
    """
    n = len(indptr) - 1
    queued = [0] * n
    queue = []
    for w in range(n):
        if w != q and chips[w] < 0:
            queue.append(w)
            queued[w] = 1
    while queue:
        w = queue.pop()
        queued[w] = 0
        if chips[w] >= 0:
            continue
        val = indptr[w + 1] - indptr[w]
        times = (-chips[w] + val - 1) // val
        h[w] += times
        chips[w] += times * val
        for k in range(indptr[w], indptr[w + 1]):
            y = nbrs[k]
            chips[y] -= times
            if y != q and chips[y] < 0 and not queued[y]:
                queue.append(y)
                queued[y] = 1


def reduce_chips(indptr, nbrs, chips, h, q) -> int:
    """q-reduce `chips` in place; returns the number of Dhar rounds."""
    n = len(indptr) - 1
    make_effective(indptr, nbrs, chips, h, q)
    burnt = [0] * n
    rounds = 0
    while True:
        unburnt = dhar_mask(indptr, nbrs, chips, q, burnt)
        if unburnt == 0:
            return rounds
        rounds += 1
        for v in range(n):
            burnt[v] = 0 if burnt[v] else 1  # reuse as "inside = unburnt"
        _fire_set(indptr, nbrs, burnt, chips)
        for v in range(n):
            if burnt[v]:
                h[v] -= 1
