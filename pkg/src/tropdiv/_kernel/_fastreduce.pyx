# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel.

Same schedule as `pyreduce.py`, on int64 buffers.  Chip values stay small
for desk-scale inputs (the borrowing phase is pointwise minimal); the
driver falls back to the pure-Python kernel with unbounded ints if the
guard ever trips.
"""

from libc.stdlib cimport free, malloc


class KernelOverflow(RuntimeError):
    pass


cdef long long _GUARD = <long long> 1 << 56


def dhar_mask(long long[::1] indptr, long long[::1] nbrs,
              long long[::1] chips, long long q, long long[::1] burnt):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef long long *cnt = <long long *> malloc(n * sizeof(long long))
    cdef long long *stack = <long long *> malloc(n * sizeof(long long))
    if cnt == NULL or stack == NULL:
        free(cnt); free(stack)
        raise MemoryError()
    cdef Py_ssize_t top = 0, i, k
    cdef long long x, y, unburnt = n - 1
    for i in range(n):
        cnt[i] = 0
        burnt[i] = 0
    burnt[q] = 1
    stack[top] = q
    top += 1
    while top > 0:
        top -= 1
        x = stack[top]
        for k in range(indptr[x], indptr[x + 1]):
            y = nbrs[k]
            if not burnt[y]:
                cnt[y] += 1
                if cnt[y] > chips[y]:
                    burnt[y] = 1
                    unburnt -= 1
                    stack[top] = y
                    top += 1
    free(cnt)
    free(stack)
    return unburnt


def reduce_chips(long long[::1] indptr, long long[::1] nbrs,
                 long long[::1] chips, long long[::1] h, long long q):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, k, v, top
    cdef long long w, val, times, x, y, unburnt
    cdef long long rounds = 0

    cdef long long *queue = <long long *> malloc(n * sizeof(long long))
    cdef long long *queued = <long long *> malloc(n * sizeof(long long))
    cdef long long *cnt = <long long *> malloc(n * sizeof(long long))
    cdef long long *stack = <long long *> malloc(n * sizeof(long long))
    cdef long long *burnt = <long long *> malloc(n * sizeof(long long))
    if queue == NULL or queued == NULL or cnt == NULL or stack == NULL or burnt == NULL:
        free(queue); free(queued); free(cnt); free(stack); free(burnt)
        raise MemoryError()

    try:
        # phase 1: greedy batched borrowing (dedup queue; the final state is
        # the unique pointwise-minimal script, independent of order)
        top = 0
        for v in range(n):
            queued[v] = 0
        for w in range(n):
            if w != q and chips[w] < 0:
                queue[top] = w
                queued[w] = 1
                top += 1
        while top > 0:
            top -= 1
            w = queue[top]
            queued[w] = 0
            if chips[w] >= 0:
                continue
            val = indptr[w + 1] - indptr[w]
            times = (-chips[w] + val - 1) // val
            if times > _GUARD or h[w] > _GUARD:
                raise KernelOverflow()
            h[w] += times
            chips[w] += times * val
            for k in range(indptr[w], indptr[w + 1]):
                y = nbrs[k]
                chips[y] -= times
                if y != q and chips[y] < 0 and not queued[y]:
                    queue[top] = y
                    queued[y] = 1
                    top += 1

        # phase 2: iterated Dhar, firing the unburnt set once per round
        while True:
            for v in range(n):
                cnt[v] = 0
                burnt[v] = 0
            burnt[q] = 1
            stack[0] = q
            top = 1
            unburnt = n - 1
            while top > 0:
                top -= 1
                x = stack[top]
                for k in range(indptr[x], indptr[x + 1]):
                    y = nbrs[k]
                    if not burnt[y]:
                        cnt[y] += 1
                        if cnt[y] > chips[y]:
                            burnt[y] = 1
                            unburnt -= 1
                            stack[top] = y
                            top += 1
            if unburnt == 0:
                return rounds
            rounds += 1
            if rounds > _GUARD:
                raise KernelOverflow()
            for v in range(n):
                if not burnt[v]:
                    for k in range(indptr[v], indptr[v + 1]):
                        y = nbrs[k]
                        if burnt[y]:
                            chips[v] -= 1
                            chips[y] += 1
                    h[v] -= 1
    finally:
        free(queue)
        free(queued)
        free(cnt)
        free(stack)
        free(burnt)
