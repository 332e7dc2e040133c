# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled backtracking kernel; same contract as ``fliplab._search``.

Limited to at most 64 source and 64 target vertices (one machine word per
adjacency row).
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

MAX_VERTICES = 64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _lowbit_index(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef class _Plan:
    cdef int n_src, n_tgt
    cdef uint64_t* tgt
    cdef int* order
    cdef int* fixed
    cdef int* back_start
    cdef int* back

    def __cinit__(self, src_adj, tgt_adj, order, fixed):
        cdef int k, v, w, m
        self.n_src = len(src_adj)
        self.n_tgt = len(tgt_adj)
        self.tgt = <uint64_t*>malloc(max(self.n_tgt, 1) * sizeof(uint64_t))
        self.order = <int*>malloc(max(self.n_src, 1) * sizeof(int))
        self.fixed = <int*>malloc(max(self.n_src, 1) * sizeof(int))
        self.back_start = <int*>malloc((self.n_src + 1) * sizeof(int))
        self.back = <int*>malloc(max(self.n_src * self.n_src, 1) * sizeof(int))
        for k in range(self.n_tgt):
            self.tgt[k] = <uint64_t>tgt_adj[k]
        pos = {}
        for k in range(self.n_src):
            self.order[k] = order[k]
            self.fixed[k] = fixed[k]
            pos[order[k]] = k
        m = 0
        for k in range(self.n_src):
            self.back_start[k] = m
            v = order[k]
            for w in range(self.n_src):
                if (src_adj[v] >> w) & 1 and pos[w] < k:
                    self.back[m] = w
                    m += 1
        self.back_start[self.n_src] = m

    def __dealloc__(self):
        free(self.tgt)
        free(self.order)
        free(self.fixed)
        free(self.back_start)
        free(self.back)


def search(src_adj, tgt_adj, order, fixed, long long limit=-1):
    cdef int n_src = len(src_adj)
    cdef int n_tgt = len(tgt_adj)
    if n_src == 0:
        return [()]
    if n_src > n_tgt:
        return []
    if n_src > MAX_VERTICES or n_tgt > MAX_VERTICES:
        raise ValueError("compiled kernel handles at most 64 vertices")
    cdef _Plan plan = _Plan(src_adj, tgt_adj, order, fixed)
    cdef uint64_t full = (<uint64_t>0 - 1) if n_tgt == 64 else ((<uint64_t>1 << n_tgt) - 1)
    cdef uint64_t* cand = <uint64_t*>malloc(n_src * sizeof(uint64_t))
    cdef uint64_t* used = <uint64_t*>malloc((n_src + 1) * sizeof(uint64_t))
    cdef int* assign = <int*>malloc(n_src * sizeof(int))
    cdef int k, v, i, t
    cdef uint64_t c, low
    out = []
    try:
        for i in range(n_src):
            assign[i] = -1
        used[0] = 0
        k = 0
        # candidate set for level 0
        v = plan.order[0]
        c = full
        if plan.fixed[v] >= 0:
            c &= (<uint64_t>1 << plan.fixed[v])
        cand[0] = c
        while k >= 0:
            if cand[k] == 0:
                assign[plan.order[k]] = -1
                k -= 1
                continue
            low = cand[k] & (~cand[k] + 1)
            cand[k] ^= low
            v = plan.order[k]
            assign[v] = _lowbit_index(low)
            used[k + 1] = used[k] | low
            if k + 1 == n_src:
                out.append(tuple([assign[i] for i in range(n_src)]))
                if limit >= 0 and len(out) >= limit:
                    break
                continue
            k += 1
            v = plan.order[k]
            c = full & ~used[k]
            for i in range(plan.back_start[k], plan.back_start[k + 1]):
                c &= plan.tgt[assign[plan.back[i]]]
            t = plan.fixed[v]
            if t >= 0:
                c &= (<uint64_t>1 << t)
            cand[k] = c
    finally:
        free(cand)
        free(used)
        free(assign)
    return out


def count(src_adj, tgt_adj, order, fixed):
    """Number of solutions, without materializing them."""
    cdef int n_src = len(src_adj)
    cdef int n_tgt = len(tgt_adj)
    if n_src == 0:
        return 1
    if n_src > n_tgt:
        return 0
    if n_src > MAX_VERTICES or n_tgt > MAX_VERTICES:
        raise ValueError("compiled kernel handles at most 64 vertices")
    cdef _Plan plan = _Plan(src_adj, tgt_adj, order, fixed)
    cdef uint64_t full = (<uint64_t>0 - 1) if n_tgt == 64 else ((<uint64_t>1 << n_tgt) - 1)
    cdef uint64_t* cand = <uint64_t*>malloc(n_src * sizeof(uint64_t))
    cdef uint64_t* used = <uint64_t*>malloc((n_src + 1) * sizeof(uint64_t))
    cdef int* assign = <int*>malloc(n_src * sizeof(int))
    cdef int k, v, i, t
    cdef uint64_t c, low
    cdef long long total = 0
    with nogil:
        used[0] = 0
        k = 0
        v = plan.order[0]
        c = full
        if plan.fixed[v] >= 0:
            c &= (<uint64_t>1 << plan.fixed[v])
        cand[0] = c
        while k >= 0:
            if cand[k] == 0:
                k -= 1
                continue
            low = cand[k] & (~cand[k] + 1)
            cand[k] ^= low
            v = plan.order[k]
            assign[v] = _lowbit_index(low)
            used[k + 1] = used[k] | low
            if k + 1 == n_src:
                total += 1
                continue
            k += 1
            v = plan.order[k]
            c = full & ~used[k]
            for i in range(plan.back_start[k], plan.back_start[k + 1]):
                c &= plan.tgt[assign[plan.back[i]]]
            t = plan.fixed[v]
            if t >= 0:
                c &= (<uint64_t>1 << t)
            cand[k] = c
    free(cand)
    free(used)
    free(assign)
    return total
