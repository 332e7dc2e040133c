"""Pure-Python backtracking kernel for injective edge-preserving vertex maps.

Graphs are given as adjacency bitmasks over ``0..n-1``. A solution maps
every source vertex to a distinct target vertex such that every source edge
lands on a target edge (non-edges are unconstrained).
"""


def _plan(src_adj, order):
    pos = {v: k for k, v in enumerate(order)}
    back = []
    for v in order:
        back.append([w for w in range(len(src_adj))
                     if (src_adj[v] >> w) & 1 and pos[w] < pos[v]])
    return back


def search(src_adj, tgt_adj, order, fixed, limit=-1):
    """All solutions as tuples indexed by source vertex, in DFS order.

    ``fixed[v]`` pins source vertex ``v`` to a target index (``-1`` = free).
    Candidates are tried in increasing target index, so the output order is
    deterministic. ``limit >= 0`` stops after that many solutions.
    """
    n_src, n_tgt = len(src_adj), len(tgt_adj)
    if n_src == 0:
        return [()]
    if n_src > n_tgt:
        return []
    back = _plan(src_adj, order)
    full = (1 << n_tgt) - 1
    assign = [-1] * n_src
    out = []

    def candidates(k, used):
        v = order[k]
        cand = full & ~used
        for w in back[k]:
            cand &= tgt_adj[assign[w]]
        if fixed[v] >= 0:
            cand &= 1 << fixed[v]
        return cand

    def rec(k, used):
        if k == n_src:
            out.append(tuple(assign))
            return limit >= 0 and len(out) >= limit
        cand = candidates(k, used)
        v = order[k]
        while cand:
            low = cand & -cand
            cand ^= low
            assign[v] = low.bit_length() - 1
            if rec(k + 1, used | low):
                return True
        assign[v] = -1
        return False

    rec(0, 0)
    return out


def count(src_adj, tgt_adj, order, fixed):
    return len(search(src_adj, tgt_adj, order, fixed))
