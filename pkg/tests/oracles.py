"""Independent reference computations used to freeze expected values.

Nothing here imports the code paths it is used to check.
"""

import math
from functools import lru_cache
from itertools import combinations, permutations


@lru_cache(maxsize=None)
def polygon_triangulation_count(n):
    """Triangulations of a convex n-gon: fix the edge (0, n-1), pick the apex."""
    if n <= 3:
        return 1
    return sum(polygon_triangulation_count(k + 1) * polygon_triangulation_count(n - k)
               for k in range(1, n - 1))


def punctured_polygon_triangulation_count(n):
    """Ideal triangulations of a once-punctured n-gon, self-folded ones included.

    Either the puncture sits in a self-folded triangle at some vertex (the
    rest is an (n+1)-gon), or a set K of >= 2 radial arcs cuts the punctured
    disk into sectors; a sector spanning g boundary steps is forced to contain
    the chord across it and leaves a (g+1)-gon.
    """
    total = n * polygon_triangulation_count(n + 1)
    for m in range(2, n + 1):
        for ks in combinations(range(n), m):
            prod = 1
            for a, b in zip(ks, ks[1:] + (ks[0] + n,)):
                prod *= polygon_triangulation_count(b - a + 1)
            total += prod
    return total


def _point(k, n):
    ang = 2 * math.pi * k / n
    return (math.cos(ang), math.sin(ang))


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def chords_cross_geometric(c1, c2, n):
    """Straight chords of a regular n-gon cross in their interiors."""
    if set(c1) & set(c2):
        return False
    p1, p2 = _point(c1[0], n), _point(c1[1], n)
    q1, q2 = _point(c2[0], n), _point(c2[1], n)
    d1, d2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    d3, d4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    return d1 * d2 < 0 and d3 * d4 < 0


def brute_force_simplicial_maps(src_vertices, src_simplices, tgt_vertices, tgt_simplices):
    """Filter every injective vertex function; images of simplices must lie
    in some target simplex."""
    tgt = [frozenset(s) for s in tgt_simplices]
    out = []
    for image in permutations(tgt_vertices, len(src_vertices)):
        f = dict(zip(src_vertices, image))
        if all(any({f[v] for v in s} <= t for t in tgt) for s in src_simplices):
            out.append(f)
    return out


def farey_neighbors(p, q):
    """All reduced slopes r/s with |ps - qr| = 1 and |r|, s small, by search."""
    out = set()
    for s in range(0, 40):
        for r in range(-40, 41):
            if math.gcd(r, s) == 1 and abs(p * s - q * r) == 1:
                out.add((r, s) if s > 0 or r > 0 else (-r, -s))
    return out
