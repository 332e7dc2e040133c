"""Flip graphs, arc complexes, and the dual embedding of one into the other."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from .models import (
    Arc,
    Model,
    ModelError,
    Triangulation,
    Unbounded,
    all_arcs,
    base_triangulation,
    disjoint,
    faces,
    flip,
    flippable,
    neighbors,
)


class BallNotContained(ModelError):
    pass


class ArcIsFlippable(ModelError):
    pass


@dataclass(frozen=True)
class Edge:
    """A flip: ``removed`` is in ``a`` only, ``added`` is in ``b`` only."""

    a: Triangulation
    b: Triangulation
    removed: Arc
    added: Arc

    def key(self) -> frozenset:
        return frozenset((self.a, self.b))

    def reversed(self) -> "Edge":
        return Edge(self.b, self.a, self.added, self.removed)

    def oriented_from(self, t: Triangulation) -> "Edge":
        return self if t == self.a else self.reversed()


class FlipSubgraph:
    """A subgraph of the flip graph: triangulations and flip edges.

    When built as a ball, ``center``/``radius`` are set and ``distance``
    records the shell index of every vertex.
    """

    def __init__(self, model: Model, vertices: Iterable[Triangulation],
                 edges: Iterable[Edge] = (), center: Triangulation | None = None,
                 radius: int | None = None, distance: dict | None = None):
        self.model = model
        self.vertices = tuple(sorted(set(vertices), key=Triangulation.serialize))
        vset = set(self.vertices)
        self.edges: dict[frozenset, Edge] = {}
        self._adj: dict[Triangulation, list[Edge]] = {t: [] for t in self.vertices}
        for e in edges:
            if e.a not in vset or e.b not in vset:
                raise ModelError(f"edge {e.removed}->{e.added} leaves the vertex set")
            if e.key() in self.edges:
                continue
            self.edges[e.key()] = e
            self._adj[e.a].append(e)
            self._adj[e.b].append(e.reversed())
        self.center = center
        self.radius = radius
        self.distance = dict(distance or {})

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, t):
        return t in self._adj

    def has_edge(self, t: Triangulation, u: Triangulation) -> bool:
        return frozenset((t, u)) in self.edges

    def incident(self, t: Triangulation) -> list[Edge]:
        """Edges at ``t``, each oriented away from ``t``."""
        return list(self._adj[t])

    def degree(self, t: Triangulation) -> int:
        return len(self._adj[t])

    def shell(self, k: int) -> list[Triangulation]:
        """Vertices at distance exactly ``k`` from the ball center."""
        if self.center is None:
            raise ModelError("shell() needs a ball (center is unset)")
        return [t for t in self.vertices if self.distance.get(t) == k]

    def induced(self, keep: Iterable[Triangulation]) -> "FlipSubgraph":
        keep = set(keep)
        return FlipSubgraph(
            self.model, keep, [e for e in self.edges.values() if e.a in keep and e.b in keep],
            center=self.center if self.center in keep else None,
            radius=None,
            distance={t: d for t, d in self.distance.items() if t in keep})

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            t = todo.pop()
            for e in self._adj[t]:
                if e.b not in seen:
                    seen.add(e.b)
                    todo.append(e.b)
        return len(seen) == len(self.vertices)

    def is_acyclic(self) -> bool:
        # a forest has |E| = |V| - components; connected case suffices here
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def index(self) -> dict[Triangulation, int]:
        return {t: k for k, t in enumerate(self.vertices)}

    def edge_pairs(self) -> list[tuple[int, int]]:
        idx = self.index()
        return sorted(tuple(sorted((idx[e.a], idx[e.b]))) for e in self.edges.values())

    def to_json(self) -> dict:
        data = {"model": str(self.model),
                "vertices": [t.serialize() for t in self.vertices],
                "edges": [list(p) for p in self.edge_pairs()]}
        if self.center is not None:
            data["center"] = self.center.serialize()
            data["radius"] = self.radius
        return data

    def to_dot(self) -> str:
        idx = self.index()
        lines = ["graph flip {"]
        for t in self.vertices:
            lines.append(f'  v{idx[t]} [label="{t.serialize()}"];')
        rows = []
        for e in self.edges.values():
            i, j = idx[e.a], idx[e.b]
            lab = f"-{e.removed}/+{e.added}"
            if i > j:
                i, j = j, i
                lab = f"-{e.added}/+{e.removed}"
            rows.append((i, j, lab))
        for i, j, lab in sorted(rows):
            lines.append(f'  v{i} -- v{j} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Simplex:
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(set(self.arcs))))

    @property
    def dimension(self) -> int:
        return len(self.arcs) - 1

    def __and__(self, other: "Simplex") -> "Simplex":
        return Simplex(tuple(set(self.arcs) & set(other.arcs)))

    def is_face_of(self, other: "Simplex") -> bool:
        return set(self.arcs) <= set(other.arcs)


class SimplicialComplex:
    """Vertices plus maximal simplices; non-maximal generators are pruned."""

    def __init__(self, maximal_simplices: Iterable[Iterable], vertices: Iterable = ()):
        sims = {frozenset(s) for s in maximal_simplices}
        keep = [s for s in sims if not any(s < o for o in sims)]
        self.pruned = len(sims) - len(keep)
        self.maximal_simplices = tuple(sorted(keep, key=lambda s: sorted(map(str, s))))
        verts = set(vertices)
        for s in keep:
            verts |= s
        self.vertices = tuple(sorted(verts))
        self._containing: dict = {v: [] for v in self.vertices}
        for s in self.maximal_simplices:
            for v in s:
                self._containing[v].append(s)

    def __len__(self):
        return len(self.vertices)

    def contains_simplex(self, vs: Iterable) -> bool:
        vs = frozenset(vs)
        if not vs:
            return True
        first = next(iter(vs))
        return any(vs <= s for s in self._containing.get(first, ()))

    def edges(self) -> set[frozenset]:
        out = set()
        for s in self.maximal_simplices:
            for a, b in combinations(s, 2):
                out.add(frozenset((a, b)))
        return out

    def is_flag(self) -> bool:
        """True iff every vertex set whose pairs are all edges is a simplex."""
        adj = {v: set() for v in self.vertices}
        for e in self.edges():
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        for clique in _maximal_cliques(self.vertices, adj):
            if not self.contains_simplex(clique):
                return False
        return True

    def to_json(self) -> dict:
        return {"vertices": sorted(str(v) for v in self.vertices),
                "maximal_simplices": sorted(sorted(str(v) for v in s)
                                            for s in self.maximal_simplices)}


def _maximal_cliques(vertices, adj):
    # Bron-Kerbosch with pivoting
    out = []

    def bk(r, p, x):
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(frozenset(), set(vertices), set())
    return out


# ---------------------------------------------------------------------------

def pi(t: Triangulation) -> Simplex:
    """The top-dimensional simplex of the arc complex spanned by ``t``."""
    return Simplex(t.arcs)


def flip_ball(model: Model, center: Triangulation, r: int) -> FlipSubgraph:
    """Breadth-first ball of radius ``r`` around ``center``."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist = {center: 0}
    frontier = deque([center])
    nbrs = {}
    while frontier:
        t = frontier.popleft()
        nbrs[t] = neighbors(t)
        if dist[t] == r:
            continue
        for _, _, u in nbrs[t]:
            if u not in dist:
                dist[u] = dist[t] + 1
                frontier.append(u)
    edges = [Edge(t, u, a, b) for t, lst in nbrs.items() for a, b, u in lst if u in dist]
    return FlipSubgraph(model, dist, edges, center=center, radius=r, distance=dist)


def enumerate_triangulations(model: Model) -> list[Triangulation]:
    """All maximal pairwise-disjoint arc sets, by growing disjoint sets."""
    if not model.is_finite:
        raise Unbounded("the flip graph of the once-punctured torus is infinite")
    arcs = all_arcs(model)
    n = len(arcs)
    compat = [[disjoint(arcs[i], arcs[j]) for j in range(n)] for i in range(n)]
    out = []

    def grow(chosen, start):
        extendable = False
        for k in range(n):
            if k not in chosen and all(compat[k][c] for c in chosen):
                extendable = True
                if k >= start:
                    grow(chosen + [k], k + 1)
        if not extendable:
            out.append(Triangulation.of(model, [arcs[c] for c in chosen]))

    grow([], 0)
    return out


def full_flip_graph(model: Model) -> FlipSubgraph:
    """The whole flip graph of a finite model.

    Vertices come from exhaustive growth of disjoint arc sets, not from
    flips; an edge joins two triangulations sharing all but one arc when
    flipping that arc in one yields the other.
    """
    verts = enumerate_triangulations(model)
    by_rest: dict[frozenset, list[Triangulation]] = {}
    for t in verts:
        for a in t.arcs:
            by_rest.setdefault(t.arcset() - {a}, []).append(t)
    edges = []
    for rest, group in by_rest.items():
        for t, u in combinations(group, 2):
            (a,) = t.arcset() - rest
            (b,) = u.arcset() - rest
            if flippable(t, a) and flip(t, a)[0] == u:
                edges.append(Edge(t, u, a, b))
    return FlipSubgraph(model, verts, edges)


def arc_complex(model: Model) -> SimplicialComplex:
    """The full arc complex of a finite model."""
    return SimplicialComplex([t.arcs for t in enumerate_triangulations(model)],
                             vertices=all_arcs(model))


def dual_subcomplex(x_f: FlipSubgraph) -> SimplicialComplex:
    """Union of the simplices pi(T) over the vertices T of ``x_f``."""
    if not x_f.vertices:
        raise ValueError("empty flip subgraph")
    tops = [pi(t).arcs for t in x_f.vertices]
    cx = SimplicialComplex(tops)
    assert cx.pruned == 0 and len(cx.maximal_simplices) == len(tops)
    return cx


@dataclass
class DualityReport:
    pairs: int = 0
    edges: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "edges": self.edges, "ok": self.ok,
                "violations": self.violations}


def check_duality(x_f: FlipSubgraph) -> DualityReport:
    """Edge iff the arc sets share all but one arc iff the dual simplices
    meet in a codimension-one face; checked over every vertex pair."""
    d = x_f.model.complexity
    rep = DualityReport(edges=len(x_f.edges))
    for t, u in combinations(x_f.vertices, 2):
        rep.pairs += 1
        is_edge = x_f.has_edge(t, u)
        shares = len(t.arcset() & u.arcset()) == d - 1
        s, s2 = pi(t), pi(u)
        meet = s & s2
        codim1 = (meet.dimension == s.dimension - 1 == s2.dimension - 1
                  and meet.is_face_of(s) and meet.is_face_of(s2))
        if not (is_edge == shares == codim1):
            rep.violations.append({"a": t.serialize(), "b": u.serialize(),
                                   "edge": is_edge, "shared": shares, "codim1": codim1})
            continue
        if is_edge:
            e = x_f.edges[frozenset((t, u))].oriented_from(t)
            if t.arcset() - u.arcset() != {e.removed} or u.arcset() - t.arcset() != {e.added}:
                rep.violations.append({"a": t.serialize(), "b": u.serialize(),
                                       "edge": True, "label": f"-{e.removed}/+{e.added}"})
    return rep


def ball_common_arcs(x_f: FlipSubgraph, center: Triangulation, r: int) -> set:
    """Arcs lying in every triangulation within distance ``r`` of ``center``."""
    ball = flip_ball(x_f.model, center, r)
    missing = [t for t in ball.vertices if t not in x_f]
    if missing:
        raise BallNotContained(f"{len(missing)} vertices of the {r}-ball around "
                               f"{center} are not in the subgraph")
    common = set(center.arcs)
    for t in ball.vertices:
        common &= t.arcset()
    return common


class FlipSequence(NamedTuple):
    outer: Arc
    inner: Arc


def unflippable_witness(t: Triangulation, a: Arc) -> FlipSequence:
    """Two flips removing the inner arc ``a`` of a self-folded triangle.

    Flipping the outer arc first makes ``a`` flippable; flipping ``a`` then
    lands at distance 2 from ``t`` on a triangulation without ``a``.
    """
    if flippable(t, a):
        raise ArcIsFlippable(f"{a} is flippable in {t}")
    folded = next(f for f in faces(t) if f.inner_arc == a)
    b = folded.outer_arc
    t1, _ = flip(t, b)
    assert flippable(t1, a)
    t2, _ = flip(t1, a)
    assert a not in t2
    # two arcs differ, so t2 is neither t nor a neighbour of t
    assert len(t.arcset() - t2.arcset()) == 2
    return FlipSequence(b, a)


def apply_flips(t: Triangulation, arcs: Iterable[Arc]) -> list[Triangulation]:
    """Path of triangulations obtained by flipping ``arcs`` in turn."""
    path = [t]
    for a in arcs:
        path.append(flip(path[-1], a)[0])
    return path


@dataclass
class TwoBallReport:
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": self.checked, "passed": self.passed, "skipped": self.skipped,
                "ok": self.ok, "failures": self.failures}


def two_ball_lemma(x_f: FlipSubgraph, centers: Iterable[Triangulation]) -> TwoBallReport:
    """No arc survives in every vertex of a 2-ball with nonempty 2-shell.

    Centers whose 2-shell is empty are counted as skipped.
    """
    rep = TwoBallReport()
    for c in centers:
        rep.checked += 1
        ball = flip_ball(x_f.model, c, 2)
        if not ball.shell(2):
            rep.skipped += 1
            continue
        common = ball_common_arcs(x_f, c, 2)
        if common:
            rep.failures.append({"center": c.serialize(),
                                 "common": sorted(str(a) for a in common)})
        else:
            rep.passed += 1
    return rep


def sample_centers(x_f: FlipSubgraph, k: int, seed: int, max_distance: int | None = None):
    """``k`` vertices drawn with a seeded RNG, optionally within a distance."""
    pool = [t for t in x_f.vertices
            if max_distance is None or x_f.distance.get(t, 0) <= max_distance]
    rng = random.Random(seed)
    return rng.sample(pool, min(k, len(pool)))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


__all__ = [
    "ArcIsFlippable", "BallNotContained", "DualityReport", "Edge", "FlipSequence",
    "FlipSubgraph", "Simplex", "SimplicialComplex", "TwoBallReport", "apply_flips",
    "arc_complex", "ball_common_arcs", "base_triangulation", "check_duality",
    "dual_subcomplex", "enumerate_triangulations", "flip_ball", "full_flip_graph", "pi",
    "sample_centers", "two_ball_lemma", "unflippable_witness",
]
