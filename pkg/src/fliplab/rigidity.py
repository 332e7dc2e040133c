"""Injective simplicial maps, the arc-map/flip-map correspondence, and
brute-force extension counting."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from . import kernel
from .complexes import (
    FlipSubgraph,
    SimplicialComplex,
    arc_complex,
    dual_subcomplex,
    flip_ball,
    full_flip_graph,
)
from .models import Model, ModelError, Triangulation, base_triangulation, flip, flippable, is_triangulation

ARC_COMPLEX = "arc-complex"
FLIP_GRAPH = "flip-graph"


class RigidityError(ModelError):
    pass


class DomainMismatch(RigidityError):
    pass


class NotInjective(RigidityError):
    pass


class ImageNotTriangulation(RigidityError):
    pass


class NoWitnessEdge(RigidityError):
    def __init__(self, arcs):
        self.arcs = list(arcs)
        super().__init__("no flip edge removes " + ", ".join(str(a) for a in self.arcs))


class Inconsistent(RigidityError):
    pass


class VertexMap:
    """A finite injective map between vertex sets."""

    def __init__(self, assignments: dict, domain_kind: str = ARC_COMPLEX):
        self.assignments = dict(assignments)
        self.domain_kind = domain_kind
        if len(set(self.assignments.values())) != len(self.assignments):
            raise NotInjective("vertex map is not injective")

    def __getitem__(self, v):
        return self.assignments[v]

    def __contains__(self, v):
        return v in self.assignments

    def __len__(self):
        return len(self.assignments)

    def __eq__(self, other):
        return (isinstance(other, VertexMap) and self.domain_kind == other.domain_kind
                and self.assignments == other.assignments)

    def __hash__(self):
        return hash((self.domain_kind, frozenset(self.assignments.items())))

    def __repr__(self):
        body = ", ".join(f"{k}->{v}" for k, v in self.items())
        return f"VertexMap[{self.domain_kind}]({body})"

    @property
    def domain(self) -> set:
        return set(self.assignments)

    def items(self):
        return sorted(self.assignments.items(), key=lambda kv: str(kv[0]))

    def restrict(self, keys: Iterable) -> "VertexMap":
        return VertexMap({k: self.assignments[k] for k in keys}, self.domain_kind)

    def to_json(self) -> dict:
        return {str(k): str(v) for k, v in self.items()}

    @classmethod
    def identity(cls, vertices: Iterable, domain_kind: str = ARC_COMPLEX) -> "VertexMap":
        return cls({v: v for v in vertices}, domain_kind)


# ---------------------------------------------------------------------------
# Simplicial maps on complexes

def is_injective_simplicial(m: VertexMap, x: SimplicialComplex, target: SimplicialComplex) -> bool:
    if m.domain != set(x.vertices):
        raise DomainMismatch("map domain differs from the complex's vertex set")
    if len(set(m.assignments.values())) != len(m):
        return False
    tv = set(target.vertices)
    if any(v not in tv for v in m.assignments.values()):
        return False
    return all(target.contains_simplex(m[v] for v in s) for s in x.maximal_simplices)


def _adjacency(vertices, edges) -> list[int]:
    idx = {v: k for k, v in enumerate(vertices)}
    adj = [0] * len(vertices)
    for e in edges:
        a, b = tuple(e)
        adj[idx[a]] |= 1 << idx[b]
        adj[idx[b]] |= 1 << idx[a]
    return adj


def _degeneracy_order(adj: list[int]) -> list[int]:
    """Reverse smallest-last order: densest core first."""
    left = set(range(len(adj)))
    removed = []
    while left:
        v = min(left, key=lambda u: (bin(adj[u] & _mask(left)).count("1"), u))
        removed.append(v)
        left.remove(v)
    return removed[::-1]


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _connectivity_order(adj: list[int], seeds: list[int]) -> list[int]:
    """Seeds first, then repeatedly the vertex most attached to those placed."""
    order = list(seeds)
    placed = _mask(order)
    rest = set(range(len(adj))) - set(order)
    while rest:
        v = max(rest, key=lambda u: (bin(adj[u] & placed).count("1"),
                                     bin(adj[u]).count("1"), -u))
        order.append(v)
        placed |= 1 << v
        rest.remove(v)
    return order


def _run(src_vertices, src_adj, tgt_vertices, tgt_adj, order, fixed, domain_kind):
    sols = kernel.search(src_adj, tgt_adj, order, fixed)
    return [VertexMap({src_vertices[i]: tgt_vertices[j] for i, j in enumerate(sol)}, domain_kind)
            for sol in sols]


def _sort_maps(maps: list[VertexMap], src_vertices) -> list[VertexMap]:
    return sorted(maps, key=lambda m: [str(m[v]) for v in src_vertices])


def enumerate_injective_simplicial_maps(x: SimplicialComplex,
                                        target: SimplicialComplex) -> list[VertexMap]:
    """Every injective simplicial map from ``x`` into ``target``."""
    sv, tv = list(x.vertices), list(target.vertices)
    sadj = _adjacency(sv, x.edges())
    tadj = _adjacency(tv, target.edges())
    cands = _run(sv, sadj, tv, tadj, _degeneracy_order(sadj), [-1] * len(sv), ARC_COMPLEX)
    # edges-to-edges is necessary; higher simplices are checked here
    return _sort_maps([m for m in cands if is_injective_simplicial(m, x, target)], sv)


def extensions(lam: VertexMap, x: SimplicialComplex, whole: SimplicialComplex,
               target: SimplicialComplex) -> list[VertexMap]:
    """Injective simplicial maps ``whole -> target`` restricting to ``lam`` on ``x``."""
    if lam.domain != set(x.vertices):
        raise DomainMismatch("lambda must be defined exactly on the subcomplex")
    wv, tv = list(whole.vertices), list(target.vertices)
    widx, tidx = {v: k for k, v in enumerate(wv)}, {v: k for k, v in enumerate(tv)}
    if any(v not in widx for v in x.vertices):
        raise DomainMismatch("subcomplex vertex missing from the whole complex")
    if any(lam[v] not in tidx for v in x.vertices):
        return []
    wadj = _adjacency(wv, whole.edges())
    tadj = _adjacency(tv, target.edges())
    fixed = [-1] * len(wv)
    for v in x.vertices:
        fixed[widx[v]] = tidx[lam[v]]
    order = _connectivity_order(wadj, sorted(widx[v] for v in x.vertices))
    cands = _run(wv, wadj, tv, tadj, order, fixed, ARC_COMPLEX)
    return _sort_maps([m for m in cands if is_injective_simplicial(m, whole, target)], wv)


# ---------------------------------------------------------------------------
# Maps on flip graphs

def flip_adjacent(t: Triangulation, u: Triangulation) -> bool:
    """True iff ``u`` is obtained from ``t`` by a single flip."""
    diff = t.arcset() - u.arcset()
    if len(diff) != 1 or len(u.arcset() - t.arcset()) != 1:
        return False
    (a,) = diff
    return flippable(t, a) and flip(t, a)[0] == u


def is_injective_graph_morphism(m: VertexMap, x_f: FlipSubgraph,
                                target: FlipSubgraph | None = None) -> bool:
    """Edges of ``x_f`` go to edges of ``target`` (or of the full flip graph)."""
    if m.domain != set(x_f.vertices):
        raise DomainMismatch("map domain differs from the subgraph's vertices")
    if len(set(m.assignments.values())) != len(m):
        return False
    for e in x_f.edges.values():
        a, b = m[e.a], m[e.b]
        ok = target.has_edge(a, b) if target is not None else flip_adjacent(a, b)
        if not ok:
            return False
    return True


def graph_extensions(lam: VertexMap, x_f: FlipSubgraph, whole: FlipSubgraph,
                     target: FlipSubgraph) -> list[VertexMap]:
    """Injective graph morphisms ``whole -> target`` agreeing with ``lam`` on ``x_f``."""
    wv, tv = list(whole.vertices), list(target.vertices)
    widx, tidx = {v: k for k, v in enumerate(wv)}, {v: k for k, v in enumerate(tv)}
    if any(lam[v] not in tidx for v in x_f.vertices):
        return []
    wadj = _adjacency(wv, whole.edges)
    tadj = _adjacency(tv, target.edges)
    fixed = [-1] * len(wv)
    for v in x_f.vertices:
        fixed[widx[v]] = tidx[lam[v]]
    order = _connectivity_order(wadj, sorted(widx[v] for v in x_f.vertices))
    return _sort_maps(_run(wv, wadj, tv, tadj, order, fixed, FLIP_GRAPH), wv)


def induce_flip_map(lambda_a: VertexMap, x_f: FlipSubgraph, target_model: Model) -> VertexMap:
    """T -> {lambda_a(a) : a in T} on every triangulation of ``x_f``."""
    images = {}
    for t in x_f.vertices:
        missing = [a for a in t.arcs if a not in lambda_a]
        if missing:
            raise DomainMismatch(f"lambda_A undefined on {missing[0]}")
        arcs = [lambda_a[a] for a in t.arcs]
        if not is_triangulation(target_model, arcs):
            raise ImageNotTriangulation(
                f"image of {t} is not a triangulation of {target_model}")
        images[t] = Triangulation.of(target_model, arcs)
    lam_f = VertexMap(images, FLIP_GRAPH)
    for e in x_f.edges.values():
        a, b = images[e.a], images[e.b]
        assert a.arcset() - b.arcset() == {lambda_a[e.removed]}
        assert b.arcset() - a.arcset() == {lambda_a[e.added]}
        assert flip_adjacent(a, b), f"{a} and {b} are not related by a flip"
    return lam_f


def extract_arc_map(lambda_f: VertexMap, x_f: FlipSubgraph) -> VertexMap:
    """Recover the arc map from a flip-graph map.

    An arc ``a`` goes to the single arc of ``lambda_f(T) - lambda_f(T')`` for
    any flip edge ``(T, T')`` removing ``a``; every such edge must agree.
    """
    if not x_f.is_connected():
        raise ValueError("flip subgraph must be connected")
    arcs = sorted({a for t in x_f.vertices for a in t.arcs})
    seen: dict = {a: set() for a in arcs}
    for e in x_f.edges.values():
        for o in (e, e.reversed()):
            diff = lambda_f[o.a].arcset() - lambda_f[o.b].arcset()
            if len(diff) != 1:
                raise Inconsistent(f"images of {o.a} and {o.b} differ in {len(diff)} arcs")
            seen[o.removed] |= diff
    lonely = [a for a in arcs if not seen[a]]
    if lonely:
        raise NoWitnessEdge(lonely)
    bad = [a for a in arcs if len(seen[a]) > 1]
    if bad:
        raise Inconsistent(f"witness edges disagree on the image of {bad[0]}")
    return VertexMap({a: next(iter(seen[a])) for a in arcs}, ARC_COMPLEX)


# ---------------------------------------------------------------------------
# Rigidity reports

@dataclass
class LambdaRecord:
    lam: VertexMap
    extension_count: int
    extensions: list = field(default_factory=list)


@dataclass
class RigidityReport:
    records: list

    @property
    def lambda_count(self) -> int:
        return len(self.records)

    @property
    def unique(self) -> int:
        return sum(r.extension_count == 1 for r in self.records)

    @property
    def none(self) -> int:
        return sum(r.extension_count == 0 for r in self.records)

    @property
    def multiple(self) -> int:
        return sum(r.extension_count > 1 for r in self.records)

    @property
    def rigid(self) -> bool:
        return all(r.extension_count == 1 for r in self.records)

    def to_json(self) -> dict:
        return {"lambda_count": self.lambda_count, "unique": self.unique,
                "none": self.none, "multiple": self.multiple, "rigid": self.rigid,
                "details": [{"lambda": r.lam.to_json(), "extensions": r.extension_count}
                            for r in self.records]}


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("FLIPLAB_THREADS", "1")))
    except ValueError:
        return 1


def rigidity_report(x: SimplicialComplex, whole: SimplicialComplex,
                    target: SimplicialComplex, keep_extensions: bool = False) -> RigidityReport:
    lams = enumerate_injective_simplicial_maps(x, target)

    def one(lam):
        exts = extensions(lam, x, whole, target)
        return LambdaRecord(lam, len(exts), exts if keep_extensions else [])

    workers = _workers()
    if workers > 1 and len(lams) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, lams))
    else:
        records = [one(lam) for lam in lams]
    return RigidityReport(records)


class TreeExtensions(NamedTuple):
    lambda_count: int
    extension_count: int
    shell_size: int


def count_tree_extensions(r: int) -> TreeExtensions:
    """Extensions of the identity on the radius-``r`` Farey flip ball to the
    radius-``r+1`` ball.

    Every vertex of the ``r``-shell has two further neighbours that can be
    swapped independently, so non-uniqueness shows up as a count > 1.
    """
    if r < 1:
        raise ValueError("radius must be positive")
    model = Model.torus()
    base = base_triangulation(model)
    inner = flip_ball(model, base, r)
    outer = flip_ball(model, base, r + 1)
    wv = list(outer.vertices)
    widx = {v: k for k, v in enumerate(wv)}
    adj = _adjacency(wv, outer.edges)
    fixed = [-1] * len(wv)
    for v in inner.vertices:
        fixed[widx[v]] = widx[v]
    order = _connectivity_order(adj, sorted(widx[v] for v in inner.vertices))
    n = kernel.count(adj, adj, order, fixed)
    return TreeExtensions(1, n, len(inner.shell(r)))


# ---------------------------------------------------------------------------
# Instance checks of the arc-map / flip-map pipeline

@dataclass
class PipelineReport:
    lambda_count: int = 0
    round_trips: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.round_trips == self.lambda_count

    def to_json(self) -> dict:
        return {"lambda_count": self.lambda_count, "round_trips": self.round_trips,
                "ok": self.ok, "failures": self.failures}


def verify_pipeline(x_f: FlipSubgraph, target_model: Model | None = None) -> PipelineReport:
    """For every injective simplicial lambda_A on the dual of ``x_f``: induce
    the flip map, check it is an injective graph morphism, and recover
    lambda_A from it."""
    target_model = target_model or x_f.model
    x_a = dual_subcomplex(x_f)
    target = arc_complex(target_model)
    rep = PipelineReport()
    for lam in enumerate_injective_simplicial_maps(x_a, target):
        rep.lambda_count += 1
        try:
            lam_f = induce_flip_map(lam, x_f, target_model)
            if not is_injective_graph_morphism(lam_f, x_f):
                rep.failures.append({"lambda": lam.to_json(), "error": "not a graph morphism"})
                continue
            back = extract_arc_map(lam_f, x_f)
        except (RigidityError, AssertionError) as exc:
            rep.failures.append({"lambda": lam.to_json(), "error": str(exc)})
            continue
        if back == lam:
            rep.round_trips += 1
        else:
            rep.failures.append({"lambda": lam.to_json(), "error": "round trip mismatch"})
    return rep


@dataclass
class TransferReport:
    lambda_count: int = 0
    both_unique: int = 0
    agree: int = 0
    flip_not_unique: int = 0
    contradictions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.contradictions and self.agree == self.both_unique

    def to_json(self) -> dict:
        return {"lambda_count": self.lambda_count, "both_unique": self.both_unique,
                "agree": self.agree, "flip_not_unique": self.flip_not_unique,
                "ok": self.ok, "contradictions": self.contradictions}


def verify_uniqueness_transfer(x_f: FlipSubgraph) -> TransferReport:
    """Compare arc-complex extensions with flip-graph extensions.

    Whenever the induced flip map extends uniquely over the whole flip graph,
    the arc map must extend uniquely too, and the two extensions must be
    related by ``induce_flip_map``.
    """
    model = x_f.model
    whole_a = arc_complex(model)
    whole_f = full_flip_graph(model)
    x_a = dual_subcomplex(x_f)
    rep = TransferReport()
    for lam in enumerate_injective_simplicial_maps(x_a, whole_a):
        rep.lambda_count += 1
        ext_a = extensions(lam, x_a, whole_a, whole_a)
        ext_f = graph_extensions(induce_flip_map(lam, x_f, model), x_f, whole_f, whole_f)
        if len(ext_f) != 1:
            rep.flip_not_unique += 1
            continue
        if len(ext_a) != 1:
            rep.contradictions.append({"lambda": lam.to_json(), "arc_extensions": len(ext_a)})
            continue
        rep.both_unique += 1
        if induce_flip_map(ext_a[0], whole_f, model) == ext_f[0]:
            rep.agree += 1
        else:
            rep.contradictions.append({"lambda": lam.to_json(), "error": "extensions differ"})
    return rep
