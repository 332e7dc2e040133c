import pytest

from fliplab.complexes import (
    FlipSubgraph, SimplicialComplex, arc_complex, dual_subcomplex, flip_ball, full_flip_graph,
)
from fliplab.models import Chord, Model, Slope, Triangulation, base_triangulation, rotate
from fliplab.rigidity import (
    ARC_COMPLEX, FLIP_GRAPH, DomainMismatch, ImageNotTriangulation, Inconsistent,
    NoWitnessEdge, NotInjective, VertexMap, count_tree_extensions,
    enumerate_injective_simplicial_maps, extensions, extract_arc_map, graph_extensions,
    induce_flip_map, is_injective_graph_morphism, is_injective_simplicial, rigidity_report,
    verify_pipeline, verify_uniqueness_transfer,
)

from oracles import brute_force_simplicial_maps

POLY5 = Model.polygon(5)
A5 = arc_complex(POLY5)
C = {k: Chord(*k) for k in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]}
PATH3 = SimplicialComplex([{C[0, 2], C[0, 3]}, {C[0, 3], C[1, 3]}])


def rotation_map(model, k):
    return VertexMap({a: rotate(a, model.n, k) for a in arc_complex(model).vertices})


def test_vertex_map_injective():
    with pytest.raises(NotInjective):
        VertexMap({1: 0, 2: 0})
    m = VertexMap({1: 2, 2: 1})
    assert m[1] == 2 and m.restrict([1]) == VertexMap({1: 2})


def test_is_injective_simplicial_examples():
    ident = VertexMap.identity(A5.vertices)
    assert is_injective_simplicial(ident, A5, A5)
    swap = dict(ident.assignments)
    swap[C[0, 2]], swap[C[1, 3]] = C[1, 3], C[0, 2]
    swapped = VertexMap(swap)
    assert not is_injective_simplicial(swapped, A5, A5)
    # brute-force edge lookup agrees
    edges = A5.edges()
    assert any(frozenset(swapped[v] for v in e) not in edges for e in edges)
    with pytest.raises(DomainMismatch):
        is_injective_simplicial(VertexMap({C[0, 2]: C[0, 2]}), A5, A5)


def test_collapsing_map_rejected():
    with pytest.raises(NotInjective):
        VertexMap({v: C[0, 2] for v in A5.vertices})


def test_enumeration_counts():
    assert len(enumerate_injective_simplicial_maps(A5, A5)) == 10
    assert len(enumerate_injective_simplicial_maps(PATH3, A5)) == 10
    point = SimplicialComplex([{C[0, 2]}])
    assert len(enumerate_injective_simplicial_maps(point, A5)) == 5


@pytest.mark.parametrize("x, target", [
    (A5, A5),
    (PATH3, A5),
    (dual_subcomplex(flip_ball(Model.polygon(6), base_triangulation(Model.polygon(6)), 1)),
     dual_subcomplex(flip_ball(Model.polygon(6), base_triangulation(Model.polygon(6)), 1))),
    (PATH3, dual_subcomplex(flip_ball(Model.polygon(7), base_triangulation(Model.polygon(7)), 1))),
    (dual_subcomplex(flip_ball(Model.ppolygon(3), base_triangulation(Model.ppolygon(3)), 1)),
     arc_complex(Model.ppolygon(3))),
    (SimplicialComplex([{1, 2, 3}]), SimplicialComplex([{"a", "b", "c"}, {"c", "d"}])),
    (SimplicialComplex([{1, 2}, {2, 3}, {1, 3}]), SimplicialComplex([{"a", "b", "c"}])),
    (SimplicialComplex([{1, 2, 3}]), SimplicialComplex([{"a", "b"}, {"b", "c"}, {"a", "c"}])),
])
def test_enumeration_matches_brute_force(x, target):
    got = enumerate_injective_simplicial_maps(x, target)
    ref = brute_force_simplicial_maps(list(x.vertices), x.maximal_simplices,
                                      list(target.vertices), target.maximal_simplices)
    assert sorted(tuple(sorted(m.assignments.items(), key=str)) for m in got) == \
        sorted(tuple(sorted(f.items(), key=str)) for f in ref)


def test_enumeration_deterministic():
    a = enumerate_injective_simplicial_maps(A5, A5)
    b = enumerate_injective_simplicial_maps(A5, A5)
    assert [m.assignments for m in a] == [m.assignments for m in b]


def test_extensions():
    ident = VertexMap.identity(A5.vertices)
    assert extensions(ident, A5, A5, A5) == [ident]
    for lam in enumerate_injective_simplicial_maps(PATH3, A5):
        assert len(extensions(lam, PATH3, A5, A5)) == 1
    point = SimplicialComplex([{C[0, 2]}])
    for lam in enumerate_injective_simplicial_maps(point, A5):
        exts = extensions(lam, point, A5, A5)
        assert len(exts) == 2
        assert all(e[C[0, 2]] == lam[C[0, 2]] for e in exts)


def test_rigidity_reports():
    rep = rigidity_report(PATH3, A5, A5)
    assert rep.rigid and rep.lambda_count == 10 and rep.unique == 10
    whole = rigidity_report(A5, A5, A5)
    assert whole.rigid
    edge = rigidity_report(SimplicialComplex([{C[0, 2], C[0, 3]}]), A5, A5)
    assert edge.unique + edge.none + edge.multiple == edge.lambda_count
    point = rigidity_report(SimplicialComplex([{C[0, 2]}]), A5, A5)
    assert not point.rigid and point.multiple == 5
    data = rep.to_json()
    assert set(data) == {"lambda_count", "unique", "none", "multiple", "rigid", "details"}


def test_rigidity_report_threads(monkeypatch):
    monkeypatch.setenv("FLIPLAB_THREADS", "4")
    rep = rigidity_report(PATH3, A5, A5)
    monkeypatch.setenv("FLIPLAB_THREADS", "1")
    assert rep.to_json() == rigidity_report(PATH3, A5, A5).to_json()


def test_induce_identity_and_rotation():
    g = full_flip_graph(POLY5)
    ident = VertexMap.identity(A5.vertices)
    lam_f = induce_flip_map(ident, g, POLY5)
    assert lam_f == VertexMap.identity(g.vertices, FLIP_GRAPH)
    rot = rotation_map(POLY5, 1)
    lam_f = induce_flip_map(rot, g, POLY5)
    for t in g.vertices:
        assert lam_f[t] == Triangulation.of(POLY5, [rotate(a, 5, 1) for a in t])
    assert is_injective_graph_morphism(lam_f, g, g)


def test_induce_farey_translation():
    torus = Model.torus()
    ball = flip_ball(torus, base_triangulation(torus), 1)
    lam = VertexMap({s: Slope(s.p + s.q, s.q) for t in ball.vertices for s in t})
    lam_f = induce_flip_map(lam, ball, torus)
    assert lam_f[base_triangulation(torus)].arcs == (Slope(1, 0), Slope(1, 1), Slope(2, 1))
    assert extract_arc_map(lam_f, ball) == lam


def test_induce_rejects_non_simplicial():
    g = full_flip_graph(POLY5)
    swap = {v: v for v in A5.vertices}
    swap[C[0, 2]], swap[C[1, 3]] = C[1, 3], C[0, 2]
    with pytest.raises(ImageNotTriangulation):
        induce_flip_map(VertexMap(swap), g, POLY5)


def test_extract_errors():
    t = base_triangulation(POLY5)
    single = FlipSubgraph(POLY5, [t])
    with pytest.raises(NoWitnessEdge) as err:
        extract_arc_map(VertexMap({t: t}, FLIP_GRAPH), single)
    assert set(err.value.arcs) == set(t.arcs)
    # a flip map not induced by any arc map
    g = full_flip_graph(POLY5)
    verts = list(g.vertices)
    shifted = VertexMap({v: verts[(k + 1) % 5] for k, v in enumerate(verts)}, FLIP_GRAPH)
    with pytest.raises((Inconsistent, NoWitnessEdge)):
        extract_arc_map(shifted, g)


def test_extract_requires_connected():
    g = full_flip_graph(Model.polygon(6))
    a, b = g.vertices[0], next(v for v in g.vertices[1:] if not g.has_edge(g.vertices[0], v))
    x = FlipSubgraph(g.model, [a, b])
    with pytest.raises(ValueError):
        extract_arc_map(VertexMap.identity([a, b], FLIP_GRAPH), x)


@pytest.mark.parametrize("model, count", [
    (POLY5, 10), (Model.polygon(6), 12), (Model.ppolygon(3), 6),
])
def test_pipeline_round_trip(model, count):
    rep = verify_pipeline(full_flip_graph(model))
    assert rep.ok and rep.lambda_count == count


def test_pipeline_on_two_ball():
    model = Model.polygon(6)
    rep = verify_pipeline(flip_ball(model, base_triangulation(model), 2))
    assert rep.ok and rep.lambda_count > 0


@pytest.mark.parametrize("model", [POLY5, Model.polygon(6), Model.ppolygon(3)])
def test_uniqueness_transfer(model):
    rep = verify_uniqueness_transfer(flip_ball(model, base_triangulation(model), 2))
    assert rep.ok and rep.both_unique > 0


def test_graph_extensions_fullgraph_identity():
    g = full_flip_graph(POLY5)
    ident = VertexMap.identity(g.vertices, FLIP_GRAPH)
    assert graph_extensions(ident, g, g, g) == [ident]


def test_tree_extensions():
    assert count_tree_extensions(1) == (1, 8, 3)
    assert count_tree_extensions(2) == (1, 64, 6)
    with pytest.raises(ValueError):
        count_tree_extensions(0)


def test_tree_extensions_restrict_to_identity():
    torus = Model.torus()
    base = base_triangulation(torus)
    inner, outer = flip_ball(torus, base, 1), flip_ball(torus, base, 2)
    ident = VertexMap.identity(inner.vertices, FLIP_GRAPH)
    exts = graph_extensions(ident, inner, outer, outer)
    assert len(exts) == 8
    assert all(e.restrict(inner.vertices) == ident for e in exts)
