"""Arc complexes, flip graphs and finite rigidity checks for small marked surfaces."""

from .surface import SurfaceSig, complexity, parse_signature, same_type
from .models import (
    Chord, Loop, Model, PChord, Radial, Slope, Triangulation,
    all_arcs, base_triangulation, disjoint, faces, flip, flippable, is_triangulation,
)
from .complexes import (
    FlipSubgraph, SimplicialComplex, arc_complex, ball_common_arcs, check_duality,
    dual_subcomplex, flip_ball, full_flip_graph, pi, unflippable_witness,
)
from .rigidity import (
    VertexMap, count_tree_extensions, enumerate_injective_simplicial_maps, extensions,
    extract_arc_map, induce_flip_map, is_injective_simplicial, rigidity_report,
)

__version__ = "0.1.0"
