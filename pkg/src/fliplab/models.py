"""Exactly computable arc models.

Three surfaces are supported:

* ``polygon:n``  -- a disk with ``n >= 4`` marked points on its boundary,
  arcs are chords ``C(i,j)``;
* ``ppolygon:n`` -- the same disk with one interior puncture ``P``; arcs are
  boundary-to-boundary chords ``PC(i,j,s)``, radial arcs ``R(i)`` ending at
  the puncture, and loops ``L(i)`` based at ``i`` enclosing only ``P``;
* ``torus``      -- the once-punctured torus, arcs are slopes ``p/q``.

Boundary vertices are numbered ``0..n-1`` counterclockwise. For the
punctured polygon a chord between ``i < j`` splits the boundary circle into
``A = (i, j)`` and ``B = (j, i)``; ``PC(i,j,0)`` has the puncture on the
``A`` side, ``PC(i,j,1)`` on the ``B`` side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Union

from .surface import SurfaceSig, complexity

POLYGON = "polygon"
PPOLYGON = "ppolygon"
TORUS = "torus"

PUNCTURE = "P"


class ModelError(Exception):
    pass


class ModelMismatch(ModelError):
    pass


class Unbounded(ModelError):
    """The requested object is infinite for this model."""


class NotFlippable(ModelError):
    pass


class ArcNotInTriangulation(ModelError):
    pass


@dataclass(frozen=True)
class Model:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind == POLYGON and self.n < 4:
            raise ModelError(f"polygon needs n >= 4, got {self.n}")
        if self.kind == PPOLYGON and self.n < 3:
            raise ModelError(f"punctured polygon needs n >= 3, got {self.n}")
        if self.kind == TORUS and self.n != 0:
            raise ModelError("torus model takes no size parameter")
        if self.kind not in (POLYGON, PPOLYGON, TORUS):
            raise ModelError(f"unknown model kind {self.kind!r}")

    @classmethod
    def polygon(cls, n: int) -> "Model":
        return cls(POLYGON, n)

    @classmethod
    def ppolygon(cls, n: int) -> "Model":
        return cls(PPOLYGON, n)

    @classmethod
    def torus(cls) -> "Model":
        return cls(TORUS)

    @classmethod
    def parse(cls, text: str) -> "Model":
        text = text.strip().lower()
        if text == TORUS:
            return cls.torus()
        kind, sep, num = text.partition(":")
        if not sep or kind not in (POLYGON, PPOLYGON):
            raise ModelError(f"bad model spec {text!r}; expected polygon:N, ppolygon:N or torus")
        try:
            n = int(num)
        except ValueError:
            raise ModelError(f"bad model size in {text!r}") from None
        return cls(kind, n)

    @property
    def surface(self) -> SurfaceSig:
        if self.kind == POLYGON:
            return SurfaceSig(0, 0, (self.n,))
        if self.kind == PPOLYGON:
            return SurfaceSig(0, 1, (self.n,))
        return SurfaceSig(1, 1)

    @property
    def complexity(self) -> int:
        return complexity(self.surface)

    @property
    def is_finite(self) -> bool:
        return self.kind != TORUS

    @property
    def boundary_segments(self) -> int:
        return 0 if self.kind == TORUS else self.n

    def __str__(self):
        return TORUS if self.kind == TORUS else f"{self.kind}:{self.n}"


def model_for_surface(sig: SurfaceSig) -> Model | None:
    """The implemented model realizing ``sig``, if any."""
    if sig.genus == 0 and len(sig.boundary_marks) == 1:
        n = sig.boundary_marks[0]
        if sig.interior_marks == 0 and n >= 4:
            return Model.polygon(n)
        if sig.interior_marks == 1 and n >= 3:
            return Model.ppolygon(n)
    if sig.genus == 1 and sig.interior_marks == 1 and not sig.boundary_marks:
        return Model.torus()
    return None


# ---------------------------------------------------------------------------
# Arcs

class Arc:
    """Base class of canonical arc encodings; ordered by ``key``."""

    family: str = ""
    _rank: int = 0

    def key(self) -> tuple:
        raise NotImplementedError

    def endpoints(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other):
        if not isinstance(other, Arc):
            return NotImplemented
        return self.key() < other.key()


@dataclass(frozen=True, eq=True)
class Chord(Arc):
    i: int
    j: int
    family = POLYGON
    _rank = 0

    def __post_init__(self):
        if self.i == self.j:
            raise ModelError("chord endpoints must differ")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)

    def key(self):
        return (self._rank, self.i, self.j)

    def endpoints(self):
        return (self.i, self.j)

    def __str__(self):
        return f"C({self.i},{self.j})"


@dataclass(frozen=True, eq=True)
class PChord(Arc):
    i: int
    j: int
    side: int
    family = PPOLYGON
    _rank = 1

    def __post_init__(self):
        if self.i == self.j:
            raise ModelError("use Loop for arcs from a vertex to itself")
        if self.side not in (0, 1):
            raise ModelError(f"side must be 0 or 1, got {self.side}")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)
            object.__setattr__(self, "side", 1 - self.side)

    def key(self):
        return (self._rank, self.i, self.j, self.side)

    def endpoints(self):
        return (self.i, self.j)

    def __str__(self):
        return f"PC({self.i},{self.j},{self.side})"


@dataclass(frozen=True, eq=True)
class Radial(Arc):
    i: int
    family = PPOLYGON
    _rank = 2

    def key(self):
        return (self._rank, self.i)

    def endpoints(self):
        return (self.i, PUNCTURE)

    def __str__(self):
        return f"R({self.i})"


@dataclass(frozen=True, eq=True)
class Loop(Arc):
    i: int
    family = PPOLYGON
    _rank = 3

    def key(self):
        return (self._rank, self.i)

    def endpoints(self):
        return (self.i, self.i)

    def __str__(self):
        return f"L({self.i})"


@dataclass(frozen=True, eq=True)
class Slope(Arc):
    p: int
    q: int
    family = TORUS
    _rank = 4

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ModelError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def key(self):
        return (self._rank, self.p, self.q)

    def endpoints(self):
        return (PUNCTURE, PUNCTURE)

    def __str__(self):
        return f"{self.p}/{self.q}"


ArcT = Union[Chord, PChord, Radial, Loop, Slope]


def canonical(arc: Arc) -> Arc:
    """Rebuild ``arc`` through its constructor (identity on canonical arcs)."""
    if isinstance(arc, Chord):
        return Chord(arc.i, arc.j)
    if isinstance(arc, PChord):
        return PChord(arc.i, arc.j, arc.side)
    if isinstance(arc, Radial):
        return Radial(arc.i)
    if isinstance(arc, Loop):
        return Loop(arc.i)
    if isinstance(arc, Slope):
        return Slope(arc.p, arc.q)
    raise TypeError(f"not an arc: {arc!r}")


_ARC_PATTERNS = [
    (re.compile(r"^C\((-?\d+),(-?\d+)\)$"), lambda g: Chord(int(g[0]), int(g[1]))),
    (re.compile(r"^PC\((-?\d+),(-?\d+),(-?\d+)\)$"),
     lambda g: PChord(int(g[0]), int(g[1]), int(g[2]))),
    (re.compile(r"^R\((-?\d+)\)$"), lambda g: Radial(int(g[0]))),
    (re.compile(r"^L\((-?\d+)\)$"), lambda g: Loop(int(g[0]))),
    (re.compile(r"^(-?\d+)/(-?\d+)$"), lambda g: Slope(int(g[0]), int(g[1]))),
]

_ARC_TOKEN = re.compile(r"PC\([^)]*\)|C\([^)]*\)|R\([^)]*\)|L\([^)]*\)|-?\d+/-?\d+")


def parse_arc(text: str) -> Arc:
    s = text.replace(" ", "")
    for pat, build in _ARC_PATTERNS:
        m = pat.match(s)
        if m:
            return build(m.groups())
    raise ModelError(f"cannot parse arc {text!r}")


def parse_arcs(text: str) -> list[Arc]:
    """Parse every arc token in ``text`` (e.g. ``"{C(0,2),C(0,3)}"``)."""
    return [parse_arc(tok) for tok in _ARC_TOKEN.findall(text.replace(" ", ""))]


def arc_in_model(model: Model, arc: Arc) -> bool:
    """True iff ``arc`` is a canonical essential arc of ``model``."""
    if arc.family != model.kind or canonical(arc) != arc:
        return False
    if model.kind == TORUS:
        return True
    n = model.n
    if isinstance(arc, (Radial, Loop)):
        return 0 <= arc.i < n
    if not (0 <= arc.i < arc.j < n):
        return False
    if isinstance(arc, Chord):
        return arc.j - arc.i >= 2 and arc.j - arc.i <= n - 2
    # the puncture-free side must hold a marked point
    if arc.side == 0:
        return arc.i + n - arc.j >= 2
    return arc.j - arc.i >= 2


def all_arcs(model: Model) -> list[Arc]:
    """Every canonical essential arc of a finite model, sorted."""
    if model.kind == TORUS:
        raise Unbounded("the once-punctured torus has infinitely many arcs")
    n = model.n
    out: list[Arc] = []
    if model.kind == POLYGON:
        out = [Chord(i, j) for i in range(n) for j in range(i + 2, n) if j - i <= n - 2]
    else:
        for i in range(n):
            for j in range(i + 1, n):
                for s in (0, 1):
                    a = PChord(i, j, s)
                    if arc_in_model(model, a):
                        out.append(a)
        out += [Radial(i) for i in range(n)]
        out += [Loop(i) for i in range(n)]
    return sorted(out)


def rotate(arc: Arc, n: int, k: int) -> Arc:
    """Rotate a polygon / punctured-polygon arc by ``k`` steps."""
    if isinstance(arc, Chord):
        return Chord((arc.i + k) % n, (arc.j + k) % n)
    if isinstance(arc, PChord):
        # side is relative to the ccw interval from the first endpoint;
        # the constructor renormalizes if the rotation reverses i < j
        return PChord((arc.i + k) % n, (arc.j + k) % n, arc.side)
    if isinstance(arc, Radial):
        return Radial((arc.i + k) % n)
    if isinstance(arc, Loop):
        return Loop((arc.i + k) % n)
    raise ModelMismatch(f"cannot rotate {arc}")


# ---------------------------------------------------------------------------
# Disjointness

def _strictly_between(a: int, x: int, b: int) -> bool:
    return a < x < b


def _free_side(arc: Arc, m: int) -> frozenset[int]:
    """Puncture-free side of a boundary-to-boundary punctured-polygon arc.

    Positions live on a circle of length ``2m``: vertex ``k`` at ``2k``,
    the segment ``(k, k+1)`` at ``2k+1``. Any ``m`` exceeding every index
    gives the same containment relations.
    """
    if isinstance(arc, Loop):
        return frozenset(x for x in range(2 * m) if x != 2 * arc.i)
    assert isinstance(arc, PChord)
    lo, hi = (arc.j, arc.i + m) if arc.side == 0 else (arc.i, arc.j)
    return frozenset(x % (2 * m) for x in range(2 * lo + 1, 2 * hi))


def disjoint(a: Arc, b: Arc) -> bool:
    """True iff the two arc classes have representatives with disjoint interiors.

    Shared endpoints do not count as intersections.
    """
    if a.family != b.family:
        raise ModelMismatch(f"{a} and {b} come from different models")
    if a == b:
        return True
    if isinstance(a, Slope):
        return abs(a.p * b.q - a.q * b.p) <= 1
    if isinstance(a, Chord):
        inside = (_strictly_between(a.i, b.i, a.j), _strictly_between(a.i, b.j, a.j))
        return inside[0] == inside[1] or b.i in (a.i, a.j) or b.j in (a.i, a.j)
    if isinstance(a, Radial) and isinstance(b, Radial):
        return True
    m = 1 + max(x for arc in (a, b) for x in arc.endpoints() if x != PUNCTURE)
    if isinstance(b, Radial):
        a, b = b, a
    if isinstance(a, Radial):
        return 2 * a.i not in _free_side(b, m)
    ja, jb = _free_side(a, m), _free_side(b, m)
    return ja <= jb or jb <= ja or not (ja & jb)


# ---------------------------------------------------------------------------
# Triangulations

@dataclass(frozen=True)
class Triangulation:
    model: Model
    arcs: tuple

    def __post_init__(self):
        arcs = tuple(sorted(set(self.arcs)))
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def of(cls, model: Model, arcs: Iterable[Arc]) -> "Triangulation":
        return cls(model, tuple(arcs))

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __contains__(self, arc):
        return arc in self.arcs

    def arcset(self) -> frozenset:
        return frozenset(self.arcs)

    def replace(self, old: Arc, new: Arc) -> "Triangulation":
        return Triangulation(self.model, tuple(a for a in self.arcs if a != old) + (new,))

    def serialize(self) -> str:
        return "{" + ",".join(str(a) for a in self.arcs) + "}"

    def __str__(self):
        return self.serialize()

    def to_json(self) -> dict:
        return {"model": str(self.model), "arcs": [str(a) for a in self.arcs]}

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        return cls.of(Model.parse(data["model"]), [parse_arc(s) for s in data["arcs"]])


def _torus_common_neighbors(x: Slope, y: Slope) -> tuple[Slope, Slope]:
    return (Slope(x.p + y.p, x.q + y.q), Slope(x.p - y.p, x.q - y.q))


def is_triangulation(model: Model, arcs: Iterable[Arc]) -> bool:
    arcs = list(arcs)
    aset = set(arcs)
    if len(aset) != len(arcs) or not all(arc_in_model(model, a) for a in arcs):
        return False
    if any(not disjoint(a, b) for k, a in enumerate(arcs) for b in arcs[k + 1:]):
        return False
    if len(arcs) != model.complexity:
        return False
    if model.kind == TORUS:
        # any slope adjacent to two Farey neighbours x, y is one of x +- y
        for k, x in enumerate(arcs):
            for y in arcs[k + 1:]:
                for c in _torus_common_neighbors(x, y):
                    if c not in aset and all(disjoint(c, z) for z in arcs):
                        return False
        return True
    return not any(a not in aset and all(disjoint(a, b) for b in arcs)
                   for a in all_arcs(model))


def triangulation(model: Model, arcs: Iterable[Arc]) -> Triangulation:
    t = Triangulation.of(model, arcs)
    if not is_triangulation(model, t.arcs):
        raise ModelError(f"{t} is not a triangulation of {model}")
    return t


def base_triangulation(model: Model) -> Triangulation:
    n = model.n
    if model.kind == POLYGON:
        return Triangulation.of(model, [Chord(0, k) for k in range(2, n - 1)])
    if model.kind == PPOLYGON:
        # self-folded pair at 0, fan from the corner of the loop at 0
        arcs: list[Arc] = [Loop(0), Radial(0)]
        arcs += [PChord(0, k, 1) for k in range(2, n)]
        return Triangulation.of(model, arcs)
    return Triangulation.of(model, [Slope(0, 1), Slope(1, 0), Slope(1, 1)])


# ---------------------------------------------------------------------------
# Faces

@dataclass(frozen=True)
class BoundarySegment:
    i: int
    j: int

    def __str__(self):
        return f"B({self.i},{self.j})"


@dataclass(frozen=True)
class Face:
    """A triangle of a triangulation.

    ``sides[k]`` joins ``corners[k]`` and ``corners[k+1]``.
    """

    sides: tuple
    corners: tuple = field(default=())

    @property
    def self_folded(self) -> bool:
        arcs = [s for s in self.sides if isinstance(s, Arc)]
        return len(set(arcs)) < len(arcs)

    @property
    def inner_arc(self) -> Arc | None:
        seen = set()
        for s in self.sides:
            if isinstance(s, Arc) and s in seen:
                return s
            seen.add(s)
        return None

    @property
    def outer_arc(self):
        inner = self.inner_arc
        if inner is None:
            return None
        return next(s for s in self.sides if s != inner)

    def opposite_corner(self, k: int):
        return self.corners[(k + 2) % 3]

    def side_set(self) -> frozenset:
        return frozenset(self.sides)


def _dart_key(arc: Arc, end: int, n: int):
    """Angular key of an arc end at a boundary vertex.

    Ends at vertex ``k`` are ordered counterclockwise from the segment
    ``(k, k+1)`` to the segment ``(k-1, k)``. A chord end is keyed by the
    boundary it cuts off on its counterclockwise side; ends cutting off the
    puncture come after the puncture's own arcs.
    """
    if isinstance(arc, Radial):
        return (1, 1)
    if isinstance(arc, Loop):
        return (1, 0) if end == 0 else (1, 2)
    # chord i<j: from i the ccw side is A, from j it is B
    width = (arc.j - arc.i) % n if end == 0 else (arc.i - arc.j) % n
    punct = False
    if isinstance(arc, PChord):
        punct = (arc.side == 0) if end == 0 else (arc.side == 1)
    return (2 if punct else 0, width)


def faces(t: Triangulation) -> list[Face]:
    """Triangles of ``t``, traced as face cycles of its combinatorial map."""
    model = t.model
    if model.kind == TORUS:
        a, b, c = t.arcs
        return [Face((a, b, c), (PUNCTURE,) * 3), Face((a, c, b), (PUNCTURE,) * 3)]
    n = model.n
    # darts are (edge, end); end 0 sits at endpoints()[0]
    rotation: dict = {v: [] for v in range(n)}
    rotation[PUNCTURE] = []
    segs = [BoundarySegment(k, (k + 1) % n) for k in range(n)]

    def vertex(d):
        e, end = d
        if isinstance(e, BoundarySegment):
            return e.i if end == 0 else e.j
        return e.endpoints()[end]

    keyed: dict = {v: [] for v in range(n)}
    for a in t.arcs:
        for end in (0, 1):
            v = a.endpoints()[end]
            if v == PUNCTURE:
                rotation[PUNCTURE].append((a, end))
                continue
            keyed[v].append((_dart_key(a, end, n), (a, end)))
    for v in range(n):
        inner = [d for _, d in sorted(keyed[v], key=lambda kd: kd[0])]
        rotation[v] = [(segs[v], 0)] + inner + [(segs[(v - 1) % n], 1)]
    rotation[PUNCTURE].sort(key=lambda d: d[0].i)

    succ = {}
    wraps = set()
    for v, darts in rotation.items():
        for k, d in enumerate(darts):
            succ[d] = darts[(k + 1) % len(darts)]
            if v != PUNCTURE and k == len(darts) - 1:
                wraps.add(d)

    def phi(d):
        e, end = d
        return succ[(e, 1 - end)]

    seen = set()
    out = []
    for start in sorted(succ, key=lambda d: (str(d[0]), d[1])):
        if start in seen:
            continue
        orbit = [start]
        d = phi(start)
        while d != start:
            orbit.append(d)
            d = phi(d)
        seen.update(orbit)
        if any((e, 1 - end) in wraps for e, end in orbit):
            continue
        if len(orbit) != 3:
            raise ModelError(f"non-triangular face {orbit} in {t}")
        out.append(Face(tuple(e for e, _ in orbit), tuple(vertex(d) for d in orbit)))
    return out


def _check_member(t: Triangulation, a: Arc):
    if a not in t:
        raise ArcNotInTriangulation(f"{a} is not an arc of {t}")


def flippable(t: Triangulation, a: Arc) -> bool:
    _check_member(t, a)
    if t.model.kind == TORUS:
        return True
    return not any(f.inner_arc == a for f in faces(t))


def _arcs_between(model: Model, u, w) -> list[Arc]:
    ends = sorted([u, w], key=str)
    return [a for a in all_arcs(model) if sorted(a.endpoints(), key=str) == ends]


def flip(t: Triangulation, a: Arc) -> tuple[Triangulation, Arc]:
    """Replace ``a`` by the other diagonal of its quadrilateral."""
    _check_member(t, a)
    if t.model.kind == TORUS:
        x, y = (b for b in t.arcs if b != a)
        new = next(c for c in _torus_common_neighbors(x, y) if c != a)
        return t.replace(a, new), new
    adjacent = [f for f in faces(t) if a in f.sides]
    if len(adjacent) != 2 or any(f.self_folded and f.inner_arc == a for f in adjacent):
        raise NotFlippable(f"{a} is the inner arc of a self-folded triangle in {t}")
    u, w = (f.opposite_corner(f.sides.index(a)) for f in adjacent)
    rest = [b for b in t.arcs if b != a]
    cands = [c for c in _arcs_between(t.model, u, w)
             if c != a and c not in rest and all(disjoint(c, b) for b in rest)]
    if len(cands) != 1:
        raise ModelError(f"flip of {a} in {t} has {len(cands)} candidate diagonals")
    new = cands[0]
    return t.replace(a, new), new


def flippable_arcs(t: Triangulation) -> list[Arc]:
    if t.model.kind == TORUS:
        return list(t.arcs)
    inner = {f.inner_arc for f in faces(t)}
    return [a for a in t.arcs if a not in inner]


def neighbors(t: Triangulation) -> list[tuple[Arc, Arc, Triangulation]]:
    """``(removed, added, t')`` for every flip of ``t``."""
    out = []
    for a in flippable_arcs(t):
        t2, new = flip(t, a)
        out.append((a, new, t2))
    return out
