"""Surface signatures S_{g,n,(p_1,...,p_b)} and their complexity."""

from __future__ import annotations

import re
from dataclasses import dataclass


class SignatureError(ValueError):
    """Raised for malformed or invalid surface signatures."""


@dataclass(frozen=True)
class SurfaceSig:
    """Homeomorphism type of a compact orientable surface with marked points.

    ``boundary_marks`` is stored sorted, so two signatures describing the
    same surface compare equal.
    """

    genus: int
    interior_marks: int
    boundary_marks: tuple[int, ...] = ()

    def __post_init__(self):
        marks = tuple(sorted(int(p) for p in self.boundary_marks))
        object.__setattr__(self, "boundary_marks", marks)
        if self.genus < 0:
            raise SignatureError(f"negative genus {self.genus}")
        if self.interior_marks < 0:
            raise SignatureError(f"negative interior mark count {self.interior_marks}")
        if any(p < 1 for p in marks):
            raise SignatureError("every boundary component needs at least one marked point")
        if self.interior_marks + sum(marks) == 0:
            raise SignatureError("surface must carry at least one marked point")

    @property
    def boundary_components(self) -> int:
        return len(self.boundary_marks)

    def __str__(self):
        if not self.boundary_marks:
            return f"S_{{{self.genus},{self.interior_marks}}}"
        ps = ",".join(str(p) for p in self.boundary_marks)
        return f"S_{{{self.genus},{self.interior_marks},({ps})}}"


def complexity(sig: SurfaceSig) -> int:
    """Number of arcs in a triangulation: 6g + 3b + 3n + sum(p_i) - 6."""
    return (6 * sig.genus + 3 * sig.boundary_components + 3 * sig.interior_marks
            + sum(sig.boundary_marks) - 6)


def same_type(a: SurfaceSig, b: SurfaceSig) -> bool:
    return (a.genus == b.genus and a.interior_marks == b.interior_marks
            and sorted(a.boundary_marks) == sorted(b.boundary_marks))


_SIG_RE = re.compile(
    r"^\s*S_\{\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*\(\s*([\d\s,]*)\)\s*)?\}\s*$")


def parse_signature(text: str) -> SurfaceSig:
    """Parse ``S_{g,n}`` or ``S_{g,n,(p1,...,pb)}``."""
    m = _SIG_RE.match(text)
    if m is None:
        raise SignatureError(f"cannot parse surface signature {text!r}")
    g, n, ps = m.groups()
    marks: tuple[int, ...] = ()
    if ps is not None and ps.strip():
        try:
            marks = tuple(int(p) for p in ps.split(","))
        except ValueError:
            raise SignatureError(f"bad boundary list in {text!r}") from None
    return SurfaceSig(int(g), int(n), marks)
