"""Marked surfaces: descriptors, validity, rank and cluster-type classification."""

import re
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Any, Literal

from .errors import invalid_surface

_SURFACE_PATTERN = re.compile(
    r"^\s*(?P<g>\d+)\s*,\s*(?P<b>\d+)\s*:\s*\[(?P<ms>[\d\s,]*)\]\s*,\s*(?P<p>\d+)\s*$"
)


@dataclass(frozen=True, order=True)
class BoundaryPoint:
    """Marked point ``index`` on boundary component ``component``."""

    component: int
    index: int

    def __str__(self) -> str:
        return f"m{self.component}.{self.index}"


@dataclass(frozen=True, order=True)
class Puncture:
    """Interior marked point."""

    index: int

    def __str__(self) -> str:
        return f"p{self.index}"


Vertex = BoundaryPoint | Puncture


@dataclass(frozen=True, order=True)
class BoundarySegment:
    """Boundary segment from point ``index`` to point ``index + 1`` of a component.

    The surface lies to the left when the segment is traversed in this direction.
    """

    component: int
    index: int

    def __str__(self) -> str:
        return f"b{self.component}.{self.index}"


def vertex_key(v: Vertex) -> tuple[int, int, int]:
    """Total order on marked points: boundary points first, then punctures."""
    if isinstance(v, BoundaryPoint):
        return (0, v.component, v.index)
    return (1, v.index, 0)


def parse_vertex(text: str) -> Vertex:
    """Inverse of ``str`` on marked points (``m0.3`` or ``p1``)."""
    if text.startswith("m"):
        comp, _, idx = text[1:].partition(".")
        return BoundaryPoint(int(comp), int(idx))
    if text.startswith("p"):
        return Puncture(int(text[1:]))
    raise ValueError(f"not a marked point: {text!r}")


@dataclass(frozen=True)
class MarkedSurface:
    """Genus, marked-point counts per boundary component, and puncture count.

    Construction only normalizes field types; the standing assumptions
    (non-empty boundary, marked point on every component, rank >= 1) are
    checked by :func:`validate` and enforced by :func:`make_surface`.
    """

    genus: int
    boundaries: tuple[int, ...] = field(default=())
    punctures: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundaries", tuple(int(m) for m in self.boundaries))
        if self.genus < 0 or self.punctures < 0:
            raise invalid_surface("genus and puncture count must be non-negative", self)

    @property
    def b(self) -> int:
        return len(self.boundaries)

    @property
    def m(self) -> int:
        return sum(self.boundaries)

    @property
    def rank(self) -> int:
        return rank(self)

    def to_dict(self) -> dict[str, Any]:
        return {
            "genus": self.genus,
            "boundaries": list(self.boundaries),
            "punctures": self.punctures,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MarkedSurface":
        try:
            return cls(
                genus=int(data["genus"]),
                boundaries=tuple(int(m) for m in data["boundaries"]),
                punctures=int(data["punctures"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise invalid_surface(f"malformed surface document: {e}") from e

    def __str__(self) -> str:
        ms = ",".join(str(m) for m in self.boundaries)
        return f"{self.genus},{self.b}:[{ms}],{self.punctures}"


@dataclass(frozen=True)
class SurfaceType:
    """Cluster type of a surface: A(n), D(n), or other."""

    family: Literal["A", "D", "other"]
    rank: int

    def __str__(self) -> str:
        if self.family == "other":
            return "other"
        return f"{self.family}({self.rank})"


def rank(surface: MarkedSurface) -> int:
    """Number of arcs in any (tagged) triangulation: 6g + 3p + 3b + m - 6."""
    return 6 * surface.genus + 3 * surface.punctures + 3 * surface.b + surface.m - 6


def validate(surface: MarkedSurface) -> str | None:
    """Check the standing assumptions.

    Returns:
        None when the surface is admissible, otherwise the violated invariant.
    """
    if surface.b < 1:
        return "empty boundary"
    for i, m in enumerate(surface.boundaries):
        if m < 1:
            return f"boundary component {i} has no marked point"
    n = rank(surface)
    if n < 1:
        return f"rank {n}"
    return None


def make_surface(genus: int, boundaries: tuple[int, ...] | list[int], punctures: int) -> MarkedSurface:
    """Construct a surface, rejecting anything :func:`validate` refuses."""
    surface = MarkedSurface(genus, tuple(boundaries), punctures)
    require_valid(surface)
    return surface


def require_valid(surface: MarkedSurface) -> None:
    reason = validate(surface)
    if reason is not None:
        raise invalid_surface(reason, surface)


def parse_surface(text: str) -> MarkedSurface:
    """Parse the ``g,b:[m1,...,mb],p`` syntax used on the command line."""
    match = _SURFACE_PATTERN.match(text)
    if match is None:
        raise invalid_surface(f"cannot parse {text!r}, expected g,b:[m1,...,mb],p")
    ms = [int(x) for x in match["ms"].replace(" ", "").split(",") if x]
    if len(ms) != int(match["b"]):
        raise invalid_surface(f"b={match['b']} but {len(ms)} marked-point counts given")
    return make_surface(int(match["g"]), ms, int(match["p"]))


def classify_type(surface: MarkedSurface) -> SurfaceType:
    n = rank(surface)
    if surface.genus == 0 and surface.b == 1:
        if surface.punctures == 0 and surface.m == n + 3:
            return SurfaceType("A", n)
        if surface.punctures == 1 and surface.m == n:
            return SurfaceType("D", n)
    return SurfaceType("other", n)


def enumerate_surfaces(
    max_rank: int, max_genus: int = 2, max_boundaries: int = 3, max_punctures: int = 2
) -> list[MarkedSurface]:
    """Admissible surfaces of rank at most ``max_rank``, one per unordered boundary profile.

    Boundary components are listed with non-increasing marked-point counts.
    """
    surfaces = []
    for g in range(max_genus + 1):
        for b in range(1, max_boundaries + 1):
            for p in range(max_punctures + 1):
                budget = max_rank + 6 - 6 * g - 3 * p - 3 * b
                if budget < b:
                    continue
                for ms in combinations_with_replacement(range(budget, 0, -1), b):
                    surface = MarkedSurface(g, ms, p)
                    if sum(ms) <= budget and validate(surface) is None:
                        surfaces.append(surface)
    return sorted(surfaces, key=lambda s: (rank(s), s.genus, s.b, s.punctures, s.boundaries))


def is_annulus(surface: MarkedSurface) -> bool:
    return surface.genus == 0 and surface.b == 2 and surface.punctures == 0


def boundary_points(surface: MarkedSurface) -> list[BoundaryPoint]:
    return [BoundaryPoint(y, k) for y, m in enumerate(surface.boundaries) for k in range(m)]


def boundary_segments(surface: MarkedSurface) -> list[BoundarySegment]:
    return [BoundarySegment(y, k) for y, m in enumerate(surface.boundaries) for k in range(m)]


def punctures_of(surface: MarkedSurface) -> list[Puncture]:
    return [Puncture(i) for i in range(surface.punctures)]


def segment_ends(segment: BoundarySegment, surface: MarkedSurface) -> tuple[BoundaryPoint, BoundaryPoint]:
    m = surface.boundaries[segment.component]
    return (
        BoundaryPoint(segment.component, segment.index),
        BoundaryPoint(segment.component, (segment.index + 1) % m),
    )
