"""Inductive construction of a tagged triangulation whose arcs all rotate by one flip.

Every admissible surface is reached from one of five basic surfaces by adding
boundary components, then marked points, then punctures. Each addition is
performed inside a triangle that has a boundary segment as a side, and every
new arc either joins two distinct marked points with at least one on the
boundary, or is a loop at a boundary point that stays essential.
"""

import logging
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import networkx as nx

from ..errors import TagrotError, internal_error, unknown_arc
from ..surface import (
    BoundaryPoint,
    BoundarySegment,
    MarkedSurface,
    Puncture,
    enumerate_surfaces,
    require_valid,
)
from ..triangulation import IdealTriangulation, TaggedTriangulation, Triangle, tagged_arc
from .reports import SuiteReport

logger = logging.getLogger(__name__)


class SurfaceCase(str, Enum):
    """Which basic surface the construction starts from."""

    POSITIVE_GENUS = "I"
    SEVERAL_BOUNDARIES = "II"
    SEVERAL_PUNCTURES = "III"
    ONE_PUNCTURE = "IV"
    POLYGON = "V"
    MONOGON = "monogon"


class Addition(str, Enum):
    COMPONENT = "component"
    POINT = "point"
    PUNCTURE = "puncture"


class ArcType(str, Enum):
    """How an arc of a triangulation is rotated by a single flip."""

    TWO_BOUNDARY_ENDS = "two-boundary-ends"
    BOUNDARY_PUNCTURE = "boundary-puncture"
    ESSENTIAL_LOOP = "essential-loop"
    OTHER = "other"


@dataclass(frozen=True)
class BuildStep:
    kind: Addition
    target: int

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.target}"


@dataclass(frozen=True)
class BuildPlan:
    """Basic surface and the additions leading to ``surface``."""

    surface: MarkedSurface
    case: SurfaceCase
    basic: MarkedSurface
    steps: tuple[BuildStep, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "surface": str(self.surface),
            "case": self.case.value,
            "basic": str(self.basic),
            "steps": [str(s) for s in self.steps],
        }


def _basic_surface(surface: MarkedSurface) -> tuple[SurfaceCase, MarkedSurface]:
    g, b, p, m = surface.genus, surface.b, surface.punctures, surface.m
    if g > 0:
        return SurfaceCase.POSITIVE_GENUS, MarkedSurface(g, (1,), 0)
    if b >= 2:
        return SurfaceCase.SEVERAL_BOUNDARIES, MarkedSurface(0, (1, 1), 0)
    if p >= 2:
        return SurfaceCase.SEVERAL_PUNCTURES, MarkedSurface(0, (1,), 2)
    if p == 1 and m >= 2:
        return SurfaceCase.ONE_PUNCTURE, MarkedSurface(0, (2,), 1)
    if p == 1:
        return SurfaceCase.MONOGON, MarkedSurface(0, (1,), 1)
    return SurfaceCase.POLYGON, MarkedSurface(0, (4,), 0)


def canonical_build_plan(surface: MarkedSurface) -> BuildPlan:
    """Basic case and ordered additions for ``surface``.

    Raises:
        TagrotError: INVALID_SURFACE when the standing assumptions fail.
    """
    require_valid(surface)
    case, basic = _basic_surface(surface)
    steps = [BuildStep(Addition.COMPONENT, y) for y in range(basic.b, surface.b)]
    for y, m in enumerate(surface.boundaries):
        have = basic.boundaries[y] if y < basic.b else 1
        steps.extend(BuildStep(Addition.POINT, y) for _ in range(m - have))
    steps.extend(BuildStep(Addition.PUNCTURE, k) for k in range(basic.punctures, surface.punctures))
    return BuildPlan(surface, case, basic, tuple(steps))


@dataclass(frozen=True)
class _Seg:
    """Boundary segment leaving builder point ``start``."""

    start: int


_Side = int | _Seg
_Corner = int | Puncture


@dataclass
class _Builder:
    """Triangles over builder point ids; arcs are numbered in creation order."""

    triangles: list[tuple[tuple[_Side, _Side, _Side], tuple[_Corner, _Corner, _Corner]]] = field(
        default_factory=list
    )
    succ: dict[int, int] = field(default_factory=dict)
    component_of: dict[int, int] = field(default_factory=dict)
    first_point: list[int] = field(default_factory=list)
    next_arc: int = 1
    next_puncture: int = 0

    def component(self) -> int:
        point = len(self.component_of)
        self.component_of[point] = len(self.first_point)
        self.first_point.append(point)
        self.succ[point] = point
        return point

    def arc(self) -> int:
        self.next_arc += 1
        return self.next_arc - 1

    def puncture(self) -> Puncture:
        self.next_puncture += 1
        return Puncture(self.next_puncture - 1)

    def add(self, sides: tuple[_Side, _Side, _Side], corners: tuple[_Corner, _Corner, _Corner]) -> None:
        self.triangles.append((sides, corners))

    def boundary_triangle(self, component: int | None = None, prefer_new_apex: bool = False) -> int:
        """Index of a triangle with a boundary segment, rotated so that segment is first."""
        fallback = None
        for idx, (sides, corners) in enumerate(self.triangles):
            if len(set(sides)) < 3:
                continue
            for i, side in enumerate(sides):
                if not isinstance(side, _Seg):
                    continue
                if component is not None and self.component_of[side.start] != component:
                    continue
                rotated = (
                    (sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3]),
                    (corners[i], corners[(i + 1) % 3], corners[(i + 2) % 3]),
                )
                if not prefer_new_apex or rotated[1][2] != rotated[1][0]:
                    self.triangles[idx] = rotated
                    return idx
                if fallback is None:
                    fallback = (idx, rotated)
        if fallback is None:
            raise internal_error("no triangle with a boundary segment to add into")
        idx, rotated = fallback
        self.triangles[idx] = rotated
        return idx

    def add_point(self, component: int) -> None:
        idx = self.boundary_triangle(component)
        (s, x, y), (a, b, apex) = self.triangles.pop(idx)
        assert isinstance(s, _Seg) and isinstance(a, int)
        c = len(self.component_of)
        self.component_of[c] = component
        self.succ[a], self.succ[c] = c, b  # type: ignore[assignment]
        k = self.arc()
        self.add((s, k, y), (a, c, apex))
        self.add((_Seg(c), x, k), (c, b, apex))

    def add_component(self) -> None:
        idx = self.boundary_triangle()
        (s, x, y), (a, b, apex) = self.triangles.pop(idx)
        c = self.component()
        e1, e2, f1, f2 = self.arc(), self.arc(), self.arc(), self.arc()
        self.add((s, e1, e2), (a, b, c))
        self.add((x, f1, e1), (b, apex, c))
        self.add((y, e2, f2), (apex, a, c))
        self.add((f1, f2, _Seg(c)), (c, apex, c))

    def add_puncture(self) -> None:
        idx = self.boundary_triangle(prefer_new_apex=True)
        (s, x, y), (a, b, apex) = self.triangles.pop(idx)
        d = self.puncture()
        h, loop, radius = self.arc(), self.arc(), self.arc()
        self.add((s, x, h), (a, b, apex))
        self.add((h, y, loop), (a, apex, a))
        self.add((loop, radius, radius), (a, a, d))

    def finish(self, surface: MarkedSurface) -> TaggedTriangulation:
        names: dict[int, BoundaryPoint] = {}
        for component, first in enumerate(self.first_point):
            point, index = first, 0
            while True:
                names[point] = BoundaryPoint(component, index)
                point, index = self.succ[point], index + 1
                if point == first:
                    break

        def side(s: _Side) -> int | BoundarySegment:
            if isinstance(s, _Seg):
                name = names[s.start]
                return BoundarySegment(name.component, name.index)
            return s

        def corner(c: _Corner) -> BoundaryPoint | Puncture:
            return c if isinstance(c, Puncture) else names[c]

        triangles = [
            Triangle(
                (side(sides[0]), side(sides[1]), side(sides[2])),
                (corner(corners[0]), corner(corners[1]), corner(corners[2])),
            )
            for sides, corners in self.triangles
        ]
        return TaggedTriangulation.plain(IdealTriangulation.create(surface, triangles))


def _start_genus(builder: _Builder, genus: int) -> None:
    """Fan of the 4g-gon with the boundary inserted into the middle diagonal."""
    a = builder.component()
    edges: list[int] = [0] * (4 * genus)
    for j in range(genus):
        first, second = builder.arc(), builder.arc()
        edges[4 * j] = edges[4 * j + 2] = first
        edges[4 * j + 1] = edges[4 * j + 3] = second
    last = 4 * genus - 1
    into: dict[int, int] = {}
    out: dict[int, int] = {}
    for k in range(2, last):
        into[k] = out[k] = builder.arc()
    into[2 * genus], out[2 * genus] = into[2 * genus], builder.arc()
    for k in range(1, last):
        first_side = edges[0] if k == 1 else out[k]
        last_side = edges[last] if k + 1 == last else into[k + 1]
        builder.add((first_side, edges[k], last_side), (a, a, a))
    builder.add((_Seg(a), into[2 * genus], out[2 * genus]), (a, a, a))


def _start_annulus(builder: _Builder) -> None:
    a, c = builder.component(), builder.component()
    x, y = builder.arc(), builder.arc()
    builder.add((_Seg(a), y, x), (a, a, c))
    builder.add((_Seg(c), y, x), (c, c, a))


def _start_two_punctures(builder: _Builder) -> None:
    a = builder.component()
    p1, p2 = builder.puncture(), builder.puncture()
    a1, a2, loop, radius = builder.arc(), builder.arc(), builder.arc(), builder.arc()
    builder.add((_Seg(a), a1, a2), (a, a, p1))
    builder.add((a2, a1, loop), (a, p1, a))
    builder.add((loop, radius, radius), (a, a, p2))


def _start_punctured_digon(builder: _Builder) -> None:
    a0 = builder.component()
    a1 = len(builder.component_of)
    builder.component_of[a1] = 0
    builder.succ[a0], builder.succ[a1] = a1, a0
    p = builder.puncture()
    r0, r1 = builder.arc(), builder.arc()
    builder.add((_Seg(a0), r1, r0), (a0, a1, p))
    builder.add((_Seg(a1), r0, r1), (a1, a0, p))


def _start_square(builder: _Builder) -> None:
    points = [builder.component()]
    for _ in range(3):
        point = len(builder.component_of)
        builder.component_of[point] = 0
        points.append(point)
    for k, point in enumerate(points):
        builder.succ[point] = points[(k + 1) % 4]
    d = builder.arc()
    p0, p1, p2, p3 = points
    builder.add((_Seg(p0), _Seg(p1), d), (p0, p1, p2))
    builder.add((d, _Seg(p2), _Seg(p3)), (p0, p2, p3))


def _start_monogon(builder: _Builder) -> None:
    a = builder.component()
    p = builder.puncture()
    r = builder.arc()
    builder.add((_Seg(a), r, r), (a, a, p))


def build_canonical_triangulation(surface: MarkedSurface) -> TaggedTriangulation:
    """Tagged triangulation whose arcs all have two distinct ends with one on the boundary,
    or are essential loops at a boundary point.

    Raises:
        TagrotError: INVALID_SURFACE for surfaces failing the standing assumptions.
    """
    plan = canonical_build_plan(surface)
    builder = _Builder()
    if plan.case is SurfaceCase.POSITIVE_GENUS:
        _start_genus(builder, surface.genus)
    elif plan.case is SurfaceCase.SEVERAL_BOUNDARIES:
        _start_annulus(builder)
    elif plan.case is SurfaceCase.SEVERAL_PUNCTURES:
        _start_two_punctures(builder)
    elif plan.case is SurfaceCase.ONE_PUNCTURE:
        _start_punctured_digon(builder)
    elif plan.case is SurfaceCase.MONOGON:
        _start_monogon(builder)
    else:
        _start_square(builder)

    for step in plan.steps:
        if step.kind is Addition.COMPONENT:
            builder.add_component()
        elif step.kind is Addition.POINT:
            builder.add_point(step.target)
        else:
            builder.add_puncture()
    t = builder.finish(surface)
    logger.debug(f"Built canonical triangulation of {surface} from case {plan.case.value} in {len(plan.steps)} steps")
    return t


def _dual_graph(base: IdealTriangulation) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(base.triangles)))
    for slot in base.slots:
        (t1, _), (t2, _) = base.occurrences(slot)
        graph.add_edge(t1, t2, key=slot)
    return graph


def _piece_genus(base: IdealTriangulation, piece: set[int]) -> int:
    """Genus of the subsurface formed by the triangles in ``piece``."""
    corners = nx.Graph()
    corners.add_nodes_from((t, i) for t in piece for i in range(3))
    internal = 0
    for slot in base.slots:
        occ = base.occurrences(slot)
        if all(t in piece for t, _ in occ):
            internal += 1
            (t, i), (u, j) = occ
            corners.add_edge((t, i), (u, (j + 1) % 3))
            corners.add_edge((t, (i + 1) % 3), (u, j))
    vertex = {}
    for k, component in enumerate(nx.connected_components(corners)):
        for node in component:
            vertex[node] = k

    boundary = nx.MultiGraph()
    boundary_edges = 0
    for t in piece:
        tri = base.triangles[t]
        for i, side in enumerate(tri.sides):
            inside = isinstance(side, int) and all(u in piece for u, _ in base.occurrences(side))
            if not inside:
                boundary_edges += 1
                boundary.add_edge(vertex[(t, i)], vertex[(t, (i + 1) % 3)])
    euler = (len(set(vertex.values()))) - (internal + boundary_edges) + len(piece)
    holes = nx.number_connected_components(boundary) if boundary_edges else 0
    return (2 - euler - holes) // 2


def classify_arc_type(t: TaggedTriangulation, slot: int) -> ArcType:
    """Classify the tagged arc in ``slot``.

    A loop at a boundary point counts as essential when cutting along it leaves
    the surface connected, or when both sides carry genus.

    Raises:
        TagrotError: UNKNOWN_ARC if ``slot`` is not a slot of ``t``.
    """
    if slot not in t.base.slots:
        raise unknown_arc(slot, list(t.base.slots))
    arc = tagged_arc(t, slot)
    u, v = arc.endpoints
    if u != v:
        kinds = {type(u), type(v)}
        if kinds == {BoundaryPoint}:
            return ArcType.TWO_BOUNDARY_ENDS
        if kinds == {BoundaryPoint, Puncture}:
            return ArcType.BOUNDARY_PUNCTURE
        return ArcType.OTHER
    if isinstance(u, Puncture):
        return ArcType.OTHER

    graph = _dual_graph(t.base)
    (t1, _), (t2, _) = t.base.occurrences(slot)
    graph.remove_edge(t1, t2, key=slot)
    if nx.is_connected(graph):
        return ArcType.ESSENTIAL_LOOP
    sides = [nx.node_connected_component(graph, t1), nx.node_connected_component(graph, t2)]
    if all(_piece_genus(t.base, side) >= 1 for side in sides):
        return ArcType.ESSENTIAL_LOOP
    return ArcType.OTHER


def classify_arcs(t: TaggedTriangulation) -> dict[int, ArcType]:
    return {slot: classify_arc_type(t, slot) for slot in t.base.slots}


def _sweep_one(surface: MarkedSurface) -> tuple[MarkedSurface, dict[str, Any]]:
    try:
        t = build_canonical_triangulation(surface)
    except TagrotError as e:
        return surface, {"built": False, "error": e.message}
    types = classify_arcs(t)
    other = sorted(slot for slot, kind in types.items() if kind is ArcType.OTHER)
    counts: dict[str, int] = {}
    for kind in types.values():
        counts[kind.value] = counts.get(kind.value, 0) + 1
    return surface, {"built": True, "arcs": t.n, "types": counts, "other": other}


def canonical_sweep(
    surfaces: Iterable[MarkedSurface] | None = None,
    max_rank: int = 8,
    max_genus: int = 2,
    max_boundaries: int = 3,
    max_punctures: int = 2,
    workers: int = 1,
) -> SuiteReport:
    """Build and classify the canonical triangulation of every surface in the range."""
    if surfaces is None:
        surfaces = enumerate_surfaces(max_rank, max_genus, max_boundaries, max_punctures)
    pending = list(surfaces)
    logger.info(f"Canonical sweep over {len(pending)} surfaces with {workers} worker(s)")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_sweep_one, pending))
    else:
        results = [_sweep_one(s) for s in pending]

    report = SuiteReport("canonical-sweep")
    for surface, details in results:
        report.add(str(surface), details["built"] and not details.get("other"), **details)
    if not report.passed:
        logger.warning(f"Canonical sweep: {len(report.failures)} surface(s) failed")
    return report
