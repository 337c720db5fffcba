"""Triangulations in the explicit models and their bridge to tagged triangulations.

A model triangulation is a tuple of pairwise compatible model arcs; the arc at
position ``k - 1`` occupies slot ``k``. :meth:`ModelTriangulation.tagged` builds
the triangles of the same triangulation so that every combinatorial operation
(flips, B-matrices, the rotation action) can be cross-checked against the model.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from ..errors import internal_error, invalid_triangulation, unknown_arc, unsupported_surface
from ..mcg import MappingClassElement, tagged_rotation
from ..surface import BoundaryPoint, BoundarySegment, MarkedSurface, Puncture, rank
from ..triangulation import IdealTriangulation, Side, TaggedTriangulation, Triangle
from .arcs import (
    AnnulusBridge,
    AnnulusPeripheral,
    ModelArc,
    ModelFamily,
    PolygonArc,
    PuncturedChord,
    Radius,
    apply_element,
    arc_sort_key,
    bridge_from_lift,
    check_arc,
    compatible,
    enumerate_arcs,
    model_family,
    peripheral_arcs,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelTriangulation:
    """Pairwise compatible model arcs in slot order."""

    surface: MarkedSurface
    arcs: tuple[ModelArc, ...]

    @classmethod
    def create(cls, surface: MarkedSurface, arcs: Iterable[ModelArc]) -> "ModelTriangulation":
        """Validate size, normal forms and pairwise compatibility.

        Raises:
            TagrotError: INVALID_TRIANGULATION when the arcs do not form a triangulation.
        """
        arcs = tuple(arcs)
        n = rank(surface)
        if len(arcs) != n or len(set(arcs)) != n:
            raise invalid_triangulation(f"expected {n} distinct arcs, got {len(arcs)}")
        for arc in arcs:
            check_arc(surface, arc)
        for x, a in enumerate(arcs):
            for b in arcs[x + 1 :]:
                if not compatible(surface, a, b):
                    raise invalid_triangulation(f"arcs {a} and {b} cross")
        return cls(surface, arcs)

    @property
    def arc_set(self) -> frozenset[ModelArc]:
        return frozenset(self.arcs)

    def slot_of(self, arc: ModelArc) -> int:
        try:
            return self.arcs.index(arc) + 1
        except ValueError:
            raise unknown_arc(arc, list(self.arcs)) from None

    def sorted(self) -> "ModelTriangulation":
        return ModelTriangulation(self.surface, tuple(sorted(self.arcs, key=arc_sort_key)))

    @cached_property
    def _tagged(self) -> TaggedTriangulation:
        triangles, signs = _build_triangles(self)
        return TaggedTriangulation.create(IdealTriangulation.create(self.surface, triangles), signs)

    def tagged(self) -> TaggedTriangulation:
        """The same triangulation as triangles glued along slots."""
        return self._tagged

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self.arcs) + "}"


def model_flip(t: ModelTriangulation, arc: ModelArc) -> ModelTriangulation:
    """Replace ``arc`` by the unique other arc completing the rest.

    Raises:
        TagrotError: UNKNOWN_ARC if ``arc`` is not in ``t``.
    """
    return model_flip_slot(t, t.slot_of(arc))


def model_flip_slot(t: ModelTriangulation, slot: int) -> ModelTriangulation:
    if not 1 <= slot <= len(t.arcs):
        raise unknown_arc(slot, list(range(1, len(t.arcs) + 1)))
    old = t.arcs[slot - 1]
    rest = [a for k, a in enumerate(t.arcs, start=1) if k != slot]
    found = [
        c
        for c in _flip_candidates(t.surface, rest)
        if c != old and c not in rest and all(compatible(t.surface, c, a) for a in rest)
    ]
    if len(found) != 1:
        raise internal_error(
            f"flip of {old} has {len(found)} completions",
            {"triangulation": str(t), "completions": [str(c) for c in found]},
        )
    arcs = list(t.arcs)
    arcs[slot - 1] = found[0]
    return ModelTriangulation(t.surface, tuple(arcs))


def _flip_candidates(surface: MarkedSurface, rest: list[ModelArc]) -> list[ModelArc]:
    if model_family(surface) is not ModelFamily.ANNULUS:
        return enumerate_arcs(surface)
    m1, m2 = surface.boundaries
    windings = [a.winding for a in rest if isinstance(a, AnnulusBridge)]
    lo, hi = min(windings, default=0) - 2, max(windings, default=0) + 2
    bridges: list[ModelArc] = [
        AnnulusBridge(i, j, w) for i in range(m1) for j in range(m2) for w in range(lo, hi + 1)
    ]
    return bridges + peripheral_arcs(surface)


def apply_to_triangulation(g: MappingClassElement, t: ModelTriangulation) -> ModelTriangulation:
    return ModelTriangulation(t.surface, tuple(apply_element(g, a) for a in t.arcs))


def model_rotate_triangulation(t: ModelTriangulation) -> ModelTriangulation:
    """Apply the tagged rotation to every arc, keeping slots."""
    return apply_to_triangulation(tagged_rotation(t.surface), t)


def compatibility_graph(surface: MarkedSurface, arcs: list[ModelArc] | None = None) -> nx.Graph:
    """Graph on model arcs with an edge between every compatible pair."""
    nodes = arcs if arcs is not None else enumerate_arcs(surface)
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for x, a in enumerate(nodes):
        for b in nodes[x + 1 :]:
            if compatible(surface, a, b):
                graph.add_edge(a, b)
    return graph


def model_triangulations(surface: MarkedSurface) -> list[ModelTriangulation]:
    """Every triangulation of a polygon or once-punctured polygon, as maximal cliques.

    This is computed from compatibility alone and serves as the independent
    count for the exchange-graph search.
    """
    family = model_family(surface, "model_triangulations")
    if family is ModelFamily.ANNULUS:
        raise unsupported_surface(surface, "model_triangulations (infinitely many)")
    n = rank(surface)
    graph = compatibility_graph(surface)
    result = []
    for clique in nx.find_cliques(graph):
        if len(clique) != n:
            raise internal_error(f"maximal compatible set of size {len(clique)} != {n}")
        result.append(ModelTriangulation(surface, tuple(sorted(clique, key=arc_sort_key))))
    result.sort(key=lambda t: [arc_sort_key(a) for a in t.arcs])
    logger.info(f"{surface}: {len(result)} triangulations from {graph.number_of_nodes()} arcs")
    return result


def canonical_start(surface: MarkedSurface) -> ModelTriangulation:
    """Fan at vertex 0 (polygon), fan with two radii (punctured polygon), staircase of bridges (annulus)."""
    family = model_family(surface, "canonical_start")
    m = surface.boundaries[0]
    if family is ModelFamily.POLYGON:
        return ModelTriangulation.create(surface, [PolygonArc(0, j) for j in range(2, m - 1)])
    if family is ModelFamily.PUNCTURED_POLYGON:
        arcs: list[ModelArc] = [PuncturedChord(0, length) for length in range(2, m)]
        arcs += [Radius(0, 1), Radius(m - 1, 1)] if m > 1 else [Radius(0, 1)]
        return ModelTriangulation.create(surface, arcs)
    m1, m2 = surface.boundaries
    u = t = 0
    bridges: list[ModelArc] = []
    while (u, t) != (m1, -m2):
        bridges.append(bridge_from_lift(surface, u, t))
        # alternate while both boundaries have steps left
        if u < m1 and (t == -m2 or len(bridges) % 2 == 1):
            u += 1
        else:
            t -= 1
    return ModelTriangulation.create(surface, bridges)


def _build_triangles(t: ModelTriangulation) -> tuple[list[Triangle], list[int]]:
    family = model_family(t.surface)
    slots = {arc: k for k, arc in enumerate(t.arcs, start=1)}
    if family is ModelFamily.POLYGON:
        return _polygon_triangles(t, slots), []
    if family is ModelFamily.PUNCTURED_POLYGON:
        return _punctured_triangles(t, slots)
    return _annulus_triangles(t, slots), []


def _polygon_triangles(t: ModelTriangulation, slots: dict[ModelArc, int]) -> list[Triangle]:
    m = t.surface.boundaries[0]

    def side(a: int, b: int) -> Side | None:
        if b == a + 1:
            return BoundarySegment(0, a)
        if (a, b) == (0, m - 1):
            return BoundarySegment(0, m - 1)
        return slots.get(PolygonArc(a, b))

    triangles = []
    for a in range(m):
        for b in range(a + 1, m):
            if side(a, b) is None:
                continue
            for c in range(b + 1, m):
                ab, bc, ac = side(a, b), side(b, c), side(a, c)
                if bc is not None and ac is not None:
                    assert ab is not None
                    triangles.append(
                        Triangle(
                            (ab, bc, ac),
                            (BoundaryPoint(0, a), BoundaryPoint(0, b), BoundaryPoint(0, c)),
                        )
                    )
    return triangles


def _interval_triangle(
    start: int,
    length: int,
    outer: Side,
    side: "_SideLookup",
    point: "_PointLookup",
) -> Triangle:
    """Triangle inside the region cut off by the arc from ``start`` to ``start + length``."""
    for offset in range(1, length):
        left = side(start, offset)
        right = side(start + offset, length - offset)
        if left is not None and right is not None:
            return Triangle(
                (left, right, outer),
                (point(start), point(start + offset), point(start + length)),
            )
    raise internal_error(f"no triangle below the arc {start}+{length}")


class _SideLookup:
    """Side from ``s`` to ``s + length`` along one boundary cycle: segment or cutting arc."""

    def __init__(self, component: int, m: int, arcs: dict[tuple[int, int], int]) -> None:
        self.component = component
        self.m = m
        self.arcs = arcs

    def __call__(self, s: int, length: int) -> Side | None:
        s %= self.m
        if length == 1:
            return BoundarySegment(self.component, s)
        return self.arcs.get((s, length))


class _PointLookup:
    def __init__(self, component: int, m: int) -> None:
        self.component = component
        self.m = m

    def __call__(self, k: int) -> BoundaryPoint:
        return BoundaryPoint(self.component, k % self.m)


def _punctured_triangles(
    t: ModelTriangulation, slots: dict[ModelArc, int]
) -> tuple[list[Triangle], list[int]]:
    m = t.surface.boundaries[0]
    puncture = Puncture(0)
    point = _PointLookup(0, m)
    chords = {(a.i, a.length(m)): slots[a] for a in t.arcs if isinstance(a, PuncturedChord)}
    radii = sorted((a for a in t.arcs if isinstance(a, Radius)), key=lambda r: r.vertex)
    triangles: list[Triangle] = []

    vertices = {r.vertex for r in radii}
    if m == 1:
        (r,) = radii
        slot = slots[r]
        return [Triangle((BoundarySegment(0, 0), slot, slot), (point(0), point(0), puncture))], [r.tag]
    if len(vertices) == 1 and len(radii) == 2:
        # digon pair: the notched radius is read as the loop around the plain one
        v = radii[0].vertex
        plain = slots[Radius(v, 1)]
        loop = slots[Radius(v, -1)]
        triangles.append(Triangle((loop, plain, plain), (point(v), point(v), puncture)))
        chords[(v, m)] = loop
        sign = 1
    else:
        tags = {r.tag for r in radii}
        if len(tags) != 1 or len(radii) < 2:
            raise invalid_triangulation(f"radii {[str(r) for r in radii]} do not triangulate around the puncture")
        sign = tags.pop()
        side = _SideLookup(0, m, chords)
        for a, r in enumerate(radii):
            nxt = radii[(a + 1) % len(radii)]
            length = (nxt.vertex - r.vertex) % m or m
            sector = side(r.vertex, length)
            if sector is None:
                raise internal_error(f"sector {r} -> {nxt} has no outer side")
            triangles.append(
                Triangle((sector, slots[nxt], slots[r]), (point(r.vertex), point(nxt.vertex), puncture))
            )

    side = _SideLookup(0, m, chords)
    for (s, length), slot in chords.items():
        triangles.append(_interval_triangle(s, length, slot, side, point))
    return triangles, [sign]


def _annulus_triangles(t: ModelTriangulation, slots: dict[ModelArc, int]) -> list[Triangle]:
    m1, m2 = t.surface.boundaries
    outer_point = _PointLookup(0, m1)
    inner_point = _PointLookup(1, m2)
    peripherals = {
        y: {(a.start, a.length): slots[a] for a in t.arcs if isinstance(a, AnnulusPeripheral) and a.component == y}
        for y in (0, 1)
    }
    outer_side = _SideLookup(0, m1, peripherals[0])
    inner_side = _SideLookup(1, m2, peripherals[1])

    lifts = sorted(
        ((a.lift(m2), slots[a]) for a in t.arcs if isinstance(a, AnnulusBridge)),
        key=lambda item: (item[0][0] * m2, -item[0][1] * m1),
    )
    if len(lifts) < 2:
        raise invalid_triangulation("an annulus triangulation needs at least two bridges")
    triangles = []
    for k, ((u, tt), slot) in enumerate(lifts):
        (u2, t2), slot2 = lifts[(k + 1) % len(lifts)]
        if k + 1 == len(lifts):
            u2, t2 = u2 + m1, t2 - m2
        if u2 == u:
            inner = inner_side(t2, tt - t2)
            if inner is None:
                raise internal_error(f"bridges {slot} and {slot2} leave an untriangulated inner gap")
            triangles.append(
                Triangle((slot2, inner, slot), (outer_point(u), inner_point(t2), inner_point(tt)))
            )
        elif t2 == tt:
            outer = outer_side(u, u2 - u)
            if outer is None:
                raise internal_error(f"bridges {slot} and {slot2} leave an untriangulated outer gap")
            triangles.append(
                Triangle((outer, slot2, slot), (outer_point(u), outer_point(u2), inner_point(tt)))
            )
        else:
            raise internal_error(f"consecutive bridges {slot} and {slot2} share no endpoint")

    for y, side, point in ((0, outer_side, outer_point), (1, inner_side, inner_point)):
        for (s, length), slot in peripherals[y].items():
            triangles.append(_interval_triangle(s, length, slot, side, point))
    return triangles
