"""Normal forms of arcs in the polygon, once-punctured polygon and annulus models.

Polygon (one boundary component, no puncture): vertices ``0..m-1`` counterclockwise.

Once-punctured polygon: a chord ``(i, j)`` runs from ``i`` to ``j`` with the
puncture on its left and cuts off the counterclockwise interval ``i, i+1, .., j``.
Radii join a vertex to the puncture and carry a tag (+1 plain, -1 notched).

Annulus: a strip covers the annulus. Outer point ``u`` sits at ``x = u * m2`` on
the lower edge, inner point ``t`` at ``x = -t * m1`` on the upper edge, and the
deck shift ``(u, t) -> (u + m1, t - m2)`` moves ``x`` by ``L = m1 * m2``. A bridge
``(i, j, w)`` lifts to ``(u, t) = (i, j - w * m2)``; the winding counts full turns
against the straight bridge from outer 0 to inner 0. Peripheral arcs start and
end on one component and cut off ``length`` consecutive boundary steps.
"""

import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import invalid_document, unsupported_surface
from ..mcg import MappingClassElement, tagged_rotation
from ..surface import MarkedSurface


class ModelFamily(str, Enum):
    POLYGON = "polygon"
    PUNCTURED_POLYGON = "punctured-polygon"
    ANNULUS = "annulus"


def model_family(surface: MarkedSurface, operation: str = "model") -> ModelFamily:
    """Which explicit model covers a surface.

    Raises:
        TagrotError: UNSUPPORTED_SURFACE for every other topology.
    """
    if surface.genus == 0 and surface.b == 1 and surface.punctures == 0:
        return ModelFamily.POLYGON
    if surface.genus == 0 and surface.b == 1 and surface.punctures == 1:
        return ModelFamily.PUNCTURED_POLYGON
    if surface.genus == 0 and surface.b == 2 and surface.punctures == 0:
        return ModelFamily.ANNULUS
    raise unsupported_surface(surface, operation)


@dataclass(frozen=True, order=True)
class PolygonArc:
    """Diagonal ``{i, j}`` of a polygon, stored with ``i < j``."""

    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.i}-{self.j}"


@dataclass(frozen=True, order=True)
class PuncturedChord:
    """Chord from ``i`` to ``j`` with the puncture on its left."""

    i: int
    j: int

    def length(self, m: int) -> int:
        return (self.j - self.i) % m

    def __str__(self) -> str:
        return f"{self.i}>{self.j}"


@dataclass(frozen=True, order=True)
class Radius:
    vertex: int
    tag: int = 1

    @property
    def notched(self) -> bool:
        return self.tag == -1

    def __str__(self) -> str:
        return f"r{self.vertex}{'*' if self.notched else ''}"


@dataclass(frozen=True, order=True)
class AnnulusBridge:
    outer: int
    inner: int
    winding: int

    def lift(self, m2: int) -> tuple[int, int]:
        return self.outer, self.inner - self.winding * m2

    def __str__(self) -> str:
        return f"br{self.outer},{self.inner},{self.winding}"


@dataclass(frozen=True, order=True)
class AnnulusPeripheral:
    """Arc from ``start`` to ``start + length`` along one boundary component."""

    component: int
    start: int
    length: int

    def __str__(self) -> str:
        return f"pe{self.component},{self.start},{self.length}"


ModelArc = PolygonArc | PuncturedChord | Radius | AnnulusBridge | AnnulusPeripheral

_KIND_ORDER = {PolygonArc: 0, PuncturedChord: 1, Radius: 2, AnnulusBridge: 3, AnnulusPeripheral: 4}


def arc_sort_key(arc: ModelArc) -> tuple[int, tuple[int, ...]]:
    if isinstance(arc, PolygonArc | PuncturedChord):
        fields: tuple[int, ...] = (arc.i, arc.j)
    elif isinstance(arc, Radius):
        fields = (arc.vertex, arc.tag)
    elif isinstance(arc, AnnulusBridge):
        fields = (arc.outer, arc.inner, arc.winding)
    else:
        fields = (arc.component, arc.start, arc.length)
    return (_KIND_ORDER[type(arc)], fields)


def bridge_from_lift(surface: MarkedSurface, u: int, t: int) -> AnnulusBridge:
    """Normal form of the bridge lifted to ``(u, t)``."""
    m1, m2 = surface.boundaries
    shifts, outer = divmod(u, m1)
    t += shifts * m2
    inner = t % m2
    return AnnulusBridge(outer, inner, (inner - t) // m2)


def enumerate_arcs(surface: MarkedSurface, window: int = 3) -> list[ModelArc]:
    """All arcs of a model surface, sorted; annulus bridges satisfy ``|winding| <= window``.

    Raises:
        TagrotError: UNSUPPORTED_SURFACE outside the three models.
    """
    family = model_family(surface, "enumerate_arcs")
    if family is ModelFamily.POLYGON:
        m = surface.boundaries[0]
        return [PolygonArc(i, j) for i in range(m) for j in range(i + 2, m) if (i, j) != (0, m - 1)]
    if family is ModelFamily.PUNCTURED_POLYGON:
        m = surface.boundaries[0]
        arcs: list[ModelArc] = [
            PuncturedChord(i, (i + length) % m) for i in range(m) for length in range(2, m)
        ]
        arcs += [Radius(v, tag) for v in range(m) for tag in (1, -1)]
        return sorted(arcs, key=arc_sort_key)
    m1, m2 = surface.boundaries
    arcs = [
        AnnulusBridge(i, j, w)
        for i in range(m1)
        for j in range(m2)
        for w in range(-window, window + 1)
    ]
    arcs += peripheral_arcs(surface)
    return sorted(arcs, key=arc_sort_key)


def peripheral_arcs(surface: MarkedSurface) -> list[ModelArc]:
    return [
        AnnulusPeripheral(y, s, length)
        for y, m in enumerate(surface.boundaries)
        for s in range(m)
        for length in range(2, m + 1)
    ]


def check_arc(surface: MarkedSurface, arc: ModelArc) -> None:
    """Reject arcs that are not normal forms on ``surface``."""
    family = model_family(surface, "check_arc")
    ok = False
    if family is ModelFamily.POLYGON and isinstance(arc, PolygonArc):
        m = surface.boundaries[0]
        ok = 0 <= arc.i < arc.j < m and arc.j - arc.i >= 2 and (arc.i, arc.j) != (0, m - 1)
    elif family is ModelFamily.PUNCTURED_POLYGON:
        m = surface.boundaries[0]
        if isinstance(arc, PuncturedChord):
            ok = 0 <= arc.i < m and 0 <= arc.j < m and arc.length(m) >= 2
        elif isinstance(arc, Radius):
            ok = 0 <= arc.vertex < m and arc.tag in (1, -1)
    elif family is ModelFamily.ANNULUS:
        m1, m2 = surface.boundaries
        if isinstance(arc, AnnulusBridge):
            ok = 0 <= arc.outer < m1 and 0 <= arc.inner < m2
        elif isinstance(arc, AnnulusPeripheral):
            ok = (
                arc.component in (0, 1)
                and 0 <= arc.start < surface.boundaries[arc.component]
                and 2 <= arc.length <= surface.boundaries[arc.component]
            )
    if not ok:
        raise invalid_document(f"{arc} is not an arc of {surface}")


def _intervals_compatible(s1: int, l1: int, s2: int, l2: int, m: int) -> bool:
    """Cut-off intervals ``[s, s + l]`` on a circle of ``m`` points are nested or disjoint."""
    offset = (s2 - s1) % m
    back = (s1 - s2) % m
    if offset + l2 <= l1 or back + l1 <= l2:
        return True
    return offset >= l1 and offset + l2 <= m


def _strictly_inside(v: int, start: int, length: int, m: int) -> bool:
    return 0 < (v - start) % m < length


def compatible(surface: MarkedSurface, a: ModelArc, b: ModelArc) -> bool:
    """Whether two model arcs can belong to one tagged triangulation."""
    if a == b:
        return True
    family = model_family(surface, "compatible")
    if family is ModelFamily.POLYGON:
        assert isinstance(a, PolygonArc) and isinstance(b, PolygonArc)
        return not (a.i < b.i < a.j < b.j or b.i < a.i < b.j < a.j)
    if family is ModelFamily.PUNCTURED_POLYGON:
        return _punctured_compatible(surface.boundaries[0], a, b)
    return _annulus_compatible(surface, a, b)


def _punctured_compatible(m: int, a: ModelArc, b: ModelArc) -> bool:
    if isinstance(a, Radius) and isinstance(b, Radius):
        # the plain and notched radius of the monogon cross
        return a.tag == b.tag or (a.vertex == b.vertex and m > 1)
    if isinstance(a, Radius):
        a, b = b, a
    if isinstance(b, Radius):
        assert isinstance(a, PuncturedChord)
        return not _strictly_inside(b.vertex, a.i, a.length(m), m)
    assert isinstance(a, PuncturedChord) and isinstance(b, PuncturedChord)
    return _intervals_compatible(a.i, a.length(m), b.i, b.length(m), m)


def _bridges_cross(surface: MarkedSurface, a: AnnulusBridge, b: AnnulusBridge) -> bool:
    m1, m2 = surface.boundaries
    period = m1 * m2
    ua, ta = a.lift(m2)
    ub, tb = b.lift(m2)
    d_outer = (ua - ub) * m2
    d_inner = -(ta - tb) * m1
    lo, hi = min(d_outer, d_inner), max(d_outer, d_inner)
    # some deck translate k * L lies strictly between the two offsets
    k = lo // period + 1
    return k * period < hi


def _annulus_compatible(surface: MarkedSurface, a: ModelArc, b: ModelArc) -> bool:
    if isinstance(a, AnnulusBridge) and isinstance(b, AnnulusBridge):
        return not _bridges_cross(surface, a, b)
    if isinstance(a, AnnulusPeripheral) and isinstance(b, AnnulusPeripheral):
        if a.component != b.component:
            return True
        m = surface.boundaries[a.component]
        return _intervals_compatible(a.start, a.length, b.start, b.length, m)
    if isinstance(a, AnnulusPeripheral):
        a, b = b, a
    assert isinstance(a, AnnulusBridge) and isinstance(b, AnnulusPeripheral)
    end = a.outer if b.component == 0 else a.inner
    return not _strictly_inside(end, b.start, b.length, surface.boundaries[b.component])


def apply_element(g: MappingClassElement, arc: ModelArc) -> ModelArc:
    """Image of a model arc under a product of boundary rotations and tag switches."""
    surface = g.surface
    family = model_family(surface, "apply_element")
    if family is ModelFamily.POLYGON:
        assert isinstance(arc, PolygonArc)
        m = surface.boundaries[0]
        r = g.rotation_powers[0]
        i, j = sorted(((arc.i + r) % m, (arc.j + r) % m))
        return PolygonArc(i, j)
    if family is ModelFamily.PUNCTURED_POLYGON:
        m = surface.boundaries[0]
        r = g.rotation_powers[0]
        if isinstance(arc, Radius):
            return Radius((arc.vertex + r) % m, arc.tag * g.tag_signs[0])
        assert isinstance(arc, PuncturedChord)
        return PuncturedChord((arc.i + r) % m, (arc.j + r) % m)
    m1, m2 = surface.boundaries
    r_outer, r_inner = g.rotation_powers
    if isinstance(arc, AnnulusPeripheral):
        m = surface.boundaries[arc.component]
        return AnnulusPeripheral(arc.component, (arc.start + g.rotation_powers[arc.component]) % m, arc.length)
    assert isinstance(arc, AnnulusBridge)
    u, t = arc.lift(m2)
    return bridge_from_lift(surface, u + r_outer, t + r_inner)


def model_rotate(surface: MarkedSurface, arc: ModelArc) -> ModelArc:
    """Tagged rotation of one model arc."""
    return apply_element(tagged_rotation(surface), arc)


def arc_to_dict(arc: ModelArc) -> dict[str, Any]:
    if isinstance(arc, PolygonArc):
        return {"kind": "diagonal", "ends": [arc.i, arc.j]}
    if isinstance(arc, PuncturedChord):
        return {"kind": "chord", "ends": [arc.i, arc.j]}
    if isinstance(arc, Radius):
        return {"kind": "radius", "vertex": arc.vertex, "tag": "notched" if arc.notched else "plain"}
    if isinstance(arc, AnnulusBridge):
        return {"kind": "bridge", "outer": arc.outer, "inner": arc.inner, "winding": arc.winding}
    return {"kind": "peripheral", "component": arc.component, "start": arc.start, "length": arc.length}


def arc_from_dict(data: dict[str, Any]) -> ModelArc:
    try:
        kind = data["kind"]
        if kind == "diagonal":
            i, j = sorted(int(x) for x in data["ends"])
            return PolygonArc(i, j)
        if kind == "chord":
            i, j = (int(x) for x in data["ends"])
            return PuncturedChord(i, j)
        if kind == "radius":
            return Radius(int(data["vertex"]), -1 if data.get("tag", "plain") == "notched" else 1)
        if kind == "bridge":
            return AnnulusBridge(int(data["outer"]), int(data["inner"]), int(data["winding"]))
        if kind == "peripheral":
            return AnnulusPeripheral(int(data["component"]), int(data["start"]), int(data["length"]))
    except (KeyError, TypeError, ValueError) as e:
        raise invalid_document(f"malformed arc {data}: {e}") from e
    raise invalid_document(f"unknown arc kind {data.get('kind')!r}")


_COMPACT = [
    (re.compile(r"^(\d+)-(\d+)$"), lambda g: PolygonArc(*sorted((int(g[1]), int(g[2]))))),
    (re.compile(r"^(\d+)>(\d+)$"), lambda g: PuncturedChord(int(g[1]), int(g[2]))),
    (re.compile(r"^r(\d+)(\*?)$"), lambda g: Radius(int(g[1]), -1 if g[2] else 1)),
    (re.compile(r"^br(\d+),(\d+),(-?\d+)$"), lambda g: AnnulusBridge(int(g[1]), int(g[2]), int(g[3]))),
    (re.compile(r"^pe(\d+),(\d+),(\d+)$"), lambda g: AnnulusPeripheral(int(g[1]), int(g[2]), int(g[3]))),
]


def parse_arc(surface: MarkedSurface, text: str) -> ModelArc:
    """Parse a JSON arc object or the compact form printed by ``str``.

    Raises:
        TagrotError: INVALID_DOCUMENT when the text is no arc of ``surface``.
    """
    text = text.strip()
    arc: ModelArc | None = None
    if text.startswith("{"):
        try:
            arc = arc_from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise invalid_document(f"arc is not valid JSON: {e}") from e
    else:
        for pattern, build in _COMPACT:
            match = pattern.match(text)
            if match:
                arc = build(match)
                break
    if arc is None:
        raise invalid_document(f"cannot parse arc {text!r}")
    check_arc(surface, arc)
    return arc
