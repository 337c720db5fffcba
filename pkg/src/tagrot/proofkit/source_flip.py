"""Flips that realize the tagged rotation of a single arc.

With counterclockwise storage (``b_ij = +1`` when ``j`` follows ``i``) the
rotated arc is reached by flipping an arc that is a sink of the quiver: every
arrow at its vertex points inward. Three local shapes produce such a flip:

* quad: both ends on the boundary, and in each of its two triangles the side
  following the arc is a boundary segment;
* spoke pair: one end on the boundary, the puncture end has exactly two arcs,
  and the boundary segment leaving the boundary end closes the triangle;
* digon: the arc belongs to a plain/notched pair whose enclosing loop is
  followed by a boundary segment.
"""

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import count
from typing import Any

from ..errors import unknown_arc
from ..mcg import act_on_arc, tagged_rotation
from ..models import (
    ModelArc,
    ModelTriangulation,
    PolygonArc,
    PuncturedChord,
    Radius,
    model_flip,
    model_rotate,
)
from ..surface import BoundaryPoint, BoundarySegment, MarkedSurface, Puncture, Vertex, make_surface
from ..triangulation import (
    IdealTriangulation,
    TaggedTriangulation,
    b_matrix,
    flip_tagged,
    quiver,
    tagged_arc,
)
from .canonical import ArcType, build_canonical_triangulation, classify_arc_type
from .reports import SuiteReport

logger = logging.getLogger(__name__)

ORIENTATION = "ccw"
EXTREMAL = "sink"


class SourceFlipCase(str, Enum):
    I = "I"
    II_PLAIN = "II_plain"
    II_TAGGED = "II_tagged"


class LocalShape(str, Enum):
    QUAD = "quad"
    SPOKE_PAIR = "spoke-pair"
    DIGON = "digon"


_EXPECTED_SHAPE = {
    SourceFlipCase.I: LocalShape.QUAD,
    SourceFlipCase.II_PLAIN: LocalShape.SPOKE_PAIR,
    SourceFlipCase.II_TAGGED: LocalShape.DIGON,
}


def _case_data(case: SourceFlipCase) -> tuple[MarkedSurface, tuple[ModelArc, ...], ModelArc]:
    if case is SourceFlipCase.I:
        hexagon = make_surface(0, (6,), 0)
        return hexagon, (PolygonArc(0, 3), PolygonArc(1, 3), PolygonArc(0, 4)), PolygonArc(0, 3)
    triangle = make_surface(0, (3,), 1)
    companion = Radius(1, 1) if case is SourceFlipCase.II_PLAIN else Radius(0, -1)
    return triangle, (PuncturedChord(1, 0), Radius(0, 1), companion), Radius(0, 1)


def is_sink(t: TaggedTriangulation, slot: int) -> bool:
    row = b_matrix(t).entries[slot - 1]
    return bool((row <= 0).all())


def is_source(t: TaggedTriangulation, slot: int) -> bool:
    row = b_matrix(t).entries[slot - 1]
    return bool((row >= 0).all())


def local_shape(t: TaggedTriangulation, slot: int) -> LocalShape | None:
    """Which rotating configuration the arc in ``slot`` sits in, if any."""
    base = t.base
    occ = base.occurrences(slot)
    u, v = tagged_arc(t, slot).endpoints
    if isinstance(u, BoundaryPoint) and isinstance(v, BoundaryPoint):
        if u == v:
            return None
        if all(isinstance(base.triangles[k].sides[(i + 1) % 3], BoundarySegment) for k, i in occ):
            return LocalShape.QUAD
        return None
    if not (isinstance(u, BoundaryPoint) and isinstance(v, Puncture)):
        return None

    pair = t.digon_pairs.get(v)
    if pair is not None:
        if slot not in pair:
            return None
        loop = pair[1]
        for k, i in base.occurrences(loop):
            tri = base.triangles[k]
            if not tri.is_self_folded and isinstance(tri.sides[(i + 1) % 3], BoundarySegment):
                return LocalShape.DIGON
        return None

    (k1, i1), (k2, i2) = occ
    for (ka, ia), (kb, ib) in (((k1, i1), (k2, i2)), ((k2, i2), (k1, i1))):
        out_tri, in_tri = base.triangles[ka], base.triangles[kb]
        if out_tri.corners[ia] != v:
            continue
        companion = out_tri.sides[(ia + 2) % 3]
        if (
            isinstance(out_tri.sides[(ia + 1) % 3], BoundarySegment)
            and isinstance(companion, int)
            and in_tri.sides[(ib + 1) % 3] == companion
        ):
            return LocalShape.SPOKE_PAIR
    return None


@dataclass
class LocalFlipResult:
    """Outcome of flipping one arc in a rotating configuration."""

    slot: int
    shape: LocalShape | None
    sink: bool
    arc: str
    flipped: str | None
    expected: str
    states: int

    @property
    def passed(self) -> bool:
        return self.shape is not None and self.sink and self.flipped == self.expected

    def to_dict(self) -> dict[str, Any]:
        return {
            "slot": self.slot,
            "shape": self.shape.value if self.shape else None,
            "sink": self.sink,
            "arc": self.arc,
            "flipped": self.flipped,
            "expected": self.expected,
            "states": self.states,
        }


def _flip_result(t: TaggedTriangulation, slot: int, shape: LocalShape | None, states: int) -> LocalFlipResult:
    arc = tagged_arc(t, slot)
    expected = act_on_arc(tagged_rotation(t.surface), arc)
    flipped = str(tagged_arc(flip_tagged(t, slot), slot)) if shape is not None else None
    return LocalFlipResult(slot, shape, is_sink(t, slot), str(arc), flipped, str(expected), states)


_FAR = 10**6


def _next_corner(base: IdealTriangulation, corner: tuple[int, int]) -> tuple[int, int] | None:
    """Corner met by crossing the side leaving ``corner``, at the same marked point."""
    k, j = corner
    side = base.triangles[k].sides[j]
    if not isinstance(side, int):
        return None
    for k2, i2 in base.occurrences(side):
        if (k2, i2) != (k, j):
            return k2, (i2 + 1) % 3
    return None


def _wedge(base: IdealTriangulation, corner: tuple[int, int]) -> int:
    """Arc ends between ``corner`` and the boundary segment leaving its marked point."""
    steps = 0
    limit = 3 * len(base.triangles)
    current: tuple[int, int] | None = corner
    while current is not None and isinstance(base.triangles[current[0]].sides[current[1]], int):
        current = _next_corner(base, current)
        steps += 1
        if steps > limit:
            return _FAR
    return _FAR if current is None else steps


def _arrival(base: IdealTriangulation, slot: int, vertex: Vertex) -> tuple[int, int] | None:
    """Corner where ``slot`` arrives at ``vertex`` outside any self-folded triangle."""
    for k, i in base.occurrences(slot):
        tri = base.triangles[k]
        if not tri.is_self_folded and tri.corners[(i + 1) % 3] == vertex:
            return k, (i + 1) % 3
    return None


def _ends_to_clear(base: IdealTriangulation, slot: int, vertex: Vertex) -> int:
    corner = _arrival(base, slot, vertex)
    return _FAR if corner is None else _wedge(base, corner)


def _distance(t: TaggedTriangulation, slot: int) -> int:
    """Arc ends still standing between ``slot`` and a rotating configuration.

    Zero once the sides following the arc are the boundary segments the
    rotation moves its ends along and, for a puncture end, the puncture carries
    only the arc and its companion.
    """
    base = t.base
    u, v = tagged_arc(t, slot).endpoints
    if isinstance(u, BoundaryPoint) and isinstance(v, BoundaryPoint):
        if u == v:
            return _FAR
        return _ends_to_clear(base, slot, u) + _ends_to_clear(base, slot, v)
    if not (isinstance(u, BoundaryPoint) and isinstance(v, Puncture)):
        return _FAR
    pair = t.digon_pairs.get(v)
    if pair is not None:
        return _ends_to_clear(base, pair[1], u)
    degree = sum(corner == v for tri in base.triangles for corner in tri.corners)
    return _ends_to_clear(base, slot, u) + max(0, degree - 2)


def local_source_flip(t: TaggedTriangulation, slot: int, max_states: int = 4000) -> LocalFlipResult:
    """Move the other arcs until ``slot`` sits in a rotating configuration, then flip it.

    Best-first over flips of every slot except ``slot``, which keeps the arc
    itself fixed, always expanding the triangulation with the fewest arc ends
    left between the arc and its boundary segments. Gives up after
    ``max_states`` triangulations.

    Raises:
        TagrotError: UNKNOWN_ARC if ``slot`` is not a slot of ``t``.
    """
    if slot not in t.base.slots:
        raise unknown_arc(slot, list(t.base.slots))
    order = count()
    seen = {t}
    heap = [(_distance(t, slot), next(order), t)]
    while heap:
        _, _, current = heapq.heappop(heap)
        shape = local_shape(current, slot)
        if shape is not None:
            return _flip_result(current, slot, shape, len(seen))
        if len(seen) >= max_states:
            continue
        for other in current.base.slots:
            if other == slot:
                continue
            nxt = flip_tagged(current, other)
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (_distance(nxt, slot), next(order), nxt))
    logger.warning(f"No rotating configuration for slot {slot} within {len(seen)} states")
    return _flip_result(t, slot, None, len(seen))


def source_flip_check(case: SourceFlipCase | str) -> SuiteReport:
    """Replay one rotating configuration in the explicit models."""
    case = SourceFlipCase(case)
    surface, arcs, alpha = _case_data(case)
    model = ModelTriangulation.create(surface, arcs)
    t = model.tagged()
    slot = model.slot_of(alpha)
    rotated = model_rotate(surface, alpha)
    flipped = model_flip(model, alpha).arcs[slot - 1]
    result = _flip_result(t, slot, local_shape(t, slot), 1)

    report = SuiteReport(f"source-flip:{case.value}")
    report.add(
        f"{case.value}: arc is a {EXTREMAL}",
        result.sink,
        orientation=ORIENTATION,
        extremal=EXTREMAL,
        source=is_source(t, slot),
        arrows=quiver(b_matrix(t)).arrow_list(),
    )
    report.add(
        f"{case.value}: shape",
        result.shape is _EXPECTED_SHAPE[case],
        shape=result.shape.value if result.shape else None,
    )
    report.add(
        f"{case.value}: model flip is the rotation",
        flipped == rotated,
        arc=str(alpha),
        flipped=str(flipped),
        rotated=str(rotated),
    )
    report.add(
        f"{case.value}: tagged flip is the rotation",
        result.flipped == result.expected,
        flipped=result.flipped,
        rotated=result.expected,
    )
    return report


def source_flip_suite() -> SuiteReport:
    report = SuiteReport("source-flip")
    for case in SourceFlipCase:
        report.extend(source_flip_check(case))
    return report


def local_source_flip_sweep(t: TaggedTriangulation, max_states: int = 4000) -> SuiteReport:
    """Rotating flip for every arc of ``t`` with two distinct ends, one on the boundary."""
    report = SuiteReport("local-source-flip")
    for slot in t.base.slots:
        if classify_arc_type(t, slot) not in (ArcType.TWO_BOUNDARY_ENDS, ArcType.BOUNDARY_PUNCTURE):
            continue
        result = local_source_flip(t, slot, max_states)
        report.add(f"{t.surface} slot {slot}", result.passed, **result.to_dict())
    return report


def canonical_source_flip_sweep(surfaces: list[MarkedSurface], max_states: int = 4000) -> SuiteReport:
    report = SuiteReport("local-source-flip")
    for surface in surfaces:
        report.extend(local_source_flip_sweep(build_canonical_triangulation(surface), max_states))
    return report
