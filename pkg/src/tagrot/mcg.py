"""Boundary rotations, tag switches and the tagged rotation.

Only the subgroup generated by the one-step boundary rotations and the tag
switches is represented. Its elements never permute punctures, so the
semidirect-product law reduces to adding rotation powers and multiplying signs
pointwise.
"""

import logging
from dataclasses import dataclass

from .errors import index_out_of_range, surface_mismatch
from .surface import BoundaryPoint, BoundarySegment, MarkedSurface, Puncture, Vertex, vertex_key
from .triangulation import IdealTriangulation, Side, TaggedArc, TaggedTriangulation, Triangle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MappingClassElement:
    """Rotation power per boundary component and sign per puncture."""

    surface: MarkedSurface
    rotation_powers: tuple[int, ...]
    tag_signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rotation_powers) != self.surface.b or len(self.tag_signs) != self.surface.punctures:
            raise surface_mismatch(self.surface, f"{len(self.rotation_powers)} rotations, {len(self.tag_signs)} signs")

    @property
    def is_identity(self) -> bool:
        return all(r == 0 for r in self.rotation_powers) and all(s == 1 for s in self.tag_signs)

    def __mul__(self, other: "MappingClassElement") -> "MappingClassElement":
        return compose(self, other)

    def __str__(self) -> str:
        parts = [f"rho{y}^{r}" for y, r in enumerate(self.rotation_powers) if r]
        parts += [f"delta{p}" for p, s in enumerate(self.tag_signs) if s == -1]
        return "*".join(parts) or "id"


def identity(surface: MarkedSurface) -> MappingClassElement:
    return MappingClassElement(surface, (0,) * surface.b, (1,) * surface.punctures)


def boundary_rotation(surface: MarkedSurface, component: int) -> MappingClassElement:
    """One-step rotation of a boundary component: marked point k goes to k + 1."""
    if not 0 <= component < surface.b:
        raise index_out_of_range(component, surface.b)
    powers = tuple(1 if y == component else 0 for y in range(surface.b))
    return MappingClassElement(surface, powers, (1,) * surface.punctures)


def tag_switch(surface: MarkedSurface, puncture: int) -> MappingClassElement:
    if not 0 <= puncture < surface.punctures:
        raise index_out_of_range(puncture, surface.punctures)
    signs = tuple(-1 if p == puncture else 1 for p in range(surface.punctures))
    return MappingClassElement(surface, (0,) * surface.b, signs)


def tagged_rotation(surface: MarkedSurface) -> MappingClassElement:
    """Product of every one-step boundary rotation and every tag switch."""
    return MappingClassElement(surface, (1,) * surface.b, (-1,) * surface.punctures)


def dehn_twist(surface: MarkedSurface, component: int) -> MappingClassElement:
    """Positive Dehn twist about a boundary component, the rotation to the power m_Y."""
    return power(boundary_rotation(surface, component), surface.boundaries[component])


def compose(outer: MappingClassElement, inner: MappingClassElement) -> MappingClassElement:
    """``outer`` after ``inner``."""
    if outer.surface != inner.surface:
        raise surface_mismatch(outer.surface, inner.surface)
    return MappingClassElement(
        outer.surface,
        tuple(a + b for a, b in zip(outer.rotation_powers, inner.rotation_powers, strict=True)),
        tuple(a * b for a, b in zip(outer.tag_signs, inner.tag_signs, strict=True)),
    )


def inverse(g: MappingClassElement) -> MappingClassElement:
    return MappingClassElement(g.surface, tuple(-r for r in g.rotation_powers), g.tag_signs)


def power(g: MappingClassElement, k: int) -> MappingClassElement:
    signs = g.tag_signs if k % 2 else (1,) * len(g.tag_signs)
    return MappingClassElement(g.surface, tuple(k * r for r in g.rotation_powers), signs)


def act_on_vertex(g: MappingClassElement, v: Vertex) -> Vertex:
    if isinstance(v, Puncture):
        return v
    m = g.surface.boundaries[v.component]
    return BoundaryPoint(v.component, (v.index + g.rotation_powers[v.component]) % m)


def act_on_side(g: MappingClassElement, side: Side) -> Side:
    if isinstance(side, int):
        return side
    m = g.surface.boundaries[side.component]
    return BoundarySegment(side.component, (side.index + g.rotation_powers[side.component]) % m)


def act_on_arc(g: MappingClassElement, arc: TaggedArc) -> TaggedArc:
    """Image of a tagged arc descriptor: endpoints move, puncture tags pick up the signs."""
    moved = []
    for v, tag in zip(arc.endpoints, arc.tags, strict=True):
        if isinstance(v, Puncture) and tag is not None:
            tag *= g.tag_signs[v.index]
        moved.append((act_on_vertex(g, v), tag))
    moved.sort(key=lambda pair: vertex_key(pair[0]))
    return TaggedArc((moved[0][0], moved[1][0]), (moved[0][1], moved[1][1]))


def act_on_triangulation(g: MappingClassElement, t: TaggedTriangulation) -> TaggedTriangulation:
    """Move marked points and multiply puncture signs; arc slots are kept.

    Raises:
        TagrotError: SURFACE_MISMATCH when ``g`` and ``t`` live on different surfaces.
    """
    if g.surface != t.surface:
        raise surface_mismatch(g.surface, t.surface)
    if g.is_identity:
        return t
    triangles = [
        Triangle(
            (act_on_side(g, tri.sides[0]), act_on_side(g, tri.sides[1]), act_on_side(g, tri.sides[2])),
            (act_on_vertex(g, tri.corners[0]), act_on_vertex(g, tri.corners[1]), act_on_vertex(g, tri.corners[2])),
        )
        for tri in t.triangles
    ]
    base = IdealTriangulation.create(t.surface, triangles)
    signs = [s * d for s, d in zip(t.signs, g.tag_signs, strict=True)]
    logger.debug(f"Applied {g} to a triangulation of {t.surface}")
    return TaggedTriangulation.create(base, signs)
