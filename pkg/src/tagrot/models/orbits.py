"""Orbits and orders of the tagged rotation on model arcs."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from ..errors import index_out_of_range, internal_error
from ..surface import MarkedSurface, is_annulus
from .arcs import (
    AnnulusBridge,
    ModelArc,
    ModelFamily,
    check_arc,
    enumerate_arcs,
    model_family,
    model_rotate,
)

logger = logging.getLogger(__name__)

DEFAULT_CERTIFICATE = 50


@dataclass(frozen=True)
class Order:
    """A positive order, or infinite together with the rotates certifying it."""

    value: int | None
    certificate: tuple[ModelArc, ...] = field(default=(), compare=False)
    on_arcs: int | None = field(default=None, compare=False)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "infinite" if self.value is None else str(self.value)


@dataclass
class OrbitResult:
    """Rotates ``rho^1(arc) .. rho^k(arc)``; ``period`` is the first ``z`` with ``rho^z(arc) == arc``."""

    start: ModelArc
    rotates: list[ModelArc]
    period: int | None

    @property
    def repeats(self) -> bool:
        return self.period is not None


def orbit(surface: MarkedSurface, arc: ModelArc, k: int) -> OrbitResult:
    """First ``k`` rotates of ``arc``.

    Raises:
        TagrotError: INDEX_OUT_OF_RANGE for ``k < 1``, UNSUPPORTED_SURFACE outside the models.
    """
    if k < 1:
        raise index_out_of_range(k, 1)
    model_family(surface, "orbit")
    check_arc(surface, arc)
    rotates = []
    period = None
    current = arc
    for z in range(1, k + 1):
        current = model_rotate(surface, current)
        rotates.append(current)
        if period is None and current == arc:
            period = z
    return OrbitResult(arc, rotates, period)


def arc_order(surface: MarkedSurface, arc: ModelArc, certificate_length: int = DEFAULT_CERTIFICATE) -> Order:
    """Period of a single arc under the rotation.

    Bridges of the annulus never return; their order is certified infinite by
    ``certificate_length`` pairwise distinct rotates.
    """
    family = model_family(surface, "arc_order")
    if family is ModelFamily.ANNULUS and isinstance(arc, AnnulusBridge):
        return _certified_infinite(surface, arc, certificate_length)
    bound = len(enumerate_arcs(surface)) if family is not ModelFamily.ANNULUS else max(surface.boundaries)
    result = orbit(surface, arc, bound)
    if result.period is None:
        return _certified_infinite(surface, arc, certificate_length)
    return Order(result.period)


def _certified_infinite(surface: MarkedSurface, arc: ModelArc, length: int) -> Order:
    result = orbit(surface, arc, length)
    if result.period is not None or len(set(result.rotates)) != length:
        # a repetition means the orbit is finite after all
        return Order(result.period)
    return Order(None, tuple(result.rotates))


def rotation_order(surface: MarkedSurface, certificate_length: int = DEFAULT_CERTIFICATE) -> Order:
    """Order of the tagged rotation acting on all arcs of a model surface.

    Raises:
        TagrotError: UNSUPPORTED_SURFACE outside the three models.
    """
    family = model_family(surface, "rotation_order")
    if family is ModelFamily.ANNULUS:
        order = _certified_infinite(surface, AnnulusBridge(0, 0, 0), certificate_length)
        logger.info(f"Rotation order on {surface}: {order}")
        return order

    arcs = enumerate_arcs(surface)
    image = {a: model_rotate(surface, a) for a in arcs}
    if set(image.values()) != set(arcs):
        raise internal_error(f"rotation does not permute the arcs of {surface}")
    seen: set[ModelArc] = set()
    on_arcs = 1
    for a in arcs:
        if a in seen:
            continue
        length = 0
        current = a
        while current not in seen:
            seen.add(current)
            current = image[current]
            length += 1
        on_arcs = math.lcm(on_arcs, length)
    # marked points move too: the square has diagonals of period 2 but order 4
    order = math.lcm(on_arcs, *surface.boundaries)
    logger.info(f"Rotation order on {surface}: {order} (on arcs: {on_arcs})")
    return Order(order, on_arcs=on_arcs)


class ObstructionKind(str, Enum):
    TWO_BOUNDARY_COMPONENTS = "two-boundary-components"
    SEVERAL_PUNCTURES = "several-punctures"
    POSITIVE_GENUS = "positive-genus"


@dataclass(frozen=True)
class Obstruction:
    """Why the rotation has infinite order, with an arc whose orbit is infinite."""

    kind: ObstructionKind
    witness: str
    certificate: tuple[ModelArc, ...] = ()


def infinite_order_witness(
    surface: MarkedSurface, certificate_length: int = DEFAULT_CERTIFICATE
) -> Obstruction | None:
    """Infinite-orbit witness, or None for polygons and once-punctured polygons.

    On the annulus the witness orbit is computed in the model; elsewhere the
    witness is described: an arc between two boundary components, an arc from
    a puncture to the boundary when there are several punctures, or a loop that
    stays non-trivial after capping the boundary, whose orbit under the Dehn
    twist is infinite.
    """
    if surface.b >= 2:
        certificate: tuple[ModelArc, ...] = ()
        if is_annulus(surface):
            certificate = rotation_order(surface, certificate_length).certificate
        return Obstruction(
            ObstructionKind.TWO_BOUNDARY_COMPONENTS,
            "an arc from m0.0 to m1.0",
            certificate,
        )
    if surface.punctures >= 2:
        return Obstruction(ObstructionKind.SEVERAL_PUNCTURES, "an arc from p0 to m0.0")
    if surface.genus >= 1:
        return Obstruction(
            ObstructionKind.POSITIVE_GENUS,
            "a loop at m0.0 around a handle, moved by the boundary Dehn twist",
        )
    return None
