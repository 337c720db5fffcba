"""Explicit arc models: polygon, once-punctured polygon and annulus."""

from .arcs import (
    AnnulusBridge,
    AnnulusPeripheral,
    ModelArc,
    ModelFamily,
    PolygonArc,
    PuncturedChord,
    Radius,
    apply_element,
    arc_from_dict,
    arc_to_dict,
    compatible,
    enumerate_arcs,
    model_family,
    model_rotate,
    parse_arc,
)
from .orbits import (
    Obstruction,
    ObstructionKind,
    OrbitResult,
    Order,
    arc_order,
    infinite_order_witness,
    orbit,
    rotation_order,
)
from .triangulation import (
    ModelTriangulation,
    apply_to_triangulation,
    canonical_start,
    compatibility_graph,
    model_flip,
    model_flip_slot,
    model_rotate_triangulation,
    model_triangulations,
)

__all__ = [
    "AnnulusBridge",
    "AnnulusPeripheral",
    "ModelArc",
    "ModelFamily",
    "ModelTriangulation",
    "Obstruction",
    "ObstructionKind",
    "OrbitResult",
    "Order",
    "PolygonArc",
    "PuncturedChord",
    "Radius",
    "apply_element",
    "apply_to_triangulation",
    "arc_from_dict",
    "arc_order",
    "arc_to_dict",
    "canonical_start",
    "compatibility_graph",
    "compatible",
    "enumerate_arcs",
    "infinite_order_witness",
    "model_family",
    "model_flip",
    "model_flip_slot",
    "model_rotate",
    "model_rotate_triangulation",
    "model_triangulations",
    "orbit",
    "parse_arc",
    "rotation_order",
]
