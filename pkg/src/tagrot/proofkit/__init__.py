"""Executable checks that the tagged rotation is realized by flips."""

from .canonical import (
    Addition,
    ArcType,
    BuildPlan,
    BuildStep,
    SurfaceCase,
    build_canonical_triangulation,
    canonical_build_plan,
    canonical_sweep,
    classify_arc_type,
    classify_arcs,
)
from .genus_replay import genus_mutation_replay, genus_realization, start_quiver
from .properties import (
    flip_mutation_suite,
    green_endpoint_suite,
    polygon,
    punctured_polygon,
    rotation_equivariance_suite,
    rotation_order_suite,
)
from .reports import Check, SuiteReport
from .source_flip import (
    LocalFlipResult,
    LocalShape,
    SourceFlipCase,
    canonical_source_flip_sweep,
    is_sink,
    is_source,
    local_shape,
    local_source_flip,
    local_source_flip_sweep,
    source_flip_check,
    source_flip_suite,
)

__all__ = [
    "Addition",
    "ArcType",
    "BuildPlan",
    "BuildStep",
    "Check",
    "LocalFlipResult",
    "LocalShape",
    "SourceFlipCase",
    "SuiteReport",
    "SurfaceCase",
    "build_canonical_triangulation",
    "canonical_build_plan",
    "canonical_source_flip_sweep",
    "canonical_sweep",
    "classify_arc_type",
    "classify_arcs",
    "flip_mutation_suite",
    "genus_mutation_replay",
    "genus_realization",
    "green_endpoint_suite",
    "is_sink",
    "is_source",
    "local_shape",
    "local_source_flip",
    "local_source_flip_sweep",
    "polygon",
    "punctured_polygon",
    "rotation_equivariance_suite",
    "rotation_order_suite",
    "source_flip_check",
    "source_flip_suite",
    "start_quiver",
]
