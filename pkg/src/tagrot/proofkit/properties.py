"""Property suites: rotation orders, flip/mutation commutation, equivariance, green endpoints."""

import logging

import numpy as np

from ..explorer import bfs_exchange_graph, is_automorphism, permutation_order, rotation_vertex_map
from ..models import (
    AnnulusBridge,
    ModelTriangulation,
    canonical_start,
    model_flip,
    model_flip_slot,
    model_rotate,
    model_rotate_triangulation,
    model_triangulations,
    orbit,
    rotation_order,
)
from ..mutation import find_maximal_green_sequences, green_endpoint_report, mutate_b
from ..surface import MarkedSurface, make_surface
from ..triangulation import TaggedTriangulation, b_matrix, flip_tagged
from .canonical import build_canonical_triangulation
from .reports import SuiteReport

logger = logging.getLogger(__name__)


def polygon(n: int) -> MarkedSurface:
    """Type A_n: the (n+3)-gon."""
    return make_surface(0, (n + 3,), 0)


def punctured_polygon(n: int) -> MarkedSurface:
    """Type D_n: the once-punctured n-gon."""
    return make_surface(0, (n,), 1)


EXHAUSTIVE_SURFACES = (polygon(2), polygon(3), punctured_polygon(3), punctured_polygon(4))
RANDOM_WALK_SURFACES = (make_surface(0, (2, 2), 0), make_surface(1, (1,), 0))
EQUIVARIANCE_SURFACES = EXHAUSTIVE_SURFACES
SAMPLED_ANNULUS = make_surface(0, (2, 2), 0)
GREEN_BOUNDS = ((polygon(2), 6), (polygon(3), 10), (punctured_polygon(4), 12))


def rotation_order_suite(max_rank: int = 8, certificate_length: int = 50) -> SuiteReport:
    """Orders n+3 on A_n, n or 2n on D_n, and an infinite bridge orbit on the annulus."""
    report = SuiteReport("rotation-orders")
    for n in range(1, max_rank + 1):
        order = rotation_order(polygon(n))
        report.add(f"A({n}) has order {n + 3}", order.value == n + 3, expected=n + 3, actual=order.value)
    for n in range(3, max_rank + 1):
        expected = n if n % 2 == 0 else 2 * n
        order = rotation_order(punctured_polygon(n))
        report.add(f"D({n}) has order {expected}", order.value == expected, expected=expected, actual=order.value)

    annulus = make_surface(0, (1, 1), 0)
    result = orbit(annulus, AnnulusBridge(0, 0, 0), certificate_length)
    distinct = len(set(result.rotates))
    report.add(
        f"annulus bridge has {certificate_length} distinct rotates",
        distinct == certificate_length and not result.repeats,
        expected=certificate_length,
        actual=distinct,
    )
    return report


def _commutes(t: TaggedTriangulation, slot: int) -> bool:
    return b_matrix(flip_tagged(t, slot)) == mutate_b(b_matrix(t), slot)


def flip_mutation_suite(seed: int = 1729, samples: int = 200) -> SuiteReport:
    """B(flip(t, i)) == mu_i(B(t)) on every model triangulation and along seeded random walks."""
    report = SuiteReport("flip-mutation")
    for surface in EXHAUSTIVE_SURFACES:
        failures = []
        total = 0
        for model in model_triangulations(surface):
            t = model.tagged()
            for slot in t.base.slots:
                total += 1
                if not _commutes(t, slot):
                    failures.append([str(model), slot])
        report.add(f"{surface}: every flip commutes", not failures, pairs=total, failures=failures[:10])

    rng = np.random.default_rng(seed)
    for surface in RANDOM_WALK_SURFACES:
        t = build_canonical_triangulation(surface)
        failures = []
        for step in range(samples):
            slot = int(rng.integers(1, t.n + 1))
            if not _commutes(t, slot):
                failures.append([step, slot])
            t = flip_tagged(t, slot)
        report.add(f"{surface}: {samples} random flips commute", not failures, seed=seed, failures=failures[:10])
    return report


def _equivariant(model: ModelTriangulation, slot: int) -> bool:
    arc = model.arcs[slot - 1]
    left = model_rotate_triangulation(model_flip_slot(model, slot))
    right = model_flip(model_rotate_triangulation(model), model_rotate(model.surface, arc))
    return left.arc_set == right.arc_set


def rotation_equivariance_suite(max_vertices: int = 20_000, seed: int = 1729, samples: int = 500) -> SuiteReport:
    """The rotation is an exchange-graph automorphism and commutes with every flip.

    Polygons and punctured polygons are checked on every triangulation; the
    annulus, whose exchange graph is infinite, along a seeded random walk.
    """
    report = SuiteReport("rotation-equivariance")
    for surface in EQUIVARIANCE_SURFACES:
        graph = bfs_exchange_graph(canonical_start(surface), max_vertices)
        mapping = rotation_vertex_map(graph)
        report.add(
            f"{surface}: rotation is a graph automorphism",
            graph.complete and is_automorphism(graph, mapping),
            vertices=len(graph.vertices),
        )
        graph_order = permutation_order(mapping)
        arc_order = rotation_order(surface).value or 0
        report.add(
            f"{surface}: automorphism order divides the rotation order",
            arc_order > 0 and arc_order % graph_order == 0,
            automorphism=graph_order,
            rotation=arc_order,
        )
        failures = [
            [str(model), slot]
            for model in model_triangulations(surface)
            for slot in range(1, len(model.arcs) + 1)
            if not _equivariant(model, slot)
        ]
        report.add(f"{surface}: rotation commutes with flips", not failures, failures=failures[:10])

    rng = np.random.default_rng(seed)
    model = canonical_start(SAMPLED_ANNULUS)
    failures = []
    for step in range(samples):
        slot = int(rng.integers(1, len(model.arcs) + 1))
        if not _equivariant(model, slot):
            failures.append([step, str(model), slot])
        model = model_flip_slot(model, slot)
    report.add(
        f"{SAMPLED_ANNULUS}: rotation commutes with {samples} random flips",
        not failures,
        seed=seed,
        failures=failures[:10],
    )
    return report


def green_endpoint_suite(workers: int = 1) -> SuiteReport:
    """Every maximal green sequence found ends at the rotated start triangulation."""
    report = SuiteReport("green-endpoints")
    for surface, limit in GREEN_BOUNDS:
        start = canonical_start(surface)
        found = find_maximal_green_sequences(b_matrix(start.tagged()), limit, workers)
        mismatched = [list(seq) for seq in found.sequences if not green_endpoint_report(start, seq).matches]
        report.add(
            f"{surface}: green sequences up to length {limit} end at the rotation",
            bool(found.sequences) and not mismatched,
            sequences=len(found.sequences),
            mismatched=mismatched[:10],
        )
    logger.info(f"Green endpoint suite: {len(report.checks) - len(report.failures)}/{len(report.checks)} passed")
    return report
