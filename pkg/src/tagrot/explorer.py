"""Exchange graphs: breadth-first closure under flips, canonical keys and export.

Two vertex identities are supported. Model triangulations are keyed by their
arc sets, which gives the exact exchange graph of polygons, once-punctured
polygons and the annulus. Tagged triangulations of other surfaces are keyed by
their structure up to renaming arc slots; isotopy classes that differ only by a
mapping class fixing every marked point then share a key, so that mode
computes a quotient of the exchange graph.
"""

import hashlib
import json
import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_fixed

from .errors import invalid_document, io_failure
from .mcg import act_on_triangulation, tagged_rotation
from .models import ModelTriangulation, model_flip_slot, model_rotate_triangulation
from .surface import BoundarySegment, MarkedSurface
from .triangulation import TaggedTriangulation, flip_tagged

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

State = TaggedTriangulation | ModelTriangulation
ExportFormat = Literal["dot", "json"]


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _structure_encoding(t: TaggedTriangulation) -> str:
    """Triangles listed along a traversal rooted at segment b0.0, slots renamed in visit order."""
    base = t.base
    root = BoundarySegment(0, 0)
    start = next(
        (k, i) for k, tri in enumerate(base.triangles) for i, side in enumerate(tri.sides) if side == root
    )
    visited = {start[0]}
    queue = [start]
    labels: dict[int, int] = {}
    parts = []
    while queue:
        k, rotation = queue.pop(0)
        tri = base.triangles[k].rotated(rotation)
        for side in tri.sides:
            if isinstance(side, int) and side not in labels:
                labels[side] = len(labels) + 1
        sides = ",".join(str(labels[s]) if isinstance(s, int) else str(s) for s in tri.sides)
        parts.append(f"{sides}/{','.join(str(c) for c in tri.corners)}")
        for side in tri.sides:
            if not isinstance(side, int):
                continue
            for u, j in base.occurrences(side):
                if u not in visited:
                    visited.add(u)
                    queue.append((u, j))
    signs = ",".join(str(s) for s in t.signs)
    return f"{t.surface}|{signs}|{';'.join(parts)}"


def canonical_key(t: State) -> str:
    """Stable key: equal iff the arc sets (models) or labeled structures (tagged) agree."""
    if isinstance(t, ModelTriangulation):
        arcs = sorted(str(a) for a in t.arcs)
        return _digest(f"{t.surface}|{'|'.join(arcs)}")
    return _digest(_structure_encoding(t))


def _label(t: State) -> str:
    if isinstance(t, ModelTriangulation):
        return str(t.sorted())
    return ""


def _flip(t: State, slot: int) -> State:
    if isinstance(t, ModelTriangulation):
        return model_flip_slot(t, slot)
    return flip_tagged(t, slot)


def _rank(t: State) -> int:
    return len(t.arcs) if isinstance(t, ModelTriangulation) else t.n


@dataclass
class ExchangeGraph:
    """Vertices by canonical key, flip edges ``(key, slot, key')`` recorded from expanded vertices."""

    surface: MarkedSurface
    n: int
    root: str
    mode: Literal["model", "quotient"]
    vertices: dict[str, str] = field(default_factory=dict)
    edges: set[tuple[str, int, str]] = field(default_factory=set)
    expanded: set[str] = field(default_factory=set)
    complete: bool = True
    states: dict[str, State] = field(default_factory=dict, compare=False, repr=False)

    @property
    def truncated(self) -> bool:
        return not self.complete

    def neighbors(self, key: str) -> set[str]:
        return {b for a, _, b in self.edges if a == key}

    def degree(self, key: str) -> int:
        """Number of flips recorded out of ``key``."""
        return len({slot for a, slot, _ in self.edges if a == key})

    def undirected_edges(self) -> set[tuple[str, str]]:
        return {(min(a, b), max(a, b)) for a, _, b in self.edges}

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for key, label in self.vertices.items():
            graph.add_node(key, label=label)
        for a, slot, b in sorted(self.edges):
            if not graph.has_edge(a, b):
                graph.add_edge(a, b, slot=slot)
        return graph


def _neighbors(t: State) -> list[tuple[int, State]]:
    return [(slot, _flip(t, slot)) for slot in range(1, _rank(t) + 1)]


def bfs_exchange_graph(start: State, max_vertices: int = 20_000, workers: int = 1) -> ExchangeGraph:
    """Breadth-first closure of ``start`` under flips.

    A vertex is expanded only when all of its new neighbours still fit under
    ``max_vertices``; otherwise the search stops and the graph is marked
    truncated. Frontier levels may be expanded by ``workers`` threads; results
    are merged in frontier order, so the first discovery of a key wins.
    """
    mode: Literal["model", "quotient"] = "model" if isinstance(start, ModelTriangulation) else "quotient"
    root = canonical_key(start)
    graph = ExchangeGraph(start.surface, _rank(start), root, mode)
    graph.vertices[root] = _label(start)
    graph.states[root] = start
    frontier = [root]
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            states = [graph.states[key] for key in frontier]
            if executor is not None:
                expansions = list(executor.map(_neighbors, states))
            else:
                expansions = [_neighbors(s) for s in states]
            next_frontier: list[str] = []
            for key, flips in zip(frontier, expansions, strict=True):
                keyed = [(slot, canonical_key(s), s) for slot, s in flips]
                new = {k for _, k, _ in keyed if k not in graph.vertices}
                if len(graph.vertices) + len(new) > max_vertices:
                    graph.complete = False
                    break
                for slot, k, s in keyed:
                    if k not in graph.vertices:
                        graph.vertices[k] = _label(s)
                        graph.states[k] = s
                        next_frontier.append(k)
                    graph.edges.add((key, slot, k))
                graph.expanded.add(key)
            if not graph.complete:
                break
            frontier = next_frontier
            logger.debug(f"BFS level done: {len(graph.vertices)} vertices, frontier {len(frontier)}")
    finally:
        if executor is not None:
            executor.shutdown()
    if graph.truncated:
        logger.warning(f"Exchange graph of {start.surface} truncated at {len(graph.vertices)} vertices")
    else:
        logger.info(f"Exchange graph of {start.surface}: {len(graph.vertices)} vertices")
    return graph


def _rotate_state(t: State) -> State:
    if isinstance(t, ModelTriangulation):
        return model_rotate_triangulation(t)
    return act_on_triangulation(tagged_rotation(t.surface), t)


def rotation_vertex_map(graph: ExchangeGraph) -> dict[str, str]:
    """Image key of every vertex under the tagged rotation."""
    return {key: canonical_key(_rotate_state(state)) for key, state in graph.states.items()}


def is_automorphism(graph: ExchangeGraph, mapping: dict[str, str]) -> bool:
    """Whether ``mapping`` is a bijection of the vertices carrying edges onto edges."""
    if set(mapping) != set(graph.vertices) or set(mapping.values()) != set(graph.vertices):
        return False
    edges = graph.undirected_edges()
    return all(tuple(sorted((mapping[a], mapping[b]))) in edges for a, b in edges)


def permutation_order(mapping: dict[str, str]) -> int:
    order = 1
    seen: set[str] = set()
    for start in mapping:
        if start in seen:
            continue
        length, current = 0, start
        while current not in seen:
            seen.add(current)
            current = mapping[current]
            length += 1
        order = math.lcm(order, length)
    return order


class _GraphDocument(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    surface: dict[str, Any]
    n: int
    root: str
    mode: Literal["model", "quotient"]
    complete: bool
    vertices: list[dict[str, str]]
    edges: list[tuple[str, int, str]]
    expanded: list[str] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)


def to_document(graph: ExchangeGraph) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "surface": graph.surface.to_dict(),
        "n": graph.n,
        "root": graph.root,
        "mode": graph.mode,
        "complete": graph.complete,
        "vertices": [{"key": k, "label": graph.vertices[k]} for k in sorted(graph.vertices)],
        "edges": [list(e) for e in sorted(graph.edges)],
        "expanded": sorted(graph.expanded),
    }


def export_json(graph: ExchangeGraph, indent: int | None = 2) -> str:
    return json.dumps(to_document(graph), indent=indent, sort_keys=True) + "\n"


def export_dot(graph: ExchangeGraph, name: str = "EG") -> str:
    lines = [f"graph {name} {{"]
    for key in sorted(graph.vertices):
        label = graph.vertices[key] or key
        lines.append(f'  "{key}" [label="{label}"];')
    drawn: set[tuple[str, str]] = set()
    for a, slot, b in sorted(graph.edges):
        pair = (min(a, b), max(a, b))
        if pair in drawn:
            continue
        drawn.add(pair)
        lines.append(f'  "{a}" -- "{b}" [label="{slot}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(graph: ExchangeGraph, fmt: ExportFormat, indent: int | None = 2) -> bytes:
    """Deterministic serialization of ``graph``."""
    text = export_dot(graph) if fmt == "dot" else export_json(graph, indent)
    return text.encode()


def load_graph(data: bytes | str) -> ExchangeGraph:
    """Inverse of the JSON export; the triangulation states are not restored.

    Raises:
        TagrotError: INVALID_DOCUMENT for malformed input.
    """
    try:
        raw = json.loads(data)
        doc = _GraphDocument.model_validate(raw)
    except (json.JSONDecodeError, ValidationError) as e:
        raise invalid_document(str(e)) from e
    if doc.schema_version != SCHEMA_VERSION:
        raise invalid_document(f"unsupported schema {doc.schema_version}")
    return ExchangeGraph(
        surface=MarkedSurface.from_dict(doc.surface),
        n=doc.n,
        root=doc.root,
        mode=doc.mode,
        vertices={v["key"]: v.get("label", "") for v in doc.vertices},
        edges={(a, int(slot), b) for a, slot, b in doc.edges},
        expanded=set(doc.expanded),
        complete=doc.complete,
    )


def write_export(
    graph: ExchangeGraph,
    path: str | Path,
    fmt: ExportFormat,
    attempts: int = 3,
    wait_seconds: float = 0.2,
    indent: int | None = 2,
    writer: Callable[[Path, bytes], None] | None = None,
) -> Path:
    """Write an export, retrying transient OS errors.

    Raises:
        TagrotError: IO_FAILURE once every attempt has failed.
    """
    target = Path(path)
    payload = export(graph, fmt, indent)
    write = writer or (lambda p, data: p.write_bytes(data))
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(attempts),
            wait=wait_fixed(wait_seconds),
            retry=retry_if_exception_type(OSError),
            reraise=True,
        ):
            with attempt:
                write(target, payload)
    except OSError as e:
        raise io_failure(str(target), str(e)) from e
    logger.info(f"Wrote {fmt} export of {len(graph.vertices)} vertices to {target}")
    return target
