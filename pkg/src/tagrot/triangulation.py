"""Ideal and tagged triangulations as labeled combinatorial structures.

A triangulation is a list of triangles. Each triangle stores its three sides in
counterclockwise order together with the marked points at its corners: side ``i``
runs from ``corners[i]`` to ``corners[i + 1]``. Sides are arc slots ``1..n`` or
boundary segments. Slots survive flips, so the slot of an arc is its index in the
exchange matrix.

Sign convention: ``b_ij = +1`` for every pair of arc sides where ``i`` is
immediately followed by ``j`` counterclockwise in a triangle. Self-folded
triangles contribute nothing; a radius reads its row and column off the
enclosing loop.
"""

import json
import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import (
    invalid_document,
    invalid_triangulation,
    not_flippable,
    not_skew_symmetric,
    unknown_arc,
)
from .surface import (
    BoundaryPoint,
    BoundarySegment,
    MarkedSurface,
    Puncture,
    Vertex,
    boundary_segments,
    parse_vertex,
    rank,
    require_valid,
    segment_ends,
    vertex_key,
)

logger = logging.getLogger(__name__)

Side = int | BoundarySegment

SCHEMA_VERSION = 1


def side_key(side: Side) -> tuple[int, int, int]:
    if isinstance(side, int):
        return (0, side, 0)
    return (1, side.component, side.index)


def _rotate(seq: tuple[Any, Any, Any], k: int) -> tuple[Any, Any, Any]:
    return (seq[k % 3], seq[(k + 1) % 3], seq[(k + 2) % 3])


@dataclass(frozen=True)
class Triangle:
    """Three sides in counterclockwise order and the marked points at the corners."""

    sides: tuple[Side, Side, Side]
    corners: tuple[Vertex, Vertex, Vertex]

    def rotated(self, k: int) -> "Triangle":
        return Triangle(_rotate(self.sides, k), _rotate(self.corners, k))

    def normalized(self) -> "Triangle":
        """Rotation with the smallest (side, corner) key."""
        return min((self.rotated(k) for k in range(3)), key=Triangle.sort_key)

    def sort_key(self) -> tuple[Any, ...]:
        return (
            tuple(side_key(s) for s in self.sides),
            tuple(vertex_key(c) for c in self.corners),
        )

    def position(self, side: Side) -> int:
        return self.sides.index(side)

    def arc_sides(self) -> list[int]:
        return [s for s in self.sides if isinstance(s, int)]

    @property
    def fold_index(self) -> int | None:
        """Position ``i`` with ``sides[i] == sides[i + 1]``, or None."""
        for i in range(3):
            if self.sides[i] == self.sides[(i + 1) % 3]:
                return i
        return None

    @property
    def is_self_folded(self) -> bool:
        return self.fold_index is not None

    @property
    def radius(self) -> int:
        i = self.fold_index
        assert i is not None
        side = self.sides[i]
        assert isinstance(side, int)
        return side

    @property
    def loop(self) -> Side:
        i = self.fold_index
        assert i is not None
        return self.sides[(i + 2) % 3]

    @property
    def fold_puncture(self) -> Puncture:
        i = self.fold_index
        assert i is not None
        corner = self.corners[(i + 1) % 3]
        assert isinstance(corner, Puncture)
        return corner

    @property
    def fold_base(self) -> Vertex:
        """Marked point where the radius and the loop start."""
        i = self.fold_index
        assert i is not None
        return self.corners[i]


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[Any, Any] = {}

    def find(self, x: Any) -> Any:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: Any, b: Any) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def check_triangles(surface: MarkedSurface, triangles: Iterable[Triangle]) -> str | None:
    """Return the first violated invariant of a triangle list, or None."""
    tris = list(triangles)
    n = rank(surface)
    occurrences: dict[int, list[tuple[int, int]]] = defaultdict(list)
    segments: dict[BoundarySegment, int] = defaultdict(int)
    for t_idx, tri in enumerate(tris):
        for i, side in enumerate(tri.sides):
            if isinstance(side, int):
                occurrences[side].append((t_idx, i))
            else:
                segments[side] += 1
                if not _segment_known(side, surface):
                    return f"unknown boundary segment {side}"
                start, end = segment_ends(side, surface)
                if tri.corners[i] != start or tri.corners[(i + 1) % 3] != end:
                    return f"boundary segment {side} does not run {start} -> {end}"

    if 3 * len(tris) != 2 * n + surface.m:
        return f"{len(tris)} triangles, expected (2n + m) / 3 with n={n}, m={surface.m}"
    if sorted(occurrences) != list(range(1, n + 1)):
        return f"arc slots {sorted(occurrences)} are not 1..{n}"
    for label, occ in occurrences.items():
        if len(occ) != 2:
            return f"arc {label} occurs {len(occ)} times"
    expected_segments = set(boundary_segments(surface))
    if set(segments) != expected_segments or any(c != 1 for c in segments.values()):
        return "every boundary segment must occur exactly once"

    for tri in tris:
        for corner in tri.corners:
            if not _vertex_known(corner, surface):
                return f"unknown marked point {corner}"
        fold = tri.fold_index
        if fold is not None:
            if len(set(tri.sides)) != 2:
                return f"triangle {tri.sides} repeats every side"
            if not isinstance(tri.corners[(fold + 1) % 3], Puncture):
                return f"self-folded triangle {tri.sides} does not enclose a puncture"

    uf = _UnionFind()
    for t_idx, tri in enumerate(tris):
        for i in range(3):
            uf.find((t_idx, i))
    for label, ((t, i), (u, j)) in occurrences.items():
        a, b = tris[t], tris[u]
        if a.corners[i] != b.corners[(j + 1) % 3] or a.corners[(i + 1) % 3] != b.corners[j]:
            return f"arc {label} is glued with inconsistent endpoints"
        uf.union((t, i), (u, (j + 1) % 3))
        uf.union((t, (i + 1) % 3), (u, j))

    labels: dict[Any, set[Vertex]] = defaultdict(set)
    for t_idx, tri in enumerate(tris):
        for i in range(3):
            labels[uf.find((t_idx, i))].add(tri.corners[i])
    if len(labels) != surface.m + surface.punctures:
        return f"{len(labels)} vertex classes, expected {surface.m + surface.punctures}"
    seen: set[Vertex] = set()
    for names in labels.values():
        if len(names) != 1:
            return f"corners {sorted(str(v) for v in names)} are glued together"
        seen |= names
    if len(seen) != len(labels):
        return "a marked point is split into several vertices"
    return None


def _segment_known(seg: BoundarySegment, surface: MarkedSurface) -> bool:
    return 0 <= seg.component < surface.b and 0 <= seg.index < surface.boundaries[seg.component]


def _vertex_known(v: Vertex, surface: MarkedSurface) -> bool:
    if isinstance(v, BoundaryPoint):
        return 0 <= v.component < surface.b and 0 <= v.index < surface.boundaries[v.component]
    return 0 <= v.index < surface.punctures


@dataclass(frozen=True)
class IdealTriangulation:
    """Validated, normalized ideal triangulation.

    Build instances with :meth:`create`; the triangle list is stored in normal
    form so that equal labeled structures compare equal.
    """

    surface: MarkedSurface
    triangles: tuple[Triangle, ...]
    folds: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @classmethod
    def create(cls, surface: MarkedSurface, triangles: Iterable[Triangle]) -> "IdealTriangulation":
        require_valid(surface)
        tris = sorted((t.normalized() for t in triangles), key=Triangle.sort_key)
        reason = check_triangles(surface, tris)
        if reason is not None:
            raise invalid_triangulation(reason, {"surface": str(surface)})
        folds = tuple((i, t.radius) for i, t in enumerate(tris) if t.is_self_folded)
        return cls(surface, tuple(tris), folds)

    @property
    def n(self) -> int:
        return rank(self.surface)

    @property
    def slots(self) -> range:
        return range(1, self.n + 1)

    def occurrences(self, slot: int) -> list[tuple[int, int]]:
        found = [
            (t_idx, i)
            for t_idx, tri in enumerate(self.triangles)
            for i, side in enumerate(tri.sides)
            if side == slot
        ]
        if not found:
            raise unknown_arc(slot, list(self.slots))
        return found

    def endpoints(self, slot: int) -> tuple[Vertex, Vertex]:
        t_idx, i = self.occurrences(slot)[0]
        tri = self.triangles[t_idx]
        return tri.corners[i], tri.corners[(i + 1) % 3]

    def fold_of(self, slot: int) -> Triangle | None:
        """Self-folded triangle whose radius is ``slot``."""
        for t_idx, radius in self.folds:
            if radius == slot:
                return self.triangles[t_idx]
        return None

    def enclosing_fold(self, slot: int) -> Triangle | None:
        """Self-folded triangle whose loop is ``slot``."""
        for t_idx, _ in self.folds:
            tri = self.triangles[t_idx]
            if tri.loop == slot:
                return tri
        return None

    def relabel(self, mapping: Mapping[int, int]) -> "IdealTriangulation":
        """Rename arc slots; slots absent from ``mapping`` keep their label."""
        tris = [
            Triangle(
                tuple(mapping.get(s, s) if isinstance(s, int) else s for s in tri.sides),  # type: ignore[arg-type]
                tri.corners,
            )
            for tri in self.triangles
        ]
        return IdealTriangulation.create(self.surface, tris)


def flip_ideal(t: IdealTriangulation, slot: int) -> IdealTriangulation:
    """Replace the arc in ``slot`` by the other diagonal of its quadrilateral.

    Raises:
        TagrotError: UNKNOWN_ARC for an absent slot, NOT_FLIPPABLE for the radius of a
            self-folded triangle.
    """
    occ = t.occurrences(slot)
    (t1, i1), (t2, i2) = occ
    if t1 == t2:
        raise not_flippable(slot, "radius of a self-folded triangle")

    first = t.triangles[t1].rotated(i1)
    second = t.triangles[t2].rotated(i2)
    _, x, y = first.sides
    p, q, r = first.corners
    _, z, w = second.sides
    s = second.corners[2]
    if second.corners[0] != q or second.corners[1] != p:
        raise invalid_triangulation(f"arc {slot} is glued with inconsistent endpoints")

    replaced = [
        Triangle((slot, w, x), (r, s, q)),
        Triangle((slot, y, z), (s, r, p)),
    ]
    rest = [tri for k, tri in enumerate(t.triangles) if k not in (t1, t2)]
    logger.debug(f"Ideal flip at slot {slot}: {p}-{q} becomes {r}-{s}")
    return IdealTriangulation.create(t.surface, rest + replaced)


@dataclass(frozen=True)
class TaggedArc:
    """Endpoints of a tagged arc with the tag at each puncture end.

    Tags are ``+1`` (plain) or ``-1`` (notched) at punctures and None at
    boundary marked points.
    """

    endpoints: tuple[Vertex, Vertex]
    tags: tuple[int | None, int | None]

    def __str__(self) -> str:
        parts = []
        for v, tag in zip(self.endpoints, self.tags, strict=True):
            parts.append(f"{v}{'' if tag in (None, 1) else '*'}")
        return "-".join(parts)


def _tagged(a: Vertex, b: Vertex, tag_a: int | None, tag_b: int | None) -> TaggedArc:
    if vertex_key(b) < vertex_key(a):
        a, b, tag_a, tag_b = b, a, tag_b, tag_a
    return TaggedArc((a, b), (tag_a, tag_b))


@dataclass(frozen=True)
class TaggedTriangulation:
    """Ideal pattern plus one sign per puncture (+1 plain, -1 notched).

    Normal form: a puncture enclosed by a self-folded triangle whose loop is
    an arc carries sign +1. The loop slot stands for the radius with the
    opposite tag, so the pair (radius, loop) is the plain/notched digon pair at
    that puncture.
    """

    base: IdealTriangulation
    signs: tuple[int, ...]

    @classmethod
    def create(cls, base: IdealTriangulation, signs: Iterable[int] | None = None) -> "TaggedTriangulation":
        values = list(signs) if signs is not None else [1] * base.surface.punctures
        if len(values) != base.surface.punctures or any(v not in (1, -1) for v in values):
            raise invalid_triangulation(f"signs {values} do not match {base.surface.punctures} punctures")
        swaps: dict[int, int] = {}
        for t_idx, radius in base.folds:
            tri = base.triangles[t_idx]
            puncture = tri.fold_puncture.index
            if isinstance(tri.loop, int) and values[puncture] == -1:
                swaps[radius] = tri.loop
                swaps[tri.loop] = radius
                values[puncture] = 1
        if swaps:
            base = base.relabel(swaps)
        return cls(base, tuple(values))

    @classmethod
    def plain(cls, base: IdealTriangulation) -> "TaggedTriangulation":
        return cls.create(base)

    @property
    def surface(self) -> MarkedSurface:
        return self.base.surface

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def triangles(self) -> tuple[Triangle, ...]:
        return self.base.triangles

    @property
    def digon_pairs(self) -> dict[Puncture, tuple[int, int]]:
        """Puncture -> (plain radius slot, notched radius slot) for every digon pair."""
        pairs = {}
        for t_idx, radius in self.base.folds:
            tri = self.base.triangles[t_idx]
            if isinstance(tri.loop, int):
                pairs[tri.fold_puncture] = (radius, tri.loop)
        return pairs

    def sign(self, puncture: Puncture) -> int:
        return self.signs[puncture.index]

    def tagged_arc(self, slot: int) -> TaggedArc:
        return tagged_arc(self, slot)

    def arcs(self) -> dict[int, TaggedArc]:
        return {slot: tagged_arc(self, slot) for slot in self.base.slots}


def tagged_arc(t: TaggedTriangulation, slot: int) -> TaggedArc:
    """Tagged arc occupying ``slot``."""
    fold = t.base.fold_of(slot)
    if fold is not None:
        p = fold.fold_puncture
        return _tagged(fold.fold_base, p, _tag_at(t, fold.fold_base), t.sign(p))
    fold = t.base.enclosing_fold(slot)
    if fold is not None:
        p = fold.fold_puncture
        return _tagged(fold.fold_base, p, _tag_at(t, fold.fold_base), -t.sign(p))
    a, b = t.base.endpoints(slot)
    return _tagged(a, b, _tag_at(t, a), _tag_at(t, b))


def _tag_at(t: TaggedTriangulation, v: Vertex) -> int | None:
    return t.sign(v) if isinstance(v, Puncture) else None


def flip_tagged(t: TaggedTriangulation, slot: int) -> TaggedTriangulation:
    """Tagged flip; defined for every slot.

    Raises:
        TagrotError: UNKNOWN_ARC for an absent slot.
    """
    base = t.base
    base.occurrences(slot)
    fold = base.fold_of(slot)
    if fold is None:
        return TaggedTriangulation.create(flip_ideal(base, slot), t.signs)

    signs = list(t.signs)
    p = fold.fold_puncture.index
    signs[p] = -signs[p]
    loop = fold.loop
    if not isinstance(loop, int):
        # once-punctured monogon: the flip only changes the tag of the radius
        return TaggedTriangulation.create(base, signs)
    swapped = base.relabel({slot: loop, loop: slot})
    return TaggedTriangulation.create(flip_ideal(swapped, slot), signs)


@dataclass(frozen=True, eq=False)
class BMatrix:
    """Skew-symmetric integer exchange matrix, indexed ``1..n`` through :meth:`entry`."""

    entries: npt.NDArray[np.int64]

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise invalid_document(f"exchange matrix must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def entry(self, i: int, j: int) -> int:
        return int(self.entries[i - 1, j - 1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.entries.tobytes()))

    def __neg__(self) -> "BMatrix":
        return BMatrix(-self.entries)

    def __repr__(self) -> str:
        return f"BMatrix({self.entries.tolist()})"

    def skew_violation(self) -> tuple[int, int] | None:
        bad = np.argwhere(self.entries != -self.entries.T)
        if bad.size == 0:
            return None
        i, j = bad[0]
        return (int(i) + 1, int(j) + 1)

    def permuted(self, perm: Mapping[int, int]) -> "BMatrix":
        """Matrix after renaming index ``i`` to ``perm[i]`` (both 1-based)."""
        order = np.empty(self.n, dtype=np.int64)
        for i in range(1, self.n + 1):
            order[perm[i] - 1] = i - 1
        return BMatrix(self.entries[np.ix_(order, order)])

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    @classmethod
    def zeros(cls, n: int) -> "BMatrix":
        return cls(np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_arrows(cls, n: int, arrows: Iterable[tuple[int, int]] | Mapping[tuple[int, int], int]) -> "BMatrix":
        """Exchange matrix of a quiver given as 1-based arrows (repeat or weight for multiplicity)."""
        items = arrows.items() if isinstance(arrows, Mapping) else ((a, 1) for a in arrows)
        arr = np.zeros((n, n), dtype=np.int64)
        for (i, j), mult in items:
            arr[i - 1, j - 1] += mult
            arr[j - 1, i - 1] -= mult
        return cls(arr)


@dataclass(frozen=True)
class Quiver:
    """Arrow multiplicities ``max(b_ij, 0)`` between arc slots."""

    vertices: tuple[int, ...]
    arrows: tuple[tuple[tuple[int, int], int], ...]

    def multiplicity(self, i: int, j: int) -> int:
        return dict(self.arrows).get((i, j), 0)

    def arrow_list(self) -> list[tuple[int, int]]:
        """Arrows with repetition, sorted."""
        return [a for a, mult in self.arrows for _ in range(mult)]

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{"]
        lines.extend(f"  {v};" for v in self.vertices)
        lines.extend(f"  {i} -> {j};" for i, j in self.arrow_list())
        lines.append("}")
        return "\n".join(lines) + "\n"


def quiver(b: BMatrix) -> Quiver:
    """Quiver of an exchange matrix.

    Raises:
        TagrotError: NOT_SKEW_SYMMETRIC when ``b_ij != -b_ji`` somewhere.
    """
    bad = b.skew_violation()
    if bad is not None:
        raise not_skew_symmetric(bad)
    arrows = tuple(
        ((i + 1, j + 1), int(b.entries[i, j]))
        for i in range(b.n)
        for j in range(b.n)
        if b.entries[i, j] > 0
    )
    return Quiver(tuple(range(1, b.n + 1)), arrows)


def b_matrix(t: IdealTriangulation | TaggedTriangulation) -> BMatrix:
    """Signed adjacency matrix of a triangulation."""
    base = t.base if isinstance(t, TaggedTriangulation) else t
    n = base.n
    raw = np.zeros((n + 1, n + 1), dtype=np.int64)
    for tri in base.triangles:
        if tri.is_self_folded:
            continue
        for i in range(3):
            a, b = tri.sides[i], tri.sides[(i + 1) % 3]
            if isinstance(a, int) and isinstance(b, int):
                raw[a, b] += 1
                raw[b, a] -= 1

    # radius -> enclosing loop; index 0 is an all-zero row for boundary loops
    pi = np.arange(n + 1)
    for t_idx, radius in base.folds:
        loop = base.triangles[t_idx].loop
        pi[radius] = loop if isinstance(loop, int) else 0
    idx = pi[1:]
    return BMatrix(raw[np.ix_(idx, idx)])


class _TriangleDocument(BaseModel):
    sides: list[int | str] = Field(min_length=3, max_length=3)
    corners: list[str] = Field(min_length=3, max_length=3)


class TriangulationDocument(BaseModel):
    """JSON document of a tagged triangulation."""

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    surface: dict[str, Any]
    triangles: list[_TriangleDocument]
    folds: list[tuple[int, int]] = Field(default_factory=list)
    signs: dict[str, int] = Field(default_factory=dict)

    model_config = ConfigDict(populate_by_name=True)


def _encode_side(side: Side) -> int | str:
    return side if isinstance(side, int) else str(side)


def _decode_side(raw: int | str) -> Side:
    if isinstance(raw, int):
        return raw
    if raw.startswith("b"):
        comp, _, idx = raw[1:].partition(".")
        return BoundarySegment(int(comp), int(idx))
    return int(raw)


def to_document(t: TaggedTriangulation) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "surface": t.surface.to_dict(),
        "triangles": [
            {"sides": [_encode_side(s) for s in tri.sides], "corners": [str(c) for c in tri.corners]}
            for tri in t.triangles
        ],
        "folds": [[i, r] for i, r in t.base.folds],
        "signs": {f"p{i}": s for i, s in enumerate(t.signs)},
    }


def from_document(data: Mapping[str, Any]) -> TaggedTriangulation:
    """Rebuild a tagged triangulation; folds are recomputed and must agree."""
    try:
        doc = TriangulationDocument.model_validate(data)
    except ValidationError as e:
        raise invalid_document(str(e)) from e
    if doc.schema_version != SCHEMA_VERSION:
        raise invalid_document(f"unsupported schema {doc.schema_version}")
    surface = MarkedSurface.from_dict(doc.surface)
    try:
        triangles = [
            Triangle(
                tuple(_decode_side(s) for s in tri.sides),  # type: ignore[arg-type]
                tuple(parse_vertex(c) for c in tri.corners),  # type: ignore[arg-type]
            )
            for tri in doc.triangles
        ]
    except ValueError as e:
        raise invalid_document(str(e)) from e
    base = IdealTriangulation.create(surface, triangles)
    signs = [doc.signs.get(f"p{i}", 1) for i in range(surface.punctures)]
    t = TaggedTriangulation.create(base, signs)
    if doc.folds and sorted(tuple(f) for f in doc.folds) != sorted(base.folds):
        # fold marks are derived data; a mismatch means the file was edited by hand
        raise invalid_triangulation("fold marks disagree with the triangles", {"folds": doc.folds})
    return t


def dump_triangulation(t: TaggedTriangulation, indent: int | None = 2) -> str:
    return json.dumps(to_document(t), indent=indent, sort_keys=True)


def load_triangulation(text: str) -> TaggedTriangulation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise invalid_document(f"not JSON: {e}") from e
    if not isinstance(data, dict):
        raise invalid_document("triangulation document must be an object")
    return from_document(data)


__all__ = [
    "BMatrix",
    "IdealTriangulation",
    "Quiver",
    "Side",
    "TaggedArc",
    "TaggedTriangulation",
    "Triangle",
    "b_matrix",
    "check_triangles",
    "dump_triangulation",
    "flip_ideal",
    "flip_tagged",
    "load_triangulation",
    "quiver",
    "tagged_arc",
]
