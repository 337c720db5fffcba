"""Exchange-matrix mutation, framed mutation and maximal green sequences.

C-matrix convention: rows index the initial seed, columns the current seed.
A vertex is green while its column is entrywise non-negative.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .errors import (
    index_out_of_range,
    internal_error,
    limit_exceeded,
    not_maximal_green,
    sign_coherence_violation,
)
from .models.triangulation import ModelTriangulation, model_flip_slot, model_rotate_triangulation
from .triangulation import BMatrix, b_matrix

logger = logging.getLogger(__name__)

IntMatrix = npt.NDArray[np.int64]


def _check_index(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise index_out_of_range(k, n)


def mutate_b(b: BMatrix, k: int) -> BMatrix:
    """Matrix mutation at the 1-based index ``k``.

    Raises:
        TagrotError: INDEX_OUT_OF_RANGE unless ``1 <= k <= n``.
    """
    _check_index(k, b.n)
    m = b.entries
    col = m[:, k - 1]
    row = m[k - 1, :]
    # sgn(b_ik) * max(0, b_ik * b_kj) == (|b_ik| b_kj + b_ik |b_kj|) / 2
    out = m + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    out[k - 1, :] = -row
    out[:, k - 1] = -col
    return BMatrix(out)


@dataclass(frozen=True, eq=False)
class FramedSeed:
    """Exchange matrix with its C-matrix and the indices mutated so far."""

    b: BMatrix
    c: IntMatrix
    history: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        c = np.array(self.c, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def initial(cls, b: BMatrix) -> "FramedSeed":
        return cls(b, np.eye(b.n, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.b.n

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FramedSeed)
            and self.b == other.b
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self) -> int:
        return hash((self.b, self.c.tobytes()))


def mutate_framed(s: FramedSeed, k: int) -> FramedSeed:
    """Mutate B and C at ``k`` and extend the history.

    Raises:
        TagrotError: INDEX_OUT_OF_RANGE, or SIGN_COHERENCE_VIOLATION when a
            C-column acquires mixed signs.
    """
    _check_index(k, s.n)
    c, b = s.c, s.b.entries
    ck = c[:, k - 1]
    bk = b[k - 1, :]
    new_c = (
        c
        + np.outer(np.maximum(ck, 0), np.maximum(bk, 0))
        - np.outer(np.maximum(-ck, 0), np.maximum(-bk, 0))
    )
    new_c[:, k - 1] = -ck
    history = s.history + (k,)
    for j in range(s.n):
        column = new_c[:, j]
        if (column > 0).any() and (column < 0).any():
            raise sign_coherence_violation(j + 1, column.tolist(), list(history))
    return FramedSeed(mutate_b(s.b, k), new_c, history)


def is_green(s: FramedSeed, k: int) -> bool:
    _check_index(k, s.n)
    return bool((s.c[:, k - 1] >= 0).all())


def green_vertices(s: FramedSeed) -> list[int]:
    return [k for k in range(1, s.n + 1) if bool((s.c[:, k - 1] >= 0).all())]


def terminal_permutation(s: FramedSeed) -> dict[int, int] | None:
    """Read ``C = -P``: map current index ``j`` to the initial index ``i`` with ``c_ij = -1``.

    Returns None when C is not the negative of a permutation matrix.
    """
    c = s.c
    if not ((c == 0) | (c == -1)).all():
        return None
    if not ((c.sum(axis=0) == -1).all() and (c.sum(axis=1) == -1).all()):
        return None
    return {j + 1: int(np.argmin(c[:, j])) + 1 for j in range(s.n)}


@dataclass
class GreenSearchResult:
    """Maximal green sequences found, in lexicographic order.

    ``truncated`` lists the prefixes that hit the length bound while still
    having green vertices.
    """

    sequences: list[tuple[int, ...]] = field(default_factory=list)
    permutations: dict[tuple[int, ...], dict[int, int]] = field(default_factory=dict)
    truncated: list[tuple[int, ...]] = field(default_factory=list)
    limit: int = 0

    @property
    def complete(self) -> bool:
        return not self.truncated

    def merge(self, other: "GreenSearchResult") -> None:
        self.sequences.extend(other.sequences)
        self.permutations.update(other.permutations)
        self.truncated.extend(other.truncated)


def _dfs(seed: FramedSeed, limit: int, result: GreenSearchResult) -> None:
    green = green_vertices(seed)
    if not green:
        perm = terminal_permutation(seed)
        if perm is None:
            raise internal_error(
                "terminal C-matrix of a maximal green sequence is not -P",
                {"sequence": list(seed.history), "c": seed.c.tolist()},
            )
        result.sequences.append(seed.history)
        result.permutations[seed.history] = perm
        return
    if len(seed.history) >= limit:
        result.truncated.append(seed.history)
        return
    for k in green:
        _dfs(mutate_framed(seed, k), limit, result)


def find_maximal_green_sequences(
    b: BMatrix,
    limit: int,
    workers: int = 1,
    rank_limit: int | None = None,
) -> GreenSearchResult:
    """All maximal green sequences of length at most ``limit``.

    First-step branches run in a thread pool when ``workers > 1``; branch
    results are merged in index order so the output does not depend on
    scheduling.

    Raises:
        TagrotError: LIMIT_EXCEEDED when ``b.n`` exceeds ``rank_limit``.
    """
    if rank_limit is not None and b.n > rank_limit:
        raise limit_exceeded(f"rank {b.n} for exhaustive green search", rank_limit)
    seed = FramedSeed.initial(b)
    result = GreenSearchResult(limit=limit)
    if limit < 1:
        result.truncated.append(())
        return result

    def branch(k: int) -> GreenSearchResult:
        partial = GreenSearchResult(limit=limit)
        _dfs(mutate_framed(seed, k), limit, partial)
        return partial

    first = green_vertices(seed)
    if workers > 1 and len(first) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(branch, first))
    else:
        partials = [branch(k) for k in first]
    for partial in partials:
        result.merge(partial)

    if result.truncated:
        logger.warning(
            f"Green search truncated {len(result.truncated)} branches at length {limit}",
            extra={"extra_fields": {"rank": b.n, "limit": limit}},
        )
    logger.info(f"Found {len(result.sequences)} maximal green sequences (rank {b.n}, limit {limit})")
    return result


def check_maximal_green(b: BMatrix, seq: tuple[int, ...] | list[int]) -> FramedSeed:
    """Run ``seq`` as framed mutations and return the terminal seed.

    Raises:
        TagrotError: NOT_MAXIMAL_GREEN if a step mutates a red vertex or green
            vertices remain at the end.
    """
    seed = FramedSeed.initial(b)
    for step, k in enumerate(seq):
        _check_index(k, b.n)
        if not is_green(seed, k):
            raise not_maximal_green(list(seq), f"step {step + 1} mutates red vertex {k}")
        seed = mutate_framed(seed, k)
    remaining = green_vertices(seed)
    if remaining:
        raise not_maximal_green(list(seq), f"vertices {remaining} are still green")
    return seed


@dataclass
class GreenEndpointReport:
    """Where a maximal green sequence ends compared with the rotated start.

    ``terminal_permutation`` is read off the final C-matrix. ``slot_permutation``
    maps each slot of the endpoint to the start slot whose rotated arc it holds
    (None when the arc sets differ).
    """

    sequence: tuple[int, ...]
    matches: bool
    terminal_permutation: dict[int, int]
    slot_permutation: dict[int, int] | None

    @property
    def permutations_agree(self) -> bool:
        return self.slot_permutation == self.terminal_permutation


def green_endpoint_report(
    model_t: ModelTriangulation, seq: tuple[int, ...] | list[int]
) -> GreenEndpointReport:
    seed = check_maximal_green(b_matrix(model_t.tagged()), seq)
    perm = terminal_permutation(seed)
    if perm is None:
        raise internal_error("terminal C-matrix is not -P", {"sequence": list(seq)})

    end = model_t
    for k in seq:
        end = model_flip_slot(end, k)
    rotated = model_rotate_triangulation(model_t)
    matches = end.arc_set == rotated.arc_set
    slot_perm = None
    if matches:
        where = {arc: slot for slot, arc in enumerate(rotated.arcs, start=1)}
        slot_perm = {slot: where[arc] for slot, arc in enumerate(end.arcs, start=1)}
    logger.debug(f"Green sequence {tuple(seq)} ends at rotation: {matches}")
    return GreenEndpointReport(tuple(seq), matches, perm, slot_perm)


def green_endpoint_matches_rotation(model_t: ModelTriangulation, seq: tuple[int, ...] | list[int]) -> bool:
    """Whether flipping along ``seq`` in the model ends at the rotated start.

    Raises:
        TagrotError: NOT_MAXIMAL_GREEN if ``seq`` is not maximal green for ``model_t``.
    """
    return green_endpoint_report(model_t, seq).matches
