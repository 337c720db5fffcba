"""Tests for matrix mutation, framed seeds and maximal green sequences."""

import numpy as np
import pytest

from tagrot.errors import ErrorCategory, ErrorCode, TagrotError
from tagrot.models import model_triangulations
from tagrot.mutation import (
    FramedSeed,
    check_maximal_green,
    find_maximal_green_sequences,
    green_endpoint_matches_rotation,
    green_endpoint_report,
    green_vertices,
    is_green,
    mutate_b,
    mutate_framed,
    terminal_permutation,
)
from tagrot.proofkit import build_canonical_triangulation
from tagrot.triangulation import BMatrix, b_matrix, flip_tagged


@pytest.fixture
def a2() -> BMatrix:
    """b_12 = 1."""
    return BMatrix.from_arrows(2, [(1, 2)])


@pytest.fixture
def kronecker() -> BMatrix:
    return BMatrix.from_arrows(2, [(1, 2), (1, 2)])


class TestMutateB:
    """Tests for exchange-matrix mutation."""

    def test_a3_linear(self):
        """Test mutating the middle of 1 -> 2 -> 3 closes a triangle."""
        b = BMatrix.from_arrows(3, [(1, 2), (2, 3)])
        assert mutate_b(b, 2) == BMatrix.from_arrows(3, [(2, 1), (3, 2), (1, 3)])

    def test_involution(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            upper = np.triu(rng.integers(-2, 3, size=(4, 4)), 1)
            b = BMatrix(upper - upper.T)
            k = int(rng.integers(1, 5))
            assert mutate_b(mutate_b(b, k), k) == b

    def test_stays_skew_symmetric(self, kronecker):
        b = mutate_b(kronecker, 1)
        assert b.skew_violation() is None
        assert b.entry(1, 2) == -2

    @pytest.mark.parametrize("k", [0, 3, -1])
    def test_index_out_of_range(self, a2, k):
        with pytest.raises(TagrotError) as exc_info:
            mutate_b(a2, k)

        assert exc_info.value.code == ErrorCode.INDEX_OUT_OF_RANGE
        assert exc_info.value.data == {"index": k, "size": 2}


class TestFramedSeed:
    """Tests for C-matrix mutation and green vertices."""

    def test_initial_seed(self, a2):
        seed = FramedSeed.initial(a2)
        assert np.array_equal(seed.c, np.eye(2))
        assert green_vertices(seed) == [1, 2]

    def test_mutation_turns_vertex_red(self, a2):
        seed = mutate_framed(FramedSeed.initial(a2), 1)
        assert not is_green(seed, 1)
        assert seed.c.tolist() == [[-1, 1], [0, 1]]
        assert seed.history == (1,)

    def test_framed_mutation_is_involution(self, a2):
        seed = FramedSeed.initial(a2)
        assert mutate_framed(mutate_framed(seed, 2), 2) == seed

    def test_sign_coherence_violation(self, a2):
        seed = FramedSeed(a2, np.array([[1, 0], [-1, 1]]))
        with pytest.raises(TagrotError) as exc_info:
            mutate_framed(seed, 2)

        assert exc_info.value.code == ErrorCode.SIGN_COHERENCE_VIOLATION
        assert exc_info.value.category == ErrorCategory.INTERNAL_ERROR
        assert exc_info.value.data["column"] == 1

    def test_transposed_a2_two_step_sequence(self):
        """Test the b_12 = 1 example transposed on purpose: with b_21 = 1, (1, 2) ends with C = -I."""
        seed = check_maximal_green(BMatrix.from_arrows(2, [(2, 1)]), [1, 2])
        assert seed.c.tolist() == [[-1, 0], [0, -1]]
        assert terminal_permutation(seed) == {1: 1, 2: 2}

    def test_terminal_permutation_requires_minus_p(self, a2):
        assert terminal_permutation(FramedSeed.initial(a2)) is None


class TestMaximalGreen:
    """Tests for the green sequence search."""

    def test_a2_sequences(self, a2):
        result = find_maximal_green_sequences(a2, 6)
        assert result.sequences == [(1, 2, 1), (2, 1)]
        assert result.complete
        assert result.permutations[(1, 2, 1)] == {1: 2, 2: 1}
        assert result.permutations[(2, 1)] == {1: 1, 2: 2}

    def test_kronecker_is_truncated(self, kronecker):
        """Test the Kronecker quiver has one maximal green sequence and an infinite branch."""
        result = find_maximal_green_sequences(kronecker, 6)
        assert result.sequences == [(2, 1)]
        assert not result.complete

    def test_parallel_matches_serial(self):
        b = BMatrix.from_arrows(3, [(1, 2), (2, 3)])
        serial = find_maximal_green_sequences(b, 10)
        parallel = find_maximal_green_sequences(b, 10, workers=3)
        assert parallel.sequences == serial.sequences
        assert parallel.permutations == serial.permutations

    def test_rank_limit(self):
        b = BMatrix.zeros(7)
        with pytest.raises(TagrotError) as exc_info:
            find_maximal_green_sequences(b, 10, rank_limit=6)

        assert exc_info.value.code == ErrorCode.LIMIT_EXCEEDED
        assert exc_info.value.data["limit"] == 6

    def test_zero_limit(self, a2):
        result = find_maximal_green_sequences(a2, 0)
        assert result.sequences == []
        assert result.truncated == [()]

    def test_red_step_rejected(self, a2):
        with pytest.raises(TagrotError) as exc_info:
            check_maximal_green(a2, [1, 1])

        assert exc_info.value.code == ErrorCode.NOT_MAXIMAL_GREEN
        assert exc_info.value.category == ErrorCategory.CHECK_ERROR

    def test_non_maximal_rejected(self, a2):
        with pytest.raises(TagrotError) as exc_info:
            check_maximal_green(a2, [2])

        assert exc_info.value.code == ErrorCode.NOT_MAXIMAL_GREEN
        assert "still green" in exc_info.value.data["reason"]


class TestGreenEndpoints:
    """Tests that maximal green sequences end at the rotated triangulation."""

    def test_pentagon(self, pentagon_fan):
        b = b_matrix(pentagon_fan.tagged())
        result = find_maximal_green_sequences(b, 6)
        assert result.sequences == [(1, 2), (2, 1, 2)]
        for seq in result.sequences:
            report = green_endpoint_report(pentagon_fan, seq)
            assert report.matches
            assert report.permutations_agree

    def test_hexagon(self, hexagon_fan):
        b = b_matrix(hexagon_fan.tagged())
        result = find_maximal_green_sequences(b, 10)
        assert result.sequences
        assert all(green_endpoint_matches_rotation(hexagon_fan, seq) for seq in result.sequences)

    @pytest.mark.slow
    def test_d4(self, d4_start):
        b = b_matrix(d4_start.tagged())
        result = find_maximal_green_sequences(b, 12)
        assert result.sequences
        assert all(green_endpoint_matches_rotation(d4_start, seq) for seq in result.sequences)


class TestFlipMutation:
    """Tests that flips and mutations commute."""

    @pytest.mark.parametrize(
        "surface_fixture", ["pentagon", "hexagon", "punctured_triangle", "punctured_square"]
    )
    def test_exhaustive(self, request, surface_fixture):
        surface = request.getfixturevalue(surface_fixture)
        for model in model_triangulations(surface):
            t = model.tagged()
            for slot in t.base.slots:
                assert b_matrix(flip_tagged(t, slot)) == mutate_b(b_matrix(t), slot)

    @pytest.mark.parametrize("surface_fixture", ["annulus_22", "torus_one_point"])
    def test_random_walk(self, request, surface_fixture):
        surface = request.getfixturevalue(surface_fixture)
        rng = np.random.default_rng(1729)
        t = build_canonical_triangulation(surface)
        for _ in range(200):
            slot = int(rng.integers(1, t.n + 1))
            flipped = flip_tagged(t, slot)
            assert b_matrix(flipped) == mutate_b(b_matrix(t), slot)
            t = flipped
