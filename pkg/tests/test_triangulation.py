"""Tests for ideal and tagged triangulations."""

import json

import numpy as np
import pytest

from tagrot.errors import ErrorCode, TagrotError
from tagrot.models import canonical_start
from tagrot.proofkit import build_canonical_triangulation
from tagrot.surface import BoundaryPoint, BoundarySegment, Puncture, make_surface
from tagrot.triangulation import (
    BMatrix,
    IdealTriangulation,
    TaggedTriangulation,
    Triangle,
    b_matrix,
    dump_triangulation,
    flip_ideal,
    flip_tagged,
    load_triangulation,
    quiver,
    tagged_arc,
    to_document,
)

A = BoundaryPoint(0, 0)
B = BoundaryPoint(0, 1)
P = Puncture(0)


@pytest.fixture
def monogon() -> IdealTriangulation:
    """The once-punctured monogon: one radius inside the boundary loop."""
    surface = make_surface(0, (1,), 1)
    return IdealTriangulation.create(surface, [Triangle((BoundarySegment(0, 0), 1, 1), (A, A, P))])


@pytest.fixture
def punctured_digon_fold() -> IdealTriangulation:
    """Loop 1 at m0.0 enclosing the radius 2."""
    surface = make_surface(0, (2,), 1)
    return IdealTriangulation.create(
        surface,
        [
            Triangle((BoundarySegment(0, 0), BoundarySegment(0, 1), 1), (A, B, A)),
            Triangle((1, 2, 2), (A, A, P)),
        ],
    )


class TestIdealTriangulation:
    """Tests for validation and structure queries."""

    def test_model_pentagon_is_valid(self, pentagon_tagged):
        base = pentagon_tagged.base
        assert base.n == 2
        assert len(base.triangles) == 3
        assert list(base.slots) == [1, 2]
        assert base.folds == ()

    def test_wrong_triangle_count(self, pentagon):
        with pytest.raises(TagrotError) as exc_info:
            IdealTriangulation.create(
                pentagon,
                [Triangle((BoundarySegment(0, 0), BoundarySegment(0, 1), 1), (A, B, BoundaryPoint(0, 2)))],
            )

        assert exc_info.value.code == ErrorCode.INVALID_TRIANGULATION
        assert "triangles" in exc_info.value.data["reason"]

    def test_folds_detected(self, monogon, punctured_digon_fold):
        assert monogon.folds == ((0, 1),)
        assert punctured_digon_fold.fold_of(2) is not None
        assert punctured_digon_fold.enclosing_fold(1) is not None
        assert punctured_digon_fold.fold_of(1) is None

    def test_unknown_slot(self, pentagon_tagged):
        with pytest.raises(TagrotError) as exc_info:
            pentagon_tagged.base.occurrences(7)

        assert exc_info.value.code == ErrorCode.UNKNOWN_ARC
        assert exc_info.value.data["known"] == ["1", "2"]

    def test_radius_is_not_ideally_flippable(self, monogon):
        with pytest.raises(TagrotError) as exc_info:
            flip_ideal(monogon, 1)

        assert exc_info.value.code == ErrorCode.NOT_FLIPPABLE

    def test_relabel_swaps_slots(self, pentagon_tagged):
        swapped = pentagon_tagged.base.relabel({1: 2, 2: 1})
        assert set(swapped.endpoints(2)) == set(pentagon_tagged.base.endpoints(1))


class TestTaggedArcs:
    """Tests for tagged arc descriptors and the sign normal form."""

    def test_diagonals(self, pentagon_tagged):
        assert str(tagged_arc(pentagon_tagged, 1)) == "m0.0-m0.2"
        assert str(tagged_arc(pentagon_tagged, 2)) == "m0.0-m0.3"

    def test_radii_of_d4(self, d4_start):
        arcs = {str(a) for a in d4_start.tagged().arcs().values()}
        assert {"m0.0-p0", "m0.3-p0"} <= arcs

    def test_notched_sign_is_normalized(self, punctured_digon_fold):
        t = TaggedTriangulation.create(punctured_digon_fold, [-1])
        assert t.signs == (1,)
        assert str(tagged_arc(t, 1)) == "m0.0-p0"
        assert str(tagged_arc(t, 2)) == "m0.0-p0*"
        assert t.digon_pairs == {P: (1, 2)}

    def test_plain_sign_keeps_labels(self, punctured_digon_fold):
        t = TaggedTriangulation.plain(punctured_digon_fold)
        assert str(tagged_arc(t, 2)) == "m0.0-p0"
        assert str(tagged_arc(t, 1)) == "m0.0-p0*"

    def test_wrong_sign_count(self, punctured_digon_fold):
        with pytest.raises(TagrotError) as exc_info:
            TaggedTriangulation.create(punctured_digon_fold, [1, 1])

        assert exc_info.value.code == ErrorCode.INVALID_TRIANGULATION


class TestFlip:
    """Tests for ideal and tagged flips."""

    def test_pentagon_flip(self, pentagon_tagged):
        flipped = flip_tagged(pentagon_tagged, 1)
        assert str(tagged_arc(flipped, 1)) == "m0.1-m0.3"
        assert str(tagged_arc(flipped, 2)) == "m0.0-m0.3"

    def test_flip_is_involution(self, hexagon_fan, d4_start):
        rng = np.random.default_rng(3)
        for model in (hexagon_fan, d4_start):
            t = model.tagged()
            for _ in range(1000):
                slot = int(rng.integers(1, t.n + 1))
                assert flip_tagged(flip_tagged(t, slot), slot) == t
                t = flip_tagged(t, int(rng.integers(1, t.n + 1)))

    def test_flip_unknown_slot(self, pentagon_tagged):
        with pytest.raises(TagrotError) as exc_info:
            flip_tagged(pentagon_tagged, 3)

        assert exc_info.value.code == ErrorCode.UNKNOWN_ARC

    def test_monogon_flip_toggles_tag(self, monogon):
        t = TaggedTriangulation.plain(monogon)
        flipped = flip_tagged(t, 1)
        assert flipped.signs == (-1,)
        assert str(tagged_arc(flipped, 1)) == "m0.0-p0*"
        assert flip_tagged(flipped, 1) == t

    def test_radius_flip_in_digon_pair(self, punctured_digon_fold):
        """Test flipping the plain radius of a digon pair gives a new radius or loop."""
        t = TaggedTriangulation.plain(punctured_digon_fold)
        flipped = flip_tagged(t, 2)
        assert tagged_arc(flipped, 2) != tagged_arc(t, 2)
        assert str(tagged_arc(flipped, 1)) == "m0.0-p0*"


class TestExchangeMatrix:
    """Tests for B-matrices and quivers."""

    def test_pentagon_quiver(self, pentagon_tagged):
        b = b_matrix(pentagon_tagged)
        assert b.tolist() == [[0, -1], [1, 0]]
        assert quiver(b).arrow_list() == [(2, 1)]
        assert quiver(b).to_dot() == "digraph Q {\n  1;\n  2;\n  2 -> 1;\n}\n"

    def test_kronecker_annulus(self, annulus_11):
        """Test the two bridges of the (1,1) annulus carry a double arrow."""
        b = b_matrix(canonical_start(annulus_11).tagged())
        assert abs(b.entry(1, 2)) == 2
        assert b.entry(1, 2) == -b.entry(2, 1)

    def test_skew_symmetric(self, d4_start):
        b = b_matrix(d4_start.tagged())
        assert b.skew_violation() is None
        assert np.array_equal(b.entries, -b.entries.T)

    @pytest.mark.parametrize(
        "surface",
        [make_surface(1, (1,), 1), make_surface(1, (2,), 0), make_surface(1, (1, 1), 0), make_surface(0, (2, 2), 0)],
    )
    def test_random_flips_keep_entries_bounded(self, surface):
        """Test a seeded flip walk keeps the matrix skew-symmetric with entries in -2..2."""
        rng = np.random.default_rng(2024)
        t = build_canonical_triangulation(surface)
        slots = list(t.base.slots)
        for _ in range(200):
            t = flip_tagged(t, int(rng.choice(slots)))
            b = b_matrix(t)
            assert b.skew_violation() is None
            assert int(np.abs(b.entries).max()) <= 2

    def test_not_skew_symmetric(self):
        with pytest.raises(TagrotError) as exc_info:
            quiver(BMatrix(np.array([[0, 1], [1, 0]])))

        assert exc_info.value.code == ErrorCode.NOT_SKEW_SYMMETRIC
        assert exc_info.value.data["entry"] == [1, 2]

    def test_from_arrows_multiplicity(self):
        b = BMatrix.from_arrows(3, [(1, 2), (1, 2), (3, 1)])
        assert b.entry(1, 2) == 2
        assert b.entry(2, 1) == -2
        assert b.entry(3, 1) == 1

    def test_permuted(self):
        b = BMatrix.from_arrows(2, [(1, 2)])
        assert b.permuted({1: 2, 2: 1}) == BMatrix.from_arrows(2, [(2, 1)])

    def test_monogon_radius_row_is_zero(self, monogon):
        assert b_matrix(monogon).tolist() == [[0]]


class TestDocuments:
    """Tests for the JSON triangulation document."""

    def test_roundtrip(self, d4_start):
        t = d4_start.tagged()
        assert load_triangulation(dump_triangulation(t)) == t

    def test_schema_field(self, pentagon_tagged):
        doc = to_document(pentagon_tagged)
        assert doc["schema"] == 1
        assert doc["surface"] == {"genus": 0, "boundaries": [5], "punctures": 0}

    def test_not_json(self):
        with pytest.raises(TagrotError) as exc_info:
            load_triangulation("{not json")

        assert exc_info.value.code == ErrorCode.INVALID_DOCUMENT

    def test_unsupported_schema(self, pentagon_tagged):
        doc = to_document(pentagon_tagged)
        doc["schema"] = 2
        with pytest.raises(TagrotError) as exc_info:
            load_triangulation(json.dumps(doc))

        assert exc_info.value.code == ErrorCode.INVALID_DOCUMENT

    def test_edited_folds_rejected(self, monogon):
        doc = to_document(TaggedTriangulation.plain(monogon))
        doc["folds"] = [[0, 5]]
        with pytest.raises(TagrotError) as exc_info:
            load_triangulation(json.dumps(doc))

        assert exc_info.value.code == ErrorCode.INVALID_TRIANGULATION
