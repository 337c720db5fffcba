"""Tests for marked surfaces."""

import numpy as np
import pytest

from tagrot.errors import ErrorCode, TagrotError
from tagrot.surface import (
    BoundaryPoint,
    BoundarySegment,
    MarkedSurface,
    Puncture,
    boundary_points,
    classify_type,
    enumerate_surfaces,
    make_surface,
    parse_surface,
    parse_vertex,
    punctures_of,
    rank,
    segment_ends,
    validate,
)


class TestRank:
    """Tests for the rank formula."""

    @pytest.mark.parametrize(
        ("surface", "expected"),
        [
            (MarkedSurface(0, (4,), 0), 1),
            (MarkedSurface(0, (8,), 0), 5),
            (MarkedSurface(0, (4,), 1), 4),
            (MarkedSurface(0, (1, 1), 0), 2),
            (MarkedSurface(1, (1,), 0), 4),
            (MarkedSurface(1, (2,), 0), 5),
            (MarkedSurface(2, (1,), 0), 10),
        ],
    )
    def test_rank_formula(self, surface, expected):
        """Test 6g + 3p + 3b + m - 6."""
        assert rank(surface) == expected
        assert surface.rank == expected

    def test_rank_grows_under_additions(self):
        """Test the three adding moves change the rank by +1, +4 and +3."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            g = int(rng.integers(0, 3))
            ms = tuple(int(x) for x in rng.integers(1, 5, size=int(rng.integers(1, 4))))
            p = int(rng.integers(0, 3))
            base = MarkedSurface(g, ms, p)
            point = MarkedSurface(g, (ms[0] + 1, *ms[1:]), p)
            component = MarkedSurface(g, (*ms, 1), p)
            puncture = MarkedSurface(g, ms, p + 1)
            assert rank(point) == rank(base) + 1
            assert rank(component) == rank(base) + 4
            assert rank(puncture) == rank(base) + 3


class TestValidate:
    """Tests for the standing assumptions."""

    def test_admissible_surface(self):
        assert validate(MarkedSurface(0, (5,), 0)) is None

    def test_empty_boundary(self):
        assert validate(MarkedSurface(1, (), 1)) == "empty boundary"

    def test_component_without_points(self):
        assert validate(MarkedSurface(0, (3, 0), 0)) == "boundary component 1 has no marked point"

    def test_rank_zero(self):
        """Test the triangle has no arcs and is rejected."""
        assert validate(MarkedSurface(0, (3,), 0)) == "rank 0"

    def test_make_surface_rejects(self):
        with pytest.raises(TagrotError) as exc_info:
            make_surface(0, (2,), 0)

        assert exc_info.value.code == ErrorCode.INVALID_SURFACE
        assert exc_info.value.data["surface"] == "0,1:[2],0"

    def test_negative_genus(self):
        with pytest.raises(TagrotError) as exc_info:
            MarkedSurface(-1, (4,), 0)

        assert exc_info.value.code == ErrorCode.INVALID_SURFACE


class TestParse:
    """Tests for the command-line surface syntax."""

    def test_parse_polygon(self):
        surface = parse_surface("0,1:[8],0")
        assert surface == MarkedSurface(0, (8,), 0)
        assert str(surface) == "0,1:[8],0"

    def test_parse_with_spaces(self):
        assert parse_surface(" 1, 2:[2, 3], 1 ") == MarkedSurface(1, (2, 3), 1)

    def test_parse_count_mismatch(self):
        with pytest.raises(TagrotError) as exc_info:
            parse_surface("0,2:[3],0")

        assert exc_info.value.code == ErrorCode.INVALID_SURFACE
        assert "b=2" in exc_info.value.data["reason"]

    def test_parse_garbage(self):
        with pytest.raises(TagrotError) as exc_info:
            parse_surface("pentagon")

        assert exc_info.value.code == ErrorCode.INVALID_SURFACE

    def test_parse_vertex(self):
        assert parse_vertex("m1.3") == BoundaryPoint(1, 3)
        assert parse_vertex("p2") == Puncture(2)
        with pytest.raises(ValueError):
            parse_vertex("x1")

    def test_dict_roundtrip(self):
        surface = MarkedSurface(1, (2, 1), 2)
        assert MarkedSurface.from_dict(surface.to_dict()) == surface

    def test_from_dict_malformed(self):
        with pytest.raises(TagrotError) as exc_info:
            MarkedSurface.from_dict({"genus": 0})

        assert exc_info.value.code == ErrorCode.INVALID_SURFACE


class TestClassifyType:
    """Tests for cluster-type classification."""

    def test_polygon_is_type_a(self):
        assert str(classify_type(make_surface(0, (8,), 0))) == "A(5)"

    def test_punctured_polygon_is_type_d(self):
        assert str(classify_type(make_surface(0, (4,), 1))) == "D(4)"

    def test_monogon_is_d1(self):
        """Test the once-punctured monogon follows the punctured-polygon rule with one arc."""
        surface_type = classify_type(make_surface(0, (1,), 1))
        assert surface_type.family == "D"
        assert surface_type.rank == 1
        assert str(surface_type) == "D(1)"

    def test_other_surfaces(self):
        assert classify_type(make_surface(0, (1, 1), 0)).family == "other"
        assert classify_type(make_surface(1, (1,), 0)).family == "other"
        assert classify_type(make_surface(0, (2,), 2)).family == "other"


class TestEnumeration:
    """Tests for marked point enumeration and the surface sweep."""

    def test_boundary_points(self):
        surface = make_surface(0, (2, 1), 0)
        assert boundary_points(surface) == [BoundaryPoint(0, 0), BoundaryPoint(0, 1), BoundaryPoint(1, 0)]

    def test_punctures(self):
        assert punctures_of(make_surface(0, (1,), 2)) == [Puncture(0), Puncture(1)]

    def test_segment_ends_wrap(self, hexagon):
        assert segment_ends(BoundarySegment(0, 2), hexagon) == (BoundaryPoint(0, 2), BoundaryPoint(0, 3))
        assert segment_ends(BoundarySegment(0, 5), hexagon) == (BoundaryPoint(0, 5), BoundaryPoint(0, 0))

    def test_enumerate_rank_two(self):
        """Test every admissible surface of rank at most 2, in sweep order."""
        assert enumerate_surfaces(2) == [
            MarkedSurface(0, (4,), 0),
            MarkedSurface(0, (1,), 1),
            MarkedSurface(0, (5,), 0),
            MarkedSurface(0, (2,), 1),
            MarkedSurface(0, (1, 1), 0),
        ]

    def test_enumerate_respects_bounds(self):
        surfaces = enumerate_surfaces(8, max_genus=2, max_boundaries=3, max_punctures=2)
        assert surfaces
        assert all(validate(s) is None for s in surfaces)
        assert all(s.rank <= 8 and s.genus <= 2 and s.b <= 3 and s.punctures <= 2 for s in surfaces)
        assert all(list(s.boundaries) == sorted(s.boundaries, reverse=True) for s in surfaces)
        assert MarkedSurface(1, (2,), 0) in surfaces
        assert MarkedSurface(0, (1, 1, 1), 0) in surfaces
        assert len(set(surfaces)) == len(surfaces)
