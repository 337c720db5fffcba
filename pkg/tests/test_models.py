"""Tests for the polygon, punctured polygon and annulus models."""

import pytest

from tagrot.errors import ErrorCode, TagrotError
from tagrot.mcg import dehn_twist, power, tagged_rotation
from tagrot.models import (
    AnnulusBridge,
    AnnulusPeripheral,
    ModelFamily,
    ModelTriangulation,
    ObstructionKind,
    PolygonArc,
    PuncturedChord,
    Radius,
    apply_element,
    arc_from_dict,
    arc_order,
    arc_to_dict,
    canonical_start,
    compatibility_graph,
    compatible,
    enumerate_arcs,
    infinite_order_witness,
    model_family,
    model_flip,
    model_rotate,
    model_rotate_triangulation,
    model_triangulations,
    orbit,
    parse_arc,
    rotation_order,
)
from tagrot.surface import make_surface


class TestArcs:
    """Tests for arc enumeration, compatibility and parsing."""

    def test_families(self, pentagon, punctured_square, annulus_11, torus_one_point):
        assert model_family(pentagon) is ModelFamily.POLYGON
        assert model_family(punctured_square) is ModelFamily.PUNCTURED_POLYGON
        assert model_family(annulus_11) is ModelFamily.ANNULUS
        with pytest.raises(TagrotError) as exc_info:
            model_family(torus_one_point)

        assert exc_info.value.code == ErrorCode.UNSUPPORTED_SURFACE

    def test_arc_counts(self, pentagon, hexagon, punctured_square):
        """Test m(m-3)/2 diagonals and m(m-2) chords plus 2m radii."""
        assert len(enumerate_arcs(pentagon)) == 5
        assert len(enumerate_arcs(hexagon)) == 9
        assert len(enumerate_arcs(punctured_square)) == 16

    def test_crossing_diagonals(self, hexagon):
        assert not compatible(hexagon, PolygonArc(0, 2), PolygonArc(1, 3))
        assert compatible(hexagon, PolygonArc(0, 2), PolygonArc(0, 4))
        assert compatible(hexagon, PolygonArc(0, 2), PolygonArc(3, 5))

    def test_radii_compatibility(self, punctured_square):
        assert compatible(punctured_square, Radius(0, 1), Radius(0, -1))
        assert compatible(punctured_square, Radius(0, 1), Radius(2, 1))
        assert not compatible(punctured_square, Radius(0, 1), Radius(2, -1))

    def test_monogon_radii_cross(self):
        assert not compatible(make_surface(0, (1,), 1), Radius(0, 1), Radius(0, -1))

    def test_chord_hides_radius(self, punctured_square):
        """Test a chord cuts off the radii at the points strictly inside it."""
        chord = PuncturedChord(0, 2)
        assert not compatible(punctured_square, chord, Radius(1, 1))
        assert compatible(punctured_square, chord, Radius(0, 1))
        assert compatible(punctured_square, chord, Radius(3, -1))

    def test_bridge_crossing(self, annulus_11):
        assert compatible(annulus_11, AnnulusBridge(0, 0, 0), AnnulusBridge(0, 0, -1))
        assert not compatible(annulus_11, AnnulusBridge(0, 0, 0), AnnulusBridge(0, 0, 2))

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("0-2", PolygonArc(0, 2)),
            ("2-0", PolygonArc(0, 2)),
            ('{"kind": "diagonal", "ends": [3, 1]}', PolygonArc(1, 3)),
        ],
    )
    def test_parse_polygon_arc(self, pentagon, text, expected):
        assert parse_arc(pentagon, text) == expected

    def test_parse_radius(self, punctured_square):
        assert parse_arc(punctured_square, "r3*") == Radius(3, -1)
        assert parse_arc(punctured_square, "1>3") == PuncturedChord(1, 3)

    def test_parse_bridge(self, annulus_22):
        assert parse_arc(annulus_22, "br1,0,-2") == AnnulusBridge(1, 0, -2)
        assert parse_arc(annulus_22, "pe1,0,2") == AnnulusPeripheral(1, 0, 2)

    @pytest.mark.parametrize("text", ["zz", "0-1", "0-4", "{broken"])
    def test_parse_rejects(self, pentagon, text):
        with pytest.raises(TagrotError) as exc_info:
            parse_arc(pentagon, text)

        assert exc_info.value.code == ErrorCode.INVALID_DOCUMENT

    def test_dict_form(self):
        assert arc_to_dict(Radius(2, -1)) == {"kind": "radius", "vertex": 2, "tag": "notched"}
        assert arc_from_dict(arc_to_dict(AnnulusBridge(0, 1, -3))) == AnnulusBridge(0, 1, -3)

    def test_unknown_kind(self):
        with pytest.raises(TagrotError) as exc_info:
            arc_from_dict({"kind": "spiral"})

        assert exc_info.value.code == ErrorCode.INVALID_DOCUMENT


class TestRotation:
    """Tests for the tagged rotation on model arcs."""

    def test_polygon_rotation(self, pentagon):
        assert model_rotate(pentagon, PolygonArc(2, 4)) == PolygonArc(0, 3)

    def test_radius_switches_tag(self, punctured_square):
        assert model_rotate(punctured_square, Radius(0, 1)) == Radius(1, -1)
        assert model_rotate(punctured_square, PuncturedChord(0, 2)) == PuncturedChord(1, 3)

    def test_bridge_winds(self, annulus_11):
        assert model_rotate(annulus_11, AnnulusBridge(0, 0, 0)) == AnnulusBridge(0, 0, -2)
        assert apply_element(dehn_twist(annulus_11, 0), AnnulusBridge(0, 0, 0)) == AnnulusBridge(0, 0, -1)

    def test_dehn_twist_on_larger_annulus(self, annulus_22):
        assert apply_element(dehn_twist(annulus_22, 0), AnnulusBridge(0, 0, 0)) == AnnulusBridge(0, 0, -1)

    def test_orbit_period(self, punctured_square):
        result = orbit(punctured_square, Radius(0, 1), 8)
        assert result.period == 4
        assert result.rotates[:2] == [Radius(1, -1), Radius(2, 1)]
        assert result.repeats

    def test_orbit_needs_positive_length(self, pentagon):
        with pytest.raises(TagrotError) as exc_info:
            orbit(pentagon, PolygonArc(0, 2), 0)

        assert exc_info.value.code == ErrorCode.INDEX_OUT_OF_RANGE

    def test_annulus_bridge_orbit_never_repeats(self, annulus_22):
        result = orbit(annulus_22, AnnulusBridge(0, 0, 0), 50)
        assert not result.repeats
        assert len(set(result.rotates)) == 50


class TestOrders:
    """Tests for rotation orders and infinite-order witnesses."""

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_type_a(self, n):
        assert rotation_order(make_surface(0, (n + 3,), 0)).value == n + 3

    @pytest.mark.parametrize(("n", "expected"), [(3, 6), (4, 4), (5, 10), (6, 6)])
    def test_type_d(self, n, expected):
        assert rotation_order(make_surface(0, (n,), 1)).value == expected

    def test_square_diagonals_have_period_two(self):
        square = make_surface(0, (4,), 0)
        assert arc_order(square, PolygonArc(0, 2)).value == 2
        order = rotation_order(square)
        assert order.value == 4
        assert order.on_arcs == 2

    def test_annulus_is_infinite(self, annulus_22):
        order = rotation_order(annulus_22, certificate_length=30)
        assert order.is_infinite
        assert str(order) == "infinite"
        assert len(set(order.certificate)) == 30

    def test_peripheral_arc_is_finite(self, annulus_22):
        assert arc_order(annulus_22, AnnulusPeripheral(0, 0, 2)).value == 2

    def test_unsupported(self, torus_one_point):
        with pytest.raises(TagrotError) as exc_info:
            rotation_order(torus_one_point)

        assert exc_info.value.code == ErrorCode.UNSUPPORTED_SURFACE

    def test_no_witness_for_finite_types(self, pentagon, punctured_square):
        assert infinite_order_witness(pentagon) is None
        assert infinite_order_witness(punctured_square) is None

    @pytest.mark.parametrize(
        ("surface", "kind"),
        [
            (make_surface(0, (2,), 2), ObstructionKind.SEVERAL_PUNCTURES),
            (make_surface(1, (1,), 0), ObstructionKind.POSITIVE_GENUS),
            (make_surface(1, (1, 1), 1), ObstructionKind.TWO_BOUNDARY_COMPONENTS),
        ],
    )
    def test_witness_kinds(self, surface, kind):
        assert infinite_order_witness(surface).kind is kind

    def test_annulus_witness_carries_certificate(self, annulus_11):
        witness = infinite_order_witness(annulus_11, certificate_length=20)
        assert witness.kind is ObstructionKind.TWO_BOUNDARY_COMPONENTS
        assert len(witness.certificate) == 20

    @pytest.mark.parametrize("boundaries", [(1, 1), (2, 2), (3, 1)])
    def test_annulus_witness_matches_orbit(self, boundaries):
        """Test the certificate is the bridge orbit, which does not close within its length."""
        annulus = make_surface(0, boundaries, 0)
        witness = infinite_order_witness(annulus, certificate_length=40)
        explicit = orbit(annulus, AnnulusBridge(0, 0, 0), 40)
        assert witness.certificate == tuple(explicit.rotates)
        assert explicit.period is None
        assert len(set(explicit.rotates)) == 40

    @pytest.mark.parametrize(
        "surface",
        [make_surface(1, (1,), 0), make_surface(1, (2,), 0), make_surface(2, (3,), 0), make_surface(1, (1,), 1)],
    )
    def test_genus_witness_is_boundary_twist(self, surface):
        """Test the rotation to the power m is the boundary Dehn twist and not the identity."""
        witness = infinite_order_witness(surface)
        assert witness.kind is ObstructionKind.POSITIVE_GENUS
        assert witness.certificate == ()
        m = surface.boundaries[0]
        twist = power(tagged_rotation(surface), 2 * m)
        assert twist == power(dehn_twist(surface, 0), 2)
        assert not twist.is_identity

    def test_genus_with_two_boundaries_has_no_model_certificate(self):
        witness = infinite_order_witness(make_surface(1, (1, 1), 0))
        assert witness.kind is ObstructionKind.TWO_BOUNDARY_COMPONENTS
        assert witness.certificate == ()

    @pytest.mark.parametrize("m", [5, 6, 7, 8])
    def test_punctured_polygon_orders(self, m):
        """Test the radius orbit closes after m steps for even m and 2m for odd m."""
        surface = make_surface(0, (m,), 1)
        expected = m if m % 2 == 0 else 2 * m
        assert orbit(surface, Radius(0, 1), 2 * m).period == expected
        order = rotation_order(surface)
        assert order.value == expected
        assert order.on_arcs == expected


class TestModelTriangulations:
    """Tests for model triangulations and their enumeration."""

    @pytest.mark.parametrize(
        ("surface", "count"),
        [
            (make_surface(0, (5,), 0), 5),
            (make_surface(0, (6,), 0), 14),
            (make_surface(0, (3,), 1), 14),
            (make_surface(0, (4,), 1), 50),
            (make_surface(0, (1,), 1), 2),
        ],
    )
    def test_counts(self, surface, count):
        assert len(model_triangulations(surface)) == count

    def test_annulus_has_infinitely_many(self, annulus_11):
        with pytest.raises(TagrotError) as exc_info:
            model_triangulations(annulus_11)

        assert exc_info.value.code == ErrorCode.UNSUPPORTED_SURFACE

    def test_canonical_starts(self, hexagon, punctured_square, annulus_11):
        assert canonical_start(hexagon).arcs == (PolygonArc(0, 2), PolygonArc(0, 3), PolygonArc(0, 4))
        assert canonical_start(punctured_square).arcs == (
            PuncturedChord(0, 2),
            PuncturedChord(0, 3),
            Radius(0, 1),
            Radius(3, 1),
        )
        assert canonical_start(annulus_11).arcs == (AnnulusBridge(0, 0, 0), AnnulusBridge(0, 0, -1))

    def test_annulus_start_size(self, annulus_22):
        assert len(canonical_start(annulus_22).arcs) == 4

    def test_crossing_arcs_rejected(self, hexagon):
        with pytest.raises(TagrotError) as exc_info:
            ModelTriangulation.create(hexagon, [PolygonArc(0, 2), PolygonArc(1, 3), PolygonArc(3, 5)])

        assert exc_info.value.code == ErrorCode.INVALID_TRIANGULATION
        assert "cross" in exc_info.value.data["reason"]

    def test_wrong_size_rejected(self, hexagon):
        with pytest.raises(TagrotError) as exc_info:
            ModelTriangulation.create(hexagon, [PolygonArc(0, 2)])

        assert exc_info.value.code == ErrorCode.INVALID_TRIANGULATION

    def test_model_flip(self, pentagon_fan):
        flipped = model_flip(pentagon_fan, PolygonArc(0, 2))
        assert flipped.arcs == (PolygonArc(1, 3), PolygonArc(0, 3))

    def test_model_flip_unknown_arc(self, pentagon_fan):
        with pytest.raises(TagrotError) as exc_info:
            model_flip(pentagon_fan, PolygonArc(1, 4))

        assert exc_info.value.code == ErrorCode.UNKNOWN_ARC

    def test_annulus_flip_walks_windings(self, annulus_11):
        t = canonical_start(annulus_11)
        flipped = model_flip(t, AnnulusBridge(0, 0, 0))
        assert flipped.arcs[1] == AnnulusBridge(0, 0, -1)
        assert flipped.arcs[0] == AnnulusBridge(0, 0, -2)

    def test_rotation_permutes_triangulations(self, punctured_triangle):
        all_sets = {t.arc_set for t in model_triangulations(punctured_triangle)}
        for t in model_triangulations(punctured_triangle):
            assert model_rotate_triangulation(t).arc_set in all_sets

    def test_compatibility_graph(self, pentagon):
        graph = compatibility_graph(pentagon)
        assert graph.number_of_nodes() == 5
        assert graph.number_of_edges() == 5
