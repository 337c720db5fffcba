"""Shared pytest fixtures."""

import os
from pathlib import Path

import pytest

from tagrot.config import Settings
from tagrot.models import ModelTriangulation, PolygonArc, canonical_start
from tagrot.surface import MarkedSurface, make_surface
from tagrot.triangulation import TaggedTriangulation, dump_triangulation

# ============================================================================
# Surfaces
# ============================================================================


@pytest.fixture
def pentagon() -> MarkedSurface:
    """Type A_2."""
    return make_surface(0, (5,), 0)


@pytest.fixture
def hexagon() -> MarkedSurface:
    """Type A_3."""
    return make_surface(0, (6,), 0)


@pytest.fixture
def punctured_triangle() -> MarkedSurface:
    """Type D_3."""
    return make_surface(0, (3,), 1)


@pytest.fixture
def punctured_square() -> MarkedSurface:
    """Type D_4."""
    return make_surface(0, (4,), 1)


@pytest.fixture
def annulus_11() -> MarkedSurface:
    return make_surface(0, (1, 1), 0)


@pytest.fixture
def annulus_22() -> MarkedSurface:
    return make_surface(0, (2, 2), 0)


@pytest.fixture
def torus_one_point() -> MarkedSurface:
    """Genus 1, one boundary component with one marked point."""
    return make_surface(1, (1,), 0)


# ============================================================================
# Triangulations
# ============================================================================


@pytest.fixture
def pentagon_fan(pentagon: MarkedSurface) -> ModelTriangulation:
    return ModelTriangulation.create(pentagon, [PolygonArc(0, 2), PolygonArc(0, 3)])


@pytest.fixture
def hexagon_fan(hexagon: MarkedSurface) -> ModelTriangulation:
    return canonical_start(hexagon)


@pytest.fixture
def d4_start(punctured_square: MarkedSurface) -> ModelTriangulation:
    return canonical_start(punctured_square)


@pytest.fixture
def pentagon_tagged(pentagon_fan: ModelTriangulation) -> TaggedTriangulation:
    return pentagon_fan.tagged()


@pytest.fixture
def triangulation_file(tmp_path: Path, pentagon_tagged: TaggedTriangulation) -> Path:
    """Pentagon fan written as a triangulation document."""
    path = tmp_path / "pentagon.json"
    path.write_text(dump_triangulation(pentagon_tagged))
    return path


# ============================================================================
# Settings
# ============================================================================


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Keep TAGROT_* variables and a local tagrot.yaml out of every test."""
    for key in list(os.environ):
        if key.startswith("TAGROT_"):
            monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)
