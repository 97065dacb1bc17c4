"""
Testes do desenho no disco de Poincaré.
"""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from src.core.exceptions import RenderError
from src.domain.services.global_structure import assemble_portrait
from src.infrastructure.rendering.poincare_disk import BOUNDARY_GID, compress, render_portrait


def boundary_elements(path):
    root = ET.parse(path).getroot()
    return [el for el in root.iter() if el.get("id") == BOUNDARY_GID]


class TestCompress:
    def test_maps_plane_into_disk(self):
        xs, ys = compress(np.array([0.0, 1.0, 1e9]), np.array([0.0, 0.0, 0.0]))
        assert xs.tolist() == pytest.approx([0.0, 0.5, 1.0], abs=1e-8)
        assert np.all(np.hypot(xs, ys) < 1.0)


class TestRenderPortrait:
    def test_svg_has_single_boundary(self, quadratic, tmp_path):
        path = render_portrait(quadratic, assemble_portrait(quadratic), tmp_path / "quadratic.svg", samples=2)
        assert path.exists()
        assert len(boundary_elements(path)) == 1

    def test_continuum_portrait(self, degenerate_circle, tmp_path):
        path = render_portrait(
            degenerate_circle, assemble_portrait(degenerate_circle), tmp_path / "circle.svg", samples=0
        )
        assert len(boundary_elements(path)) == 1

    def test_same_seed_same_bytes(self, heteroclinic, tmp_path):
        portrait = assemble_portrait(heteroclinic)
        first = render_portrait(heteroclinic, portrait, tmp_path / "a.svg", samples=3, seed=11)
        second = render_portrait(heteroclinic, portrait, tmp_path / "b.svg", samples=3, seed=11)
        assert first.read_bytes() == second.read_bytes()

    def test_unwritable_target(self, quadratic, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        with pytest.raises(RenderError) as exc:
            render_portrait(quadratic, assemble_portrait(quadratic), blocker / "out.svg", samples=0)
        assert exc.value.exit_code == 2
