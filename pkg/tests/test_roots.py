"""
Testes do isolamento de raízes reais e dos equilíbrios no infinito.
"""

import math

import pytest

from src.core.exceptions import DegenerateContinuumError, IdenticallyZeroError
from src.domain.models import Chart, Poly1D, StarField
from src.domain.services.roots import (
    chart_for_angle,
    infinite_equilibria,
    real_roots,
    root_multiplicity,
    sturm_count,
)


def circular_gap(a, b):
    return abs(math.remainder(a - b, 2 * math.pi))


def same_angles(found, expected, tol=1e-10):
    return len(found) == len(expected) and all(
        any(circular_gap(t, e) < tol for t in found) for e in expected
    )


def values(roots):
    return [r.value for r in roots]


class TestRealRoots:
    def test_simple_roots(self):
        roots = real_roots(Poly1D(coeffs=(0.0, -1.0, 1.0)))
        assert values(roots) == pytest.approx([0.0, 1.0], abs=1e-12)
        assert [r.multiplicity for r in roots] == [1, 1]

    def test_double_root(self):
        # (u − 1)²(u + 2)
        roots = real_roots(Poly1D(coeffs=(2.0, -3.0, 0.0, 1.0)))
        assert values(roots) == pytest.approx([-2.0, 1.0], abs=1e-7)
        assert [r.multiplicity for r in roots] == [1, 2]

    def test_quartic_root_at_zero(self):
        roots = real_roots(Poly1D(coeffs=(0.0, 0.0, 0.0, 0.0, 1.0)))
        assert len(roots) == 1
        assert roots[0].value == pytest.approx(0.0, abs=1e-9)
        assert roots[0].multiplicity == 4

    def test_no_real_roots(self):
        assert real_roots(Poly1D(coeffs=(1.0, 0.0, 2.0, 0.0, 1.0))) == []

    def test_constant_has_no_roots(self):
        assert real_roots(Poly1D(coeffs=(3.0,))) == []

    def test_zero_polynomial_raises(self):
        with pytest.raises(IdenticallyZeroError):
            real_roots(Poly1D(coeffs=(0.0,)))

    def test_roots_are_scale_invariant(self):
        base = real_roots(Poly1D(coeffs=(-6.0, 11.0, -6.0, 1.0)))
        scaled = real_roots(Poly1D(coeffs=(-6e8, 11e8, -6e8, 1e8)))
        assert values(base) == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)
        assert values(scaled) == pytest.approx(values(base), abs=1e-10)

    def test_sum_of_multiplicities_within_degree(self):
        p = Poly1D(coeffs=(0.5, -2.0, 0.25, 1.5, -1.0, 0.3))
        assert sum(r.multiplicity for r in real_roots(p)) <= p.degree


class TestHelpers:
    def test_sturm_count(self):
        assert sturm_count(Poly1D(coeffs=(0.0, -1.0, 1.0)), -2.0, 2.0) == 2
        assert sturm_count(Poly1D(coeffs=(1.0, 0.0, 1.0)), -5.0, 5.0) == 0

    def test_multiplicity_at_triple_root(self):
        # (u − 1)³
        assert root_multiplicity(Poly1D(coeffs=(-1.0, 3.0, -3.0, 1.0)), 1.0) == 3

    def test_chart_for_angle(self):
        assert chart_for_angle(0.0) is Chart.U1
        assert chart_for_angle(math.pi) is Chart.V1
        assert chart_for_angle(0.5 * math.pi) is Chart.U2
        assert chart_for_angle(1.5 * math.pi) is Chart.V2


class TestInfiniteEquilibria:
    def test_quadratic(self, quadratic):
        infs = infinite_equilibria(quadratic)
        expected = [0.0, math.pi / 4, math.pi / 2, math.pi, 5 * math.pi / 4, 3 * math.pi / 2]
        assert same_angles([eq.theta for eq in infs], expected)
        assert all(eq.multiplicity == 1 for eq in infs)
        assert all(0.0 <= eq.theta < 2 * math.pi for eq in infs)

    def test_heteroclinic(self, heteroclinic):
        infs = infinite_equilibria(heteroclinic)
        assert [eq.theta for eq in infs] == pytest.approx([math.pi / 2, 3 * math.pi / 2])
        assert [eq.multiplicity for eq in infs] == [4, 4]
        assert [eq.chart for eq in infs] == [Chart.U2, Chart.V2]

    def test_rotation_has_none(self, eps_field):
        assert infinite_equilibria(eps_field) == []

    def test_antipodal_pairs(self):
        field = StarField.build(-1.0, (0.3, -1.0, 0.2, 0.7), (1.1, 0.4, -0.6, 0.2))
        thetas = [eq.theta for eq in infinite_equilibria(field)]
        assert len(thetas) % 2 == 0
        for theta in thetas:
            assert any(circular_gap(other, theta + math.pi) < 1e-9 for other in thetas)

    def test_degenerate_raises(self, degenerate_circle):
        with pytest.raises(DegenerateContinuumError):
            infinite_equilibria(degenerate_circle)
