"""
Testes das formas angular/radial, cartas e degenerescência.
"""

import math

import numpy as np
import pytest

from src.core.exceptions import IdenticallyZeroError
from src.domain.models import HomogeneousPoly, StarField
from src.domain.services.poly_core import (
    angular_form,
    build_F,
    build_G,
    common_linear_factor,
    degenerate_kernel,
    f_theta,
    field_from_angular_form,
    form_zero_angles,
    from_binary_form,
    g_prime,
    g_theta,
    radial_form,
)

GRID = np.linspace(0.0, 2 * math.pi, 97)


def rotation() -> StarField:
    """Q = (−y(x²+y²), x(x²+y²))"""
    return StarField.build(1.0, (0.0, -1.0, 0.0, -1.0), (1.0, 0.0, 1.0, 0.0))


def radial_cubic() -> StarField:
    """Q = (x(x²+y²), y(x²+y²))"""
    return StarField.build(1.0, (1.0, 0.0, 1.0, 0.0), (0.0, 1.0, 0.0, 1.0))


class TestChartPolynomials:
    def test_quadratic_F_and_G(self, quadratic):
        assert build_F(quadratic).coeffs == (0.0, -1.0, 1.0)
        assert build_G(quadratic).coeffs == (0.0, -1.0, 1.0)

    def test_radial_field_has_zero_F(self):
        assert build_F(radial_cubic()).is_zero()
        assert build_G(radial_cubic()).is_zero()

    def test_rotation_F(self):
        assert build_F(rotation()).coeffs == (1.0, 0.0, 2.0, 0.0, 1.0)


class TestPolarCoefficients:
    def test_rotation_is_pure_angular(self):
        field = rotation()
        assert np.allclose(g_theta(field, GRID), 1.0)
        assert np.allclose(f_theta(field, GRID), 0.0)

    def test_quartic_rotation(self, quartic_rotation):
        c, s = np.cos(GRID), np.sin(GRID)
        assert np.allclose(g_theta(quartic_rotation, GRID), c ** 4 + s ** 4)
        assert np.allclose(f_theta(quartic_rotation, GRID), 0.25 * np.sin(4 * GRID))

    def test_heteroclinic_forms(self, heteroclinic):
        assert angular_form(heteroclinic).coeffs == (1.0, 0.0, 0.0, 0.0, 0.0)
        assert radial_form(heteroclinic).coeffs == (0.0, 1.0, -1.0, 0.0, -1.0)
        assert f_theta(heteroclinic, math.pi / 2) == pytest.approx(-1.0)

    def test_g_prime_matches_finite_difference(self, quadratic):
        h = 1e-6
        for theta in (0.3, 1.7, 4.1):
            numeric = (g_theta(quadratic, theta + h) - g_theta(quadratic, theta - h)) / (2 * h)
            assert g_prime(quadratic, theta) == pytest.approx(numeric, abs=1e-7)


class TestZeroAngles:
    def test_vertical_quartic_root(self):
        zeros = form_zero_angles(HomogeneousPoly.of(1.0, 0.0, 0.0, 0.0, 0.0))
        assert [m for _, m in zeros] == [4, 4]
        assert [t for t, _ in zeros] == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_zero_form_raises(self):
        with pytest.raises(IdenticallyZeroError):
            form_zero_angles(HomogeneousPoly.zero(3))


class TestDegeneracy:
    def test_kernel_of_radial_field(self):
        kernel = degenerate_kernel(radial_cubic())
        assert kernel is not None
        assert kernel.coeffs == (1.0, 0.0, 1.0)

    def test_quadratic_not_degenerate(self, quadratic):
        assert degenerate_kernel(quadratic) is None

    def test_common_factor(self, quadratic):
        assert common_linear_factor(StarField.build(1.0, (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)))
        assert not common_linear_factor(quadratic)

    def test_degenerate_common_factor_uses_kernel(self):
        # p = xy tem zeros reais
        field = StarField.build(1.0, (0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 1.0, 0.0))
        assert common_linear_factor(field)
        assert not common_linear_factor(radial_cubic())


class TestBinaryForms:
    def test_from_binary_form_reproduces_form(self):
        field = from_binary_form((1.0, 0.0, -3.0, 0.0), 0.4, -1.2, 1.0)
        assert angular_form(field).coeffs == pytest.approx((1.0, 0.0, -3.0, 0.0))
        assert field.q1.coeffs == pytest.approx((0.4, -1.2, 0.0))

    def test_generic_degree(self):
        form = HomogeneousPoly.of(1.0, -2.0, 0.5, 0.0, 3.0, -1.0)
        kernel = HomogeneousPoly.of(0.3, 0.0, -0.7, 1.1)
        field = field_from_angular_form(form, kernel, -2.0)
        assert field.degree == 4
        assert angular_form(field).coeffs == pytest.approx(form.coeffs)

    def test_kernel_degree_checked(self):
        with pytest.raises(ValueError):
            field_from_angular_form(HomogeneousPoly.of(1.0, 0.0, 0.0, 0.0), HomogeneousPoly.of(1.0, 0.0, 0.0), 1.0)
