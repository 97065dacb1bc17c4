"""
Testes dos equilíbrios finitos, da classificação e das cotas de contagem.
"""

import math

import numpy as np
import pytest

from src.core.exceptions import NearZeroFError
from src.domain.models import (
    AngularStability,
    RadialStability,
    StarField,
    TopoType,
)
from src.domain.services.equilibria import (
    check_counts,
    classify_finite,
    equilibrium_residual,
    finite_equilibria,
    near_zero_f_angles,
    refine_cartesian,
    with_classification,
)
from src.domain.services.roots import infinite_equilibria


def near_zero_f_field() -> StarField:
    """g = cos⁴θ e f(π/2) = f(3π/2) = −1e-12"""
    return StarField.build(1.0, (0.0, 0.0, -1e-12, 0.0), (1.0, 0.0, 0.0, -1e-12))


def by_position(fins):
    return {(round(fe.x, 9) + 0.0, round(fe.y, 9) + 0.0): fe for fe in fins}


class TestFiniteEquilibria:
    def test_quadratic_positions(self, quadratic):
        fins = finite_equilibria(quadratic, infinite_equilibria(quadratic))
        assert set(by_position(fins)) == {(-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0)}

    def test_quadratic_eigenvalues_match_jacobian(self, quadratic):
        fins = finite_equilibria(quadratic, infinite_equilibria(quadratic))
        for fe in fins:
            engine = sorted([fe.jac_eigen_radial, fe.jac_eigen_angular])
            numeric = sorted(np.linalg.eigvals(quadratic.jacobian(fe.x, fe.y)).real)
            assert engine == pytest.approx(numeric, abs=1e-8)

    def test_quadratic_saddle_at_minus_one(self, quadratic):
        fe = by_position(finite_equilibria(quadratic, infinite_equilibria(quadratic)))[(-1.0, 0.0)]
        assert fe.jac_eigen_radial == pytest.approx(-1.0)
        assert fe.jac_eigen_angular == pytest.approx(1.0)
        assert fe.topo_type is TopoType.SADDLE

    def test_quadratic_node(self, quadratic):
        fe = by_position(finite_equilibria(quadratic, infinite_equilibria(quadratic)))[(-1.0, -1.0)]
        assert fe.r0 == pytest.approx(math.sqrt(2.0))
        assert fe.topo_type is TopoType.NODE_ATTRACTOR

    def test_residual_vanishes(self, quadratic):
        for fe in finite_equilibria(quadratic, infinite_equilibria(quadratic)):
            assert equilibrium_residual(quadratic, fe) < 1e-10

    def test_heteroclinic_saddle_nodes(self, heteroclinic):
        fins = finite_equilibria(heteroclinic, infinite_equilibria(heteroclinic))
        assert set(by_position(fins)) == {(0.0, 1.0), (0.0, -1.0)}
        for fe in fins:
            assert fe.multiplicity == 4
            assert fe.topo_type is TopoType.SADDLE_NODE
            assert fe.jac_eigen_radial == pytest.approx(-2.0)
            assert fe.jac_eigen_angular == 0.0

    def test_no_finite_when_lambda_f_positive(self, heteroclinic):
        flipped = heteroclinic.model_copy(update={"lam": -1.0})
        assert finite_equilibria(flipped, infinite_equilibria(flipped)) == []

    def test_radii_scale_with_lambda(self, quadratic):
        scaled = quadratic.model_copy(update={"lam": 4.0})
        fins = finite_equilibria(scaled, infinite_equilibria(scaled))
        assert sorted(fe.r0 for fe in fins) == pytest.approx([4.0, 4.0, 4.0 * math.sqrt(2.0)])

    def test_classify_finite_agrees(self, quadratic):
        for fe in finite_equilibria(quadratic, infinite_equilibria(quadratic)):
            tag, topo = classify_finite(quadratic, fe)
            assert topo is fe.topo_type
            assert tag.radial is RadialStability.ATTRACTING


class TestNearZeroF:
    def test_detected(self):
        field = near_zero_f_field()
        angles = near_zero_f_angles(field, infinite_equilibria(field))
        assert angles == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_strict_raises(self):
        field = near_zero_f_field()
        with pytest.raises(NearZeroFError):
            finite_equilibria(field, infinite_equilibria(field), strict=True)

    def test_lenient_skips_radius(self):
        field = near_zero_f_field()
        assert finite_equilibria(field, infinite_equilibria(field)) == []


class TestInfiniteClassification:
    def test_quadratic_radial_sign_follows_f(self, quadratic):
        infs = with_classification(quadratic, infinite_equilibria(quadratic))
        for eq in infs:
            expected = RadialStability.ATTRACTING if eq.f_value > 0 else RadialStability.REPELLING
            assert eq.stability.radial is expected
            assert eq.stability.hyperbolic

    def test_even_multiplicity_is_semi_stable(self, heteroclinic):
        for eq in with_classification(heteroclinic, infinite_equilibria(heteroclinic)):
            assert eq.stability.angular is AngularStability.SEMI_STABLE
            assert not eq.stability.hyperbolic

    def test_angular_stability_alternates(self, quadratic):
        infs = with_classification(quadratic, infinite_equilibria(quadratic))
        kinds = [eq.stability.angular for eq in sorted(infs, key=lambda e: e.theta)]
        for a, b in zip(kinds, kinds[1:] + kinds[:1]):
            assert a is not b


class TestCounts:
    def test_quadratic_consistent(self, quadratic):
        infs = infinite_equilibria(quadratic)
        report = check_counts(quadratic, infs, finite_equilibria(quadratic, infs))
        assert report.consistent
        assert report.infinite_count == 6
        assert report.finite_count == 3
        assert report.even_degree_minimum_ok is True
        assert report.mod4_ok is None

    def test_odd_degree_mod4(self, quartic_rotation):
        infs = infinite_equilibria(quartic_rotation)
        report = check_counts(quartic_rotation, infs, finite_equilibria(quartic_rotation, infs))
        assert report.infinite_count == 0
        assert report.mod4_ok is True
        assert report.consistent

    def test_degenerate_has_no_bounds(self, degenerate_circle):
        report = check_counts(degenerate_circle, None, None)
        assert report.infinite_count is None
        assert report.consistent

    def test_violation_recorded(self, quadratic):
        infs = infinite_equilibria(quadratic)
        fins = finite_equilibria(quadratic, infs)
        report = check_counts(quadratic, infs, fins + fins[:1])
        assert "radius_rule" in report.violations
        assert not report.consistent


class TestRefineCartesian:
    def test_newton_stays_on_equilibrium(self, quadratic):
        for fe in finite_equilibria(quadratic, infinite_equilibria(quadratic)):
            x, y = refine_cartesian(quadratic, fe)
            assert (x, y) == pytest.approx((fe.x, fe.y), abs=1e-9)

    def test_saddle_node_least_squares(self, heteroclinic):
        for fe in finite_equilibria(heteroclinic, infinite_equilibria(heteroclinic)):
            x, y = refine_cartesian(heteroclinic, fe)
            assert math.hypot(*heteroclinic.vector(x, y)) < 1e-8
