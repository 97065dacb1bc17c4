"""
Testes do oráculo numérico: integrador, cartas, mapa de retorno,
localização do ciclo, experimento sela-nó e verificação cruzada.
"""

import math

import numpy as np
import pytest

from src.core.config import use_settings
from src.core.exceptions import (
    CycleNotFoundError,
    OracleError,
    PreconditionViolatedError,
)
from src.domain import fixtures
from src.domain.models import Chart, StarField, SweepRow, Verdict
from src.domain.services.global_structure import assemble_portrait
from src.domain.services.poly_core import angular_form
from src.infrastructure.oracle.cross_validation import (
    _cycle_checks,
    cross_validate,
    distance_to_polycycle,
    small_radius,
)
from src.infrastructure.oracle.integrator import DormandPrince54, StepRecord, hermite
from src.infrastructure.oracle.return_map import (
    locate_cycle,
    perturbed_field,
    radius_monotone,
    return_map,
    reversed_field,
    saddle_node_sweep,
    sweep_frame,
)
from src.infrastructure.oracle.trajectories import (
    chart_direction,
    chart_rhs,
    integrate_cartesian,
    integrate_chart,
    to_chart,
)


def integrator(rhs, **kwargs):
    options = dict(rtol=1e-10, atol=1e-12, min_step=1e-14, max_steps=100_000)
    options.update(kwargs)
    return DormandPrince54(rhs, **options)


class TestIntegrator:
    def test_exponential_decay(self):
        result = integrator(lambda t, y: -y).integrate(0.0, np.array([1.0]), 2.0)
        assert result.y[0] == pytest.approx(math.exp(-2.0), rel=1e-8)
        assert result.t == pytest.approx(2.0)
        assert not result.escaped

    def test_harmonic_oscillator_conserves_radius(self):
        rhs = lambda t, y: np.array([-y[1], y[0]])  # noqa: E731
        result = integrator(rhs).integrate(0.0, np.array([1.0, 0.0]), 2 * math.pi)
        assert result.y.tolist() == pytest.approx([1.0, 0.0], abs=1e-8)

    def test_escape_radius_stops(self):
        result = integrator(lambda t, y: y, escape_radius=10.0).integrate(0.0, np.array([1.0]), 100.0)
        assert result.escaped
        assert result.y[0] >= 10.0

    def test_blow_up_raises(self):
        with pytest.raises(OracleError):
            integrator(lambda t, y: y * y).integrate(0.0, np.array([1.0]), 2.0)

    def test_on_step_can_stop(self):
        result = integrator(lambda t, y: np.ones(1)).integrate(
            0.0, np.array([0.0]), 10.0, on_step=lambda record: record.t1 > 1.0
        )
        assert result.stopped
        assert 1.0 < result.t < 10.0

    def test_hermite_endpoints(self):
        record = StepRecord(
            0.0, np.array([1.0]), np.array([0.0]), 1.0, np.array([2.0]), np.array([3.0])
        )
        assert float(hermite(record, 0.0)[0]) == pytest.approx(1.0)
        assert float(hermite(record, 1.0)[0]) == pytest.approx(2.0)


class TestTrajectories:
    def test_eps_field_settles_on_cycle(self, eps_field):
        trajectory = integrate_cartesian(eps_field, 0.5, 0.0, 20.0)
        assert math.hypot(*trajectory.end) == pytest.approx(1.0, abs=1e-6)
        assert trajectory.coordinates == "cartesian"

    @pytest.mark.parametrize("point", [(2.0, 1.0), (-2.0, 1.0), (0.5, 3.0), (0.5, -3.0)])
    def test_chart_round_trip_direction(self, point):
        chart, u, v = to_chart(*point)
        assert v > 0.0
        assert chart_direction(chart, u) == pytest.approx(math.atan2(point[1], point[0]))

    @pytest.mark.parametrize("chart", list(Chart))
    def test_infinity_is_invariant(self, quadratic, chart):
        assert chart_rhs(quadratic, chart)(0.0, np.array([0.3, 0.0]))[1] == 0.0

    def test_chart_orbit_stays_on_equator(self, quadratic):
        # em U1: u' = u(u − 1), v ≡ 0
        trajectory = integrate_chart(quadratic, Chart.U1, 0.5, 0.0, 10.0)
        assert trajectory.coordinates == "U1"
        assert set(trajectory.ys) == {0.0}
        assert 0.0 < trajectory.end[0] < 1e-3

    def test_reversed_field(self, heteroclinic):
        backward = reversed_field(heteroclinic)
        assert backward.lam == -1.0
        assert backward.q1.coeffs == tuple(-c for c in heteroclinic.q1.coeffs)


class TestReturnMap:
    def test_cycle_is_fixed_point(self, eps_field):
        result = return_map(eps_field, 1.0)
        assert result.r_out == pytest.approx(1.0, abs=1e-8)
        assert result.period == pytest.approx(2 * math.pi, rel=1e-7)

    def test_inner_orbit_moves_out(self, eps_field):
        result = return_map(eps_field, 0.5)
        expected = math.sqrt(1.0 - 0.75 * math.exp(-4 * math.pi))
        assert result.r_out == pytest.approx(expected, rel=1e-7)

    def test_other_section(self, eps_field):
        result = return_map(eps_field, 1.0, section_theta=1.0)
        assert result.section_theta == 1.0
        assert result.r_out == pytest.approx(1.0, abs=1e-8)

    def test_non_positive_radius(self, eps_field):
        with pytest.raises(PreconditionViolatedError):
            return_map(eps_field, 0.0)

    def test_section_on_invariant_radius(self, heteroclinic):
        with pytest.raises(PreconditionViolatedError):
            return_map(heteroclinic, 1.0, section_theta=math.pi / 2)


class TestLocateCycle:
    def test_unit_cycle(self, eps_field):
        profile = locate_cycle(eps_field)
        assert profile.radius == pytest.approx(1.0, abs=1e-7)
        assert profile.mean_radius == pytest.approx(1.0, abs=1e-6)
        assert profile.hyperbolic
        assert abs(profile.multiplier) < 1e-3
        assert len(profile.samples) == 720

    def test_radius_follows_lambda(self):
        profile = locate_cycle(fixtures.eps_field(lam=4.0))
        assert profile.radius == pytest.approx(2.0, abs=1e-6)

    def test_repelling_cycle_uses_reversed_time(self):
        profile = locate_cycle(fixtures.eps_field(lam=-1.0, eps=-1.0))
        assert profile.radius == pytest.approx(1.0, abs=1e-7)
        assert abs(profile.multiplier) > 1.0

    def test_no_cycle(self):
        with pytest.raises(CycleNotFoundError):
            locate_cycle(fixtures.eps_field(lam=-1.0))


class TestSaddleNode:
    def test_perturbed_form_identity(self, heteroclinic):
        perturbed = perturbed_field(heteroclinic, 0.1)
        assert angular_form(perturbed).coeffs == pytest.approx((1.1, 0.0, 0.0, 0.0, 0.1))
        assert perturbed.q1.coeffs[-1] == pytest.approx(-0.1)
        assert perturbed.q2.coeffs[0] == pytest.approx(1.1)

    @pytest.mark.slow
    def test_sweep_births_cycle(self, heteroclinic):
        rows = saddle_node_sweep(heteroclinic, [0.2, 0.0])
        assert [row.eps for row in rows] == [0.0, 0.2]
        zero, positive = rows
        assert zero.note == "undefined"
        assert zero.has_infinite_equilibria
        assert not positive.has_infinite_equilibria
        assert positive.criterion_integral < 0.0
        assert positive.cycle_found
        assert positive.cycle_mean_radius > 0.0

    def test_negative_eps_keeps_equilibria(self, heteroclinic):
        rows = saddle_node_sweep(heteroclinic, [-0.1])
        assert rows[0].has_infinite_equilibria
        assert rows[0].note == "polycycle persists or equilibria split"

    def test_frame_and_monotonicity(self):
        rows = [
            SweepRow(eps=0.1, has_infinite_equilibria=False, cycle_found=True, cycle_mean_radius=3.0),
            SweepRow(eps=0.2, has_infinite_equilibria=False, cycle_found=True, cycle_mean_radius=2.0),
            SweepRow(eps=0.0, has_infinite_equilibria=True, note="undefined"),
        ]
        frame = sweep_frame(rows)
        assert list(frame["eps"]) == [0.1, 0.2, 0.0]
        assert radius_monotone(frame) is True

    def test_monotonicity_needs_two_cycles(self):
        frame = sweep_frame([SweepRow(eps=0.1, has_infinite_equilibria=False)])
        assert radius_monotone(frame) is None


class TestCrossValidation:
    def test_limit_cycle_agrees(self, eps_field):
        summary = cross_validate(eps_field, assemble_portrait(eps_field), seed=7)
        assert summary.seed == 7
        assert summary.contradictions == 0
        assert {c.name for c in summary.checks} == {"cycle_located", "cycle_hyperbolic"}

    def test_global_attractor_agrees(self):
        field = fixtures.eps_field(lam=-1.0)
        summary = cross_validate(field, assemble_portrait(field))
        assert summary.contradictions == 0
        assert any(c.name == "origin_convergence" for c in summary.checks)

    def test_degenerate_rays(self, degenerate_circle):
        summary = cross_validate(degenerate_circle, assemble_portrait(degenerate_circle))
        assert summary.contradictions == 0
        assert all(c.name.startswith("ray_invariance") for c in summary.checks)

    def test_distance_needs_polycycle(self, eps_field):
        with pytest.raises(PreconditionViolatedError):
            distance_to_polycycle(eps_field, assemble_portrait(eps_field), 1.0, 1.0)

    def test_uncertified_cycle_skips_cycle_checks(self, heteroclinic, isolated_settings, mocker):
        use_settings(isolated_settings.with_overrides(guard_g_floor=1e-3))
        spy = mocker.patch("src.infrastructure.oracle.cross_validation.locate_cycle")
        field = perturbed_field(heteroclinic, 1e-7)
        portrait = assemble_portrait(field)
        assert portrait.cycle is None
        assert _cycle_checks(field, portrait) == []
        spy.assert_not_called()

    def test_small_radius(self, eps_field):
        assert small_radius(eps_field) == pytest.approx(0.5 * math.sqrt(0.5))

    def test_heteroclinic_orbit_reaches_polycycle(self, heteroclinic):
        portrait = assemble_portrait(heteroclinic)
        trajectory = integrate_cartesian(heteroclinic, 0.5, 0.5, 100.0)
        k = len(trajectory.xs) // 10
        early = distance_to_polycycle(heteroclinic, portrait, trajectory.xs[k], trajectory.ys[k])
        late = distance_to_polycycle(heteroclinic, portrait, *trajectory.end)
        assert late < 1e-3
        assert late <= early


def uniform_field(rng: np.random.Generator, degree: int) -> StarField:
    lam = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
    q1 = tuple(float(c) for c in rng.uniform(-1.0, 1.0, size=degree + 1))
    q2 = tuple(float(c) for c in rng.uniform(-1.0, 1.0, size=degree + 1))
    return StarField.build(lam, q1, q2)


@pytest.mark.slow
def test_random_fields_have_no_contradictions():
    rng = np.random.default_rng(2024)
    verdicts = set()
    for i in range(200):
        field = uniform_field(rng, 2 + i % 2)
        portrait = assemble_portrait(field)
        summary = cross_validate(field, portrait, seed=i)
        assert summary.contradictions == 0, (field, [c for c in summary.checks if not c.passed])
        verdicts.add(portrait.verdict)
    assert Verdict.INVARIANT_CONES in verdicts
