"""
Verificação cruzada entre o veredito simbólico e trajetórias integradas.

Cada verificação vira um OracleCheck; uma verificação reprovada é uma
contradição entre as duas análises, nunca uma exceção.
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from src.core.config import get_settings
from src.core.exceptions import (
    CycleNotFoundError,
    NoReturnError,
    OracleError,
    PreconditionViolatedError,
    StepUnderflowError,
)
from src.domain.models import (
    Chart,
    CrossValidationSummary,
    FiniteEquilibrium,
    GlobalPortrait,
    HalfCone,
    OracleCheck,
    StarField,
    TWO_PI,
    Trajectory,
    Verdict,
)
from src.domain.services.equilibria import equilibrium_residual
from src.domain.services.poly_core import f_theta, g_theta, radial_form, max_abs_on_circle
from src.infrastructure.oracle.return_map import locate_cycle, return_map, reversed_field
from src.infrastructure.oracle.trajectories import (
    chart_direction,
    integrate_cartesian,
    integrate_chart,
    make_integrator,
    to_chart,
)

_CONE_TOL = 1e-9
_RETURN_GRID = (0.25, 0.5, 1.0, 2.0)


def small_radius(field: StarField) -> float:
    """Raio onde a parte linear domina: |f| rⁿ⁻¹ ≤ |λ|/2"""
    peak = max_abs_on_circle(radial_form(field))
    if peak <= 1e-300:
        peak = 1.0
    return 0.5 * (abs(field.lam) / (2.0 * peak)) ** (1.0 / (field.degree - 1))


def _radius_scale(portrait: GlobalPortrait) -> float:
    return max([1.0] + [fe.r0 for fe in portrait.finite])


def _signed_margins(cone: HalfCone, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """min(sin(θ − θ1), sin(θ2 − θ)) normalizado; ≥ 0 dentro do cone"""
    norms = np.hypot(xs, ys)
    norms[norms == 0.0] = 1.0
    first = (-math.sin(cone.theta1) * xs + math.cos(cone.theta1) * ys) / norms
    second = (math.sin(cone.theta2) * xs - math.cos(cone.theta2) * ys) / norms
    return np.minimum(first, second)


def _chart_directions(trajectory: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    chart = Chart(trajectory.coordinates)
    angles = np.array([chart_direction(chart, u) for u in trajectory.xs])
    return np.cos(angles), np.sin(angles)


# ========================================
# INVARIÂNCIA DOS CONES
# ========================================

def _cone_check(field: StarField, cone: HalfCone, start: np.ndarray, escape: float) -> OracleCheck:
    settings = get_settings()
    name = f"cone_invariance[{cone.theta1:.6f},{cone.theta2:.6f}]"
    try:
        trajectory = integrate_cartesian(field, start[0], start[1], settings.verify_t_end, escape_radius=escape)
    except StepUnderflowError as exc:
        if exc.details["norm"] > 10.0 * float(np.linalg.norm(start)):
            return OracleCheck(name=name, passed=True, detail="finite-time blow-up before escape radius")
        return OracleCheck(name=name, passed=False, detail=exc.message)

    margin = float(np.min(_signed_margins(cone, np.array(trajectory.xs), np.array(trajectory.ys))))
    detail = f"min margin {margin:.3e}"

    if trajectory.escaped:
        chart, u, v = to_chart(*trajectory.end)
        remaining = max(settings.verify_t_end - trajectory.times[-1], 1.0)
        try:
            rerouted = integrate_chart(field, chart, u, v, remaining)
        except OracleError as exc:
            return OracleCheck(name=name, passed=margin >= -_CONE_TOL, detail=f"{detail}; chart: {exc.message}")
        xs, ys = _chart_directions(rerouted)
        margin = min(margin, float(np.min(_signed_margins(cone, xs, ys))))
        detail = f"min margin {margin:.3e} (continued in {chart.value})"

    return OracleCheck(name=name, passed=margin >= -_CONE_TOL, detail=detail)


def _ray_check(field: StarField, theta: float, start: np.ndarray, escape: float) -> OracleCheck:
    """Caso degenerado: todo raio é invariante"""
    ray = HalfCone(theta1=theta, theta2=theta)
    name = f"ray_invariance[{theta:.6f}]"
    try:
        trajectory = integrate_cartesian(field, start[0], start[1], get_settings().verify_t_end, escape_radius=escape)
    except StepUnderflowError as exc:
        return OracleCheck(name=name, passed=True, detail=f"blow-up: {exc.message}")
    xs, ys = np.array(trajectory.xs), np.array(trajectory.ys)
    drift = float(np.max(np.abs(_signed_margins(ray, xs, ys))))
    return OracleCheck(name=name, passed=drift <= 1e-7, detail=f"max angular drift {drift:.3e}")


# ========================================
# EQUILÍBRIOS
# ========================================

def _equilibrium_check(field: StarField, eq: FiniteEquilibrium) -> OracleCheck:
    settings = get_settings()
    name = f"equilibrium[{eq.theta0:.6f}]"
    residual = equilibrium_residual(field, eq)
    if residual > settings.residual_tol * max(1.0, eq.r0 ** field.degree):
        return OracleCheck(name=name, passed=False, detail=f"residual {residual:.3e}")

    growth = max(eq.jac_eigen_radial, eq.jac_eigen_angular, 0.0)
    horizon = settings.verify_t_end if growth == 0.0 else min(settings.verify_t_end, 5.0 / growth)
    trajectory = integrate_cartesian(field, eq.x, eq.y, horizon)
    drift = float(np.max(np.hypot(np.array(trajectory.xs) - eq.x, np.array(trajectory.ys) - eq.y)))
    return OracleCheck(
        name=name,
        passed=drift < 1e-6 * max(1.0, eq.r0),
        detail=f"residual {residual:.3e}, drift {drift:.3e} over t={horizon:.3g}",
    )


# ========================================
# VEREDITOS
# ========================================

def _cycle_checks(field: StarField, portrait: GlobalPortrait) -> List[OracleCheck]:
    profile = portrait.located_cycle
    if profile is None:
        if portrait.cycle is None:
            logger.warning("No cycle certificate near a tangency of g: cycle checks skipped")
            return []
        try:
            profile = locate_cycle(field, portrait.cycle)
        except CycleNotFoundError as exc:
            return [OracleCheck(name="cycle_located", passed=False, detail=exc.message)]
    return [
        OracleCheck(name="cycle_located", passed=True, detail=f"r*={profile.radius:.10g}"),
        OracleCheck(
            name="cycle_hyperbolic",
            passed=profile.hyperbolic,
            detail=f"multiplier {profile.multiplier:.6g}",
        ),
    ]


def _monotone_return_checks(field: StarField) -> List[OracleCheck]:
    """Sem zeros de g: o mapa de retorno afasta (λ > 0) ou aproxima (λ < 0) da origem"""
    base = small_radius(field)
    checks: List[OracleCheck] = []
    for factor in _RETURN_GRID:
        r0 = base * factor
        name = f"return_map_monotone[r0={r0:.4g}]"
        try:
            result = return_map(field, r0)
        except NoReturnError as exc:
            consistent = exc.details.get("escaped", False) == (field.lam > 0)
            checks.append(OracleCheck(name=name, passed=consistent, detail=exc.message))
            continue
        except (StepUnderflowError, PreconditionViolatedError) as exc:
            checks.append(OracleCheck(name=name, passed=field.lam > 0, detail=exc.message))
            continue
        moved_out = result.r_out > r0
        checks.append(OracleCheck(
            name=name,
            passed=moved_out == (field.lam > 0),
            detail=f"r_out={result.r_out:.10g}",
        ))
    return checks


def _origin_check(field: StarField, rng: np.random.Generator) -> OracleCheck:
    """Atrator global: a órbita se aproxima da origem; repulsor: idem em tempo reverso"""
    work = field if field.lam < 0 else reversed_field(field)
    phi = rng.uniform(0.0, TWO_PI)
    r0 = small_radius(field)
    trajectory = integrate_cartesian(work, r0 * math.cos(phi), r0 * math.sin(phi), get_settings().verify_t_end)
    final = math.hypot(*trajectory.end)
    return OracleCheck(
        name="origin_convergence",
        passed=not trajectory.escaped and final < r0,
        detail=f"|x(0)|={r0:.4g} |x(T)|={final:.4g}" + ("" if work is field else " (reversed time)"),
    )


def _cone_of(portrait: GlobalPortrait, theta: float) -> Optional[HalfCone]:
    for cone in portrait.cones:
        shifted = cone.theta1 + ((theta - cone.theta1) % TWO_PI)
        if cone.theta1 <= shifted <= cone.theta2:
            return cone
    return None


def _vertex_radius(portrait: GlobalPortrait, theta: float) -> float:
    for fe in portrait.finite:
        if abs(math.remainder(fe.theta0 - theta, TWO_PI)) < 1e-9:
            return fe.r0
    raise PreconditionViolatedError("distance_to_polycycle", "vertex without finite equilibrium", theta=theta)


def distance_to_polycycle(field: StarField, portrait: GlobalPortrait, x: float, y: float) -> float:
    """
    Distância radial de (x, y) ao arco do policiclo no mesmo meio-cone.

    O arco é obtido integrando dr/dθ = (λr + f rⁿ)/(g rⁿ⁻¹) a partir do
    vértice de onde sai (λ > 0) ou, em tempo reverso, do vértice onde chega.

    Raises:
        PreconditionViolatedError: retrato sem policiclo ou ponto num raio invariante
    """
    if portrait.polycycle is None:
        raise PreconditionViolatedError("distance_to_polycycle", "portrait has no polycycle")
    theta = math.atan2(y, x)
    cone = _cone_of(portrait, theta)
    if cone is None:
        raise PreconditionViolatedError("distance_to_polycycle", "point lies on an invariant radius", theta=theta)

    forward = float(g_theta(field, cone.mid)) > 0
    source, sink = (cone.theta1, cone.theta2) if forward else (cone.theta2, cone.theta1)
    start = source if field.lam > 0 else sink
    # s cresce no sentido da integração
    direction = 1.0 if (start == cone.theta1) else -1.0
    target = cone.theta1 + ((theta - cone.theta1) % TWO_PI)
    offset = 0.05 * cone.width
    r_start = _vertex_radius(portrait, start)
    span = direction * (target - start) - offset
    radius = math.hypot(x, y)
    if span <= 0.0:
        return abs(radius - r_start)

    n, lam = field.degree, field.lam

    def rhs(s: float, state: np.ndarray) -> np.ndarray:
        phi = start + direction * (offset + s)
        r = state[0]
        slope = (lam * r + float(f_theta(field, phi)) * r ** n) / (float(g_theta(field, phi)) * r ** (n - 1))
        return np.array([direction * slope])

    result = make_integrator(rhs).integrate(0.0, np.array([r_start]), span, record=False)
    return abs(radius - float(result.y[0]))


def _polycycle_check(field: StarField, portrait: GlobalPortrait) -> OracleCheck:
    cone = portrait.cones[0]
    vertex = _vertex_radius(portrait, cone.theta1)
    phi = cone.mid
    start = (0.5 * vertex * math.cos(phi), 0.5 * vertex * math.sin(phi))
    work = field if portrait.polycycle.attracting else reversed_field(field)
    horizon = 10.0 * get_settings().verify_t_end
    try:
        initial = distance_to_polycycle(field, portrait, *start)
        trajectory = integrate_cartesian(work, start[0], start[1], horizon)
        final = distance_to_polycycle(field, portrait, *trajectory.end)
    except (OracleError, PreconditionViolatedError) as exc:
        return OracleCheck(name="polycycle_approach", passed=False, detail=exc.message)
    return OracleCheck(
        name="polycycle_approach",
        passed=final < initial,
        detail=f"distance {initial:.4g} -> {final:.4g} at t={horizon:.3g}",
    )


# ========================================
# ORQUESTRAÇÃO
# ========================================

def cross_validate(field: StarField, portrait: GlobalPortrait, seed: Optional[int] = None) -> CrossValidationSummary:
    """
    Executa as verificações numéricas do retrato com amostragem reprodutível.

    Args:
        field: campo analisado
        portrait: retrato montado para o mesmo campo
        seed: semente (padrão das configurações)
    """
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    scale = _radius_scale(portrait)
    escape = settings.verify_escape_factor * scale
    checks: List[OracleCheck] = []

    for i in range(settings.verify_trajectories):
        if portrait.verdict is Verdict.DEGENERATE_CONTINUUM:
            theta = rng.uniform(0.0, TWO_PI)
            radius = rng.uniform(0.2, 2.0) * scale
            checks.append(_ray_check(field, theta, radius * np.array([math.cos(theta), math.sin(theta)]), escape))
        elif portrait.cones:
            cone = portrait.cones[i % len(portrait.cones)]
            theta = cone.theta1 + cone.width * rng.uniform(0.1, 0.9)
            radius = rng.uniform(0.2, 2.0) * scale
            checks.append(_cone_check(field, cone, radius * np.array([math.cos(theta), math.sin(theta)]), escape))

    for eq in portrait.finite:
        checks.append(_equilibrium_check(field, eq))

    if portrait.verdict is Verdict.LIMIT_CYCLE:
        checks.extend(_cycle_checks(field, portrait))
    elif portrait.verdict in (Verdict.GLOBAL_ATTRACTOR, Verdict.GLOBAL_REPELLOR):
        if not portrait.infinite and field.degree % 2 == 1:
            checks.extend(_monotone_return_checks(field))
        checks.append(_origin_check(field, rng))
    elif portrait.verdict in (Verdict.POLYCYCLE, Verdict.HETEROCLINIC_CYCLE):
        checks.append(_polycycle_check(field, portrait))

    summary = CrossValidationSummary(seed=seed, checks=tuple(checks))
    if summary.contradictions:
        logger.warning(f"Cross-validation: {summary.contradictions} contradiction(s) with verdict {portrait.verdict.value}")
    else:
        logger.info(f"Cross-validation: {len(checks)} checks agree with verdict {portrait.verdict.value}")
    return summary
