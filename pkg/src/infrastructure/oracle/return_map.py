"""
Mapa de retorno de Poincaré numa seção radial, localização do ciclo limite
e experimento de bifurcação sela-nó pela perturbação (−ε yⁿ, ε xⁿ).
"""

import math
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import quad
from scipy.optimize import brentq
from tenacity import Retrying, retry_if_exception, stop_after_attempt

from src.core.config import get_settings
from src.core.exceptions import (
    CycleNotFoundError,
    DegenerateContinuumError,
    InternalConsistencyError,
    NoReturnError,
    OracleError,
    PreconditionViolatedError,
)
from src.core.logging import log_oracle_run
from src.domain.models import (
    CycleCertificate,
    CycleProfile,
    HomogeneousPoly,
    ReturnMapResult,
    StarField,
    SweepRow,
    TWO_PI,
)
from src.domain.services.global_structure import limit_cycle_test
from src.domain.services.poly_core import angular_form, g_theta, theta_grid
from src.domain.services.roots import infinite_equilibria
from src.infrastructure.oracle.integrator import StepRecord, hermite
from src.infrastructure.oracle.trajectories import cartesian_rhs, make_integrator

_PROFILE_SAMPLES = 720


def _wrap(angle: float) -> float:
    """Reduz a (−π, π]"""
    return math.atan2(math.sin(angle), math.cos(angle))


def _is_retryable(exc: BaseException) -> bool:
    return isinstance(exc, NoReturnError) and not exc.details.get("escaped", False)


def reversed_field(field: StarField) -> StarField:
    """(λ, Q) → (−λ, −Q): mesmas órbitas percorridas em tempo reverso"""
    return StarField(lam=-field.lam, q1=field.q1.scaled(-1.0), q2=field.q2.scaled(-1.0))


# ========================================
# MAPA DE RETORNO
# ========================================

def _single_return(field: StarField, r0: float, phi: float, budget: float, max_step: float) -> ReturnMapResult:
    direction = 1.0 if float(g_theta(field, phi)) > 0 else -1.0
    target = phi + direction * TWO_PI
    rhs = cartesian_rhs(field)
    integrator = make_integrator(rhs, escape_radius=get_settings().escape_radius, max_step=max_step)

    state = {"unwrapped": phi, "last": phi, "crossing": None, "collapsed": False}

    def on_step(record: StepRecord) -> bool:
        angle = math.atan2(record.y1[1], record.y1[0])
        advanced = state["unwrapped"] + _wrap(angle - state["last"])
        if (advanced - target) * direction >= 0.0:
            state["crossing"] = (record, state["unwrapped"])
            return True
        state["unwrapped"], state["last"] = advanced, angle
        if np.linalg.norm(record.y1) < 1e-12 * r0:
            state["collapsed"] = True
            return True
        return False

    started = time.perf_counter()
    start = np.array([r0 * math.cos(phi), r0 * math.sin(phi)])
    result = integrator.integrate(0.0, start, budget, on_step=on_step, record=False)
    log_oracle_run("return-map", result.stats.accepted, result.stats.rejected, result.escaped,
                   (time.perf_counter() - started) * 1000)

    if result.escaped or state["crossing"] is None:
        raise NoReturnError(phi, r0, budget, escaped=result.escaped)

    record, base = state["crossing"]
    origin_angle = math.atan2(record.y0[1], record.y0[0])

    def angle_at(tau: float) -> float:
        point = hermite(record, tau)
        return base + _wrap(math.atan2(point[1], point[0]) - origin_angle) - target

    tau = brentq(angle_at, record.t0, record.t1, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if tau > record.t0:
        point, _, _ = integrator.step(record.t0, record.y0, tau - record.t0, record.f0)
    else:
        point = record.y0.copy()

    # correção de Newton sobre o ângulo usando θ' = g(θ) r^(n−1)
    theta = math.atan2(point[1], point[0])
    radius = float(np.linalg.norm(point))
    angular_speed = float(g_theta(field, theta)) * radius ** (field.degree - 1)
    dt = -_wrap(theta - phi) / angular_speed
    point = point + dt * rhs(tau, point)

    return ReturnMapResult(
        section_theta=phi,
        r_in=r0,
        r_out=float(np.linalg.norm(point)),
        crossings=1,
        period=float(tau + dt),
    )


def return_map(field: StarField, r0: float, section_theta: float = 0.0) -> ReturnMapResult:
    """
    Primeiro retorno à seção θ = section_theta partindo do raio r0.

    O orçamento de tempo é budget_turns voltas à menor velocidade angular em r0
    e dobra a cada nova tentativa.

    Raises:
        PreconditionViolatedError: g nula na seção ou r0 ≤ 0
        NoReturnError: sem retorno após todas as tentativas (escaped=True se explodiu)
    """
    settings = get_settings()
    if r0 <= 0.0:
        raise PreconditionViolatedError("return_map", "r0 must be positive", r0=r0)
    if abs(float(g_theta(field, section_theta))) <= settings.guard_min_abs_g:
        raise PreconditionViolatedError("return_map", "section is an invariant radius", theta=section_theta)

    grid = theta_grid(512)
    abs_g = np.abs(g_theta(field, grid))
    speed = r0 ** (field.degree - 1)
    base_budget = settings.return_map_budget_turns * TWO_PI / (max(float(np.min(abs_g)), 1e-300) * speed)
    max_step = math.pi / (8.0 * float(np.max(abs_g)) * speed)

    retryer = Retrying(
        stop=stop_after_attempt(settings.return_map_attempts),
        retry=retry_if_exception(_is_retryable),
        reraise=True,
    )
    for attempt in retryer:
        with attempt:
            budget = base_budget * 2 ** (attempt.retry_state.attempt_number - 1)
            if attempt.retry_state.attempt_number > 1:
                logger.debug(f"Return map retry {attempt.retry_state.attempt_number} with t={budget:.3g}")
            result = _single_return(field, r0, section_theta, budget, max_step)
    return result


# ========================================
# LOCALIZAÇÃO DO CICLO
# ========================================

def _inverse_speed_integral(field: StarField) -> float:
    value, _ = quad(
        lambda t: 1.0 / abs(g_theta(field, t)), 0.0, TWO_PI,
        epsabs=get_settings().quad_abs_tol, limit=get_settings().quad_limit,
    )
    return float(value)


def initial_radius(field: StarField, certificate: CycleCertificate) -> float:
    """Chute r = R*^(1/(1−n)) com R* = −I / (λ ∫ 1/|g| dθ)"""
    mean_inverse = -certificate.integral / (field.lam * _inverse_speed_integral(field))
    if mean_inverse <= 0.0:
        raise CycleNotFoundError("criterion sign does not admit a cycle", integral=certificate.integral)
    return mean_inverse ** (1.0 / (1 - field.degree))


def _bracket(displacement, guess: float, expansions: int) -> Tuple[float, float]:
    lo, hi = guess / 1.25, guess * 1.25
    for _ in range(expansions):
        if displacement(lo) > 0.0:
            break
        lo /= 1.5
    else:
        raise CycleNotFoundError("no inner bracket", guess=guess)
    for _ in range(expansions):
        if displacement(hi) < 0.0:
            break
        hi *= 1.5
    else:
        raise CycleNotFoundError("no outer bracket", guess=guess)
    return lo, hi


def _profile(field: StarField, radius: float, phi: float, period: float) -> Tuple[Tuple[Tuple[float, float], ...], float]:
    integrator = make_integrator(cartesian_rhs(field))
    result = integrator.integrate(0.0, np.array([radius * math.cos(phi), radius * math.sin(phi)]), period)
    states = np.array(result.states)
    angles = np.mod(np.arctan2(states[:, 1], states[:, 0]), TWO_PI)
    radii = np.hypot(states[:, 0], states[:, 1])
    order = np.argsort(angles)
    grid = theta_grid(_PROFILE_SAMPLES)
    sampled = np.interp(grid, angles[order], radii[order], period=TWO_PI)
    return tuple(zip(grid.tolist(), sampled.tolist())), float(np.mean(sampled))


def locate_cycle(
    field: StarField,
    certificate: Optional[CycleCertificate] = None,
    section_theta: float = 0.0
) -> CycleProfile:
    """
    Ponto fixo do mapa de retorno. Campos com λ < 0 (ciclo repulsor) são
    tratados pelo campo reverso, onde o ciclo atrai; o multiplicador é invertido.

    Raises:
        CycleNotFoundError: critério sem ciclo ou sem ponto fixo no colchete
    """
    settings = get_settings()
    certificate = certificate or limit_cycle_test(field)
    if not certificate.exists:
        raise CycleNotFoundError("criterion reports no cycle", integral=certificate.integral)

    work = field if field.lam > 0 else reversed_field(field)
    guess = initial_radius(field, certificate)

    def displacement(r: float) -> float:
        return return_map(work, r, section_theta).r_out - r

    try:
        lo, hi = _bracket(displacement, guess, settings.cycle_bracket_expansions)
        radius = brentq(displacement, lo, hi, xtol=settings.cycle_tol * guess, rtol=1e-12)
        h = 1e-4 * radius
        plus = return_map(work, radius + h, section_theta)
        minus = return_map(work, radius - h, section_theta)
        center = return_map(work, radius, section_theta)
    except NoReturnError as exc:
        raise CycleNotFoundError(f"return map failed: {exc.message}") from exc

    multiplier = (plus.r_out - minus.r_out) / (2.0 * h)
    if work is not field:
        multiplier = 1.0 / multiplier
    samples, mean_radius = _profile(work, radius, section_theta, center.period)

    logger.info(f"Limit cycle located: r={radius:.10g} mean={mean_radius:.6g} multiplier={multiplier:.6g}")
    return CycleProfile(
        radius=float(radius),
        section_theta=section_theta,
        mean_radius=mean_radius,
        samples=samples,
        multiplier=float(multiplier),
        hyperbolic=abs(multiplier - 1.0) > 1e-3,
        tolerance=settings.cycle_tol,
    )


# ========================================
# BIFURCAÇÃO SELA-NÓ
# ========================================

def perturbed_field(field: StarField, eps: float) -> StarField:
    """
    Q1 − ε yⁿ, Q2 + ε xⁿ, com a identidade 𝓕_ε = 𝓕 + ε(x^(n+1) + y^(n+1))
    verificada coeficiente a coeficiente.
    """
    n = field.degree
    perturbed = StarField(
        lam=field.lam,
        q1=field.q1 - HomogeneousPoly.monomial(n, n, eps),
        q2=field.q2 + HomogeneousPoly.monomial(n, 0, eps),
    )
    delta = angular_form(perturbed) - angular_form(field)
    expected = HomogeneousPoly.monomial(n + 1, 0, eps) + HomogeneousPoly.monomial(n + 1, n + 1, eps)
    if any(abs(a - b) > 1e-12 * max(1.0, abs(eps)) for a, b in zip(delta.coeffs, expected.coeffs)):
        raise InternalConsistencyError("perturbed angular form identity failed", eps=eps)
    return perturbed


def saddle_node_sweep(field: StarField, eps_grid: Sequence[float]) -> List[SweepRow]:
    """
    Varre ε: para ε > 0 pequeno os equilíbrios no infinito somem e um ciclo
    limite nasce do policiclo; ε = 0 é o próprio campo, onde o critério não
    se aplica.
    """
    rows: List[SweepRow] = []
    for eps in sorted(eps_grid):
        if eps == 0.0:
            try:
                has_infinite = bool(infinite_equilibria(field))
            except DegenerateContinuumError:
                has_infinite = True
            rows.append(SweepRow(eps=0.0, has_infinite_equilibria=has_infinite, note="undefined"))
            continue

        perturbed = perturbed_field(field, eps)
        try:
            infs = infinite_equilibria(perturbed)
        except DegenerateContinuumError:
            rows.append(SweepRow(eps=eps, has_infinite_equilibria=True, note="degenerate"))
            continue

        if infs:
            note = "polycycle persists or equilibria split" if eps < 0 else None
            rows.append(SweepRow(eps=eps, has_infinite_equilibria=True, note=note))
            continue

        try:
            certificate = limit_cycle_test(perturbed)
        except PreconditionViolatedError as exc:
            rows.append(SweepRow(eps=eps, has_infinite_equilibria=False, note=exc.message))
            continue

        mean_radius, note = None, None
        if certificate.exists:
            try:
                mean_radius = locate_cycle(perturbed, certificate).mean_radius
            except OracleError as exc:
                note = exc.message
        rows.append(SweepRow(
            eps=eps,
            has_infinite_equilibria=False,
            criterion_integral=certificate.integral,
            cycle_found=mean_radius is not None,
            cycle_mean_radius=mean_radius,
            note=note,
        ))
    return rows


def sweep_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows])


def radius_monotone(frame: pd.DataFrame) -> Optional[bool]:
    """Raio médio monótono em ε entre as linhas com ciclo (None se < 2 linhas)"""
    if frame.empty or "cycle_found" not in frame:
        return None
    cycles = frame[frame["cycle_found"]].sort_values("eps")["cycle_mean_radius"]
    if len(cycles) < 2:
        return None
    return bool(cycles.is_monotonic_increasing or cycles.is_monotonic_decreasing)
