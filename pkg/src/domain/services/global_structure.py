"""
Montagem do retrato de fase global.

Ordem de decisão:
    degenerado (F ≡ 0)         → contínuo de equilíbrios
    sem equilíbrios no infinito → ciclo limite ou atrator/repulsor global
    com equilíbrios no infinito → policiclo, atrator global ou cones invariantes
"""

import math
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from src.core.config import get_settings
from src.core.exceptions import (
    DegenerateContinuumError,
    InternalConsistencyError,
    PreconditionViolatedError,
)
from src.core.logging import log_analysis
from src.domain.models import (
    ConeCase,
    ContinuumCase,
    ContinuumDescription,
    CycleCertificate,
    EquilibriumArc,
    FiniteEquilibrium,
    GlobalPortrait,
    HalfCone,
    HomogeneousPoly,
    InfiniteEquilibrium,
    PolycycleCertificate,
    RadialStability,
    SectorType,
    StarField,
    TWO_PI,
    Verdict,
)
from src.domain.services.equilibria import (
    check_counts,
    classify_infinite,
    f_tolerance,
    finite_equilibria,
    near_zero_f_angles,
    with_classification,
)
from src.domain.services.poly_core import (
    angular_form,
    degenerate_kernel,
    f_theta,
    form_zero_angles,
    g_theta,
    max_abs_on_circle,
    normalize_angle,
    theta_grid,
    zero_threshold,
)
from src.domain.services.roots import chart_for_angle, infinite_count_warnings, infinite_equilibria

# Tabela (fonte, sumidouro) → caso, lida na ordem do fluxo
_CASES = {
    (RadialStability.REPELLING, RadialStability.ATTRACTING): ConeCase.A,
    (RadialStability.ATTRACTING, RadialStability.REPELLING): ConeCase.B,
    (RadialStability.ATTRACTING, RadialStability.ATTRACTING): ConeCase.C,
    (RadialStability.REPELLING, RadialStability.REPELLING): ConeCase.D,
}

_ADMISSIBLE_PAIRS = {
    (SectorType.P_MINUS, SectorType.P_PLUS),
    (SectorType.H_PLUS, SectorType.H_MINUS),
    (SectorType.H_PLUS, SectorType.P_PLUS),
    (SectorType.P_MINUS, SectorType.H_MINUS),
}


def _tangency_verdict(field: StarField, angles: Sequence[float]) -> Verdict:
    """
    g com zero numérico não isolado: os picos de f/|g| dominam o critério,
    logo sign(λ·I) = sign(λ·f) nesses ângulos.
    """
    if all(field.lam * float(f_theta(field, theta)) >= 0.0 for theta in angles):
        return _global_verdict(field.lam)
    return Verdict.LIMIT_CYCLE


def _global_verdict(lam: float) -> Verdict:
    return Verdict.GLOBAL_ATTRACTOR if lam < 0 else Verdict.GLOBAL_REPELLOR


# ========================================
# CONES INVARIANTES
# ========================================

def cones(infs: Sequence[InfiniteEquilibrium]) -> List[HalfCone]:
    """
    Partição de [0, 2π) pelos raios invariantes consecutivos.

    Raises:
        PreconditionViolatedError: lista vazia
    """
    if not infs:
        raise PreconditionViolatedError("cones", "no infinite equilibria to partition the plane")

    angles = sorted(eq.theta for eq in infs)
    result = [
        HalfCone(theta1=a, theta2=b) for a, b in zip(angles, angles[1:])
    ]
    result.append(HalfCone(theta1=angles[-1], theta2=angles[0] + TWO_PI))

    for cone in result:
        if not 0.0 < cone.width <= math.pi + 1e-9:
            raise InternalConsistencyError(
                "half-cone width outside (0, pi]", theta1=cone.theta1, theta2=cone.theta2
            )
    return result


def _radial_at(field: StarField, theta: float) -> RadialStability:
    theta = theta % TWO_PI
    eq = InfiniteEquilibrium(theta=theta, chart=chart_for_angle(theta), multiplicity=1)
    return classify_infinite(field, eq).radial


def classify_sectors(field: StarField, cone: HalfCone) -> HalfCone:
    """
    Completa um meio-cone com os setores nas extremidades e o caso.

    O sinal de g no ângulo médio dá o sentido do fluxo angular: g > 0 leva
    de θ1 (fonte) para θ2 (sumidouro). Na fonte o setor é P⁻ se há repulsão
    radial, senão H⁺; no sumidouro é H⁻ se há repulsão radial, senão P⁺.
    """
    g_mid = float(g_theta(field, cone.mid))
    if abs(g_mid) <= zero_threshold(field):
        raise InternalConsistencyError(
            "g vanishes inside a half-cone between consecutive zeros",
            theta1=cone.theta1,
            theta2=cone.theta2,
        )

    sign = 1 if g_mid > 0 else -1
    at_theta1 = _radial_at(field, cone.theta1)
    at_theta2 = _radial_at(field, cone.theta2)
    source, sink = (at_theta1, at_theta2) if sign > 0 else (at_theta2, at_theta1)

    source_sector = SectorType.P_MINUS if source is RadialStability.REPELLING else SectorType.H_PLUS
    sink_sector = SectorType.H_MINUS if sink is RadialStability.REPELLING else SectorType.P_PLUS
    if (source_sector, sink_sector) not in _ADMISSIBLE_PAIRS:
        raise InternalConsistencyError("inadmissible sector pair", pair=(source_sector, sink_sector))

    first, second = (source_sector, sink_sector) if sign > 0 else (sink_sector, source_sector)
    return cone.model_copy(update={
        "g_sign_inside": sign,
        "sector_at_theta1": first,
        "sector_at_theta2": second,
        "case_tag": _CASES[(source, sink)],
    })


# ========================================
# CICLO LIMITE
# ========================================

def _abs_g_minima(values: np.ndarray, grid: np.ndarray, limit: int = 50) -> List[float]:
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    idx = np.where((values <= left) & (values <= right))[0]
    idx = idx[np.argsort(values[idx])][:limit]
    return sorted(float(grid[i]) for i in idx if 0.0 < grid[i] < TWO_PI)


def g_floor(field: StarField) -> float:
    """|g| abaixo disto, depois do refinamento, conta como zero de g"""
    return get_settings().guard_g_floor * (1.0 + max_abs_on_circle(angular_form(field)))


def near_tangencies(field: StarField) -> List[Tuple[float, float]]:
    """
    Mínimos locais de |g| abaixo de guard_min_abs_g na grade de guarda,
    refinados por minimização limitada: pares (θ, |g(θ)|).
    """
    settings = get_settings()
    grid = theta_grid(settings.guard_grid)
    abs_g = np.abs(g_theta(field, grid))
    step = TWO_PI / settings.guard_grid
    low = (abs_g <= np.roll(abs_g, 1)) & (abs_g <= np.roll(abs_g, -1)) & (abs_g <= settings.guard_min_abs_g)
    found: List[Tuple[float, float]] = []
    for theta in grid[np.where(low)[0]]:
        best = minimize_scalar(
            lambda t: float(abs(g_theta(field, t))),
            bounds=(theta - step, theta + step),
            method="bounded",
            options={"xatol": settings.root_xtol},
        )
        found.append((normalize_angle(float(best.x)), float(best.fun)))
    return found


def cycle_integral(field: StarField) -> Tuple[float, float]:
    """
    I = ∫ f/|g| dθ em [0, 2π] por quadratura adaptativa.

    Quase-tangências (|g| pequeno mas não nulo) entram como pontos de quebra
    da quadratura.

    Raises:
        PreconditionViolatedError: |g| refinado não passa de g_floor
    """
    settings = get_settings()
    grid = theta_grid(settings.guard_grid)
    abs_g = np.abs(g_theta(field, grid))
    breaks = set(_abs_g_minima(abs_g, grid))

    tangencies = near_tangencies(field)
    if tangencies:
        smallest = min(value for _, value in tangencies)
        if smallest <= g_floor(field):
            raise PreconditionViolatedError(
                "limit_cycle_test",
                "g vanishes numerically between grid points",
                min_abs_g=smallest,
                angles=[theta for theta, _ in tangencies],
            )
        breaks.update(theta for theta, _ in tangencies if 0.0 < theta < TWO_PI)

    value, error = quad(
        lambda t: f_theta(field, t) / abs(g_theta(field, t)),
        0.0,
        TWO_PI,
        epsabs=settings.quad_abs_tol,
        epsrel=1e-10 if tangencies else 0.0,
        limit=max(settings.quad_limit, 4 * len(breaks)),
        points=sorted(breaks) or None,
    )
    return float(value), float(error)


def limit_cycle_test(field: StarField) -> CycleCertificate:
    """
    Critério de existência do ciclo limite: λ·I < 0 com n ímpar e g sem zeros.
    O ciclo, quando existe, é único e hiperbólico.

    Raises:
        PreconditionViolatedError: n par, ou há equilíbrios no infinito
    """
    n = field.degree
    if n % 2 == 0:
        raise PreconditionViolatedError(
            "limit_cycle_test", "even degree: no periodic orbit surrounds the origin", degree=n
        )
    try:
        infs = infinite_equilibria(field)
    except DegenerateContinuumError as exc:
        raise PreconditionViolatedError("limit_cycle_test", "degenerate field") from exc
    if infs:
        raise PreconditionViolatedError(
            "limit_cycle_test",
            "infinite equilibria present: no periodic orbit surrounds the origin",
            n_infinite=len(infs),
        )

    integral, error = cycle_integral(field)
    lam = field.lam
    tol = 10.0 * max(get_settings().quad_abs_tol, error) * abs(lam)
    product = lam * integral
    exists = product < -tol

    logger.debug(f"Cycle integral I={integral:.6e} (err {error:.1e}), lambda*I={product:.3e}")
    return CycleCertificate(
        integral=integral,
        error_estimate=error,
        exists=exists,
        hyperbolic=exists,
        stability=(RadialStability.ATTRACTING if lam > 0 else RadialStability.REPELLING) if exists else None,
        boundary=abs(product) <= tol,
        tolerance=tol,
    )


# ========================================
# POLICICLO E ATRATOR GLOBAL
# ========================================

def polycycle_test(
    field: StarField,
    infs: Sequence[InfiniteEquilibrium],
    fins: Sequence[FiniteEquilibrium]
) -> Optional[PolycycleCertificate]:
    """
    Policiclo ⟺ n ímpar, há zeros de g e λ·f(θ0) < 0 em todos eles.
    É heteroclínico quando g não muda de sinal (multiplicidades pares),
    isto é, quando os vértices são extremos locais de g.
    """
    if field.degree % 2 == 0 or not infs:
        return None
    tol = f_tolerance(field)
    lam = field.lam
    if not all(lam * float(f_theta(field, eq.theta)) < -tol for eq in infs):
        return None

    if len(fins) != len(infs):
        raise InternalConsistencyError(
            "polycycle without a finite equilibrium on every invariant radius",
            n_infinite=len(infs),
            n_finite=len(fins),
        )

    all_even = all(eq.multiplicity % 2 == 0 for eq in infs)
    ordered = sorted(fins, key=lambda fe: fe.theta0)
    return PolycycleCertificate(
        kind="heteroclinic_cycle" if all_even else "polycycle",
        attracting=lam > 0,
        vertex_angles=tuple(fe.theta0 for fe in ordered),
        vertices=tuple((fe.x, fe.y) for fe in ordered),
        vertices_are_g_extrema=all_even,
    )


def global_attractor_test(
    field: StarField,
    infs: Sequence[InfiniteEquilibrium],
    cycle: Optional[CycleCertificate] = None
) -> Optional[Verdict]:
    """
    A origem é atrator (λ < 0) ou repulsor (λ > 0) global se:
        n par e f = 0 em todo zero de g
        n ímpar e λf ≥ 0 em todo zero de g
        n ímpar, g sem zeros e λ·I ≥ 0
    """
    n = field.degree
    tol = f_tolerance(field)
    lam = field.lam

    if n % 2 == 0:
        holds = bool(infs) and all(abs(float(f_theta(field, eq.theta))) <= tol for eq in infs)
    elif infs:
        holds = all(lam * float(f_theta(field, eq.theta)) >= -tol for eq in infs)
    else:
        certificate = cycle or limit_cycle_test(field)
        holds = not certificate.exists

    return _global_verdict(lam) if holds else None


# ========================================
# CASO DEGENERADO
# ========================================

def _continuum_case(kernel: HomogeneousPoly, lam: float) -> Tuple[ContinuumCase, float, float]:
    p1, p2, p3 = kernel.coeffs
    discriminant = p1 * p3 - p2 * p2 / 4.0
    trace = math.copysign(1.0, lam) * (p1 + p3)
    if abs(discriminant) <= 1e-12 * max(1.0, kernel.max_abs ** 2):
        discriminant = 0.0

    if discriminant > 0:
        case = ContinuumCase.A if trace > 0 else ContinuumCase.B
    elif discriminant < 0:
        case = ContinuumCase.C
    else:
        case = ContinuumCase.D if trace > 0 else ContinuumCase.E
    return case, discriminant, trace


def degenerate_portrait(
    field: StarField,
    p: HomogeneousPoly,
    samples: int = 360
) -> ContinuumDescription:
    """
    Campo com Q = (x·p, y·p): todo ponto do infinito é equilíbrio e
    f(θ) = p(cosθ, sinθ). Nos arcos onde λ·p < 0 há uma curva de equilíbrios
    r(θ)^(n−1) = −λ/p(θ); fora deles só a origem.
    """
    n = field.degree
    lam = field.lam
    zeros = [theta for theta, _ in form_zero_angles(p)]

    arcs: List[EquilibriumArc] = []
    if zeros:
        bounds = list(zip(zeros, zeros[1:])) + [(zeros[-1], zeros[0] + TWO_PI)]
        for start, end in bounds:
            mid = 0.5 * (start + end)
            if lam * float(p(math.cos(mid), math.sin(mid))) < 0.0:
                arcs.append(EquilibriumArc(theta_start=start, theta_end=end))
    elif lam * float(p(1.0, 0.0)) < 0.0:
        arcs.append(EquilibriumArc(theta_start=0.0, theta_end=TWO_PI, closed=True))

    closed = bool(arcs) and arcs[0].closed
    grid = theta_grid(samples)
    values = p(np.cos(grid), np.sin(grid))
    cutoff = 1e-6 * max(1.0, p.max_abs)
    profile = tuple(
        (float(t), float((-lam / v) ** (1.0 / (n - 1))))
        for t, v in zip(grid, values)
        if lam * v < 0.0 and abs(v) > cutoff
    )

    case = discriminant = trace = None
    if n == 3:
        case, discriminant, trace = _continuum_case(p, lam)

    return ContinuumDescription(
        kernel=p,
        origin_only=not arcs,
        closed_curve=closed,
        arcs=tuple(arcs),
        kernel_zero_angles=tuple(zeros),
        finite_stability=(RadialStability.ATTRACTING if lam > 0 else RadialStability.REPELLING) if arcs else None,
        continuum_case=case,
        discriminant=discriminant,
        trace=trace,
        profile=profile,
    )


# ========================================
# MONTAGEM
# ========================================

def _degenerate(field: StarField) -> Optional[HomogeneousPoly]:
    kernel = degenerate_kernel(field)
    if kernel is not None:
        return kernel
    try:
        infinite_equilibria(field)
    except DegenerateContinuumError:
        return degenerate_kernel(field, tol=zero_threshold(field))
    return None


def assemble_portrait(field: StarField, strict: bool = False) -> GlobalPortrait:
    """
    Retrato global com exatamente um veredito.

    Args:
        field: campo estrela
        strict: f(θ0) numericamente nulo vira erro em vez de aviso

    Raises:
        InternalConsistencyError: cotas de contagem violadas
    """
    started = time.perf_counter()
    warnings: List[str] = []

    kernel = _degenerate(field)
    if kernel is not None:
        portrait = GlobalPortrait(
            verdict=Verdict.DEGENERATE_CONTINUUM,
            counts=check_counts(field, None, None),
            continuum=degenerate_portrait(field, kernel),
        )
        log_analysis(field.degree, portrait.verdict.value, None, None,
                     (time.perf_counter() - started) * 1000)
        return portrait

    infs = with_classification(field, infinite_equilibria(field))
    warnings.extend(infinite_count_warnings(field))
    fins = finite_equilibria(field, infs, strict=strict)
    for theta in near_zero_f_angles(field, infs):
        warnings.append(f"near-zero f at theta={theta:.12g}: radius left without a finite equilibrium")

    counts = check_counts(field, infs, fins)
    if counts.violations:
        raise InternalConsistencyError(
            "count bounds violated", violations=list(counts.violations)
        )

    cycle: Optional[CycleCertificate] = None
    polycycle: Optional[PolycycleCertificate] = None
    completed: List[HalfCone] = []
    attracting: Optional[bool] = None

    if not infs:
        tangencies = near_tangencies(field) if field.degree % 2 == 1 else []
        for theta, value in tangencies:
            warnings.append(f"near-zero g at theta={theta:.12g}: min |g| = {value:.3e}")
        if field.degree % 2 == 1:
            try:
                cycle = limit_cycle_test(field)
            except PreconditionViolatedError as exc:
                warnings.append(f"cycle criterion skipped: {exc.message}")
        if cycle is None and tangencies:
            verdict = _tangency_verdict(field, [theta for theta, _ in tangencies])
            attracting = verdict is Verdict.LIMIT_CYCLE and field.lam > 0
        elif cycle is not None and cycle.exists:
            verdict = Verdict.LIMIT_CYCLE
            attracting = field.lam > 0
        else:
            verdict = global_attractor_test(field, infs, cycle) or _global_verdict(field.lam)
            if cycle is not None and cycle.boundary:
                warnings.append(
                    f"non-hyperbolic boundary: lambda*I = {field.lam * cycle.integral:.3e} "
                    "within tolerance of zero"
                )
    else:
        completed = [classify_sectors(field, cone) for cone in cones(infs)]
        polycycle = polycycle_test(field, infs, fins)
        if polycycle is not None:
            verdict = Verdict(polycycle.kind)
            attracting = polycycle.attracting
        else:
            verdict = global_attractor_test(field, infs) or Verdict.INVARIANT_CONES

    if verdict in (Verdict.GLOBAL_ATTRACTOR, Verdict.GLOBAL_REPELLOR):
        attracting = verdict is Verdict.GLOBAL_ATTRACTOR

    portrait = GlobalPortrait(
        verdict=verdict,
        infinite=tuple(infs),
        finite=tuple(fins),
        cones=tuple(completed),
        counts=counts,
        cycle=cycle,
        polycycle=polycycle,
        attracting=attracting,
        warnings=tuple(warnings),
    )
    log_analysis(
        field.degree, verdict.value, len(infs), len(fins),
        (time.perf_counter() - started) * 1000, warnings=len(warnings),
    )
    return portrait
