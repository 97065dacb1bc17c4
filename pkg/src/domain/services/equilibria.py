"""
Equilíbrios finitos e classificação de estabilidade.

Cada equilíbrio finito fica num raio invariante θ0 (zero de g) com
r0^(n−1) = −λ/f(θ0); a Jacobiana em coordenadas polares é triangular, com
autovalor radial −λ(n−1) e angular g′(θ0)·r0^(n−1).
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.config import get_settings
from src.core.exceptions import NearZeroFError
from src.domain.models import (
    AngularStability,
    Chart,
    CountReport,
    FiniteEquilibrium,
    InfiniteEquilibrium,
    RadialStability,
    StabilityTag,
    StarField,
    TopoType,
    TWO_PI,
)
from src.domain.services.poly_core import (
    build_F,
    build_G,
    f_theta,
    g_prime,
    max_abs_on_circle,
    radial_form,
)
from src.domain.services.roots import chart_for_angle

_ANGLE_TOL = 1e-9


def f_tolerance(field: StarField) -> float:
    """|f(θ0)| abaixo disto é tratado como f = 0"""
    return get_settings().f_zero_tol * (1.0 + max_abs_on_circle(radial_form(field)))


def _same_angle(a: float, b: float) -> bool:
    diff = abs(a - b) % TWO_PI
    return min(diff, TWO_PI - diff) < _ANGLE_TOL


# ========================================
# ESTABILIDADE NO INFINITO
# ========================================

def _odd_order_sign(field: StarField, eq: InfiniteEquilibrium) -> float:
    """
    Sinal do primeiro termo não nulo de g perto de θ0 para multiplicidade
    ímpar m > 1, lido da m-ésima derivada do polinômio de carta.
    """
    m = eq.multiplicity
    n = field.degree
    if eq.chart in (Chart.U1, Chart.V1):
        u0 = math.tan(eq.theta)
        leading = build_F(field).derivative(m)(u0)
        return float(np.sign(math.cos(eq.theta) ** (n + 1)) * np.sign(leading))
    leading = build_G(field).derivative(m)(0.0)
    return float(-np.sign(math.sin(eq.theta) ** (n + 1)) * (-1) ** m * np.sign(leading))


def angular_behaviour(field: StarField, eq: InfiniteEquilibrium) -> Tuple[AngularStability, float]:
    """
    Estabilidade angular e g′(θ0).

    g′ < 0 (g passa de positivo a negativo) atrai no círculo do infinito.
    Multiplicidade par não muda o sinal de g: semi-estável.
    """
    slope = float(g_prime(field, eq.theta))
    if eq.multiplicity % 2 == 0:
        return AngularStability.SEMI_STABLE, 0.0
    if eq.multiplicity == 1:
        sign = np.sign(slope)
    else:
        sign = _odd_order_sign(field, eq)
        slope = 0.0
    if sign == 0:
        logger.warning(f"Angular sign undetermined at theta={eq.theta:.12g}")
        return AngularStability.SEMI_STABLE, slope
    stability = AngularStability.ATTRACTING if sign < 0 else AngularStability.REPELLING
    return stability, slope


def classify_infinite(field: StarField, eq: InfiniteEquilibrium) -> StabilityTag:
    """
    Estabilidade de um equilíbrio no infinito.

    Convenção radial: "atrator" significa atrair em direção ao equador do disco
    de Poincaré, o que ocorre se f(θ0) > 0, ou f(θ0) = 0 e λ > 0.
    """
    tol = f_tolerance(field)
    f0 = float(f_theta(field, eq.theta))
    if f0 > tol or (abs(f0) <= tol and field.lam > 0.0):
        radial = RadialStability.ATTRACTING
    else:
        radial = RadialStability.REPELLING
    angular, _ = angular_behaviour(field, eq)
    return StabilityTag(
        angular=angular,
        radial=radial,
        hyperbolic=eq.multiplicity == 1 and abs(f0) > tol,
    )


def with_classification(field: StarField, infs: Sequence[InfiniteEquilibrium]) -> List[InfiniteEquilibrium]:
    """Copia os equilíbrios preenchendo f(θ0) e a estabilidade"""
    return [
        eq.model_copy(update={
            "f_value": float(f_theta(field, eq.theta)),
            "stability": classify_infinite(field, eq),
        })
        for eq in infs
    ]


# ========================================
# EQUILÍBRIOS FINITOS
# ========================================

def _topo_type(multiplicity: int, angular: AngularStability, lam: float) -> TopoType:
    if multiplicity % 2 == 0 or angular is AngularStability.SEMI_STABLE:
        return TopoType.SADDLE_NODE
    angular_sign = -1.0 if angular is AngularStability.ATTRACTING else 1.0
    radial_sign = -math.copysign(1.0, lam)
    if angular_sign != radial_sign:
        return TopoType.SADDLE
    return TopoType.NODE_ATTRACTOR if radial_sign < 0 else TopoType.NODE_REPELLOR


def near_zero_f_angles(field: StarField, infs: Sequence[InfiniteEquilibrium]) -> List[float]:
    """Ângulos onde |f(θ0)| ≤ tol mas λ·f(θ0) < 0: caso de fronteira"""
    tol = f_tolerance(field)
    angles = []
    for eq in infs:
        f0 = float(f_theta(field, eq.theta))
        if abs(f0) <= tol and field.lam * f0 < 0.0:
            angles.append(eq.theta)
    return angles


def finite_equilibria(
    field: StarField,
    infs: Sequence[InfiniteEquilibrium],
    strict: bool = False
) -> List[FiniteEquilibrium]:
    """
    Equilíbrios finitos fora da origem, um por raio invariante no máximo.

    Args:
        field: campo não degenerado
        infs: zeros de g
        strict: se True, f(θ0) numericamente nulo com λf < 0 levanta erro

    Raises:
        NearZeroFError: apenas com strict=True
    """
    n = field.degree
    lam = field.lam
    tol = f_tolerance(field)
    result: List[FiniteEquilibrium] = []

    for eq in infs:
        f0 = float(f_theta(field, eq.theta))

        if abs(f0) <= tol:
            if lam * f0 < 0.0:
                if strict:
                    raise NearZeroFError(eq.theta, f0, tol)
                logger.warning(
                    f"f({eq.theta:.12g}) = {f0:.3e} is within tolerance; "
                    "no finite equilibrium claimed on this radius"
                )
            continue
        if lam * f0 >= -tol:
            continue

        ratio = -lam / f0
        r0 = ratio ** (1.0 / (n - 1))
        angular, slope = angular_behaviour(field, eq)
        result.append(FiniteEquilibrium(
            r0=r0,
            theta0=eq.theta,
            jac_eigen_radial=-lam * (n - 1),
            jac_eigen_angular=slope * ratio if eq.multiplicity == 1 else 0.0,
            topo_type=_topo_type(eq.multiplicity, angular, lam),
            multiplicity=eq.multiplicity,
            stability=StabilityTag(
                angular=angular,
                radial=RadialStability.ATTRACTING if lam > 0 else RadialStability.REPELLING,
                hyperbolic=eq.multiplicity == 1,
            ),
        ))

    logger.debug(f"Finite equilibria: {len(result)} of {len(infs)} invariant radii")
    return result


def classify_finite(field: StarField, eq: FiniteEquilibrium) -> Tuple[StabilityTag, TopoType]:
    """A estabilidade angular coincide com a do equilíbrio no infinito do mesmo raio"""
    at_infinity = InfiniteEquilibrium(
        theta=eq.theta0, chart=chart_for_angle(eq.theta0), multiplicity=eq.multiplicity
    )
    angular, _ = angular_behaviour(field, at_infinity)
    tag = StabilityTag(
        angular=angular,
        radial=RadialStability.ATTRACTING if field.lam > 0 else RadialStability.REPELLING,
        hyperbolic=eq.multiplicity == 1,
    )
    return tag, _topo_type(eq.multiplicity, angular, field.lam)


# ========================================
# CONTAGENS
# ========================================

def check_counts(
    field: StarField,
    infs: Optional[Sequence[InfiniteEquilibrium]],
    fins: Optional[Sequence[FiniteEquilibrium]]
) -> CountReport:
    """
    Cotas de contagem. None em infs/fins indica infinitos equilíbrios
    (caso degenerado), onde nenhuma cota se aplica.
    """
    n = field.degree
    if infs is None or fins is None:
        return CountReport(
            degree=n, infinite_count=None, finite_count=None,
            infinite_bound_ok=True, finite_bound_ok=True,
        )

    n_inf, n_fin = len(infs), len(fins)
    infinite_bound_ok = n_inf <= 2 * (n + 1)
    even_minimum = n_inf >= 2 if n % 2 == 0 else None
    finite_bound_ok = n_fin <= (2 * (n + 1) if n % 2 == 1 else n + 1)

    mod4: Optional[bool] = None
    if n % 2 == 1 and all(eq.multiplicity % 2 == 1 for eq in infs):
        mod4 = n_inf % 4 == 0

    antipodal_closure = all(
        any(_same_angle(other.theta, eq.theta + math.pi) and other.multiplicity == eq.multiplicity
            for other in infs)
        for eq in infs
    )

    def carries(theta: float) -> bool:
        return any(_same_angle(fe.theta0, theta) for fe in fins)

    if n % 2 == 0:
        antipodal_finite = not any(carries(eq.theta) and carries(eq.theta + math.pi) for eq in infs)
    else:
        antipodal_finite = all(carries(eq.theta) == carries(eq.theta + math.pi) for eq in infs)

    radius_rule = all(
        any(_same_angle(fe.theta0, eq.theta) for eq in infs)
        and sum(1 for other in fins if _same_angle(other.theta0, fe.theta0)) == 1
        for fe in fins
    )

    flags = {
        "infinite_bound": infinite_bound_ok,
        "even_degree_minimum": even_minimum,
        "finite_bound": finite_bound_ok,
        "mod4": mod4,
        "antipodal_closure": antipodal_closure,
        "antipodal_finite_rule": antipodal_finite,
        "radius_rule": radius_rule,
    }
    violations = tuple(name for name, ok in flags.items() if ok is False)
    if violations:
        logger.error(f"Count bounds violated for n={n}: {', '.join(violations)}")

    return CountReport(
        degree=n,
        infinite_count=n_inf,
        finite_count=n_fin,
        infinite_bound_ok=infinite_bound_ok,
        even_degree_minimum_ok=even_minimum,
        finite_bound_ok=finite_bound_ok,
        mod4_ok=mod4,
        antipodal_closure_ok=antipodal_closure,
        antipodal_finite_rule_ok=antipodal_finite,
        radius_rule_ok=radius_rule,
        violations=violations,
    )


# ========================================
# VERIFICAÇÃO CARTESIANA
# ========================================

def equilibrium_residual(field: StarField, eq: FiniteEquilibrium) -> float:
    """‖(λx + Q1, λy + Q2)‖ na posição cartesiana"""
    u, v = field.vector(eq.x, eq.y)
    return float(math.hypot(u, v))


def refine_cartesian(
    field: StarField,
    eq: FiniteEquilibrium,
    max_iter: int = 50
) -> Tuple[float, float]:
    """
    Newton no sistema cartesiano a partir do equilíbrio reportado, com a
    Jacobiana analítica. Jacobiana singular (sela-nó) usa mínimos quadrados.
    """
    tol = get_settings().residual_tol
    point = np.array([eq.x, eq.y], dtype=float)
    for _ in range(max_iter):
        value = np.array(field.vector(point[0], point[1]), dtype=float)
        if np.linalg.norm(value) < tol * 1e-3:
            break
        step, *_ = np.linalg.lstsq(field.jacobian(point[0], point[1]), value, rcond=None)
        point = point - step
        if np.linalg.norm(step) < 1e-15 * (1.0 + np.linalg.norm(point)):
            break
    return float(point[0]), float(point[1])
