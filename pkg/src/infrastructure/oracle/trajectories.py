"""
Trajetórias no plano cartesiano e nas cartas da compactificação de Poincaré.

Carta U1 (x = 1/v, y = u/v), com o tempo reescalado por v^(n−1):
    u' = F(u) = Q2(1,u) − u·Q1(1,u)
    v' = −λ vⁿ − v·Q1(1,u)
Carta U2 (x = u/v, y = 1/v):
    u' = G(u) = Q1(u,1) − u·Q2(u,1)
    v' = −λ vⁿ − v·Q2(u,1)
V1 e V2 usam as mesmas expressões multiplicadas por (−1)^(n−1).
"""

import math
import time
from typing import Callable, Optional, Tuple

import numpy as np

from src.core.config import get_settings
from src.core.logging import log_oracle_run
from src.domain.models import Chart, StarField, Trajectory
from src.infrastructure.oracle.integrator import DormandPrince54, IntegrationResult, Rhs, StepRecord

_MAX_SAMPLES = 4000


def cartesian_rhs(field: StarField) -> Rhs:
    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        u, v = field.vector(y[0], y[1])
        return np.array([u, v])
    return rhs


def chart_rhs(field: StarField, chart: Chart) -> Rhs:
    n = field.degree
    lam = field.lam
    sign = (-1.0) ** (n - 1) if chart in (Chart.V1, Chart.V2) else 1.0
    q1, q2 = field.q1, field.q2

    if chart in (Chart.U1, Chart.V1):
        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            u, v = y
            a, b = q1(1.0, u), q2(1.0, u)
            return sign * np.array([b - u * a, -lam * v ** n - v * a])
    else:
        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            u, v = y
            a, b = q1(u, 1.0), q2(u, 1.0)
            return sign * np.array([a - u * b, -lam * v ** n - v * b])
    return rhs


def to_chart(x: float, y: float) -> Tuple[Chart, float, float]:
    """Carta da coordenada dominante e as coordenadas (u, v) do ponto"""
    if abs(x) >= abs(y):
        chart = Chart.U1 if x > 0 else Chart.V1
        return chart, y / x, (1.0 if x > 0 else -1.0) / x
    chart = Chart.U2 if y > 0 else Chart.V2
    return chart, x / y, (1.0 if y > 0 else -1.0) / y


def chart_direction(chart: Chart, u: float) -> float:
    """Ângulo polar da direção representada por u na carta"""
    if chart is Chart.U1:
        return math.atan2(u, 1.0)
    if chart is Chart.V1:
        return math.atan2(-u, -1.0)
    if chart is Chart.U2:
        return math.atan2(1.0, u)
    return math.atan2(-1.0, -u)


def make_integrator(rhs: Rhs, escape_radius: Optional[float] = None, max_step: float = math.inf) -> DormandPrince54:
    settings = get_settings()
    return DormandPrince54(
        rhs,
        rtol=settings.ode_rtol,
        atol=settings.ode_atol,
        min_step=settings.ode_min_step,
        max_steps=settings.ode_max_steps,
        escape_radius=escape_radius,
        max_step=max_step,
    )


def _as_trajectory(result: IntegrationResult, coordinates: str) -> Trajectory:
    stride = max(1, len(result.times) // _MAX_SAMPLES)
    times = result.times[::stride]
    states = result.states[::stride]
    if times[-1] != result.t:
        times = times + [result.t]
        states = states + [result.y]
    return Trajectory(
        coordinates=coordinates,
        times=tuple(float(t) for t in times),
        xs=tuple(float(s[0]) for s in states),
        ys=tuple(float(s[1]) for s in states),
        stats=result.stats,
        escaped=result.escaped,
    )


def integrate_cartesian(
    field: StarField,
    x0: float,
    y0: float,
    t_end: float,
    escape_radius: Optional[float] = None,
    on_step: Optional[Callable[[StepRecord], bool]] = None
) -> Trajectory:
    """
    Integra o campo no plano a partir de (x0, y0).

    Raises:
        StepUnderflowError: passo abaixo do mínimo (explosão em tempo finito)
    """
    radius = get_settings().escape_radius if escape_radius is None else escape_radius
    started = time.perf_counter()
    integrator = make_integrator(cartesian_rhs(field), escape_radius=radius)
    try:
        result = integrator.integrate(0.0, np.array([x0, y0]), t_end, on_step=on_step)
    except Exception as exc:
        log_oracle_run("cartesian", 0, 0, False, (time.perf_counter() - started) * 1000, error=str(exc))
        raise
    log_oracle_run(
        "cartesian", result.stats.accepted, result.stats.rejected, result.escaped,
        (time.perf_counter() - started) * 1000,
    )
    return _as_trajectory(result, "cartesian")


def integrate_chart(
    field: StarField,
    chart: Chart,
    u0: float,
    v0: float,
    t_end: float
) -> Trajectory:
    """Integra o sistema compactificado numa carta; v = 0 é o círculo do infinito"""
    started = time.perf_counter()
    integrator = make_integrator(chart_rhs(field, chart), escape_radius=get_settings().escape_radius)
    result = integrator.integrate(0.0, np.array([u0, v0]), t_end)
    log_oracle_run(
        f"chart-{chart.value}", result.stats.accepted, result.stats.rejected, result.escaped,
        (time.perf_counter() - started) * 1000,
    )
    return _as_trajectory(result, chart.value)
