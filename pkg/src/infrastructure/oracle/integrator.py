"""
Integrador Dormand–Prince 5(4) com passo adaptativo.

Par embutido de ordem 5 (propagada) e 4 (estimativa de erro), com FSAL
e controle de passo PI. O erro é a norma RMS ponderada por
atol + rtol·max(|y|, |y_novo|); o passo é aceito quando essa norma é ≤ 1.
"""

import math
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from src.core.exceptions import OracleError, StepUnderflowError
from src.domain.models import StepStats

Rhs = Callable[[float, np.ndarray], np.ndarray]


# ========================================
# TABELA DE BUTCHER
# ========================================

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])

A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]

B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B_HAT = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B - B_HAT

# controle PI
SAFETY = 0.9
ALPHA = 0.7 / 5.0
BETA = 0.4 / 5.0
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


class StepRecord(NamedTuple):
    """Passo aceito: extremos e derivadas (para interpolação de Hermite)"""
    t0: float
    y0: np.ndarray
    f0: np.ndarray
    t1: float
    y1: np.ndarray
    f1: np.ndarray


class IntegrationResult(NamedTuple):
    times: List[float]
    states: List[np.ndarray]
    t: float
    y: np.ndarray
    stats: StepStats
    escaped: bool
    stopped: bool


def hermite(record: StepRecord, t: float) -> np.ndarray:
    """Interpolação cúbica de Hermite dentro de um passo aceito"""
    h = record.t1 - record.t0
    s = (t - record.t0) / h
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    return h00 * record.y0 + h10 * h * record.f0 + h01 * record.y1 + h11 * h * record.f1


class DormandPrince54:
    """
    Integrador adaptativo para y' = rhs(t, y).

    Args:
        rhs: lado direito
        rtol, atol: tolerâncias relativa e absoluta
        min_step: passo mínimo (relativo a max(1, |t|))
        max_steps: limite de passos aceitos + rejeitados
        escape_radius: interrompe quando ‖y‖ atinge este valor
        max_step: passo máximo
    """

    def __init__(
        self,
        rhs: Rhs,
        rtol: float,
        atol: float,
        min_step: float,
        max_steps: int,
        escape_radius: Optional[float] = None,
        max_step: float = math.inf
    ):
        self.rhs = rhs
        self.rtol = rtol
        self.atol = atol
        self.min_step = min_step
        self.max_steps = max_steps
        self.escape_radius = escape_radius
        self.max_step = max_step

    def step(self, t: float, y: np.ndarray, h: float, k1: np.ndarray):
        """Um passo fixo: retorna (y_novo, erro_estimado, f(y_novo))"""
        stages = [k1]
        for i in range(1, 7):
            increment = sum(a * k for a, k in zip(A[i], stages))
            stages.append(np.asarray(self.rhs(t + C[i] * h, y + h * increment), dtype=float))
        y_new = y + h * sum(b * k for b, k in zip(B[:6], stages[:6]))
        error = h * sum(e * k for e, k in zip(E, stages))
        return y_new, error, stages[6]

    def _error_norm(self, error: np.ndarray, y: np.ndarray, y_new: np.ndarray) -> float:
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.sqrt(np.mean((error / scale) ** 2)))

    def _initial_step(self, t: float, y: np.ndarray, f0: np.ndarray, span: float) -> float:
        scale = self.atol + self.rtol * np.abs(y)
        d0 = float(np.sqrt(np.mean((y / scale) ** 2)))
        d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        return min(h, abs(span), self.max_step)

    def integrate(
        self,
        t0: float,
        y0: np.ndarray,
        t_end: float,
        on_step: Optional[Callable[[StepRecord], bool]] = None,
        record: bool = True
    ) -> IntegrationResult:
        """
        Integra de t0 até t_end (t_end > t0).

        on_step recebe cada passo aceito; retornar True encerra a integração.

        Raises:
            StepUnderflowError: passo exigido abaixo do mínimo
            OracleError: orçamento de passos esgotado
        """
        t = float(t0)
        y = np.asarray(y0, dtype=float).copy()
        f = np.asarray(self.rhs(t, y), dtype=float)
        h = self._initial_step(t, y, f, t_end - t0)

        times, states = [t], [y.copy()]
        accepted = rejected = 0
        min_h, max_h, worst = math.inf, 0.0, 0.0
        previous_error = 1.0
        escaped = stopped = False

        while t < t_end:
            if accepted + rejected >= self.max_steps:
                raise OracleError("step budget exhausted", t=t, steps=accepted + rejected)
            remaining = t_end - t
            if remaining < self.min_step * max(1.0, abs(t)):
                break
            h = min(h, remaining, self.max_step)
            if h < self.min_step * max(1.0, abs(t)):
                raise StepUnderflowError(t, h, float(np.linalg.norm(y)))

            with np.errstate(over="ignore", invalid="ignore"):
                y_new, error, f_new = self.step(t, y, h, f)
            err = self._error_norm(error, y, y_new) if np.all(np.isfinite(y_new)) else math.inf

            if err <= 1.0:
                record_step = StepRecord(t, y, f, t + h, y_new, f_new)
                t, y, f = t + h, y_new, f_new
                accepted += 1
                min_h, max_h = min(min_h, h), max(max_h, h)
                worst = max(worst, err)
                if record:
                    times.append(t)
                    states.append(y.copy())

                if self.escape_radius is not None and np.linalg.norm(y) >= self.escape_radius:
                    escaped = True
                    break
                if on_step is not None and on_step(record_step):
                    stopped = True
                    break

                factor = SAFETY * max(err, 1e-10) ** (-ALPHA) * previous_error ** BETA
                h *= min(MAX_FACTOR, max(MIN_FACTOR, factor))
                previous_error = max(err, 1e-4)
            else:
                rejected += 1
                factor = SAFETY * err ** (-1.0 / 5.0) if math.isfinite(err) else MIN_FACTOR
                h *= max(MIN_FACTOR, min(1.0, factor))

        if not record:
            times.append(t)
            states.append(y.copy())

        stats = StepStats(
            accepted=accepted,
            rejected=rejected,
            min_step=0.0 if math.isinf(min_h) else min_h,
            max_step=max_h,
            max_error_ratio=worst,
        )
        return IntegrationResult(times, states, t, y, stats, escaped, stopped)
