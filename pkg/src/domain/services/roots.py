"""
Isolamento de raízes reais (com multiplicidade) dos polinômios de carta e
conversão em ângulos de equilíbrios no infinito.
"""

import math
from typing import List, Optional, Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly
from loguru import logger
from scipy.optimize import brentq

from src.core.config import get_settings
from src.core.exceptions import DegenerateContinuumError, IdenticallyZeroError
from src.domain.models import Chart, InfiniteEquilibrium, Poly1D, RealRoot, StarField
from src.domain.services.poly_core import (
    angular_form,
    build_F,
    degenerate_kernel,
    form_zero_angles,
)

_BRENT_RTOL = 4.0 * np.finfo(float).eps


# ========================================
# SEQUÊNCIA DE STURM
# ========================================

def sturm_sequence(coeffs: np.ndarray, tol: float = 1e-10) -> List[np.ndarray]:
    """p, p', −rem(p, p'), ... com restos desprezíveis cortados"""
    scale = float(np.max(np.abs(coeffs))) or 1.0
    seq = [np.asarray(coeffs, dtype=float)]
    if len(coeffs) > 1:
        seq.append(npoly.polyder(seq[0]))
    while len(seq[-1]) > 1:
        _, rem = npoly.polydiv(seq[-2], seq[-1])
        rem = np.where(np.abs(rem) < tol * scale, 0.0, rem)
        rem = npoly.polytrim(rem)
        if len(rem) == 1 and rem[0] == 0.0:
            break
        seq.append(-rem)
    return seq


def sign_variations(values: Sequence[float]) -> int:
    signs = [np.sign(v) for v in values if v != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly1D, lo: float, hi: float) -> int:
    """Número de raízes reais distintas em (lo, hi]"""
    seq = sturm_sequence(p.as_array())
    at_lo = [npoly.polyval(lo, s) for s in seq]
    at_hi = [npoly.polyval(hi, s) for s in seq]
    return sign_variations(at_lo) - sign_variations(at_hi)


# ========================================
# ISOLAMENTO
# ========================================

def cauchy_bound(coeffs: np.ndarray) -> float:
    return 1.0 + float(np.max(np.abs(coeffs[:-1])) / abs(coeffs[-1]))


def _vanishing_bound(deg: int, j: int, u: float, scale: float, tol: float) -> float:
    return tol * math.factorial(j) * max(1.0, abs(u)) ** (deg - j) * scale


def _isolate(coeffs: np.ndarray, lo: float, hi: float, tol: float, xtol: float) -> List[float]:
    """
    Raízes de p em (lo, hi) pela cascata de derivadas: entre pontos críticos
    consecutivos p é monótono, logo há no máximo uma raiz simples por
    intervalo; raízes múltiplas são pontos críticos onde p se anula.
    """
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        root = -coeffs[0] / coeffs[1]
        return [float(root)] if lo < root < hi else []

    scale = float(np.max(np.abs(coeffs)))
    critical = _isolate(npoly.polyder(coeffs), lo, hi, tol, xtol)
    knots = [lo, *critical, hi]
    values = [float(npoly.polyval(k, coeffs)) for k in knots]

    roots: List[float] = []
    for i, point in enumerate(critical, start=1):
        if abs(values[i]) < _vanishing_bound(deg, 0, point, scale, tol):
            roots.append(point)
            # raiz múltipla: não abre colchete com o ruído de arredondamento
            values[i] = 0.0

    for (a, fa), (b, fb) in zip(zip(knots, values), zip(knots[1:], values[1:])):
        if fa * fb < 0.0:
            roots.append(
                float(brentq(npoly.polyval, a, b, args=(coeffs,), xtol=xtol, rtol=_BRENT_RTOL))
            )
    return sorted(roots)


def _merge(values: List[float], merge_tol: float) -> List[float]:
    merged: List[float] = []
    for value in sorted(values):
        if merged and abs(value - merged[-1]) < merge_tol * (1.0 + abs(value)):
            continue
        merged.append(value)
    return merged


def root_multiplicity(p: Poly1D, u0: float, tol: Optional[float] = None) -> int:
    """Maior m com |p^(j)(u0)| abaixo da tolerância escalada para j < m (mínimo 1)"""
    tol = get_settings().root_multiplicity_tol if tol is None else tol
    coeffs = p.as_array()
    deg = p.degree
    scale = p.max_abs
    m = 0
    for j in range(deg + 1):
        derivative = npoly.polyder(coeffs, j) if j else coeffs
        value = float(npoly.polyval(u0, derivative))
        if abs(value) < _vanishing_bound(deg, j, u0, scale, tol):
            m += 1
        else:
            break
    return max(1, min(m, deg))


def real_roots(p: Poly1D, tol: Optional[float] = None) -> List[RealRoot]:
    """
    Todas as raízes reais de p, cada uma uma única vez, com multiplicidade.

    Args:
        p: polinômio não nulo
        tol: tolerância de multiplicidade (padrão: settings.root_multiplicity_tol)

    Raises:
        IdenticallyZeroError: se p ≡ 0
    """
    settings = get_settings()
    tol = settings.root_multiplicity_tol if tol is None else tol

    scale = p.max_abs
    if scale == 0.0:
        raise IdenticallyZeroError(scale=0.0)

    coeffs = np.trim_zeros(p.as_array() / scale, trim="b")
    if len(coeffs) <= 1:
        return []

    normalized = Poly1D(coeffs=tuple(coeffs))
    bound = cauchy_bound(coeffs) + 1.0
    candidates = _merge(
        _isolate(coeffs, -bound, bound, tol, settings.root_xtol), settings.root_merge_tol
    )

    roots = [
        RealRoot(
            value=u,
            multiplicity=root_multiplicity(normalized, u, tol),
            interval_width=settings.root_xtol + _BRENT_RTOL * abs(u),
        )
        for u in candidates
    ]

    total = sum(r.multiplicity for r in roots)
    if total > normalized.degree:
        logger.warning(
            f"Multiplicities sum to {total} above degree {normalized.degree}; "
            "roots are nearly clustered"
        )
    mismatch = _sturm_mismatch(normalized, bound, len(roots))
    if mismatch is not None:
        logger.warning(mismatch)
    return roots


def _sturm_mismatch(p: Poly1D, bound: float, isolated: int) -> Optional[str]:
    distinct = sturm_count(p, -bound, bound)
    if distinct == isolated:
        return None
    return (
        f"Sturm count {distinct} differs from isolated roots {isolated} "
        f"(degree {p.degree}): a root of odd multiplicity may be missing"
    )


def root_count_mismatch(p: Poly1D, tol: Optional[float] = None) -> Optional[str]:
    """Mensagem quando a contagem de Sturm discorda das raízes isoladas de p"""
    scale = p.max_abs
    coeffs = np.trim_zeros(p.as_array() / scale, trim="b") if scale else np.zeros(1)
    if len(coeffs) <= 1:
        return None
    normalized = Poly1D(coeffs=tuple(coeffs))
    return _sturm_mismatch(normalized, cauchy_bound(coeffs) + 1.0, len(real_roots(p, tol)))


# ========================================
# EQUILÍBRIOS NO INFINITO
# ========================================

def chart_for_angle(theta: float) -> Chart:
    if theta == 0.5 * math.pi:
        return Chart.U2
    if theta == 1.5 * math.pi:
        return Chart.V2
    return Chart.U1 if math.cos(theta) > 0.0 else Chart.V1


def infinite_count_warnings(field: StarField) -> List[str]:
    """Avisos de contagem das raízes de F, o polinômio da carta U1"""
    F = build_F(field)
    if F.is_zero() or F.degree == 0:
        return []
    mismatch = root_count_mismatch(F)
    return [] if mismatch is None else [mismatch]


def infinite_equilibria(field: StarField) -> List[InfiniteEquilibrium]:
    """
    Zeros de g(θ) em [0, 2π), em ordem crescente.

    Raises:
        DegenerateContinuumError: se F ≡ 0 (yQ1 = xQ2)
    """
    if degenerate_kernel(field) is not None:
        raise DegenerateContinuumError(field.degree)
    try:
        zeros = form_zero_angles(angular_form(field))
    except IdenticallyZeroError as exc:
        raise DegenerateContinuumError(field.degree) from exc

    equilibria = [
        InfiniteEquilibrium(theta=theta, chart=chart_for_angle(theta), multiplicity=m)
        for theta, m in zeros
    ]
    logger.debug(f"Infinite equilibria: {[round(e.theta, 6) for e in equilibria]}")
    return equilibria
