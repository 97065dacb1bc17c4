"""
Funções derivadas de um campo estrela.

Formas binárias de grau n+1:
    𝓕 = xQ2 − yQ1   (angular)   g(θ) = 𝓕(cosθ, sinθ)
    𝓖 = xQ1 + yQ2   (radial)    f(θ) = 𝓖(cosθ, sinθ)
Cartas: F(u) = 𝓕(1, u) em U1 e G(u) = −𝓕(u, 1) em U2.
"""

import math
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import get_settings
from src.core.exceptions import IdenticallyZeroError
from src.domain.models import HomogeneousPoly, Poly1D, StarField, TWO_PI


def eval_homog(p: HomogeneousPoly, x: Any, y: Any) -> Any:
    """Valor de p em (x, y); aceita arrays"""
    return p.evaluate(x, y)


def angular_form(field: StarField) -> HomogeneousPoly:
    """𝓕 = xQ2 − yQ1, coeficientes e_k = d_k − c_(k−1)"""
    return field.q2.times_x() - field.q1.times_y()


def radial_form(field: StarField) -> HomogeneousPoly:
    """𝓖 = xQ1 + yQ2, coeficientes h_k = c_k + d_(k−1)"""
    return field.q1.times_x() + field.q2.times_y()


def coefficient_scale(field: StarField) -> float:
    return max(1.0, field.q1.max_abs, field.q2.max_abs)


def zero_threshold(field: StarField) -> float:
    """Limiar de coeficiente nulo relativo à escala da entrada"""
    return get_settings().zero_coeff_tol * coefficient_scale(field)


def dehomogenize_x(form: HomogeneousPoly) -> Poly1D:
    """form(1, u) em potências crescentes de u"""
    return Poly1D(coeffs=form.coeffs)


def dehomogenize_y(form: HomogeneousPoly) -> Poly1D:
    """form(u, 1) em potências crescentes de u"""
    return Poly1D(coeffs=tuple(reversed(form.coeffs)))


def _cleaned(poly: Poly1D, tol: float) -> Poly1D:
    values = tuple(0.0 if abs(c) < tol else c for c in poly.coeffs)
    return Poly1D(coeffs=values)


def build_F(field: StarField) -> Poly1D:
    """F(u) = Q2(1,u) − u Q1(1,u) = Σ d_k u^k − Σ c_(k−1) u^k"""
    return _cleaned(dehomogenize_x(angular_form(field)), zero_threshold(field))


def build_G(field: StarField) -> Poly1D:
    """G(u) = Q1(u,1) − u Q2(u,1) = −𝓕(u, 1)"""
    form = angular_form(field).scaled(-1.0)
    return _cleaned(dehomogenize_y(form), zero_threshold(field))


def f_theta(field: StarField, theta: Any) -> Any:
    """Coeficiente radial f(θ) = cosθ Q1 + sinθ Q2"""
    return radial_form(field).evaluate(np.cos(theta), np.sin(theta))


def g_theta(field: StarField, theta: Any) -> Any:
    """Coeficiente angular g(θ) = cosθ Q2 − sinθ Q1"""
    return angular_form(field).evaluate(np.cos(theta), np.sin(theta))


def form_derivative_theta(form: HomogeneousPoly, theta: Any) -> Any:
    """d/dθ form(cosθ, sinθ) = −sinθ ∂x + cosθ ∂y"""
    c, s = np.cos(theta), np.sin(theta)
    return -s * form.partial_x()(c, s) + c * form.partial_y()(c, s)


def g_prime(field: StarField, theta: Any) -> Any:
    return form_derivative_theta(angular_form(field), theta)


def f_prime(field: StarField, theta: Any) -> Any:
    return form_derivative_theta(radial_form(field), theta)


def normalize_angle(theta: float) -> float:
    value = math.fmod(theta, TWO_PI)
    if value < 0.0:
        value += TWO_PI
    if value >= TWO_PI:
        value = 0.0
    return value


def theta_grid(points: int) -> np.ndarray:
    return np.linspace(0.0, TWO_PI, points, endpoint=False)


def max_abs_on_circle(form: HomogeneousPoly, points: int = 1024) -> float:
    grid = theta_grid(points)
    return float(np.max(np.abs(form.evaluate(np.cos(grid), np.sin(grid)))))


def form_zero_angles(form: HomogeneousPoly, tol: Optional[float] = None) -> List[Tuple[float, int]]:
    """
    Zeros de uma forma homogênea no círculo unitário, com multiplicidade.

    Raízes u0 de form(1, u) dão θ = atan(u0) e θ + π; a direção vertical é
    tratada só pelo coeficiente de y^n (form(0, 1)), com multiplicidade igual
    à da raiz 0 de form(u, 1).

    Raises:
        IdenticallyZeroError: se a forma é nula
    """
    from src.domain.services.roots import real_roots, root_multiplicity

    scale = max(1.0, form.max_abs)
    threshold = get_settings().zero_coeff_tol * scale
    if form.is_zero(threshold):
        raise IdenticallyZeroError(scale=scale)

    chart_x = _cleaned(dehomogenize_x(form), threshold)
    angles: List[Tuple[float, int]] = []

    if not chart_x.is_zero(threshold) and chart_x.degree > 0:
        for root in real_roots(chart_x, tol):
            theta = math.atan(root.value)
            angles.append((normalize_angle(theta), root.multiplicity))
            angles.append((normalize_angle(theta + math.pi), root.multiplicity))

    if abs(form.coeffs[-1]) < threshold:
        chart_y = _cleaned(dehomogenize_y(form), threshold)
        multiplicity = root_multiplicity(chart_y, 0.0, tol)
        angles.append((0.5 * math.pi, multiplicity))
        angles.append((1.5 * math.pi, multiplicity))

    return sorted(angles)


def common_linear_factor(field: StarField) -> bool:
    """
    Q1 e Q2 têm fator linear comum ⟺ existe θ0 com f(θ0) = g(θ0) = 0.

    No caso degenerado (g ≡ 0) f = p(cosθ, sinθ), e basta p ter zero real.
    """
    from src.domain.services.roots import infinite_equilibria

    kernel = degenerate_kernel(field)
    if kernel is not None:
        return bool(form_zero_angles(kernel))

    tol = get_settings().f_zero_tol * (1.0 + max_abs_on_circle(radial_form(field)))
    return any(
        abs(f_theta(field, eq.theta)) <= tol for eq in infinite_equilibria(field)
    )


def degenerate_kernel(field: StarField, tol: Optional[float] = None) -> Optional[HomogeneousPoly]:
    """
    Se yQ1 = xQ2 coeficiente a coeficiente (c_n = 0 = d_0, d_k = c_(k−1)),
    retorna p de grau n−1 com Q1 = x·p e Q2 = y·p.
    """
    eps = get_settings().degeneracy_tol if tol is None else tol
    c, d = field.q1.coeffs, field.q2.coeffs
    n = field.degree
    if abs(c[n]) > eps or abs(d[0]) > eps:
        return None
    if any(abs(d[k] - c[k - 1]) > eps for k in range(1, n + 1)):
        return None
    return HomogeneousPoly(degree=n - 1, coeffs=tuple(c[:n]))


def field_from_angular_form(
    form: HomogeneousPoly,
    kernel: HomogeneousPoly,
    lam: float
) -> StarField:
    """
    Campo com xQ2 − yQ1 = form (grau n+1) e núcleo (x·h, y·h), h de grau n−1.

    Solução particular: Q1 = −a_(n+1) yⁿ, Q2 = Σ_(k≤n) a_k x^(n−k) y^k.
    """
    n = form.degree - 1
    if kernel.degree != n - 1:
        raise ValueError(f"kernel must have degree {n - 1}, got {kernel.degree}")
    a = form.coeffs
    particular_q1 = HomogeneousPoly.monomial(n, n, -a[n + 1])
    particular_q2 = HomogeneousPoly(degree=n, coeffs=tuple(a[: n + 1]))
    field = StarField(
        lam=lam,
        q1=particular_q1 + kernel.times_x(),
        q2=particular_q2 + kernel.times_y(),
    )
    produced = angular_form(field).coeffs
    if any(abs(p - q) > 1e-12 * max(1.0, abs(q)) for p, q in zip(produced, a)):
        raise ValueError("angular form identity failed")
    return field


def from_binary_form(a: Sequence[float], q1: float, q2: float, lam: float) -> StarField:
    """
    Campo de grau 2 com 𝓕 = a0x³ + a1x²y + a2xy² + a3y³:
    Q1 = q1x² + q2xy − a3y², Q2 = a0x² + (a1+q1)xy + (a2+q2)y².
    """
    if len(a) != 4:
        raise ValueError("a binary cubic needs 4 coefficients")
    return field_from_angular_form(
        HomogeneousPoly.of(*a), HomogeneousPoly.of(q1, q2), lam
    )
