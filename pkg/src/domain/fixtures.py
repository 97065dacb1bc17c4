"""
Catálogo de campos nomeados com comportamento conhecido em forma fechada.
"""

from typing import Callable, Dict

from src.domain.models import HomogeneousPoly, StarField


def heteroclinic(lam: float = 1.0) -> StarField:
    """Q = (−xy², x³ − y³): g = cos⁴θ, selas-nó finitas em (0, ±1)"""
    return StarField.build(lam, (0.0, 0.0, -1.0, 0.0), (1.0, 0.0, 0.0, -1.0))


def eps_field(lam: float = 1.0, eps: float = 1.0) -> StarField:
    """Q = (−εx − y, −εy + x)(x² + y²): ṙ = λr − εr³, ciclo em r = √(λ/ε)"""
    return StarField.build(lam, (-eps, -1.0, -eps, -1.0), (1.0, -eps, 1.0, -eps))


def quartic_rotation(lam: float = 1.0) -> StarField:
    """Q = (−y³, x³): integral do critério nula"""
    return StarField.build(lam, (0.0, 0.0, 0.0, -1.0), (1.0, 0.0, 0.0, 0.0))


def quadratic(lam: float = 1.0) -> StarField:
    """Q = (x², y²)"""
    return StarField.build(lam, (1.0, 0.0, 0.0), (0.0, 0.0, 1.0))


def degenerate(p1: float, p2: float, p3: float, lam: float = 1.0) -> StarField:
    """Q = (x·p, y·p) com p = p1 x² + p2 xy + p3 y²"""
    p = HomogeneousPoly.of(p1, p2, p3)
    return StarField(lam=lam, q1=p.times_x(), q2=p.times_y())


FIXTURES: Dict[str, Callable[[], StarField]] = {
    "heteroclinic": heteroclinic,
    "eps-field": eps_field,
    "eps-field-lambda4": lambda: eps_field(lam=4.0),
    "quartic-rotation": quartic_rotation,
    "quadratic": quadratic,
    "degenerate-circle": lambda: degenerate(-1.0, 0.0, -1.0),
    "degenerate-origin": lambda: degenerate(1.0, 0.0, 1.0),
}
