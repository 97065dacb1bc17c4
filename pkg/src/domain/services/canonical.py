"""
Formas canônicas de grau 2 (i)–(v) e grau 3 (I)–(X).

Os campos são construídos a partir dos lados direitos impressos; as
expectativas (contagem, ângulos e classes no infinito) vêm da tabela de
formas e das derivações de grau 2. A análise do motor é sempre a
autoridade: divergências são reportadas, nunca corrigidas.
"""

import itertools
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from src.core.exceptions import DegenerateContinuumError, ParamConstraintViolatedError
from src.core.logging import log_consistency
from src.domain.models import (
    CanonicalSpec,
    CasePrediction,
    CheckStatus,
    ConsistencyReport,
    ExpectedInfinity,
    FormId,
    HomogeneousPoly,
    InfiniteEquilibrium,
    PropertyCheck,
    RadialExpectation,
    StarField,
)
from src.domain.services.equilibria import f_tolerance
from src.domain.services.poly_core import angular_form, f_theta, from_binary_form
from src.domain.services.roots import infinite_equilibria

PI = math.pi
SQRT3 = math.sqrt(3.0)
_ANGLE_TOL = 1e-7

_DEGREE2_FREE = ("q1", "q2")
_DEGREE3_FREE = ("p1", "p2", "p3")

# 𝓕 declarado para cada forma de grau 2 (a0, a1, a2, a3)
_STATED_DEGREE2: Dict[FormId, Tuple[float, float, float, float]] = {
    FormId.F_I: (1.0, 0.0, 0.0, 1.0),
    FormId.F_II: (1.0, 0.0, -3.0, 0.0),
    FormId.F_III: (0.0, 3.0, 0.0, 0.0),
    FormId.F_IV: (1.0, 0.0, 0.0, 0.0),
    FormId.F_V: (0.0, 0.0, 0.0, 0.0),
}


# ========================================
# PARÂMETROS
# ========================================

def _unit(spec: CanonicalSpec, name: str) -> float:
    value = spec.param(name, 1.0)
    if value not in (-1.0, 1.0):
        raise ParamConstraintViolatedError(spec.form_id.value, f"{name} must be +1 or -1, got {value}")
    return value


def _mu(spec: CanonicalSpec) -> float:
    defaults = {FormId.I: -1.0, FormId.II: 0.0, FormId.III: 0.0}
    return spec.param("mu", defaults.get(spec.form_id, 0.0))


def validate_params(spec: CanonicalSpec) -> None:
    """
    Raises:
        ParamConstraintViolatedError: parâmetro fora da região da forma
    """
    form = spec.form_id
    for name, value in spec.params.items():
        if not math.isfinite(value):
            raise ParamConstraintViolatedError(form.value, f"{name} must be finite")

    if form in (FormId.I, FormId.III, FormId.VIII):
        _unit(spec, "beta")
    if form in (FormId.II, FormId.IV, FormId.V, FormId.VI, FormId.VII, FormId.IX):
        _unit(spec, "alpha")

    mu = _mu(spec)
    if form is FormId.I and not mu < -1.0 / 3.0:
        raise ParamConstraintViolatedError(form.value, f"mu must be < -1/3, got {mu}")
    if form is FormId.II and (not mu > -1.0 / 3.0 or math.isclose(mu, 1.0 / 3.0)):
        raise ParamConstraintViolatedError(form.value, f"mu must be > -1/3 and != 1/3, got {mu}")
    if form is FormId.F_V and spec.param("q1") == 0.0 and spec.param("q2") == 0.0:
        raise ParamConstraintViolatedError(form.value, "q1 = q2 = 0 gives a zero nonlinearity")


# ========================================
# INSTANCIAÇÃO
# ========================================

def _degree2_coeffs(spec: CanonicalSpec) -> Tuple[List[float], List[float]]:
    q1, q2 = spec.param("q1"), spec.param("q2")
    form = spec.form_id
    if form is FormId.F_I:
        return [-1.0, q1, q2], [q1, q2, 1.0]
    if form is FormId.F_II:
        return [-1.0, q1, q2], [q1, q2 - 3.0, 0.0]
    if form is FormId.F_III:
        return [0.0, q1 - 3.0, q2], [q1, q2, 0.0]
    if form is FormId.F_IV:
        return [-1.0, q1, q2], [q1, q2, 0.0]
    return [0.0, q1, q2], [q1, q2, 0.0]


def _degree3_coeffs(spec: CanonicalSpec) -> Tuple[List[float], List[float]]:
    p1, p2, p3 = (spec.param(name) for name in _DEGREE3_FREE)
    form = spec.form_id
    alpha = spec.param("alpha", 1.0)
    beta = spec.param("beta", 1.0)
    mu = _mu(spec)

    if form is FormId.I:
        q1, q2 = [p1, p2 - 3 * mu, p3, -1.0], [1.0, p1, p2 + 3 * mu, p3]
        return [beta * c for c in q1], [beta * c for c in q2]
    if form is FormId.II:
        return [p1, p2 - 3 * alpha * mu, p3, -alpha], [alpha, p1, p2 + 3 * alpha * mu, p3]
    if form is FormId.III:
        q1, q2 = [p1, p2 - 3 * mu, p3, 1.0], [1.0, p1, p2 + 3 * mu, p3]
        return [beta * c for c in q1], [beta * c for c in q2]
    if form is FormId.IV:
        return [p1, p2 - 3 * alpha, p3, -alpha], [0.0, p1, p2 + 3 * alpha, p3]
    if form is FormId.V:
        # termo impresso "p1 x²y" lido como p1 x² dentro do fator y(·)
        return [p1, p2 - 3 * alpha, p3, alpha], [0.0, p1, p2 + 3 * alpha, p3]
    if form is FormId.VI:
        return [p1, p2 - alpha, p3, -alpha], [alpha, p1, p2 + alpha, p3]
    if form is FormId.VII:
        return [p1, p2 - 3 * alpha, p3, 0.0], [0.0, p1, p2 + 3 * alpha, p3]
    if form is FormId.VIII:
        q1, q2 = [p1 - 1.0, p2, p3, 0.0], [0.0, p1 + 3.0, p2, p3]
        return [beta * c for c in q1], [beta * c for c in q2]
    if form is FormId.IX:
        return [p1, p2, p3, 0.0], [alpha, p1, p2, p3]
    return [p1, p2, p3, 0.0], [0.0, p1, p2, p3]


def instantiate(spec: CanonicalSpec) -> StarField:
    """
    Campo construído exatamente a partir do lado direito impresso da forma.

    Raises:
        ParamConstraintViolatedError: parâmetros inválidos, ou Q ≡ 0
    """
    validate_params(spec)
    builder = _degree2_coeffs if spec.degree == 2 else _degree3_coeffs
    q1, q2 = builder(spec)
    if all(c == 0.0 for c in q1 + q2):
        raise ParamConstraintViolatedError(spec.form_id.value, "parameters give Q identically zero")
    return StarField.build(spec.lam, tuple(q1), tuple(q2))


def stated_angular_form(spec: CanonicalSpec) -> HomogeneousPoly:
    """𝓕 declarado para a forma (independe de p1, p2, p3 e q1, q2)"""
    form = spec.form_id
    if spec.degree == 2:
        return HomogeneousPoly.of(*_STATED_DEGREE2[form])

    alpha, beta, mu = spec.param("alpha", 1.0), spec.param("beta", 1.0), _mu(spec)
    table = {
        FormId.I: [beta, 0, 6 * beta * mu, 0, beta],
        FormId.II: [alpha, 0, 6 * alpha * mu, 0, alpha],
        FormId.III: [beta, 0, 6 * beta * mu, 0, -beta],
        FormId.IV: [0, 0, 6 * alpha, 0, alpha],
        FormId.V: [0, 0, 6 * alpha, 0, -alpha],
        FormId.VI: [alpha, 0, 2 * alpha, 0, alpha],
        FormId.VII: [0, 0, 6 * alpha, 0, 0],
        FormId.VIII: [0, 4 * beta, 0, 0, 0],
        FormId.IX: [alpha, 0, 0, 0, 0],
        FormId.X: [0, 0, 0, 0, 0],
    }
    return HomogeneousPoly.of(*table[form])


# ========================================
# EXPECTATIVAS
# ========================================

_TABLE_DEGREE3: Dict[FormId, ExpectedInfinity] = {
    FormId.I: ExpectedInfinity(count=8, hyperbolic=8, summary="8 hyperbolic"),
    FormId.II: ExpectedInfinity(count=0, summary="none"),
    FormId.III: ExpectedInfinity(count=4, hyperbolic=4, summary="4 hyperbolic"),
    FormId.IV: ExpectedInfinity(count=2, saddle_nodes=2, summary="2 saddle-nodes"),
    FormId.V: ExpectedInfinity(count=6, hyperbolic=4, saddle_nodes=2, summary="4 hyperbolic, 2 saddle-nodes"),
    FormId.VI: ExpectedInfinity(count=0, summary="none"),
    FormId.VII: ExpectedInfinity(
        count=4, angles=(0.0, PI / 2, PI, 3 * PI / 2), saddle_nodes=4, summary="saddle-nodes"
    ),
    FormId.VIII: ExpectedInfinity(
        count=4, angles=(0.0, PI / 2, PI, 3 * PI / 2), hyperbolic=2, hyperbolic_like=2,
        summary="2 hyperbolic, 2 hyperbolic-like",
    ),
    FormId.IX: ExpectedInfinity(
        count=2, angles=(PI / 2, 3 * PI / 2), saddle_nodes=2, summary="saddle-nodes"
    ),
    FormId.X: ExpectedInfinity(count=None, summary="infinitely many"),
}

_TABLE_DEGREE2: Dict[FormId, ExpectedInfinity] = {
    FormId.F_I: ExpectedInfinity(
        count=2, angles=(3 * PI / 4, 7 * PI / 4), hyperbolic=2, summary="2 hyperbolic on y = -x"
    ),
    FormId.F_II: ExpectedInfinity(
        count=6, angles=tuple((2 * k + 1) * PI / 6 for k in range(6)), hyperbolic=6,
        summary="6 hyperbolic",
    ),
    FormId.F_III: ExpectedInfinity(
        count=4, angles=(0.0, PI / 2, PI, 3 * PI / 2), hyperbolic=2, saddle_nodes=2,
        summary="2 hyperbolic on y = 0, 2 saddle-nodes on x = 0",
    ),
    FormId.F_IV: ExpectedInfinity(
        count=2, angles=(PI / 2, 3 * PI / 2), hyperbolic_like=2, summary="2 hyperbolic-like on x = 0"
    ),
    FormId.F_V: ExpectedInfinity(count=None, summary="infinitely many"),
}


def expected_infinity(spec: CanonicalSpec) -> ExpectedInfinity:
    table = _TABLE_DEGREE2 if spec.degree == 2 else _TABLE_DEGREE3
    return table[spec.form_id]


def _relation(value: float) -> str:
    return ">=0" if value >= 0.0 else "<0"


def degree2_case(form_id: FormId, q1: float, q2: float, lam: float = 1.0) -> CasePrediction:
    """
    Caso de figura previsto pelas desigualdades de grau 2, com os sinais
    esperados de f nos zeros declarados de g.

    Raises:
        ParamConstraintViolatedError: forma (v) com q1 = q2 = 0
    """
    if form_id.degree != 2:
        raise ParamConstraintViolatedError(form_id.value, "degree2_case needs a degree-2 form")

    expectations: List[RadialExpectation] = []
    if form_id is FormId.F_I:
        gap = q2 - q1 - 1.0
        if gap > 0:
            label, first, second = "q2-q1>1", ">0", "<0"
        elif gap < 0:
            label, first, second = "q2-q1<1", "<0", ">0"
        else:
            label, first, second = "q2-q1=1", "=0", "=0"
        expectations = [
            RadialExpectation(theta=7 * PI / 4, relation=first),
            RadialExpectation(theta=3 * PI / 4, relation=second),
        ]

    elif form_id is FormId.F_II:
        at_pi6 = q2 + SQRT3 * q1 - 3.0
        at_5pi6 = 3.0 + SQRT3 * q1 - q2
        region = {
            (False, True): "A",
            (True, False): "B",
            (True, True): "C",
            (False, False): "D",
        }[(at_pi6 >= 0.0, at_5pi6 >= 0.0)]
        lower = "q2>=3-sqrt3*q1" if at_pi6 >= 0 else "q2<3-sqrt3*q1"
        upper = "q2<=3+sqrt3*q1" if at_5pi6 >= 0 else "q2>3+sqrt3*q1"
        label = f"{region}: {lower} and {upper}"
        expectations = [
            RadialExpectation(theta=PI / 6, relation=_relation(at_pi6)),
            RadialExpectation(theta=PI / 2, relation="=0"),
            RadialExpectation(theta=5 * PI / 6, relation=_relation(at_5pi6)),
        ]

    elif form_id is FormId.F_III:
        label = "f=0 at every infinite equilibrium"
        expectations = [RadialExpectation(theta=k * PI / 2, relation="=0") for k in range(4)]

    elif form_id is FormId.F_IV:
        label = "f=0 on x=0"
        expectations = [
            RadialExpectation(theta=PI / 2, relation="=0"),
            RadialExpectation(theta=3 * PI / 2, relation="=0"),
        ]

    else:
        if q1 == 0.0 and q2 == 0.0:
            raise ParamConstraintViolatedError(form_id.value, "q1 = q2 = 0 gives a zero nonlinearity")
        label = "q1q2!=0" if q1 * q2 != 0.0 else "q1q2=0"
        line = math.atan2(q1, -q2) % PI
        angles = [k * PI / 2 for k in range(4)] + [line, line + PI]
        expectations = [RadialExpectation(theta=t, relation="=0") for t in sorted(set(angles))]

    return CasePrediction(form_id=form_id, case_label=label, expectations=tuple(expectations))


# ========================================
# VERIFICAÇÃO DE CONSISTÊNCIA
# ========================================

def _engine_zeros(field: StarField) -> Optional[List[InfiniteEquilibrium]]:
    try:
        return infinite_equilibria(field)
    except DegenerateContinuumError:
        return None


def _classes(infs: Sequence[InfiniteEquilibrium]) -> Tuple[int, int, int]:
    hyperbolic = sum(1 for eq in infs if eq.multiplicity == 1)
    saddle_nodes = sum(1 for eq in infs if eq.multiplicity % 2 == 0)
    return hyperbolic, saddle_nodes, len(infs) - hyperbolic - saddle_nodes


def _fmt_count(count: Optional[int]) -> str:
    return "inf" if count is None else str(count)


def _fmt_angles(angles: Iterable[float]) -> str:
    return "[" + ", ".join(f"{a:.6f}" for a in angles) + "]"


def _angles_match(expected: Sequence[float], found: Sequence[float]) -> bool:
    if len(expected) != len(found):
        return False
    return all(abs(a - b) < _ANGLE_TOL for a, b in zip(sorted(expected), sorted(found)))


def _check(name: str, ok: bool, expected: str, engine: str, informational: bool = False,
           diagnostic: Optional[str] = None) -> PropertyCheck:
    return PropertyCheck(
        name=name,
        status=CheckStatus.MATCH if ok else CheckStatus.MISMATCH,
        expected=expected,
        engine=engine,
        diagnostic=diagnostic,
        informational=informational,
    )


def _infinity_checks(expected: ExpectedInfinity, infs: Optional[List[InfiniteEquilibrium]]) -> List[PropertyCheck]:
    found = None if infs is None else len(infs)
    checks = [_check("count", found == expected.count, _fmt_count(expected.count), _fmt_count(found))]
    if infs is None or expected.count is None:
        return checks

    angles = [eq.theta for eq in infs]
    if expected.angles is not None:
        checks.append(_check(
            "angles", _angles_match(expected.angles, angles),
            _fmt_angles(expected.angles), _fmt_angles(angles),
        ))
    want = (expected.hyperbolic, expected.saddle_nodes, expected.hyperbolic_like)
    got = _classes(infs)
    checks.append(_check(
        "stability_classes", want == got,
        "hyperbolic={} saddle_node={} hyperbolic_like={}".format(*want),
        "hyperbolic={} saddle_node={} hyperbolic_like={}".format(*got),
    ))
    return checks


def _relation_holds(relation: str, value: float, tol: float) -> bool:
    if relation == ">0":
        return value > tol
    if relation == "<0":
        return value < -tol
    if relation == ">=0":
        return value >= -tol
    return abs(value) <= tol


def _degree2_checks(spec: CanonicalSpec, printed: StarField) -> List[PropertyCheck]:
    stated = stated_angular_form(spec)
    produced = angular_form(printed)
    identity_ok = all(abs(a - b) < 1e-12 for a, b in zip(produced.coeffs, stated.coeffs))
    checks = [_check(
        "binary_form_identity", identity_ok,
        str(list(stated.coeffs)), str(list(produced.coeffs)), informational=True,
        diagnostic=None if identity_ok else "printed right-hand side does not reproduce the stated form",
    )]

    expected = expected_infinity(spec)
    printed_infs = _engine_zeros(printed)
    printed_angles = None if printed_infs is None else [eq.theta for eq in printed_infs]
    if expected.angles is None:
        printed_ok = printed_angles is None
    else:
        printed_ok = printed_angles is not None and _angles_match(expected.angles, printed_angles)
    checks.append(_check(
        "printed_angles", printed_ok,
        "inf" if expected.angles is None else _fmt_angles(expected.angles),
        "inf" if printed_angles is None else _fmt_angles(printed_angles),
        informational=True,
    ))

    q1, q2 = spec.param("q1"), spec.param("q2")
    engine_field = from_binary_form(stated.coeffs, q1, q2, spec.lam)
    checks.extend(_infinity_checks(expected, _engine_zeros(engine_field)))

    prediction = degree2_case(spec.form_id, q1, q2, spec.lam)
    tol = f_tolerance(printed)
    values = [float(f_theta(printed, e.theta)) for e in prediction.expectations]
    radial_ok = all(
        _relation_holds(e.relation, v, tol) for e, v in zip(prediction.expectations, values)
    )
    checks.append(_check(
        "radial_case", radial_ok,
        f"{prediction.case_label}: " + ", ".join(f"f({e.theta:.4f}){e.relation}" for e in prediction.expectations),
        ", ".join(f"f({e.theta:.4f})={v:.3e}" for e, v in zip(prediction.expectations, values)),
    ))
    return checks


def consistency_check(spec: CanonicalSpec) -> ConsistencyReport:
    """
    Compara a saída do motor com as expectativas da forma, propriedade por
    propriedade. Nunca levanta por divergência: apenas reporta.
    """
    field = instantiate(spec)
    if spec.degree == 2:
        checks = _degree2_checks(spec, field)
    else:
        checks = _infinity_checks(expected_infinity(spec), _engine_zeros(field))

    report = ConsistencyReport(spec=spec, checks=tuple(checks))
    matches = sum(1 for c in checks if c.status is CheckStatus.MATCH)
    log_consistency(spec.form_id.value, matches, len(checks) - matches)
    return report


# ========================================
# GRADE DE AUDITORIA
# ========================================

_MU_GRID = {
    FormId.I: (-2.0, -1.0, -0.5),
    FormId.II: (-0.2, 0.0, 1.0),
    FormId.III: (-1.0, 0.0, 1.0),
}


def audit_grid(grid: Sequence[float], degree: Optional[int] = None) -> List[CanonicalSpec]:
    """
    Especificações para a auditoria: cada parâmetro real livre percorre a grade,
    sinais α, β, λ percorrem ±1 e μ usa valores dentro da região de cada forma.
    """
    specs: List[CanonicalSpec] = []
    for form in FormId:
        if degree is not None and form.degree != degree:
            continue
        free = _DEGREE2_FREE if form.degree == 2 else _DEGREE3_FREE
        signs: Dict[str, Sequence[float]] = {}
        if form in (FormId.I, FormId.III, FormId.VIII):
            signs["beta"] = (1.0, -1.0)
        if form in (FormId.II, FormId.IV, FormId.V, FormId.VI, FormId.VII, FormId.IX):
            signs["alpha"] = (1.0, -1.0)
        if form in _MU_GRID:
            signs["mu"] = _MU_GRID[form]

        names = list(free) + list(signs)
        pools = [list(grid)] * len(free) + [list(v) for v in signs.values()]
        for values in itertools.product(*pools):
            params = dict(zip(names, values))
            if form is FormId.F_V and params["q1"] == 0.0 and params["q2"] == 0.0:
                continue
            for lam_sign in (1, -1):
                specs.append(CanonicalSpec(
                    degree=form.degree, form_id=form, params=params, lambda_sign=lam_sign
                ))

    logger.info(f"Audit grid: {len(specs)} canonical specifications")
    return specs
