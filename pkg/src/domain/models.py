"""
Modelos de domínio imutáveis.

Campo estrela: ẋ = λx + Q1(x, y), ẏ = λy + Q2(x, y), com Q1 e Q2 homogêneos de
mesmo grau n > 1. Coeficientes sempre na ordem c_k ↔ x^(n−k) y^k.
"""

import math
from enum import Enum
from typing import Any, Literal, Optional, Tuple

import numpy as np
import numpy.polynomial.polynomial as npoly
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


TWO_PI = 2.0 * math.pi


# ========================================
# ENUMS
# ========================================

class Chart(str, Enum):
    U1 = "U1"
    V1 = "V1"
    U2 = "U2"
    V2 = "V2"


class AngularStability(str, Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    SEMI_STABLE = "semi_stable"


class RadialStability(str, Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"


class TopoType(str, Enum):
    NODE_ATTRACTOR = "node_attractor"
    NODE_REPELLOR = "node_repellor"
    SADDLE = "saddle"
    SADDLE_NODE = "saddle_node"


class SectorType(str, Enum):
    P_PLUS = "P_plus"
    P_MINUS = "P_minus"
    H_PLUS = "H_plus"
    H_MINUS = "H_minus"


class ConeCase(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"


class Verdict(str, Enum):
    GLOBAL_ATTRACTOR = "global_attractor"
    GLOBAL_REPELLOR = "global_repellor"
    LIMIT_CYCLE = "limit_cycle"
    POLYCYCLE = "polycycle"
    HETEROCLINIC_CYCLE = "heteroclinic_cycle"
    DEGENERATE_CONTINUUM = "degenerate_continuum"
    INVARIANT_CONES = "invariant_cones"


class ContinuumCase(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"
    E = "e"


class FormId(str, Enum):
    # grau 2
    F_I = "i"
    F_II = "ii"
    F_III = "iii"
    F_IV = "iv"
    F_V = "v"
    # grau 3
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"
    IX = "IX"
    X = "X"

    @property
    def degree(self) -> int:
        return 2 if self.value.islower() else 3


class CheckStatus(str, Enum):
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"


class DomainModel(BaseModel):
    """Base imutável dos valores de domínio"""
    model_config = ConfigDict(frozen=True)


# ========================================
# POLINÔMIOS
# ========================================

class HomogeneousPoly(DomainModel):
    """Polinômio homogêneo Σ c_k x^(n−k) y^k"""

    degree: int = Field(..., ge=0)
    coeffs: Tuple[float, ...]

    @model_validator(mode="after")
    def check_length(self) -> "HomogeneousPoly":
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(self.coeffs)}"
            )
        return self

    @classmethod
    def of(cls, *coeffs: float) -> "HomogeneousPoly":
        return cls(degree=len(coeffs) - 1, coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def zero(cls, degree: int) -> "HomogeneousPoly":
        return cls(degree=degree, coeffs=(0.0,) * (degree + 1))

    @classmethod
    def monomial(cls, degree: int, y_power: int, coeff: float = 1.0) -> "HomogeneousPoly":
        values = [0.0] * (degree + 1)
        values[y_power] = float(coeff)
        return cls(degree=degree, coeffs=tuple(values))

    def evaluate(self, x: Any, y: Any) -> Any:
        """Aceita escalares ou arrays numpy (broadcast)"""
        n = self.degree
        total: Any = 0.0
        for k, c in enumerate(self.coeffs):
            if c != 0.0:
                total = total + c * x ** (n - k) * y ** k
        return total

    __call__ = evaluate

    @property
    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs <= tol

    def partial_x(self) -> "HomogeneousPoly":
        n = self.degree
        if n == 0:
            return HomogeneousPoly.zero(0)
        return HomogeneousPoly(
            degree=n - 1, coeffs=tuple((n - k) * self.coeffs[k] for k in range(n))
        )

    def partial_y(self) -> "HomogeneousPoly":
        n = self.degree
        if n == 0:
            return HomogeneousPoly.zero(0)
        return HomogeneousPoly(
            degree=n - 1, coeffs=tuple(k * self.coeffs[k] for k in range(1, n + 1))
        )

    def times_x(self) -> "HomogeneousPoly":
        return HomogeneousPoly(degree=self.degree + 1, coeffs=self.coeffs + (0.0,))

    def times_y(self) -> "HomogeneousPoly":
        return HomogeneousPoly(degree=self.degree + 1, coeffs=(0.0,) + self.coeffs)

    def scaled(self, factor: float) -> "HomogeneousPoly":
        return HomogeneousPoly(degree=self.degree, coeffs=tuple(factor * c for c in self.coeffs))

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        if other.degree != self.degree:
            raise ValueError("cannot add homogeneous polynomials of different degree")
        return HomogeneousPoly(
            degree=self.degree, coeffs=tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        return self + other.scaled(-1.0)


class Poly1D(DomainModel):
    """Polinômio em u, coeficientes em potências crescentes"""

    coeffs: Tuple[float, ...]

    @field_validator("coeffs")
    @classmethod
    def strip_trailing_zeros(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        values = [float(c) for c in v]
        while len(values) > 1 and values[-1] == 0.0:
            values.pop()
        return tuple(values) if values else (0.0,)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def max_abs(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs <= tol

    def trimmed(self, tol: float) -> "Poly1D":
        """Remove coeficientes de topo abaixo de tol"""
        values = list(self.coeffs)
        while len(values) > 1 and abs(values[-1]) <= tol:
            values.pop()
        return Poly1D(coeffs=tuple(values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def __call__(self, u: Any) -> Any:
        return npoly.polyval(u, self.as_array())

    def derivative(self, order: int = 1) -> "Poly1D":
        if order == 0:
            return self
        if order > self.degree:
            return Poly1D(coeffs=(0.0,))
        return Poly1D(coeffs=tuple(npoly.polyder(self.as_array(), order)))


# ========================================
# CAMPO
# ========================================

class StarField(DomainModel):
    """Campo com parte linear λ·Id e não-linearidade homogênea (Q1, Q2)"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., alias="lambda")
    q1: HomogeneousPoly
    q2: HomogeneousPoly

    @field_validator("lam")
    @classmethod
    def nonzero_lambda(cls, v: float) -> float:
        if v == 0.0 or not math.isfinite(v):
            raise ValueError("lambda must be a finite non-zero real")
        return v

    @model_validator(mode="after")
    def check_degrees(self) -> "StarField":
        if self.q1.degree != self.q2.degree:
            raise ValueError("Q1 and Q2 must share the same degree")
        if self.q1.degree < 2:
            raise ValueError("degree must be greater than 1")
        if self.q1.is_zero() and self.q2.is_zero():
            raise ValueError("Q1 and Q2 cannot both vanish identically")
        return self

    @classmethod
    def build(cls, lam: float, q1: Tuple[float, ...], q2: Tuple[float, ...]) -> "StarField":
        return cls(lam=lam, q1=HomogeneousPoly.of(*q1), q2=HomogeneousPoly.of(*q2))

    @property
    def degree(self) -> int:
        return self.q1.degree

    def vector(self, x: Any, y: Any) -> Tuple[Any, Any]:
        return self.lam * x + self.q1(x, y), self.lam * y + self.q2(x, y)

    def jacobian(self, x: float, y: float) -> np.ndarray:
        return np.array([
            [self.lam + self.q1.partial_x()(x, y), self.q1.partial_y()(x, y)],
            [self.q2.partial_x()(x, y), self.lam + self.q2.partial_y()(x, y)],
        ])


# ========================================
# RAÍZES E EQUILÍBRIOS
# ========================================

class RealRoot(DomainModel):
    value: float
    multiplicity: int = Field(..., ge=1)
    interval_width: float = Field(..., ge=0.0)


class StabilityTag(DomainModel):
    angular: AngularStability
    radial: RadialStability
    hyperbolic: bool


class InfiniteEquilibrium(DomainModel):
    theta: float = Field(..., ge=0.0, lt=TWO_PI)
    chart: Chart
    multiplicity: int = Field(..., ge=1)
    f_value: Optional[float] = None
    stability: Optional[StabilityTag] = None


class FiniteEquilibrium(DomainModel):
    r0: float = Field(..., gt=0.0)
    theta0: float
    jac_eigen_radial: float
    jac_eigen_angular: float
    topo_type: TopoType
    multiplicity: int = Field(default=1, ge=1)
    stability: Optional[StabilityTag] = None

    @property
    def x(self) -> float:
        return self.r0 * math.cos(self.theta0)

    @property
    def y(self) -> float:
        return self.r0 * math.sin(self.theta0)


class CountReport(DomainModel):
    """Cotas de contagem; None = não se aplica"""

    degree: int
    infinite_count: Optional[int]
    finite_count: Optional[int]
    infinite_bound_ok: bool
    even_degree_minimum_ok: Optional[bool] = None
    finite_bound_ok: bool
    mod4_ok: Optional[bool] = None
    antipodal_closure_ok: bool = True
    antipodal_finite_rule_ok: bool = True
    radius_rule_ok: bool = True
    violations: Tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.violations


# ========================================
# ESTRUTURA GLOBAL
# ========================================

class HalfCone(DomainModel):
    theta1: float
    theta2: float
    g_sign_inside: int = 0
    sector_at_theta1: Optional[SectorType] = None
    sector_at_theta2: Optional[SectorType] = None
    case_tag: Optional[ConeCase] = None

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1

    @property
    def mid(self) -> float:
        return 0.5 * (self.theta1 + self.theta2)


class CycleCertificate(DomainModel):
    integral: float
    error_estimate: float
    exists: bool
    hyperbolic: bool
    stability: Optional[RadialStability] = None
    boundary: bool = False
    tolerance: float


class PolycycleCertificate(DomainModel):
    kind: Literal["polycycle", "heteroclinic_cycle"]
    attracting: bool
    vertex_angles: Tuple[float, ...]
    vertices: Tuple[Tuple[float, float], ...]
    vertices_are_g_extrema: bool


class EquilibriumArc(DomainModel):
    """Arco angular que carrega uma curva de equilíbrios r(θ)^(n−1) = −λ/p(θ)"""
    theta_start: float
    theta_end: float
    closed: bool = False


class ContinuumDescription(DomainModel):
    kernel: HomogeneousPoly
    origin_only: bool
    closed_curve: bool
    arcs: Tuple[EquilibriumArc, ...]
    kernel_zero_angles: Tuple[float, ...]
    finite_stability: Optional[RadialStability] = None
    continuum_case: Optional[ContinuumCase] = None
    discriminant: Optional[float] = None
    trace: Optional[float] = None
    profile: Tuple[Tuple[float, float], ...] = ()


class CycleProfile(DomainModel):
    radius: float
    section_theta: float
    mean_radius: float
    samples: Tuple[Tuple[float, float], ...]
    multiplier: float
    hyperbolic: bool
    tolerance: float


class GlobalPortrait(DomainModel):
    verdict: Verdict
    infinite: Tuple[InfiniteEquilibrium, ...] = ()
    finite: Tuple[FiniteEquilibrium, ...] = ()
    cones: Tuple[HalfCone, ...] = ()
    counts: Optional[CountReport] = None
    cycle: Optional[CycleCertificate] = None
    located_cycle: Optional[CycleProfile] = None
    polycycle: Optional[PolycycleCertificate] = None
    continuum: Optional[ContinuumDescription] = None
    attracting: Optional[bool] = None
    warnings: Tuple[str, ...] = ()


# ========================================
# FORMAS CANÔNICAS
# ========================================

class CanonicalSpec(DomainModel):
    degree: Literal[2, 3]
    form_id: FormId
    params: dict[str, float] = Field(default_factory=dict)
    lambda_sign: int = 1
    lambda_magnitude: float = Field(default=1.0, gt=0.0)

    @field_validator("lambda_sign")
    @classmethod
    def unit_sign(cls, v: int) -> int:
        if v not in (-1, 1):
            raise ValueError("lambda_sign must be +1 or -1")
        return v

    @model_validator(mode="after")
    def degree_matches_form(self) -> "CanonicalSpec":
        if self.form_id.degree != self.degree:
            raise ValueError(f"form {self.form_id.value} belongs to degree {self.form_id.degree}")
        return self

    @property
    def lam(self) -> float:
        return self.lambda_sign * self.lambda_magnitude

    def param(self, name: str, default: float = 0.0) -> float:
        return float(self.params.get(name, default))


class ExpectedInfinity(DomainModel):
    count: Optional[int]
    angles: Optional[Tuple[float, ...]] = None
    hyperbolic: int = 0
    saddle_nodes: int = 0
    hyperbolic_like: int = 0
    summary: str


class RadialExpectation(DomainModel):
    theta: float
    relation: Literal[">0", "<0", "=0", ">=0"]


class CasePrediction(DomainModel):
    form_id: FormId
    case_label: str
    expectations: Tuple[RadialExpectation, ...]


class PropertyCheck(DomainModel):
    """informational: comparado e reportado, mas fora da contagem de divergências"""
    name: str
    status: CheckStatus
    expected: str
    engine: str
    diagnostic: Optional[str] = None
    informational: bool = False


class ConsistencyReport(DomainModel):
    spec: CanonicalSpec
    checks: Tuple[PropertyCheck, ...]

    @property
    def mismatches(self) -> int:
        return sum(
            1 for c in self.checks
            if c.status is CheckStatus.MISMATCH and not c.informational
        )


# ========================================
# ORÁCULO
# ========================================

class StepStats(DomainModel):
    accepted: int
    rejected: int
    min_step: float
    max_step: float
    max_error_ratio: float


class Trajectory(DomainModel):
    coordinates: Literal["cartesian", "U1", "V1", "U2", "V2"] = "cartesian"
    times: Tuple[float, ...]
    xs: Tuple[float, ...]
    ys: Tuple[float, ...]
    stats: StepStats
    escaped: bool = False

    @property
    def samples(self) -> list[Tuple[float, float, float]]:
        return list(zip(self.times, self.xs, self.ys))

    @property
    def end(self) -> Tuple[float, float]:
        return self.xs[-1], self.ys[-1]


class ReturnMapResult(DomainModel):
    section_theta: float
    r_in: float = Field(..., gt=0.0)
    r_out: float = Field(..., gt=0.0)
    crossings: int
    period: float


class OracleCheck(DomainModel):
    name: str
    passed: bool
    detail: str = ""


class CrossValidationSummary(DomainModel):
    seed: int
    checks: Tuple[OracleCheck, ...]

    @property
    def contradictions(self) -> int:
        return sum(1 for c in self.checks if not c.passed)


class SweepRow(DomainModel):
    eps: float
    has_infinite_equilibria: bool
    criterion_integral: Optional[float] = None
    cycle_found: bool = False
    cycle_mean_radius: Optional[float] = None
    note: Optional[str] = None


# ========================================
# RESULTADO DA ANÁLISE
# ========================================

class AnalysisResult(DomainModel):
    """Saída do pipeline completo para um campo"""
    field: StarField
    portrait: GlobalPortrait
    consistency: Optional[ConsistencyReport] = None
    cross_validation: Optional[CrossValidationSummary] = None
    duration_ms: float = 0.0
