"""
Schema do relatório de retrato emitido por analyze.
"""

from datetime import datetime, timezone
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.core.config import Settings
from src.domain.models import (
    AnalysisResult,
    ConsistencyReport,
    ContinuumDescription,
    CountReport,
    CrossValidationSummary,
    CycleCertificate,
    CycleProfile,
    FiniteEquilibrium,
    HalfCone,
    InfiniteEquilibrium,
    PolycycleCertificate,
    StarField,
    Verdict,
)

UTC = timezone.utc

SCHEMA_VERSION = "1.0"


class PortraitReport(BaseModel):
    """Relatório completo; generated_at é o único campo não determinístico"""

    schema_version: str = SCHEMA_VERSION
    app_version: str
    generated_at: Optional[datetime] = None
    seed: int
    tolerances: Dict[str, float]
    field: StarField
    verdict: Verdict
    attracting: Optional[bool] = None
    infinite_equilibria: List[InfiniteEquilibrium] = Field(default_factory=list)
    finite_equilibria: List[FiniteEquilibrium] = Field(default_factory=list)
    cones: List[HalfCone] = Field(default_factory=list)
    counts: Optional[CountReport] = None
    cycle: Optional[CycleCertificate] = None
    located_cycle: Optional[CycleProfile] = None
    polycycle: Optional[PolycycleCertificate] = None
    continuum: Optional[ContinuumDescription] = None
    consistency: Optional[ConsistencyReport] = None
    cross_validation: Optional[CrossValidationSummary] = None
    warnings: List[str] = Field(default_factory=list)

    @classmethod
    def from_result(
        cls,
        result: AnalysisResult,
        settings: Settings,
        generated_at: Optional[datetime] = None
    ) -> "PortraitReport":
        portrait = result.portrait
        return cls(
            app_version=settings.app_version,
            generated_at=generated_at or datetime.now(UTC),
            seed=settings.seed,
            tolerances=settings.tolerances(),
            field=result.field,
            verdict=portrait.verdict,
            attracting=portrait.attracting,
            infinite_equilibria=list(portrait.infinite),
            finite_equilibria=list(portrait.finite),
            cones=list(portrait.cones),
            counts=portrait.counts,
            cycle=portrait.cycle,
            located_cycle=portrait.located_cycle,
            polycycle=portrait.polycycle,
            continuum=portrait.continuum,
            consistency=result.consistency,
            cross_validation=result.cross_validation,
            warnings=list(portrait.warnings),
        )

    def to_json(self, include_timestamp: bool = True) -> str:
        exclude = None if include_timestamp else {"generated_at"}
        return self.model_dump_json(by_alias=True, indent=2, exclude=exclude)
