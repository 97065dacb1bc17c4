"""
Schemas da auditoria das formas canônicas.
"""

from collections import Counter, defaultdict
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field

from src.domain.models import CheckStatus, ConsistencyReport, FormId


class AuditMismatch(BaseModel):
    """Linha de divergência, sempre com o diagnóstico do motor"""
    form_id: FormId
    params: Dict[str, float]
    lambda_sign: int
    check: str
    expected: str
    engine: str
    diagnostic: Optional[str] = None
    informational: bool = False


class AuditFormSummary(BaseModel):
    form_id: FormId
    points: int = 0
    skipped: int = 0
    matches: int = 0
    mismatches: int = 0
    by_property: Dict[str, Dict[str, int]] = Field(default_factory=dict)

    @property
    def match_rate(self) -> Optional[float]:
        total = self.matches + self.mismatches
        return self.matches / total if total else None


class AuditReport(BaseModel):
    degree: Optional[int]
    grid: List[float]
    forms: List[AuditFormSummary]
    mismatches: List[AuditMismatch] = Field(default_factory=list)

    @classmethod
    def build(
        cls,
        degree: Optional[int],
        grid: Sequence[float],
        reports: Sequence[ConsistencyReport],
        skipped: Dict[FormId, int]
    ) -> "AuditReport":
        points: Counter = Counter()
        tallies: Dict[FormId, Dict[str, Counter]] = defaultdict(lambda: defaultdict(Counter))
        rows: List[AuditMismatch] = []

        for report in reports:
            form = report.spec.form_id
            points[form] += 1
            for check in report.checks:
                tallies[form][check.name][check.status.value] += 1
                if check.status is CheckStatus.MISMATCH:
                    rows.append(AuditMismatch(
                        form_id=form,
                        params=report.spec.params,
                        lambda_sign=report.spec.lambda_sign,
                        check=check.name,
                        expected=check.expected,
                        engine=check.engine,
                        diagnostic=check.diagnostic or f"engine found {check.engine}",
                        informational=check.informational,
                    ))

        forms = []
        for form in FormId:
            if form not in points and form not in skipped:
                continue
            by_property = {name: dict(counter) for name, counter in tallies[form].items()}
            forms.append(AuditFormSummary(
                form_id=form,
                points=points[form],
                skipped=skipped.get(form, 0),
                matches=sum(c.get(CheckStatus.MATCH.value, 0) for c in by_property.values()),
                mismatches=sum(c.get(CheckStatus.MISMATCH.value, 0) for c in by_property.values()),
                by_property=by_property,
            ))
        return cls(degree=degree, grid=list(grid), forms=forms, mismatches=rows)
