"""
Schemas da varredura em ε e utilitário de grade.
"""

from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, Field

from src.core.exceptions import InputSchemaError
from src.domain.models import SweepRow, Verdict
from src.infrastructure.oracle.return_map import radius_monotone, sweep_frame

CSV_COLUMNS = ["eps", "criterion_integral", "cycle_found", "cycle_mean_radius"]
DEFAULT_EPS_GRID = "0.2,0.1,0.05,0.025"


def parse_grid(spec: str) -> List[float]:
    """"a,b,c" → [a, b, c]"""
    try:
        values = [float(token) for token in spec.split(",") if token.strip()]
    except ValueError as exc:
        raise InputSchemaError(f"invalid grid {spec!r}: {exc}", field="grid") from exc
    if not values:
        raise InputSchemaError(f"empty grid {spec!r}", field="grid")
    return values


class SweepSummary(BaseModel):
    base_verdict: Verdict
    eps_grid: List[float]
    rows: List[SweepRow] = Field(default_factory=list)
    cycles_found: int = 0
    all_integrals_negative: Optional[bool] = None
    integrals_increase_with_eps: Optional[bool] = None
    radius_monotone: Optional[bool] = None

    @classmethod
    def from_rows(cls, base_verdict: Verdict, eps_grid: Sequence[float], rows: Sequence[SweepRow]) -> "SweepSummary":
        frame = sweep_frame(rows)
        integrals = (
            frame.dropna(subset=["criterion_integral"]).sort_values("eps")["criterion_integral"]
            if not frame.empty else pd.Series(dtype=float)
        )
        return cls(
            base_verdict=base_verdict,
            eps_grid=list(eps_grid),
            rows=list(rows),
            cycles_found=sum(1 for row in rows if row.cycle_found),
            all_integrals_negative=bool((integrals < 0).all()) if len(integrals) else None,
            integrals_increase_with_eps=bool(integrals.is_monotonic_increasing) if len(integrals) > 1 else None,
            radius_monotone=radius_monotone(frame),
        )


def write_sweep_csv(rows: Sequence[SweepRow], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sweep_frame(rows).reindex(columns=CSV_COLUMNS).to_csv(path, index=False)
    return path
