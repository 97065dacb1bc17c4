"""
audit-canonical: verificação de consistência sobre uma grade de parâmetros.
"""

from collections import Counter
from pathlib import Path
from typing import Optional

import click
from loguru import logger

from src.cli.options import emit, out_option, tolerance_options
from src.cli.schemas import AuditReport, parse_grid
from src.core.config import Settings
from src.core.exceptions import ParamConstraintViolatedError
from src.domain.services.canonical import audit_grid, consistency_check

DEFAULT_GRID = "-1,0.5,2"


@click.command("audit-canonical")
@click.option("--degree", type=click.Choice(["2", "3"]), default=None, help="Restrict to one degree")
@click.option("--grid", "grid_spec", default=DEFAULT_GRID, show_default=True,
              help="Comma-separated values for every free real parameter")
@out_option
@tolerance_options
def audit(degree: Optional[str], grid_spec: str, out: Optional[Path], settings: Settings) -> None:
    """Compare engine output with the canonical-form expectations."""
    grid = parse_grid(grid_spec)
    level = int(degree) if degree is not None else None

    reports = []
    skipped: Counter = Counter()
    for spec in audit_grid(grid, level):
        try:
            reports.append(consistency_check(spec))
        except ParamConstraintViolatedError as exc:
            logger.debug(f"Skipping {spec.form_id.value} {spec.params}: {exc.message}")
            skipped[spec.form_id] += 1

    report = AuditReport.build(level, grid, reports, dict(skipped))
    emit(report.model_dump_json(indent=2), out)
