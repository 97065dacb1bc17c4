"""
analyze: pipeline completo e relatório JSON.
"""

import json
from pathlib import Path
from typing import Optional

import click
from loguru import logger

from src.cli.options import emit, out_option, tolerance_options
from src.cli.schemas import PortraitReport, load_field_input
from src.core.config import Settings
from src.domain.services.portrait_processor import PortraitProcessor


@click.command("analyze")
@click.argument("source")
@click.option("--verify", is_flag=True, help="Cross-check the verdict with integrated trajectories")
@click.option("--strict", is_flag=True, help="Fail on numerically vanishing f at an invariant radius")
@out_option
@tolerance_options
@click.pass_context
def analyze(
    ctx: click.Context,
    source: str,
    verify: bool,
    strict: bool,
    out: Optional[Path],
    settings: Settings
) -> None:
    """Analyze the field in SOURCE (JSON file or inline JSON)."""
    spec = load_field_input(source)
    processor = PortraitProcessor(settings, verify=verify, strict=strict)
    result = processor.process(spec.to_field(), canonical=spec.canonical)

    report = PortraitReport.from_result(result, settings)
    emit(report.to_json(), out)

    summary = result.cross_validation
    if summary is not None and summary.contradictions:
        failed = [check.name for check in summary.checks if not check.passed]
        logger.error(f"Oracle contradicts verdict {report.verdict.value}: {failed}")
        click.echo(json.dumps({
            "error": "CrossValidationFailed",
            "message": f"{summary.contradictions} oracle check(s) contradict the verdict",
            "details": {"checks": failed},
        }), err=True)
        ctx.exit(3)
