"""
sweep: perturbação (−ε yⁿ, ε xⁿ) de um ciclo heteroclínico.
"""

from pathlib import Path
from typing import Optional

import click
from loguru import logger

from src.cli.options import emit, out_option, tolerance_options
from src.cli.schemas import DEFAULT_EPS_GRID, SweepSummary, load_field_input, parse_grid, write_sweep_csv
from src.core.config import Settings
from src.core.exceptions import PreconditionViolatedError
from src.domain.models import Verdict
from src.domain.services.global_structure import assemble_portrait
from src.infrastructure.oracle.return_map import saddle_node_sweep


@click.command("sweep")
@click.argument("source")
@click.option("--eps-grid", default=DEFAULT_EPS_GRID, show_default=True, help="Comma-separated epsilon values")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@out_option
@tolerance_options
def sweep(source: str, eps_grid: str, csv_path: Optional[Path], out: Optional[Path], settings: Settings) -> None:
    """Sweep epsilon on a field whose portrait is a heteroclinic cycle."""
    field = load_field_input(source).to_field()
    grid = parse_grid(eps_grid)

    base = assemble_portrait(field)
    if base.verdict is not Verdict.HETEROCLINIC_CYCLE:
        raise PreconditionViolatedError("sweep", f"base verdict is {base.verdict.value}, not heteroclinic_cycle")

    rows = saddle_node_sweep(field, grid)
    summary = SweepSummary.from_rows(base.verdict, grid, rows)
    if csv_path is not None:
        write_sweep_csv(rows, csv_path)
        logger.info(f"Sweep CSV written to {csv_path}")
    emit(summary.model_dump_json(indent=2), out)
