"""
portrait: desenho SVG no disco de Poincaré.
"""

import json
from pathlib import Path

import click

from src.cli.options import tolerance_options
from src.cli.schemas import load_field_input
from src.core.config import Settings
from src.domain.services.portrait_processor import PortraitProcessor
from src.infrastructure.rendering.poincare_disk import render_portrait


@click.command("portrait")
@click.argument("source")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--samples", type=click.IntRange(min=0), default=12, show_default=True,
              help="Number of sampled trajectories")
@tolerance_options
def portrait(source: str, svg_path: Path, samples: int, settings: Settings) -> None:
    """Render the Poincare-disk portrait of the field in SOURCE."""
    spec = load_field_input(source)
    result = PortraitProcessor(settings).process(spec.to_field())
    written = render_portrait(result.field, result.portrait, svg_path, samples=samples, seed=settings.seed)
    click.echo(json.dumps({
        "svg": str(written),
        "verdict": result.portrait.verdict.value,
        "samples": samples,
        "seed": settings.seed,
    }))
