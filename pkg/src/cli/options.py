"""
Opções compartilhadas entre os subcomandos.
"""

import functools
from pathlib import Path
from typing import Callable, Optional

import click

from src.core.config import get_settings, use_settings


def tolerance_options(command: Callable) -> Callable:
    """--tol-root, --tol-quad e --seed, aplicados às configurações do processo"""

    @click.option("--tol-root", type=float, default=None, help="Root multiplicity tolerance")
    @click.option("--tol-quad", type=float, default=None, help="Absolute tolerance of the criterion quadrature")
    @click.option("--seed", type=int, default=None, help="Seed for sampled trajectories")
    @functools.wraps(command)
    def wrapper(*args, tol_root: Optional[float], tol_quad: Optional[float], seed: Optional[int], **kwargs):
        settings = get_settings().with_overrides(
            root_multiplicity_tol=tol_root,
            quad_abs_tol=tol_quad,
            seed=seed,
        )
        use_settings(settings)
        return command(*args, settings=settings, **kwargs)

    return wrapper


def emit(text: str, out: Optional[Path]) -> None:
    """Documento em --out ou na saída padrão"""
    if out is None:
        click.echo(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")


def out_option(command: Callable) -> Callable:
    return click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
        help="Write the JSON document here instead of standard output",
    )(command)


